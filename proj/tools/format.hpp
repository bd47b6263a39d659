#pragma once

// Text output for the command-line tool: fixed-precision numbers, CSV tables
// with a self-describing header comment, and standalone SVG line plots.

#include <ostream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace ptlattice::cli {

/// 12 significant digits, %g style, locale independent. -0 prints as 0.
std::string number(double value);

/// Shortest decimal that reads back to the same double.
std::string exact(double value);

class CsvWriter {
 public:
  /// Writes "# <tool> <version> <command> <parameters>" and the column row.
  CsvWriter(std::ostream& out, std::string_view command, std::string_view parameters,
            const std::vector<std::string>& columns);

  void row(const std::vector<std::string>& cells);
  void comment(std::string_view text);

 private:
  std::ostream& out_;
  std::size_t width_;
};

struct Series {
  std::string label;
  std::vector<std::pair<double, double>> points;
};

struct PlotSpec {
  std::string title;
  std::string x_label;
  std::string y_label;
  bool log_x = false;
  bool log_y = false;
};

/// Self-contained SVG document: inline styles only, no external references.
std::string render_svg(const PlotSpec& spec, const std::vector<Series>& series);

/// Escapes &, <, >, " and ' for XML text and attributes.
std::string xml_escape(std::string_view text);

}  // namespace ptlattice::cli
