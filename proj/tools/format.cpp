#include "format.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#ifndef PTLATTICE_VERSION
#define PTLATTICE_VERSION "0.0.0"
#endif

namespace ptlattice::cli {

namespace {

std::string to_text(double value, int precision) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  if (value == 0) value = 0.0;
  char buf[64];
  const auto res = precision > 0
                       ? std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general,
                                       precision)
                       : std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

// Plot area inside the 640 x 440 canvas.
constexpr double kWidth = 640, kHeight = 440;
constexpr double kLeft = 80, kRight = 150, kTop = 40, kBottom = 60;

const char* const kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                               "#ff7f0e", "#8c564b", "#e377c2", "#17becf"};

struct Axis {
  double lo, hi;
  bool log;

  double map(double v) const {
    const double a = log ? std::log10(lo) : lo;
    const double b = log ? std::log10(hi) : hi;
    const double x = log ? std::log10(v) : v;
    return b > a ? (x - a) / (b - a) : 0.5;
  }
};

Axis make_axis(const std::vector<Series>& series, bool use_x, bool log) {
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (const auto& s : series) {
    for (const auto& [x, y] : s.points) {
      const double v = use_x ? x : y;
      if (!std::isfinite(v) || (log && !(v > 0))) continue;
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  if (!(lo <= hi)) {
    lo = log ? 0.1 : 0.0;
    hi = 1.0;
  }
  if (lo == hi) {
    lo = log ? lo / 2 : lo - 0.5;
    hi = log ? hi * 2 : hi + 0.5;
  }
  return {lo, hi, log};
}

std::vector<double> ticks(const Axis& axis) {
  std::vector<double> out;
  if (axis.log) {
    for (int e = static_cast<int>(std::floor(std::log10(axis.lo)));
         e <= static_cast<int>(std::ceil(std::log10(axis.hi))); ++e) {
      const double v = std::pow(10.0, e);
      if (v >= axis.lo * (1 - 1e-12) && v <= axis.hi * (1 + 1e-12)) out.push_back(v);
    }
    if (out.size() < 2) out = {axis.lo, axis.hi};
    return out;
  }
  const double raw = (axis.hi - axis.lo) / 5;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  double step = mag;
  for (double f : {1.0, 2.0, 5.0, 10.0}) {
    if (f * mag >= raw) {
      step = f * mag;
      break;
    }
  }
  for (double v = std::ceil(axis.lo / step) * step; v <= axis.hi + 1e-9 * step; v += step) {
    out.push_back(std::abs(v) < 1e-12 * step ? 0.0 : v);
  }
  return out;
}

}  // namespace

std::string number(double value) { return to_text(value, 12); }

std::string exact(double value) { return to_text(value, 0); }

CsvWriter::CsvWriter(std::ostream& out, std::string_view command, std::string_view parameters,
                     const std::vector<std::string>& columns)
    : out_(out), width_(columns.size()) {
  out_ << "# ptlattice " << PTLATTICE_VERSION << " " << command;
  if (!parameters.empty()) out_ << " " << parameters;
  out_ << "\n";
  row(columns);
}

void CsvWriter::row(const std::vector<std::string>& cells) {
  if (cells.size() != width_) throw std::logic_error("CSV row width mismatch");
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out_ << ",";
    out_ << cells[i];
  }
  out_ << "\n";
}

void CsvWriter::comment(std::string_view text) { out_ << "# " << text << "\n"; }

std::string xml_escape(std::string_view text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string render_svg(const PlotSpec& spec, const std::vector<Series>& series) {
  const Axis xa = make_axis(series, true, spec.log_x);
  const Axis ya = make_axis(series, false, spec.log_y);
  const double pw = kWidth - kLeft - kRight;
  const double ph = kHeight - kTop - kBottom;
  auto px = [&](double x) { return kLeft + pw * xa.map(x); };
  auto py = [&](double y) { return kTop + ph * (1 - ya.map(y)); };

  std::ostringstream os;
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
     << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << number(kWidth) << "\" height=\""
     << number(kHeight) << "\" viewBox=\"0 0 " << number(kWidth) << " " << number(kHeight)
     << "\" font-family=\"sans-serif\" font-size=\"12\">\n"
     << "<rect x=\"0\" y=\"0\" width=\"" << number(kWidth) << "\" height=\"" << number(kHeight)
     << "\" fill=\"white\"/>\n"
     << "<text x=\"" << number(kLeft + pw / 2) << "\" y=\"24\" text-anchor=\"middle\" font-size=\"14\">"
     << xml_escape(spec.title) << "</text>\n"
     << "<rect x=\"" << number(kLeft) << "\" y=\"" << number(kTop) << "\" width=\"" << number(pw)
     << "\" height=\"" << number(ph) << "\" fill=\"none\" stroke=\"black\"/>\n";

  for (double t : ticks(xa)) {
    const double x = px(t);
    os << "<line x1=\"" << number(x) << "\" y1=\"" << number(kTop + ph) << "\" x2=\"" << number(x)
       << "\" y2=\"" << number(kTop + ph + 5) << "\" stroke=\"black\"/>\n"
       << "<text x=\"" << number(x) << "\" y=\"" << number(kTop + ph + 18)
       << "\" text-anchor=\"middle\">" << xml_escape(to_text(t, 4)) << "</text>\n";
  }
  for (double t : ticks(ya)) {
    const double y = py(t);
    os << "<line x1=\"" << number(kLeft - 5) << "\" y1=\"" << number(y) << "\" x2=\""
       << number(kLeft) << "\" y2=\"" << number(y) << "\" stroke=\"black\"/>\n"
       << "<text x=\"" << number(kLeft - 8) << "\" y=\"" << number(y + 4)
       << "\" text-anchor=\"end\">" << xml_escape(to_text(t, 4)) << "</text>\n";
  }
  os << "<text x=\"" << number(kLeft + pw / 2) << "\" y=\"" << number(kHeight - 15)
     << "\" text-anchor=\"middle\">" << xml_escape(spec.x_label) << "</text>\n"
     << "<text x=\"20\" y=\"" << number(kTop + ph / 2) << "\" text-anchor=\"middle\" transform=\"rotate(-90 20 "
     << number(kTop + ph / 2) << ")\">" << xml_escape(spec.y_label) << "</text>\n";

  for (std::size_t i = 0; i < series.size(); ++i) {
    const char* color = kColors[i % std::size(kColors)];
    std::string pts;
    for (const auto& [x, y] : series[i].points) {
      if (!std::isfinite(x) || !std::isfinite(y)) continue;
      if ((spec.log_x && !(x > 0)) || (spec.log_y && !(y > 0))) continue;
      if (!pts.empty()) pts += " ";
      pts += number(px(x)) + "," + number(py(y));
    }
    os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\""
       << pts << "\"/>\n";
    const double ly = kTop + 16 + 18 * static_cast<double>(i);
    os << "<line x1=\"" << number(kWidth - kRight + 15) << "\" y1=\"" << number(ly) << "\" x2=\""
       << number(kWidth - kRight + 40) << "\" y2=\"" << number(ly) << "\" stroke=\"" << color
       << "\" stroke-width=\"2\"/>\n"
       << "<text x=\"" << number(kWidth - kRight + 46) << "\" y=\"" << number(ly + 4) << "\">"
       << xml_escape(series[i].label) << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace ptlattice::cli
