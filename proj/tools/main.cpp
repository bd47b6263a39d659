// ptlattice: spectra, thresholds, phase-diagram sweeps, invariant suites and
// exponent fits for PT-symmetric tight-binding chains.
//
// Exit codes: 0 ok, 2 usage or invalid parameters, 3 solver failure,
// 4 partial result (some sweep rows or verification checks failed).

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "format.hpp"
#include "ptlattice/error.hpp"
#include "ptlattice/lattice.hpp"
#include "ptlattice/phase.hpp"
#include "ptlattice/spectral.hpp"
#include "ptlattice/verify.hpp"

namespace {

using namespace ptlattice;
using cli::exact;
using cli::number;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitSolver = 3;
constexpr int kExitPartial = 4;

// A failure inside a named computation stage; mapped to exit code 3.
struct StageError {
  std::string stage;
  std::string message;
};

template <typename F>
auto in_stage(const std::string& stage, F&& f) {
  try {
    return f();
  } catch (const InvalidSpec&) {
    throw;
  } catch (const Error& e) {
    throw StageError{stage, e.what()};
  }
}

long parse_integer(const std::string& text, const char* flag) {
  long value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || ec != std::errc() || ptr != text.data() + text.size()) {
    throw InvalidSpec(std::string(flag) + " expects an integer, got '" + text + "'");
  }
  return value;
}

double parse_flag(const std::string& text, const char* flag) {
  try {
    return parse_decimal(text);
  } catch (const InvalidSpec&) {
    throw InvalidSpec(std::string(flag) + " expects a decimal number, got '" + text + "'");
  }
}

std::vector<double> strictly_increasing(std::vector<double> values, const char* what) {
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (!(values[i] > values[i - 1])) {
      throw InvalidSpec(std::string(what) + " must be strictly increasing");
    }
  }
  return values;
}

// Accumulates "key=value" pairs for the CSV header line.
class Parameters {
 public:
  void add(const std::string& key, const std::string& value) {
    if (!text_.empty()) text_ += " ";
    text_ += key + "=" + value;
  }
  const std::string& text() const { return text_; }

 private:
  std::string text_;
};

void emit(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-") {
    std::cout << content;
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidSpec("cannot open output file " + path);
  out << content;
  if (!out) throw InvalidSpec("failed writing " + path);
}

// Options shared by the commands that describe a single lattice.
struct LatticeArgs {
  std::string n;
  std::string m;
  std::string d;
  std::string t0 = "1";
  std::string tb = "1";
  std::string gamma = "0";
  std::string profile = "two-segment";
  std::string alpha = "0";
  std::string profile_file;

  void attach(CLI::App* app, bool with_gamma) {
    app->add_option("--n", n, "Number of sites N");
    auto* om = app->add_option("--m", m, "Gain site m (1 <= m <= N/2); loss sits at N+1-m");
    auto* od = app->add_option("--d", d, "Distance between the impurities, d = N + 1 - 2m");
    om->excludes(od);
    app->add_option("--t0", t0, "Outer hopping amplitude")->capture_default_str();
    app->add_option("--tb", tb, "Hopping amplitude between the impurities")->capture_default_str();
    if (with_gamma) {
      app->add_option("--gamma", gamma, "Gain/loss strength")->capture_default_str();
    }
    app->add_option("--profile", profile, "Hopping profile")
        ->check(CLI::IsMember({"two-segment", "alpha", "custom"}))
        ->capture_default_str();
    app->add_option("--alpha", alpha, "Exponent of the alpha profile")->capture_default_str();
    app->add_option("--profile-file", profile_file,
                    "Custom profile: N-1 lines, one positive decimal each");
  }

  LatticeSpec resolve(Parameters& params) const {
    HoppingProfile prof = HoppingProfile::two_segment(1.0, 1.0);
    std::optional<int> sites;
    if (!n.empty()) sites = static_cast<int>(parse_integer(n, "--n"));
    if (profile == "two-segment") {
      prof = HoppingProfile::two_segment(parse_flag(t0, "--t0"), parse_flag(tb, "--tb"));
    } else if (profile == "alpha") {
      prof = HoppingProfile::alpha(parse_flag(t0, "--t0"), parse_flag(alpha, "--alpha"));
    } else {
      if (profile_file.empty()) throw InvalidSpec("--profile custom requires --profile-file");
      prof = load_profile_file(profile_file);
      const int from_file = static_cast<int>(prof.amplitudes().size()) + 1;
      if (sites && *sites != from_file) {
        throw InvalidSpec("--n " + std::to_string(*sites) + " does not match the " +
                          std::to_string(from_file - 1) + " bonds in " + profile_file);
      }
      sites = from_file;
    }
    if (!sites) throw InvalidSpec("--n is required");
    if (m.empty() && d.empty()) throw InvalidSpec("one of --m or --d is required");
    const double g = parse_flag(gamma, "--gamma");
    const LatticeSpec spec =
        !m.empty() ? LatticeSpec(*sites, static_cast<int>(parse_integer(m, "--m")), g, prof)
                   : LatticeSpec::from_distance(*sites, static_cast<int>(parse_integer(d, "--d")),
                                                g, prof);

    params.add("n", std::to_string(spec.n_sites()));
    params.add("m", std::to_string(spec.impurity_site()));
    params.add("d", std::to_string(spec.distance()));
    params.add("profile", profile);
    if (profile == "two-segment") {
      params.add("t0", exact(prof.t0()));
      params.add("tb", exact(prof.tb()));
    } else if (profile == "alpha") {
      params.add("t0", exact(prof.t0()));
      params.add("alpha", exact(prof.alpha_exponent()));
    } else {
      std::string bonds;
      for (double t : prof.amplitudes()) bonds += (bonds.empty() ? "" : ";") + exact(t);
      params.add("bonds", bonds);
    }
    return spec;
  }
};

std::vector<std::string> threshold_columns() {
  return {"n_sites", "m", "d", "t0", "tb", "T_b", "gamma_c", "Gamma_c", "n_complex_above",
          "bracket_width"};
}

int cmd_spectrum(const LatticeArgs& args, const std::string& out_path) {
  Parameters params;
  const LatticeSpec spec = args.resolve(params);
  params.add("gamma", exact(spec.gamma()));
  const auto h = build_hamiltonian(spec);
  const Spectrum s = in_stage("eigenvalues", [&] { return eigenvalues(h); });

  std::ostringstream os;
  cli::CsvWriter csv(os, "spectrum", params.text(),
                     {"index", "re_E", "im_E", "classification", "residual"});
  for (int i = 0; i < s.size(); ++i) {
    csv.row({std::to_string(i), number(s.eigenvalues[i].real()), number(s.eigenvalues[i].imag()),
             s.classifications[i] == Classification::Complex ? "complex" : "real",
             number(s.residuals[i])});
  }
  csv.comment("summary n_complex=" + std::to_string(s.n_complex) +
              " n_real=" + std::to_string(s.size() - s.n_complex) +
              " energy_scale=" + number(s.energy_scale));
  emit(out_path, os.str());
  return kExitOk;
}

int cmd_threshold(const LatticeArgs& args, const std::string& out_path) {
  Parameters params;
  const LatticeSpec shape = args.resolve(params);
  const double gmax = default_gamma_max(shape);
  params.add("gamma_max", exact(gmax));
  const ThresholdResult r = in_stage("threshold", [&] { return find_gamma_c(shape, gmax); });

  const double t0 = shape.profile().reference_hopping();
  const bool two_segment = shape.profile().kind() == HoppingProfile::Kind::TwoSegment;
  std::ostringstream os;
  cli::CsvWriter csv(os, "threshold", params.text(), threshold_columns());
  csv.row({std::to_string(shape.n_sites()), std::to_string(shape.impurity_site()),
           std::to_string(shape.distance()), number(t0),
           two_segment ? number(shape.profile().tb()) : "nan",
           two_segment ? number(shape.reduced_tb()) : "nan", number(r.gamma_c),
           number(r.gamma_c / t0), std::to_string(r.n_complex_above), number(r.bracket_width())});
  emit(out_path, os.str());

  std::ostream& human = out_path.empty() || out_path == "-" ? std::cerr : std::cout;
  human << "gamma_c = " << number(r.gamma_c) << "  Gamma_c = " << number(r.gamma_c / t0)
        << "  bracket width = " << number(r.bracket_width())
        << "  n_complex above = " << r.n_complex_above << "\n";
  return kExitOk;
}

struct SweepArgs {
  std::string n;
  std::vector<std::string> d;
  std::string t0 = "1";
  std::string tb_min = "0.05";
  std::string tb_max = "1";
  std::string points = "20";
  std::string grid = "log";
  std::vector<std::string> tb_values;
  std::string svg;
  bool no_audit = false;

  std::vector<int> distances() const {
    std::vector<int> out;
    for (const auto& s : d) out.push_back(static_cast<int>(parse_integer(s, "--d")));
    if (out.empty()) throw InvalidSpec("--d list is empty");
    return out;
  }

  std::vector<double> tb_grid(Parameters& params) const {
    std::vector<double> g;
    if (!tb_values.empty()) {
      for (const auto& s : tb_values) g.push_back(parse_flag(s, "--tb-values"));
      g = strictly_increasing(std::move(g), "--tb-values");
      std::string list;
      for (double v : g) list += (list.empty() ? "" : ";") + exact(v);
      params.add("tb_values", list);
      return g;
    }
    const double lo = parse_flag(tb_min, "--tb-min");
    const double hi = parse_flag(tb_max, "--tb-max");
    const long count = parse_integer(points, "--points");
    if (!(lo > 0) || !(hi > lo)) throw InvalidSpec("need 0 < --tb-min < --tb-max");
    if (count < 2) throw InvalidSpec("--points must be at least 2");
    g = grid == "log" ? log_grid(lo, hi, static_cast<int>(count))
                      : linear_grid(lo, hi, static_cast<int>(count));
    params.add("grid", grid);
    params.add("tb_min", exact(lo));
    params.add("tb_max", exact(hi));
    params.add("points", std::to_string(count));
    return strictly_increasing(std::move(g), "tb grid");
  }
};

std::string sweep_svg(const std::vector<SweepRecord>& records, int n_sites) {
  std::map<int, cli::Series> by_d;
  bool all_small = true;
  for (const auto& r : records) {
    if (r.reduced_tb >= 1) all_small = false;
    auto& s = by_d[r.distance];
    s.label = "d = " + std::to_string(r.distance);
    if (r.ok) s.points.emplace_back(r.reduced_tb, r.reduced_gamma_c);
  }
  std::vector<cli::Series> series;
  for (auto& [d, s] : by_d) series.push_back(std::move(s));
  cli::PlotSpec plot;
  plot.title = "Critical impurity strength, N = " + std::to_string(n_sites);
  plot.x_label = "T_b";
  plot.y_label = "Γ_c";
  plot.log_x = plot.log_y = all_small;
  return cli::render_svg(plot, series);
}

int cmd_sweep(const SweepArgs& args, const std::string& out_path) {
  Parameters params;
  if (args.n.empty()) throw InvalidSpec("--n is required");
  const int n = static_cast<int>(parse_integer(args.n, "--n"));
  const std::vector<int> ds = args.distances();
  const double t0 = parse_flag(args.t0, "--t0");
  if (!(t0 > 0)) throw InvalidSpec("--t0 must be positive");
  params.add("n", std::to_string(n));
  std::string dl;
  for (int d : ds) dl += (dl.empty() ? "" : ";") + std::to_string(d);
  params.add("d", dl);
  params.add("t0", exact(t0));
  std::vector<double> tbs = args.tb_grid(params);
  params.add("audit", args.no_audit ? "off" : "on");

  SweepOptions options;
  options.audit = !args.no_audit;
  const auto records = sweep_phase_diagram(n, ds, tbs, t0, options);

  std::ostringstream os;
  cli::CsvWriter csv(os, "sweep", params.text(), threshold_columns());
  std::vector<std::string> failures;
  for (const auto& r : records) {
    csv.row({std::to_string(r.n_sites), std::to_string(r.impurity_site),
             std::to_string(r.distance), number(r.t0), number(r.tb), number(r.reduced_tb),
             r.ok ? number(r.gamma_c) : "nan", r.ok ? number(r.reduced_gamma_c) : "nan",
             r.ok ? std::to_string(r.n_complex_above) : "0",
             r.ok ? number(r.bracket_width) : "nan"});
    if (!r.ok) {
      failures.push_back("failed d=" + std::to_string(r.distance) + " tb=" + number(r.tb) +
                         ": " + r.error);
    }
  }
  for (const auto& f : failures) csv.comment(f);
  emit(out_path, os.str());
  if (!args.svg.empty()) emit(args.svg, sweep_svg(records, n));
  if (!failures.empty()) {
    std::cerr << failures.size() << " of " << records.size() << " sweep rows failed\n";
    return kExitPartial;
  }
  return kExitOk;
}

int cmd_verify(const std::string& suite_name, const std::string& seed_text,
               const std::string& out_path) {
  const auto suite = parse_suite(suite_name);
  if (!suite) throw InvalidSpec("unknown suite '" + suite_name + "'");
  if (seed_text.empty()) throw InvalidSpec("--seed is required for the verification suites");
  std::uint64_t seed = 0;
  {
    const auto [ptr, ec] =
        std::from_chars(seed_text.data(), seed_text.data() + seed_text.size(), seed);
    if (ec != std::errc() || ptr != seed_text.data() + seed_text.size()) {
      throw InvalidSpec("--seed expects a non-negative integer, got '" + seed_text + "'");
    }
  }
  const VerifyReport report = run_suite(*suite, seed);

  std::ostringstream os;
  os << "# ptlattice " << PTLATTICE_VERSION << " verify suite=" << suite_name
     << " seed=" << seed << "\n";
  int passed = 0;
  for (const auto& c : report.checks) {
    os << (c.passed ? "PASS " : "FAIL ") << c.name << " measured=" << number(c.measured)
       << " limit=" << number(c.limit) << " (" << c.detail << ")\n";
    if (c.passed) ++passed;
  }
  os << passed << "/" << report.checks.size() << " checks passed\n";
  emit(out_path, os.str());
  return report.passed() ? kExitOk : kExitPartial;
}

struct FitArgs {
  std::string n = "20";
  std::vector<std::string> d;
  std::string t0 = "1";
  std::string window_lo = "0.05";
  std::string window_hi = "0.3";
  std::string points = "12";
};

int cmd_fit_exponent(const FitArgs& args, const std::string& out_path) {
  Parameters params;
  const int n = static_cast<int>(parse_integer(args.n, "--n"));
  const double t0 = parse_flag(args.t0, "--t0");
  const double lo = parse_flag(args.window_lo, "--window-lo");
  const double hi = parse_flag(args.window_hi, "--window-hi");
  const long count = parse_integer(args.points, "--points");
  if (!(lo > 0) || !(hi < 1) || !(lo < hi)) {
    throw InvalidSpec("fit window must satisfy 0 < --window-lo < --window-hi < 1");
  }
  if (!(t0 > 0)) throw InvalidSpec("--t0 must be positive");
  if (count < 8) throw InvalidSpec("--points must be at least 8 for an exponent fit");
  std::vector<int> ds;
  for (const auto& s : args.d) ds.push_back(static_cast<int>(parse_integer(s, "--d")));
  if (ds.empty()) throw InvalidSpec("--d list is empty");
  std::string dl;
  for (int d : ds) dl += (dl.empty() ? "" : ";") + std::to_string(d);
  params.add("n", std::to_string(n));
  params.add("d", dl);
  params.add("t0", exact(t0));
  params.add("window_lo", exact(lo));
  params.add("window_hi", exact(hi));
  params.add("points", std::to_string(count));

  std::vector<double> tbs = log_grid(lo * t0, hi * t0, static_cast<int>(count));
  // Validate every distance before any computation.
  for (int d : ds) LatticeSpec::from_distance(n, d, 0.0, HoppingProfile::two_segment(t0, t0));
  std::sort(ds.begin(), ds.end());

  std::ostringstream os;
  cli::CsvWriter csv(os, "fit-exponent", params.text(),
                     {"d", "eta", "stderr", "window_lo", "window_hi", "n_points"});
  std::vector<std::string> failures;
  for (int d : ds) {
    const int one[] = {d};
    const auto records = sweep_phase_diagram(n, one, tbs, t0);
    try {
      const ExponentFit fit = fit_exponent(records, lo, hi);
      csv.row({std::to_string(d), number(fit.eta), number(fit.stderr_eta), number(lo), number(hi),
               std::to_string(fit.points.size())});
    } catch (const Error& e) {
      csv.row({std::to_string(d), "nan", "nan", number(lo), number(hi), "0"});
      failures.push_back("failed d=" + std::to_string(d) + ": " + e.what());
    }
  }
  for (const auto& f : failures) csv.comment(f);
  emit(out_path, os.str());
  return failures.empty() ? kExitOk : kExitPartial;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectra and PT-symmetry breaking thresholds of tight-binding chains with a "
               "gain/loss impurity pair"};
  app.set_version_flag("--version", std::string("ptlattice ") + PTLATTICE_VERSION);
  app.require_subcommand(1);

  std::string out_path;
  LatticeArgs spectrum_args, threshold_args;
  SweepArgs sweep_args;
  FitArgs fit_args;
  std::string suite, seed;

  auto* spectrum = app.add_subcommand("spectrum", "All eigenvalues with real/complex labels");
  spectrum_args.attach(spectrum, true);
  spectrum->add_option("--out", out_path, "Output CSV path (default stdout)");

  auto* threshold = app.add_subcommand("threshold", "Critical gain/loss strength by bisection");
  threshold_args.attach(threshold, false);
  threshold->add_option("--out", out_path, "Output CSV path (default stdout)");

  auto* sweep = app.add_subcommand("sweep", "Threshold table over distances and t_b values");
  sweep->add_option("--n", sweep_args.n, "Number of sites N")->required();
  sweep->add_option("--d", sweep_args.d, "Impurity distances, comma separated")
      ->delimiter(',')
      ->required();
  sweep->add_option("--t0", sweep_args.t0, "Outer hopping amplitude")->capture_default_str();
  sweep->add_option("--tb-min", sweep_args.tb_min, "Smallest t_b of the grid")
      ->capture_default_str();
  sweep->add_option("--tb-max", sweep_args.tb_max, "Largest t_b of the grid")
      ->capture_default_str();
  sweep->add_option("--points", sweep_args.points, "Number of grid points")
      ->capture_default_str();
  sweep->add_option("--grid", sweep_args.grid, "Grid spacing")
      ->check(CLI::IsMember({"log", "linear"}))
      ->capture_default_str();
  sweep->add_option("--tb-values", sweep_args.tb_values,
                    "Explicit t_b values, comma separated (overrides the grid)")
      ->delimiter(',');
  sweep->add_flag("--no-audit", sweep_args.no_audit, "Skip the monotonicity audit");
  sweep->add_option("--svg", sweep_args.svg, "Write a plot of Gamma_c against T_b");
  sweep->add_option("--out", out_path, "Output CSV path (default stdout)");

  auto* verify = app.add_subcommand("verify", "Run invariant suites");
  verify->add_option("--suite", suite, "Suite name")
      ->check(CLI::IsMember({"oracle", "symmetry", "maximal", "secular", "eq5", "all"}))
      ->required();
  verify->add_option("--seed", seed, "Seed for the randomized samples")->required();
  verify->add_option("--out", out_path, "Report path (default stdout)");

  auto* fit = app.add_subcommand("fit-exponent", "Power-law exponent of Gamma_c against T_b");
  fit->add_option("--n", fit_args.n, "Number of sites N")->capture_default_str();
  fit->add_option("--d", fit_args.d, "Impurity distances, comma separated")
      ->delimiter(',')
      ->required();
  fit->add_option("--t0", fit_args.t0, "Outer hopping amplitude")->capture_default_str();
  fit->add_option("--window-lo", fit_args.window_lo, "Lower end of the T_b window")
      ->capture_default_str();
  fit->add_option("--window-hi", fit_args.window_hi, "Upper end of the T_b window")
      ->capture_default_str();
  fit->add_option("--points", fit_args.points, "Log-spaced T_b points inside the window")
      ->capture_default_str();
  fit->add_option("--out", out_path, "Output CSV path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*spectrum) return cmd_spectrum(spectrum_args, out_path);
    if (*threshold) return cmd_threshold(threshold_args, out_path);
    if (*sweep) return cmd_sweep(sweep_args, out_path);
    if (*verify) return cmd_verify(suite, seed, out_path);
    if (*fit) return cmd_fit_exponent(fit_args, out_path);
  } catch (const InvalidSpec& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const StageError& e) {
    std::cerr << "solver failure in " << e.stage << ": " << e.message << "\n";
    return kExitSolver;
  } catch (const Error& e) {
    std::cerr << "solver failure: " << e.what() << "\n";
    return kExitSolver;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitSolver;
  }
  return kExitUsage;
}
