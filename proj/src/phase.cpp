#include "ptlattice/phase.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ptlattice/error.hpp"

namespace ptlattice {

namespace {

constexpr double kMaximalTol = 1e-6;
constexpr int kMinFitPoints = 8;

std::string describe(double gamma, int n_complex) {
  std::ostringstream os;
  os.precision(12);
  os << "gamma = " << gamma << " (n_complex = " << n_complex << ")";
  return os.str();
}

}  // namespace

BrokenStatus is_pt_broken(const LatticeSpec& spec) {
  const Spectrum s = eigenvalues(build_hamiltonian(spec));
  return {s.n_complex > 0, s.n_complex};
}

double default_gamma_max(const LatticeSpec& shape) {
  return 2.0 * shape.max_hopping() * shape.n_sites();
}

ThresholdResult find_gamma_c(const HamiltonianFamily& family, double gamma_max,
                             double hopping_scale, const ThresholdOptions& options) {
  if (!(gamma_max > 0)) throw InvalidSpec("gamma_max must be positive");
  const int above = eigenvalues(family(gamma_max)).n_complex;
  if (above == 0) {
    throw BracketFailure("upper bracket is not PT-broken at " + describe(gamma_max, 0) +
                         "; enlarge gamma_max");
  }
  const int below = eigenvalues(family(0.0)).n_complex;
  if (below != 0) {
    throw BracketFailure("lattice is already PT-broken at gamma = 0 (n_complex = " +
                         std::to_string(below) + ")");
  }

  ThresholdResult r;
  r.gamma_low = 0.0;
  r.gamma_high = gamma_max;
  r.n_complex_below = 0;
  r.n_complex_above = above;
  const double abs_tol = options.abs_tol * hopping_scale;
  while (r.iterations < options.max_iterations) {
    const double width = r.gamma_high - r.gamma_low;
    if (width <= abs_tol && width <= options.rel_tol * r.gamma_low) break;
    const double mid = 0.5 * (r.gamma_low + r.gamma_high);
    if (mid <= r.gamma_low || mid >= r.gamma_high) break;
    const int count = eigenvalues(family(mid)).n_complex;
    ++r.iterations;
    if (count > 0) {
      r.gamma_high = mid;
      r.n_complex_above = count;
    } else {
      r.gamma_low = mid;
    }
  }
  r.gamma_c = 0.5 * (r.gamma_low + r.gamma_high);
  return r;
}

ThresholdResult find_gamma_c(const LatticeSpec& shape, double gamma_max,
                             const ThresholdOptions& options) {
  const HamiltonianFamily family = [&shape](double gamma) {
    return build_hamiltonian(shape.with_gamma(gamma));
  };
  return find_gamma_c(family, gamma_max, shape.max_hopping(), options);
}

MonotonicityAudit audit_monotonicity(const LatticeSpec& shape, const ThresholdResult& threshold,
                                     double gamma_max, int points) {
  MonotonicityAudit audit;
  const int half = std::max(points / 2, 1);
  for (int i = 1; i <= half; ++i) {
    const double g = threshold.gamma_low * i / half;
    if (g <= 0) continue;
    const bool broken = is_pt_broken(shape.with_gamma(g)).broken;
    audit.samples.emplace_back(g, broken);
    if (broken) audit.monotone = false;
  }
  const double ratio = gamma_max / threshold.gamma_high;
  for (int i = 0; i < half; ++i) {
    const double g = half > 1 ? threshold.gamma_high * std::pow(ratio, double(i) / (half - 1))
                              : threshold.gamma_high;
    const bool broken = is_pt_broken(shape.with_gamma(g)).broken;
    audit.samples.emplace_back(g, broken);
    if (!broken) audit.monotone = false;
  }
  return audit;
}

std::vector<SweepRecord> sweep_phase_diagram(int n_sites, std::span<const int> d_list,
                                             std::span<const double> tb_grid, double t0,
                                             const SweepOptions& options) {
  if (d_list.empty()) throw InvalidSpec("distance list is empty");
  if (tb_grid.empty()) throw InvalidSpec("tb grid is empty");
  for (double tb : tb_grid) {
    if (!(tb > 0)) throw InvalidSpec("tb grid values must be positive");
  }
  for (int d : d_list) {
    if (d < 1 || d > n_sites - 1 || (n_sites + 1 - d) % 2 != 0) {
      throw InvalidSpec("distance d = " + std::to_string(d) + " is incompatible with N = " +
                        std::to_string(n_sites));
    }
  }

  std::vector<int> ds(d_list.begin(), d_list.end());
  std::vector<double> tbs(tb_grid.begin(), tb_grid.end());
  std::sort(ds.begin(), ds.end());
  std::sort(tbs.begin(), tbs.end());

  std::vector<SweepRecord> records;
  for (int d : ds) {
    for (double tb : tbs) {
      SweepRecord rec;
      rec.n_sites = n_sites;
      rec.distance = d;
      rec.impurity_site = (n_sites + 1 - d) / 2;
      rec.t0 = t0;
      rec.tb = tb;
      rec.reduced_tb = tb / t0;
      try {
        const LatticeSpec shape(n_sites, rec.impurity_site, 0.0,
                                HoppingProfile::two_segment(t0, tb));
        const double gamma_max = default_gamma_max(shape);
        const ThresholdResult r = find_gamma_c(shape, gamma_max, options.threshold);
        rec.gamma_c = r.gamma_c;
        rec.reduced_gamma_c = r.gamma_c / t0;
        rec.n_complex_above = r.n_complex_above;
        rec.bracket_width = r.bracket_width();
        if (options.audit) {
          const auto audit = audit_monotonicity(shape, r, gamma_max, options.audit_points);
          if (!audit.monotone) {
            throw MonotonicityViolation("broken/unbroken predicate is not monotone in gamma");
          }
        }
      } catch (const Error& e) {
        rec.ok = false;
        rec.error = e.what();
      }
      records.push_back(std::move(rec));
    }
  }
  return records;
}

ExponentFit fit_exponent(std::span<const SweepRecord> records, double window_lo,
                         double window_hi) {
  if (!(window_lo > 0) || !(window_hi < 1) || !(window_lo < window_hi)) {
    throw InvalidSpec("fit window must satisfy 0 < lo < hi < 1");
  }
  ExponentFit fit;
  fit.window_lo = window_lo;
  fit.window_hi = window_hi;
  int n_sites = -1;
  for (const auto& r : records) {
    if (!r.ok || r.reduced_tb < window_lo || r.reduced_tb > window_hi) continue;
    if (n_sites < 0) {
      n_sites = r.n_sites;
      fit.distance = r.distance;
    } else if (r.n_sites != n_sites || r.distance != fit.distance) {
      throw InsufficientData("fit records mix lattices: (N, d) = (" + std::to_string(n_sites) +
                             ", " + std::to_string(fit.distance) + ") and (" +
                             std::to_string(r.n_sites) + ", " + std::to_string(r.distance) + ")");
    }
    if (!(r.reduced_gamma_c > 0)) continue;
    fit.points.emplace_back(std::log(r.reduced_tb), std::log(r.reduced_gamma_c));
  }
  const int n = static_cast<int>(fit.points.size());
  if (n < kMinFitPoints) {
    throw InsufficientData("exponent fit needs at least 8 points inside the window, got " +
                           std::to_string(n));
  }
  double mx = 0, my = 0;
  for (const auto& [x, y] : fit.points) {
    mx += x;
    my += y;
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0;
  for (const auto& [x, y] : fit.points) {
    sxx += (x - mx) * (x - mx);
    sxy += (x - mx) * (y - my);
  }
  if (!(sxx > 0)) throw InsufficientData("all fit points share one T_b");
  fit.eta = sxy / sxx;
  fit.intercept = my - fit.eta * mx;
  double rss = 0;
  for (const auto& [x, y] : fit.points) {
    const double e = y - (fit.intercept + fit.eta * x);
    rss += e * e;
  }
  fit.stderr_eta = std::sqrt(rss / (n - 2) / sxx);
  return fit;
}

std::string MaximalBreakingReport::failure() const {
  std::ostringstream os;
  os.precision(12);
  if (!threshold_ok) {
    os << "threshold: gamma_c = " << threshold.gamma_c << " but t(N/2) = " << t_mid << "; ";
  }
  if (!above_ok) {
    os << "above: n_complex = " << n_complex_just_above << " at 1.01 t(N/2), expected "
       << n_sites << "; ";
  }
  if (!below_ok) {
    os << "below: n_complex = " << n_complex_just_below << " at 0.99 t(N/2), expected 0; ";
  }
  return os.str();
}

MaximalBreakingReport verify_maximal_breaking(int n_sites, const HoppingProfile& profile) {
  if (n_sites < 2 || n_sites % 2 != 0) {
    throw InvalidSpec("maximal breaking requires an even lattice, got N = " +
                      std::to_string(n_sites));
  }
  const LatticeSpec shape(n_sites, n_sites / 2, 0.0, profile);
  MaximalBreakingReport report;
  report.n_sites = n_sites;
  report.t_mid = shape.bonds()[n_sites / 2 - 1];
  report.threshold = find_gamma_c(shape, default_gamma_max(shape));
  report.threshold_ok =
      std::abs(report.threshold.gamma_c - report.t_mid) <= kMaximalTol * report.t_mid;
  report.n_complex_just_above = is_pt_broken(shape.with_gamma(1.01 * report.t_mid)).n_complex;
  report.n_complex_just_below = is_pt_broken(shape.with_gamma(0.99 * report.t_mid)).n_complex;
  report.above_ok = report.n_complex_just_above == n_sites;
  report.below_ok = report.n_complex_just_below == 0;
  return report;
}

std::vector<FragilityPoint> fragility_scan(double alpha, std::span<const int> n_list, double t0) {
  std::vector<FragilityPoint> out;
  const HoppingProfile profile = HoppingProfile::alpha(t0, alpha);
  for (int n : n_list) {
    if (n < 2 || n % 2 != 0) {
      throw InvalidSpec("fragility scan needs even N, got " + std::to_string(n));
    }
    const LatticeSpec shape(n, n / 2, 0.0, profile);
    FragilityPoint p;
    p.n_sites = n;
    p.gamma_c = find_gamma_c(shape, default_gamma_max(shape)).gamma_c;
    p.bandwidth = bandwidth(profile, n, n / 2);
    p.ratio = p.gamma_c / p.bandwidth;
    out.push_back(p);
  }
  return out;
}

HoppingProfile random_symmetric_profile(int n_sites, double lo, double hi, UniformSource& rng) {
  if (n_sites < 2) throw InvalidSpec("N must be >= 2");
  const int bonds = n_sites - 1;
  std::vector<double> t(static_cast<std::size_t>(bonds));
  for (int i = 0; i < (bonds + 1) / 2; ++i) {
    t[i] = rng.next(lo, hi);
    t[bonds - 1 - i] = t[i];
  }
  return HoppingProfile::custom(std::move(t));
}

HoppingProfile random_symmetric_profile(int n_sites, double lo, double hi, std::uint64_t seed) {
  UniformSource rng(seed);
  return random_symmetric_profile(n_sites, lo, hi, rng);
}

std::vector<double> linear_grid(double lo, double hi, int points) {
  if (points < 1) throw InvalidSpec("grid needs at least one point");
  if (points == 1) return {lo};
  std::vector<double> g(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i) g[i] = lo + (hi - lo) * i / (points - 1);
  g.back() = hi;
  return g;
}

std::vector<double> log_grid(double lo, double hi, int points) {
  if (!(lo > 0) || !(hi > 0)) throw InvalidSpec("log grid bounds must be positive");
  if (points < 1) throw InvalidSpec("grid needs at least one point");
  if (points == 1) return {lo};
  std::vector<double> g(static_cast<std::size_t>(points));
  const double a = std::log(lo), b = std::log(hi);
  for (int i = 0; i < points; ++i) g[i] = std::exp(a + (b - a) * i / (points - 1));
  g.front() = lo;
  g.back() = hi;
  return g;
}

}  // namespace ptlattice
