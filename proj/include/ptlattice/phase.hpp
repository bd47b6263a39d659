#pragma once

// PT-threshold location and phase-diagram sweeps.

#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ptlattice/lattice.hpp"
#include "ptlattice/spectral.hpp"

namespace ptlattice {

struct BrokenStatus {
  bool broken = false;
  int n_complex = 0;
};

BrokenStatus is_pt_broken(const LatticeSpec& spec);

struct ThresholdOptions {
  int max_iterations = 80;
  /// Stop once the bracket is below both abs_tol * max(t) and rel_tol * gamma_low.
  double abs_tol = 1e-10;
  double rel_tol = 1e-10;
};

struct ThresholdResult {
  double gamma_c = 0.0;
  double gamma_low = 0.0;
  double gamma_high = 0.0;
  int n_complex_below = 0;
  int n_complex_above = 0;
  int iterations = 0;

  double bracket_width() const noexcept { return gamma_high - gamma_low; }
};

/// Builds the Hamiltonian for a given gamma; lets the bisection run on
/// configurations LatticeSpec does not describe (e.g. mirrored impurities).
using HamiltonianFamily = std::function<TridiagonalHamiltonian(double gamma)>;

/// Bisection on the broken/unbroken predicate over [0, gamma_max]. The gamma
/// field of `shape` is ignored. Throws BracketFailure when gamma_max is not in
/// the broken phase.
ThresholdResult find_gamma_c(const LatticeSpec& shape, double gamma_max,
                             const ThresholdOptions& options = {});
ThresholdResult find_gamma_c(const HamiltonianFamily& family, double gamma_max,
                             double hopping_scale, const ThresholdOptions& options = {});

/// 2 * max hopping * N, always inside the broken phase for these lattices.
double default_gamma_max(const LatticeSpec& shape);

struct MonotonicityAudit {
  bool monotone = true;
  /// (gamma, broken) for every probe, ascending in gamma.
  std::vector<std::pair<double, bool>> samples;
};

/// Probes the predicate on points/2 gammas in (0, gamma_low] and points/2
/// geometrically spaced gammas in [gamma_high, gamma_max]: below must be
/// unbroken and above broken.
MonotonicityAudit audit_monotonicity(const LatticeSpec& shape, const ThresholdResult& threshold,
                                     double gamma_max, int points = 64);

struct SweepRecord {
  int n_sites = 0;
  int impurity_site = 0;
  int distance = 0;
  double t0 = 0.0;
  double tb = 0.0;
  double reduced_tb = 0.0;
  double gamma_c = 0.0;
  double reduced_gamma_c = 0.0;
  int n_complex_above = 0;
  double bracket_width = 0.0;
  bool ok = true;
  std::string error;
};

struct SweepOptions {
  ThresholdOptions threshold;
  bool audit = true;
  int audit_points = 64;
};

/// One record per (d, tb) with m = (N + 1 - d) / 2, ordered by (d, tb).
/// Failed entries are kept with ok = false and the error text.
std::vector<SweepRecord> sweep_phase_diagram(int n_sites, std::span<const int> d_list,
                                             std::span<const double> tb_grid, double t0,
                                             const SweepOptions& options = {});

struct ExponentFit {
  int distance = 0;
  double eta = 0.0;
  double stderr_eta = 0.0;
  double intercept = 0.0;
  double window_lo = 0.0;
  double window_hi = 0.0;
  /// (log T_b, log Gamma_c)
  std::vector<std::pair<double, double>> points;
};

/// Ordinary least squares of log Gamma_c against log T_b over records with
/// T_b inside [window_lo, window_hi]. Throws InsufficientData below 8 points or
/// when records mix (N, d).
ExponentFit fit_exponent(std::span<const SweepRecord> records, double window_lo,
                         double window_hi);

struct MaximalBreakingReport {
  int n_sites = 0;
  double t_mid = 0.0;
  ThresholdResult threshold;
  int n_complex_just_above = 0;
  int n_complex_just_below = 0;
  bool threshold_ok = false;
  bool above_ok = false;
  bool below_ok = false;

  bool passed() const noexcept { return threshold_ok && above_ok && below_ok; }
  std::string failure() const;
};

/// Even N, impurities at N/2 and N/2 + 1: checks gamma_c = t(N/2) to 1e-6
/// relative, N complex eigenvalues at 1.01 t(N/2) and none at 0.99 t(N/2).
MaximalBreakingReport verify_maximal_breaking(int n_sites, const HoppingProfile& profile);

struct FragilityPoint {
  int n_sites = 0;
  double gamma_c = 0.0;
  double bandwidth = 0.0;
  double ratio = 0.0;
};

/// gamma_c / bandwidth of the alpha profile with nearest-neighbour impurities.
std::vector<FragilityPoint> fragility_scan(double alpha, std::span<const int> n_list,
                                           double t0 = 1.0);


/// Uniform draws from std::mt19937_64 with a fixed bit-to-double mapping, so
/// seeded runs do not depend on the standard library's distributions.
class UniformSource {
 public:
  explicit UniformSource(std::uint64_t seed) : engine_(seed) {}
  /// [0, 1)
  double next() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double next(double lo, double hi) { return lo + (hi - lo) * next(); }
  /// Inclusive range.
  int next_int(int lo, int hi) {
    return lo + static_cast<int>(engine_() % static_cast<std::uint64_t>(hi - lo + 1));
  }

 private:
  std::mt19937_64 engine_;
};

/// Parity-symmetric custom profile with bonds uniform in [lo, hi].
HoppingProfile random_symmetric_profile(int n_sites, double lo, double hi, std::uint64_t seed);
HoppingProfile random_symmetric_profile(int n_sites, double lo, double hi, UniformSource& rng);

std::vector<double> linear_grid(double lo, double hi, int points);
std::vector<double> log_grid(double lo, double hi, int points);

}  // namespace ptlattice
