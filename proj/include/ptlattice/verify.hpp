#pragma once

// Invariant suites shared by the command-line tool, the unit tests and the
// acceptance run. Every suite is deterministic for a given seed.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ptlattice/lattice.hpp"
#include "ptlattice/phase.hpp"
#include "ptlattice/spectral.hpp"

namespace ptlattice {

struct CheckResult {
  std::string name;
  bool passed = false;
  /// Worst value observed and the limit it was held to.
  double measured = 0.0;
  double limit = 0.0;
  std::string detail;
};

struct VerifyReport {
  std::vector<CheckResult> checks;

  bool passed() const noexcept;
  void append(const VerifyReport& other);
};

enum class Suite { Oracle, Symmetry, Maximal, Secular, ImpurityPair, All };

/// Accepts the command-line names oracle, symmetry, maximal, secular, eq5, all.
std::optional<Suite> parse_suite(std::string_view name);

VerifyReport run_suite(Suite suite, std::uint64_t seed);

VerifyReport verify_oracle(std::uint64_t seed, int n_specs = 200);
VerifyReport verify_symmetry(std::uint64_t seed, int n_specs = 200);
VerifyReport verify_maximal(std::uint64_t seed, int n_profiles = 50);
VerifyReport verify_secular(std::uint64_t seed, int n_specs = 120);
VerifyReport verify_impurity_pair(std::uint64_t seed, int n_profiles = 20);

/// Spectral symmetries, each relative to E_scale: distance of the eigenvalue
/// multiset to its conjugate and to its negated conjugate, |trace| / N, and how
/// far max |Re lambda| exceeds 2 max(t).
struct SpectrumSymmetry {
  double conjugation = 0.0;
  double particle_hole = 0.0;
  double trace = 0.0;
  double bound_excess = 0.0;

  static constexpr double kClosureTol = 1e-8;
  static constexpr double kTraceTol = 1e-10;
  static constexpr double kBoundTol = 1e-8;

  bool holds() const noexcept {
    return conjugation <= kClosureTol && particle_hole <= kClosureTol && trace <= kTraceTol &&
           bound_excess <= kBoundTol;
  }
};

SpectrumSymmetry measure_symmetry(const TridiagonalHamiltonian& h, const Spectrum& s);

/// Random lattice for property tests: N in [n_min, n_max], any valid m, a
/// two-segment, alpha or random symmetric profile, gamma in [0, 1.5 max t].
LatticeSpec random_spec(UniformSource& rng, int n_min, int n_max);

}  // namespace ptlattice
