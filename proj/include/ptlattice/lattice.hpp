#pragma once

// Lattice specifications, hopping profiles and the tridiagonal PT-symmetric
// Hamiltonian
//
//   H = -sum_i t(i) (|i+1><i| + |i><i+1|) + i*gamma (|m><m| - |mbar><mbar|),
//
// with mbar = N + 1 - m. Sites and bonds are 1-based in the documentation and
// 0-based in storage: bond i (1 <= i <= N-1) joins sites i and i+1 and lives at
// index i-1.

#include <complex>
#include <filesystem>
#include <span>
#include <string_view>
#include <vector>

namespace ptlattice {

using cplx = std::complex<double>;

class HoppingProfile {
 public:
  enum class Kind { TwoSegment, Alpha, Custom };

  /// How strictly a custom profile's mirror symmetry is checked.
  enum class SymmetryCheck {
    Exact,     // user-entered values: t(k) == t(N-k) bit for bit
    Relative,  // computed values: |t(k) - t(N-k)| <= 1e-12 * max(t(k), t(N-k))
  };

  /// t(i) = tb for bonds between the impurities, t0 elsewhere.
  static HoppingProfile two_segment(double t0, double tb);
  /// t(k) = t0 * [k (N - k)]^(alpha/2).
  static HoppingProfile alpha(double t0, double alpha);
  /// Explicit bond amplitudes t(1..N-1); the lattice then has N = size + 1 sites.
  static HoppingProfile custom(std::vector<double> amplitudes,
                               SymmetryCheck check = SymmetryCheck::Exact);

  Kind kind() const noexcept { return kind_; }
  double t0() const noexcept { return t0_; }
  double tb() const noexcept { return tb_; }
  double alpha_exponent() const noexcept { return alpha_; }
  const std::vector<double>& amplitudes() const noexcept { return amplitudes_; }

  /// Bond amplitudes t(1..N-1) for an N-site lattice with impurity at site m.
  /// Only the two-segment kind depends on m.
  std::vector<double> bonds(int n_sites, int impurity_site) const;

  /// Reference hopping used for dimensionless ratios: t0 for two-segment and
  /// alpha kinds, t(1) for custom profiles.
  double reference_hopping() const noexcept;

  friend bool operator==(const HoppingProfile&, const HoppingProfile&) = default;

 private:
  HoppingProfile() = default;

  Kind kind_ = Kind::TwoSegment;
  double t0_ = 1.0;
  double tb_ = 1.0;
  double alpha_ = 0.0;
  std::vector<double> amplitudes_;
};

/// Reads a custom profile: one positive decimal per line, N-1 lines.
/// Blank lines and lines starting with '#' are ignored.
HoppingProfile load_profile_file(const std::filesystem::path& path);

/// Parses a decimal number with the "C" grammar regardless of locale.
double parse_decimal(std::string_view text);

class LatticeSpec {
 public:
  /// Throws InvalidSpec if N < 2, m is outside [1, N/2], gamma is negative or a
  /// custom profile does not have N-1 bonds.
  LatticeSpec(int n_sites, int impurity_site, double gamma, HoppingProfile profile);

  int n_sites() const noexcept { return n_sites_; }
  int impurity_site() const noexcept { return impurity_site_; }
  int mirror_site() const noexcept { return n_sites_ + 1 - impurity_site_; }
  /// d = N + 1 - 2m
  int distance() const noexcept { return n_sites_ + 1 - 2 * impurity_site_; }
  double gamma() const noexcept { return gamma_; }
  const HoppingProfile& profile() const noexcept { return profile_; }

  /// Gamma = gamma / t0
  double reduced_gamma() const noexcept { return gamma_ / profile_.reference_hopping(); }
  /// T_b = tb / t0 (two-segment profiles; 1 otherwise)
  double reduced_tb() const noexcept;

  std::vector<double> bonds() const { return profile_.bonds(n_sites_, impurity_site_); }
  double max_hopping() const;

  LatticeSpec with_gamma(double gamma) const;

  /// Builds the spec from the inter-impurity distance instead of the site.
  static LatticeSpec from_distance(int n_sites, int distance, double gamma,
                                   HoppingProfile profile);

  friend bool operator==(const LatticeSpec&, const LatticeSpec&) = default;

 private:
  int n_sites_;
  int impurity_site_;
  double gamma_;
  HoppingProfile profile_;
};

/// Complex-symmetric tridiagonal matrix stored as its diagonal and the common
/// off-diagonal.
struct TridiagonalHamiltonian {
  std::vector<cplx> diagonal;
  std::vector<double> off_diagonal;

  int size() const noexcept { return static_cast<int>(diagonal.size()); }
  /// Largest |Im| on the diagonal, i.e. gamma for a lattice Hamiltonian.
  double gain_loss() const noexcept;
  double max_hopping() const noexcept;
  /// E_scale = 2 * max hopping + gamma; bounds every eigenvalue (Gershgorin).
  double energy_scale() const noexcept { return 2.0 * max_hopping() + gain_loss(); }

  friend bool operator==(const TridiagonalHamiltonian&,
                         const TridiagonalHamiltonian&) = default;
};

TridiagonalHamiltonian build_hamiltonian(const LatticeSpec& spec);

/// output(n) = input(N + 1 - n)
std::vector<cplx> apply_parity(std::span<const cplx> amplitudes);

/// PT H PT: index reversal followed by complex conjugation.
TridiagonalHamiltonian pt_transform_hamiltonian(const TridiagonalHamiltonian& h);

/// E_max - E_min of the gamma = 0 lattice.
double bandwidth(const HoppingProfile& profile, int n_sites);
double bandwidth(const HoppingProfile& profile, int n_sites, int impurity_site);

}  // namespace ptlattice
