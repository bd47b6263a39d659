#pragma once

// Analytic structure of the two-segment lattice: quasimomenta, the piecewise
// sine ansatz for eigenfunctions, the secular function whose zeros are the
// eigenvalues, its nearest-neighbour reduction, and the 2x2 determinant
// condition at the impurity pair. Everything here is a residual check against
// eigenpairs produced by the spectral engine.

#include <complex>
#include <vector>

#include "ptlattice/lattice.hpp"
#include "ptlattice/spectral.hpp"

namespace ptlattice {

/// Quasimomenta (k, k') with -2 t0 cos k = E = -2 tb cos k'.
struct QuasimomentumPair {
  cplx k;
  cplx k_prime;
  cplx energy;
};

/// Principal complex branch of arccos (real part in [0, pi]).
QuasimomentumPair quasimomenta_from_energy(cplx energy, double t0, double tb);

/// The three additive terms of the secular function M(k, k'):
///   outer = [sin^2 k(m+1) + G^2 sin^2 km] sin k'(N+1-2m)
///   inner = Tb^2 sin^2 km sin k'(N-1-2m)
///   cross = -2 Tb sin km sin k(m+1) sin k'(N-2m)
/// with G = gamma/t0 and Tb = tb/t0.
struct SecularTerms {
  cplx outer;
  cplx inner;
  cplx cross;

  cplx sum() const noexcept { return outer + inner + cross; }
  double magnitude() const noexcept { return std::abs(outer) + std::abs(inner) + std::abs(cross); }
};

/// Requires a two-segment profile.
SecularTerms secular_terms(const LatticeSpec& spec, cplx energy);

/// |M| / (|outer| + |inner| + |cross|). Throws DegenerateNormalization when all
/// three magnitudes are below 1e-300.
double secular_residual(const LatticeSpec& spec, cplx energy);

/// Nearest-neighbour form (even N, m = N/2):
///   t0^2 sin^2 k(N/2+1) - (tb^2 - gamma^2) sin^2 (kN/2),
/// normalized by |t0^2 sin^2 k(N/2+1) + gamma^2 sin^2(kN/2)| + tb^2 |sin^2(kN/2)|,
/// the grouping inherited from the general secular function so the two
/// residuals coincide.
double nearest_neighbor_residual(const LatticeSpec& spec, cplx energy);

/// Real-valued reduction of M on the real energy axis: M divided by its trivial
/// factor sin k' sin^2 k, normalized like secular_residual but keeping the sign.
/// Undefined (returns NaN) at the band edges where the trivial factor vanishes.
double signed_secular(const LatticeSpec& spec, double energy);

struct SecularScan {
  int sign_changes = 0;
  int points_used = 0;
  std::vector<double> bracket_midpoints;
  /// Root pairs found inside one grid cell by refining a dip of |f|.
  int refined_pairs = 0;
};

/// Counts sign changes of signed_secular on a uniform grid over
/// [-E_scale, E_scale], skipping points within edge_exclusion * E_scale of
/// the band edges +-2 t0 and +-2 tb. Local minima of |f| without a sign change
/// are refined by golden-section search; a dip across zero counts as two roots.
SecularScan scan_secular_roots(const LatticeSpec& spec, int points = 10000,
                               double edge_exclusion = 1e-6);

/// Coefficients of the piecewise form
///   A sin(kn)               1 <= n <= m
///   P sin(k'n) + Q cos(k'n) m < n < mbar
///   B sin(k (N+1-n))        mbar <= n <= N
struct AnsatzCoefficients {
  cplx a_left;
  cplx b_right;
  cplx p_mid;
  cplx q_mid;
  /// Root-mean-square mismatch over all sites, relative to max |psi| = 1.
  double fit_residual = 0.0;
  /// Condition number of the middle-segment design matrix (1 when the middle
  /// segment has fewer than two sites).
  double condition = 1.0;
};

/// Least-squares fit of an eigenvector (phase-rotated so sites 1..m are real)
/// to the piecewise sine form. Throws IllConditionedFit when a design matrix
/// has condition above 1e12.
AnsatzCoefficients fit_ansatz(const LatticeSpec& spec, const Eigenvector& ev);

/// Amplitudes at the impurity pair of an even lattice with m = N/2.
struct ImpurityPairDecomposition {
  double epsilon = 0.0;
  /// phi(N/2) and phi(N/2 - 1) after rotating sites 1..N/2 to be real.
  cplx alpha_mid;
  cplx beta_mid;
  /// Relative phase with phi(N/2 + 1) = e^{i chi} alpha.
  double chi = 0.0;
  /// |det D| / (|D00 D11| + |D01 D10|) with
  /// D = [[t' beta + (eps - i gamma) alpha, t alpha], [t alpha, t' beta + (eps + i gamma) alpha]],
  /// t = t(N/2), t' = t(N/2 - 1).
  double det_residual = 0.0;
  /// phi(N/2 + 1) and phi(N/2 + 2) in the same phase convention.
  cplx mirror_alpha;
  cplx mirror_beta;
};

/// Any parity-symmetric profile. For N = 2, beta = phi(0) = 0. Throws
/// NotRealizable when the left half cannot be made real to 1e-6.
ImpurityPairDecomposition impurity_pair_residual(const LatticeSpec& spec, double epsilon,
                                                 const Eigenvector& ev);

}  // namespace ptlattice
