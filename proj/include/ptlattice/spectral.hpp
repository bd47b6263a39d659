#pragma once

// Eigenvalues and eigenvectors of complex-symmetric tridiagonal matrices.
//
// The characteristic polynomial p_N(z) = det(H - zI) is never expanded into
// coefficients by the production solver; it is evaluated together with its
// derivative by the three-term recurrence and all N roots are found at once by
// Aberth-Ehrlich iteration. Arithmetic inside the solver is carried out in
// long double; results are reported as std::complex<double>.

#include <complex>
#include <span>
#include <vector>

#include "ptlattice/lattice.hpp"

namespace ptlattice {

struct CharPolyValue {
  cplx value;
  cplx derivative;
  /// value * 2^scale_exponent (and likewise the derivative) is the unscaled result.
  int scale_exponent = 0;
};

/// p_N(z) = det(H - zI) and dp_N/dz via p_n = (d_n - z) p_{n-1} - t_{n-1}^2 p_{n-2}.
CharPolyValue char_poly(const TridiagonalHamiltonian& h, cplx z);

enum class Classification { Real, Complex };

struct Spectrum {
  /// Sorted by (real part, imaginary part).
  std::vector<cplx> eigenvalues;
  std::vector<Classification> classifications;
  /// min(|p_N(lambda)| / p~_N(|lambda|), |p_N / p_N'| / E_scale), where p~ is
  /// the recurrence run on absolute values.
  std::vector<double> residuals;
  int n_complex = 0;
  double energy_scale = 0.0;
  double tolerance = 0.0;

  int size() const noexcept { return static_cast<int>(eigenvalues.size()); }
};

/// Floor on |Im lambda| for a complex classification: 1e-16 * E_scale. A root
/// also needs a distinct partner near its conjugate.
double classification_tolerance(const TridiagonalHamiltonian& h);

struct AberthOptions {
  int max_sweeps = 500;
  /// Convergence when every update satisfies |dz| <= update_tol * E_scale.
  double update_tol = 1e-13;
  /// Angular offset (radians) of the initial guesses on the starting circle.
  double angle_offset = 0.6180339887498949;
};

Spectrum eigenvalues(const TridiagonalHamiltonian& h, const AberthOptions& options = {});

struct Eigenvector {
  cplx eigenvalue;
  /// Normalized so the largest-magnitude amplitude is exactly 1 + 0i.
  std::vector<cplx> amplitudes;
  double closure_residual = 0.0;
  /// True when forward recurrence was abandoned for inverse iteration.
  bool from_inverse_iteration = false;
};

/// Throws DefectiveCandidate when neither the forward recurrence nor inverse
/// iteration yields closure_residual <= 1e-7.
Eigenvector eigenvector(const TridiagonalHamiltonian& h, cplx lambda);

/// Test oracle for N <= 12: expands p_N into coefficients and extracts roots by
/// Laguerre steps with deflation followed by Newton polishing on the full
/// polynomial. Shares no code with eigenvalues().
Spectrum brute_force_spectrum(const TridiagonalHamiltonian& h);

/// Coefficients c_0..c_N of p_N(z) = sum c_k z^k (ascending order).
std::vector<std::complex<long double>> char_poly_coefficients(const TridiagonalHamiltonian& h);

/// Bottleneck distance between two multisets of equal size: the smallest
/// achievable maximum |a_i - b_pi(i)| over one-to-one matchings pi.
double multiset_distance(std::span<const cplx> a, std::span<const cplx> b);

}  // namespace ptlattice
