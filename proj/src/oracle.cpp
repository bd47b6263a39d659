// Independent spectrum oracle for small matrices: explicit characteristic
// polynomial coefficients plus Laguerre/deflation root extraction.

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "ptlattice/error.hpp"
#include "ptlattice/spectral.hpp"

namespace ptlattice {

namespace {

using ld = long double;
using lcplx = std::complex<ld>;
using Poly = std::vector<lcplx>;  // ascending coefficients

constexpr int kMaxOracleSize = 12;

struct Horner {
  lcplx p, dp, d2p;
};

Horner horner(const Poly& c, lcplx z) {
  lcplx p = c.back(), dp{0}, d2p{0};
  for (int k = static_cast<int>(c.size()) - 2; k >= 0; --k) {
    d2p = d2p * z + dp;
    dp = dp * z + p;
    p = p * z + c[k];
  }
  return {p, dp, ld(2) * d2p};
}

ld abs_poly(const Poly& c, ld r) {
  ld s = 0;
  for (int k = static_cast<int>(c.size()) - 1; k >= 0; --k) s = s * r + std::abs(c[k]);
  return s;
}

// One root of c by Laguerre's method; fractional steps every tenth iteration
// break the rare limit cycles.
lcplx laguerre(const Poly& c, lcplx z) {
  const int degree = static_cast<int>(c.size()) - 1;
  static constexpr ld kFractions[] = {0.5L, 0.25L, 0.75L, 0.13L, 0.38L, 0.62L, 0.88L, 1.0L};
  const ld eps = std::numeric_limits<ld>::epsilon();
  for (int iter = 1; iter <= 400; ++iter) {
    const Horner h = horner(c, z);
    if (std::abs(h.p) <= 2 * eps * abs_poly(c, std::abs(z))) return z;
    const lcplx g = h.dp / h.p;
    const lcplx g2 = g * g;
    const lcplx hh = g2 - h.d2p / h.p;
    const lcplx root = std::sqrt(ld(degree - 1) * (ld(degree) * hh - g2));
    const lcplx plus = g + root;
    const lcplx minus = g - root;
    const lcplx denom = std::abs(plus) >= std::abs(minus) ? plus : minus;
    const lcplx step = std::abs(denom) > 0 ? ld(degree) / denom
                                           : std::polar(ld(1) + std::abs(z), ld(iter));
    const lcplx next = z - step;
    if (next == z) return z;
    z = iter % 10 == 0 ? z - kFractions[(iter / 10) % 8] * step : next;
  }
  return z;
}

lcplx newton_polish(const Poly& c, lcplx z) {
  for (int i = 0; i < 8; ++i) {
    const Horner h = horner(c, z);
    if (h.dp == lcplx(0)) break;
    const lcplx next = z - h.p / h.dp;
    // Keep the polish only while it lowers |p|; near double roots Newton wanders.
    if (std::abs(horner(c, next).p) >= std::abs(h.p)) break;
    z = next;
  }
  return z;
}

}  // namespace

std::vector<lcplx> char_poly_coefficients(const TridiagonalHamiltonian& h) {
  const int n = h.size();
  Poly prev{lcplx(1)};  // P_0
  Poly prev2;           // P_{-1} = 0
  for (int i = 0; i < n; ++i) {
    const lcplx d(h.diagonal[i]);
    const ld t2 = i > 0 ? ld(h.off_diagonal[i - 1]) * ld(h.off_diagonal[i - 1]) : ld(0);
    Poly next(prev.size() + 1, lcplx(0));
    for (std::size_t k = 0; k < prev.size(); ++k) {
      next[k] += d * prev[k];
      next[k + 1] -= prev[k];
    }
    for (std::size_t k = 0; k < prev2.size(); ++k) next[k] -= t2 * prev2[k];
    prev2 = std::move(prev);
    prev = std::move(next);
  }
  return prev;
}

Spectrum brute_force_spectrum(const TridiagonalHamiltonian& h) {
  const int n = h.size();
  if (n < 1 || n > kMaxOracleSize) {
    throw InvalidSpec("brute_force_spectrum supports 1 <= N <= 12, got N = " + std::to_string(n));
  }
  const Poly full = char_poly_coefficients(h);
  Poly work = full;
  const ld scale = h.energy_scale() > 0 ? ld(h.energy_scale()) : ld(1);

  std::vector<lcplx> roots;
  while (work.size() > 2) {
    lcplx z = laguerre(work, lcplx(ld(0.1) * scale, ld(0.05) * scale));
    z = newton_polish(full, z);
    roots.push_back(z);
    // Synthetic division by (x - z).
    Poly quotient(work.size() - 1);
    lcplx carry = work.back();
    for (int k = static_cast<int>(work.size()) - 2; k >= 0; --k) {
      quotient[k] = carry;
      carry = work[k] + carry * z;
    }
    work = std::move(quotient);
  }
  roots.push_back(newton_polish(full, -work[0] / work[1]));

  Spectrum s;
  s.energy_scale = h.energy_scale();
  s.tolerance = classification_tolerance(h);
  std::sort(roots.begin(), roots.end(), [](const lcplx& a, const lcplx& b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  });
  for (const auto& z : roots) {
    s.eigenvalues.push_back(cplx(z));
    s.residuals.push_back(
        static_cast<double>(std::abs(horner(full, z).p) / abs_poly(full, std::abs(z))));
    const bool real = std::abs(z.imag()) <= ld(s.tolerance);
    s.classifications.push_back(real ? Classification::Real : Classification::Complex);
    if (!real) ++s.n_complex;
  }
  return s;
}

}  // namespace ptlattice
