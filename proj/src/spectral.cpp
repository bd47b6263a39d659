#include "ptlattice/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "ptlattice/error.hpp"

namespace ptlattice {

namespace {

using ld = long double;
using lcplx = std::complex<ld>;

constexpr ld kEpsLd = std::numeric_limits<ld>::epsilon();
constexpr int kRescaleBits = 256;
constexpr double kClosureTol = 1e-7;
constexpr double kResidualTol = 1e-9;
constexpr double kClusterResidualTol = 1e-6;

ld magnitude(const lcplx& z) { return std::max(std::abs(z.real()), std::abs(z.imag())); }

struct Recurrence {
  lcplx p;
  lcplx dp;
  long exponent = 0;
};

// p_n = (d_n - z) p_{n-1} - t_{n-1}^2 p_{n-2}, differentiated alongside. All four
// running values share one power-of-two scale factor.
Recurrence recurrence(const TridiagonalHamiltonian& h, lcplx z) {
  const int n = h.size();
  lcplx p_prev{0}, p{1}, dp_prev{0}, dp{0};
  long exponent = 0;
  for (int i = 0; i < n; ++i) {
    const lcplx a = lcplx(h.diagonal[i]) - z;
    const ld t2 = i > 0 ? ld(h.off_diagonal[i - 1]) * ld(h.off_diagonal[i - 1]) : ld(0);
    const lcplx p_next = a * p - t2 * p_prev;
    const lcplx dp_next = -p + a * dp - t2 * dp_prev;
    p_prev = p;
    p = p_next;
    dp_prev = dp;
    dp = dp_next;
    const ld big = std::max({magnitude(p), magnitude(p_prev), magnitude(dp), magnitude(dp_prev)});
    if (big > std::ldexp(ld(1), kRescaleBits) || (big > 0 && big < std::ldexp(ld(1), -kRescaleBits))) {
      int e = 0;
      std::frexp(big, &e);
      p = std::ldexp(p.real(), -e) + lcplx(0, std::ldexp(p.imag(), -e));
      p_prev = std::ldexp(p_prev.real(), -e) + lcplx(0, std::ldexp(p_prev.imag(), -e));
      dp = std::ldexp(dp.real(), -e) + lcplx(0, std::ldexp(dp.imag(), -e));
      dp_prev = std::ldexp(dp_prev.real(), -e) + lcplx(0, std::ldexp(dp_prev.imag(), -e));
      exponent += e;
    }
  }
  return {p, dp, exponent};
}

// |p_N(z)| divided by the same recurrence run on absolute values, which bounds
// every term the signed recurrence accumulates.
double backward_residual(const TridiagonalHamiltonian& h, lcplx z) {
  const int n = h.size();
  lcplx p_prev{0}, p{1};
  ld q_prev = 0, q = 1;
  for (int i = 0; i < n; ++i) {
    const lcplx a = lcplx(h.diagonal[i]) - z;
    const ld t2 = i > 0 ? ld(h.off_diagonal[i - 1]) * ld(h.off_diagonal[i - 1]) : ld(0);
    const lcplx p_next = a * p - t2 * p_prev;
    const ld q_next = (std::abs(lcplx(h.diagonal[i])) + std::abs(z)) * q + t2 * q_prev;
    p_prev = p;
    p = p_next;
    q_prev = q;
    q = q_next;
    if (q > ld(1e300)) {
      p /= q;
      p_prev /= q;
      q_prev /= q;
      q = 1;
    }
  }
  return q > 0 ? static_cast<double>(std::abs(p) / q) : 0.0;
}

// The smaller of the backward error and the Newton correction |p / p'| in
// units of E_scale. The backward error alone stays O(1) at a root sitting on a
// structural zero (e.g. z = 0 of an odd bipartite chain), where p and the
// absolute-value recurrence vanish together.
double normalized_residual(const TridiagonalHamiltonian& h, lcplx z, ld scale) {
  const double backward = backward_residual(h, z);
  const Recurrence r = recurrence(h, z);
  if (r.dp == lcplx(0)) return backward;
  const double newton = static_cast<double>(std::abs(r.p / r.dp) / scale);
  return std::min(backward, newton);
}

bool spectrum_order(const cplx& a, const cplx& b) {
  if (a.real() != b.real()) return a.real() < b.real();
  return a.imag() < b.imag();
}

}  // namespace

CharPolyValue char_poly(const TridiagonalHamiltonian& h, cplx z) {
  Recurrence r = recurrence(h, lcplx(z));
  const ld big = std::max(magnitude(r.p), magnitude(r.dp));
  if (big > 0) {
    int e = 0;
    std::frexp(big, &e);
    r.p = lcplx(std::ldexp(r.p.real(), -e), std::ldexp(r.p.imag(), -e));
    r.dp = lcplx(std::ldexp(r.dp.real(), -e), std::ldexp(r.dp.imag(), -e));
    r.exponent += e;
  }
  return {cplx(r.p), cplx(r.dp), static_cast<int>(r.exponent)};
}

double classification_tolerance(const TridiagonalHamiltonian& h) {
  return 1e-16 * h.energy_scale();
}

namespace {

Spectrum finish_spectrum(const TridiagonalHamiltonian& h, std::vector<cplx> roots,
                         std::vector<double> residuals) {
  std::vector<std::size_t> order(roots.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return spectrum_order(roots[a], roots[b]); });

  Spectrum s;
  s.energy_scale = h.energy_scale();
  s.tolerance = classification_tolerance(h);
  for (std::size_t i : order) {
    s.eigenvalues.push_back(roots[i]);
    s.residuals.push_back(residuals[i]);
  }
  // A root is complex only when it pairs with a distinct root on the other side
  // of the real axis: the smaller |Im| of the two clears the tolerance and the
  // second root lies closer to the conjugate of the first than that |Im|. The
  // relation is symmetric, and rounding noise on a nearly double real root does
  // not satisfy it.
  const std::size_t n = s.eigenvalues.size();
  for (std::size_t i = 0; i < n; ++i) {
    const cplx zi = s.eigenvalues[i];
    bool complex = false;
    for (std::size_t j = 0; j < n && !complex; ++j) {
      const cplx zj = s.eigenvalues[j];
      if (j == i || zi.imag() * zj.imag() >= 0) continue;
      const double reach = std::min(std::abs(zi.imag()), std::abs(zj.imag()));
      complex = reach > s.tolerance && std::abs(zj - std::conj(zi)) <= reach;
    }
    s.classifications.push_back(complex ? Classification::Complex : Classification::Real);
    if (complex) ++s.n_complex;
  }
  return s;
}

}  // namespace

Spectrum eigenvalues(const TridiagonalHamiltonian& h, const AberthOptions& options) {
  const int n = h.size();
  if (n < 1) throw InvalidSpec("empty matrix");
  const ld scale = h.energy_scale() > 0 ? ld(h.energy_scale()) : ld(1);
  if (n == 1) {
    return finish_spectrum(h, {h.diagonal[0]}, {0.0});
  }

  // Centre the starting circle on the mean of the diagonal (trace / N).
  lcplx centre{0};
  for (const auto& d : h.diagonal) centre += lcplx(d);
  centre /= ld(n);

  std::vector<lcplx> z(static_cast<std::size_t>(n));
  const ld radius = ld(1.2) * scale;
  const ld two_pi = 2 * std::numbers::pi_v<ld>;
  for (int k = 0; k < n; ++k) {
    const ld theta = two_pi * k / n + ld(options.angle_offset);
    z[k] = centre + std::polar(radius, theta);
  }

  // A root is settled once its update is below update_tol * E_scale and has
  // either reached the rounding floor or stopped shrinking. Continuing past
  // update_tol resolves clusters split by less than update_tol, which Aberth
  // only approaches linearly.
  const ld update_tol = ld(options.update_tol) * scale;
  const ld floor_step = 16 * kEpsLd * scale;
  std::vector<ld> last_step(static_cast<std::size_t>(n), std::numeric_limits<ld>::infinity());
  std::vector<char> done(static_cast<std::size_t>(n), 0);
  int remaining = n;

  for (int sweep = 0; sweep < options.max_sweeps && remaining > 0; ++sweep) {
    for (int k = 0; k < n; ++k) {
      if (done[k]) continue;
      const Recurrence r = recurrence(h, z[k]);
      if (r.p == lcplx(0)) {
        done[k] = 1;
        --remaining;
        continue;
      }
      lcplx repulsion{0};
      for (int j = 0; j < n; ++j) {
        if (j != k) repulsion += ld(1) / (z[k] - z[j]);
      }
      lcplx step;
      if (r.dp == lcplx(0)) {
        // Stationary point of p: nudge off it.
        step = lcplx(scale * ld(1e-3), scale * ld(1e-3));
      } else {
        const lcplx newton = r.p / r.dp;
        step = newton / (ld(1) - newton * repulsion);
      }
      z[k] -= step;
      const ld size = std::abs(step);
      if (size <= update_tol && (size <= floor_step || size > ld(0.9) * last_step[k])) {
        done[k] = 1;
        --remaining;
      }
      last_step[k] = size;
    }
  }

  // Two closing sweeps over every root. Error after a step below update_tol is
  // of order step^2 / separation, which is above the rounding floor for a
  // tightly split pair.
  for (int sweep = 0; sweep < 2; ++sweep) {
    for (int k = 0; k < n; ++k) {
      const Recurrence r = recurrence(h, z[k]);
      if (r.p == lcplx(0) || r.dp == lcplx(0)) continue;
      lcplx repulsion{0};
      for (int j = 0; j < n; ++j) {
        if (j != k) repulsion += ld(1) / (z[k] - z[j]);
      }
      const lcplx newton = r.p / r.dp;
      const lcplx candidate = z[k] - newton / (ld(1) - newton * repulsion);
      const Recurrence rc = recurrence(h, candidate);
      if (std::abs(std::ldexp(ld(1), int(rc.exponent - r.exponent)) * rc.p) <= std::abs(r.p)) {
        z[k] = candidate;
      }
    }
  }

  std::vector<cplx> roots(static_cast<std::size_t>(n));
  std::vector<double> residuals(static_cast<std::size_t>(n));
  std::vector<int> bad;
  std::vector<double> bad_residuals;
  for (int k = 0; k < n; ++k) {
    roots[k] = cplx(z[k]);
    residuals[k] = normalized_residual(h, z[k], scale);
    if (done[k] && residuals[k] <= kResidualTol) continue;
    // Unconverged or clustered roots: accept at the relaxed level only when
    // another root sits close by (a near-exceptional point).
    bool clustered = false;
    for (int j = 0; j < n; ++j) {
      if (j != k && std::abs(z[j] - z[k]) <= ld(1e-3) * scale) clustered = true;
    }
    const double limit = clustered ? kClusterResidualTol : kResidualTol;
    if (!(residuals[k] <= limit)) {
      bad.push_back(k);
      bad_residuals.push_back(residuals[k]);
    }
  }
  if (!bad.empty()) {
    std::string message = "Aberth iteration left " + std::to_string(bad.size()) + " of " +
                          std::to_string(n) + " roots unconverged (worst residual " +
                          std::to_string(*std::max_element(bad_residuals.begin(),
                                                           bad_residuals.end())) +
                          ")";
    throw ConvergenceFailure(message, std::move(bad), std::move(bad_residuals));
  }
  return finish_spectrum(h, std::move(roots), std::move(residuals));
}

namespace {

double closure_of(const TridiagonalHamiltonian& h, std::span<const lcplx> psi, lcplx lambda) {
  const int n = h.size();
  ld peak = 0;
  for (const auto& v : psi) peak = std::max(peak, std::abs(v));
  const lcplx defect = (n > 1 ? ld(h.off_diagonal[n - 2]) * psi[n - 2] : lcplx(0)) +
                       (lcplx(h.diagonal[n - 1]) - lambda) * psi[n - 1];
  return static_cast<double>(std::abs(defect) / (ld(h.energy_scale()) * peak));
}

double full_residual(const TridiagonalHamiltonian& h, std::span<const lcplx> x, lcplx lambda) {
  const int n = h.size();
  ld peak = 0;
  for (const auto& v : x) peak = std::max(peak, std::abs(v));
  ld worst = 0;
  for (int i = 0; i < n; ++i) {
    lcplx row = (lcplx(h.diagonal[i]) - lambda) * x[i];
    if (i > 0) row += ld(h.off_diagonal[i - 1]) * x[i - 1];
    if (i + 1 < n) row += ld(h.off_diagonal[i]) * x[i + 1];
    worst = std::max(worst, std::abs(row));
  }
  return static_cast<double>(worst / (ld(h.energy_scale()) * peak));
}

std::vector<lcplx> forward_recurrence(const TridiagonalHamiltonian& h, lcplx lambda) {
  const int n = h.size();
  std::vector<lcplx> psi(static_cast<std::size_t>(n));
  psi[0] = 1;
  for (int i = 0; i + 1 < n; ++i) {
    // Row i: e_{i-1} psi_{i-1} + (d_i - lambda) psi_i + e_i psi_{i+1} = 0.
    lcplx rhs = (lambda - lcplx(h.diagonal[i])) * psi[i];
    if (i > 0) rhs -= ld(h.off_diagonal[i - 1]) * psi[i - 1];
    psi[i + 1] = rhs / ld(h.off_diagonal[i]);
    const ld big = std::abs(psi[i + 1]);
    if (big > 1e1000L) {
      for (int j = 0; j <= i + 1; ++j) psi[j] /= big;
    }
  }
  return psi;
}

// Inverse iteration with a pivoted tridiagonal LU of (H - lambda I).
std::vector<lcplx> inverse_iteration(const TridiagonalHamiltonian& h, lcplx lambda) {
  const int n = h.size();
  const ld tiny = kEpsLd * ld(h.energy_scale());
  std::vector<lcplx> dl(n > 1 ? n - 1 : 0), du(n > 1 ? n - 1 : 0), du2(n > 2 ? n - 2 : 0), d(n);
  std::vector<char> swapped(n > 1 ? n - 1 : 0, 0);
  for (int i = 0; i < n; ++i) d[i] = lcplx(h.diagonal[i]) - lambda;
  for (int i = 0; i + 1 < n; ++i) dl[i] = du[i] = ld(h.off_diagonal[i]);

  for (int i = 0; i + 1 < n; ++i) {
    if (std::abs(d[i]) >= std::abs(dl[i])) {
      if (std::abs(d[i]) < tiny) d[i] = tiny;
      const lcplx fact = dl[i] / d[i];
      dl[i] = fact;
      d[i + 1] -= fact * du[i];
      if (i + 2 < n) du2[i] = 0;
    } else {
      const lcplx fact = d[i] / dl[i];
      d[i] = dl[i];
      dl[i] = fact;
      const lcplx temp = du[i];
      du[i] = d[i + 1];
      d[i + 1] = temp - fact * d[i + 1];
      if (i + 2 < n) {
        du2[i] = du[i + 1];
        du[i + 1] = -fact * du[i + 1];
      }
      swapped[i] = 1;
    }
  }
  if (std::abs(d[n - 1]) < tiny) d[n - 1] = tiny;

  std::vector<lcplx> x(static_cast<std::size_t>(n), lcplx(1));
  for (int sweep = 0; sweep < 3; ++sweep) {
    for (int i = 0; i + 1 < n; ++i) {
      if (!swapped[i]) {
        x[i + 1] -= dl[i] * x[i];
      } else {
        const lcplx temp = x[i];
        x[i] = x[i + 1];
        x[i + 1] = temp - dl[i] * x[i];
      }
    }
    x[n - 1] /= d[n - 1];
    if (n > 1) x[n - 2] = (x[n - 2] - du[n - 2] * x[n - 1]) / d[n - 2];
    for (int i = n - 3; i >= 0; --i) {
      x[i] = (x[i] - du[i] * x[i + 1] - du2[i] * x[i + 2]) / d[i];
    }
    ld peak = 0;
    for (const auto& v : x) peak = std::max(peak, std::abs(v));
    for (auto& v : x) v /= peak;
  }
  return x;
}

void normalize_to_peak(std::vector<lcplx>& psi) {
  std::size_t arg = 0;
  for (std::size_t i = 1; i < psi.size(); ++i) {
    if (std::abs(psi[i]) > std::abs(psi[arg])) arg = i;
  }
  const lcplx pivot = psi[arg];
  for (auto& v : psi) v /= pivot;
  psi[arg] = lcplx(1, 0);
}

}  // namespace

Eigenvector eigenvector(const TridiagonalHamiltonian& h, cplx lambda) {
  const lcplx l(lambda);
  std::vector<lcplx> psi = forward_recurrence(h, l);
  double closure = closure_of(h, psi, l);
  bool inverse = false;
  if (!(closure <= kClosureTol)) {
    psi = inverse_iteration(h, l);
    closure = full_residual(h, psi, l);
    inverse = true;
  }
  if (!(closure <= kClosureTol)) {
    throw DefectiveCandidate("no eigenvector for lambda = (" + std::to_string(lambda.real()) +
                             ", " + std::to_string(lambda.imag()) +
                             "): closure residual " + std::to_string(closure));
  }
  normalize_to_peak(psi);
  Eigenvector ev;
  ev.eigenvalue = lambda;
  ev.amplitudes.assign(psi.begin(), psi.end());
  ev.closure_residual = closure;
  ev.from_inverse_iteration = inverse;
  return ev;
}

double multiset_distance(std::span<const cplx> a, std::span<const cplx> b) {
  if (a.size() != b.size()) {
    throw InvalidSpec("multiset_distance: sizes differ (" + std::to_string(a.size()) + " vs " +
                      std::to_string(b.size()) + ")");
  }
  const std::size_t n = a.size();
  if (n == 0) return 0.0;
  std::vector<double> dist(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) dist[i * n + j] = std::abs(a[i] - b[j]);

  // Perfect matching using only pairs with dist <= limit (Kuhn's augmenting paths).
  auto matchable = [&](double limit) {
    std::vector<int> owner(n, -1);
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<char> seen(n, 0);
      auto augment = [&](auto&& self, std::size_t u) -> bool {
        for (std::size_t v = 0; v < n; ++v) {
          if (seen[v] || dist[u * n + v] > limit) continue;
          seen[v] = 1;
          if (owner[v] < 0 || self(self, static_cast<std::size_t>(owner[v]))) {
            owner[v] = static_cast<int>(u);
            return true;
          }
        }
        return false;
      };
      if (!augment(augment, i)) return false;
    }
    return true;
  };

  std::vector<double> candidates = dist;
  std::sort(candidates.begin(), candidates.end());
  std::size_t lo = 0, hi = candidates.size() - 1;
  while (lo < hi) {
    const std::size_t mid = (lo + hi) / 2;
    if (matchable(candidates[mid])) {
      hi = mid;
    } else {
      lo = mid + 1;
    }
  }
  return candidates[lo];
}

}  // namespace ptlattice
