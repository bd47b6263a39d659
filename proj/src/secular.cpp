#include "ptlattice/secular.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "ptlattice/error.hpp"

namespace ptlattice {

namespace {

constexpr double kTinyNormalization = 1e-300;
constexpr double kMaxCondition = 1e12;
constexpr double kRealizableTol = 1e-6;

void require_two_segment(const LatticeSpec& spec, const char* op) {
  if (spec.profile().kind() != HoppingProfile::Kind::TwoSegment) {
    throw InvalidSpec(std::string(op) + " requires a two-segment hopping profile");
  }
}

void require_nearest_neighbor(const LatticeSpec& spec, const char* op) {
  if (spec.n_sites() % 2 != 0 || spec.impurity_site() != spec.n_sites() / 2) {
    throw InvalidSpec(std::string(op) + " requires even N and m = N/2 (got N = " +
                      std::to_string(spec.n_sites()) +
                      ", m = " + std::to_string(spec.impurity_site()) + ")");
  }
}

cplx sq(cplx z) { return z * z; }

// Rotates psi by one global phase so the largest amplitude among the first
// `count` sites becomes real and positive.
std::vector<cplx> rotate_left_real(const std::vector<cplx>& psi, int count) {
  std::size_t arg = 0;
  for (int i = 1; i < count; ++i) {
    if (std::abs(psi[i]) > std::abs(psi[arg])) arg = static_cast<std::size_t>(i);
  }
  const cplx phase = std::abs(psi[arg]) > 0 ? std::conj(psi[arg]) / std::abs(psi[arg]) : cplx(1);
  std::vector<cplx> out(psi.size());
  for (std::size_t i = 0; i < psi.size(); ++i) out[i] = psi[i] * phase;
  return out;
}

double peak_of(const std::vector<cplx>& v) {
  double p = 0;
  for (const auto& x : v) p = std::max(p, std::abs(x));
  return p;
}

// One-column least squares y ~ c * x.
cplx project(const std::vector<cplx>& x, const std::vector<cplx>& y) {
  cplx num{0};
  double den = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    num += std::conj(x[i]) * y[i];
    den += std::norm(x[i]);
  }
  if (!(den > kTinyNormalization)) {
    throw IllConditionedFit("ansatz column vanishes on its segment (quasimomentum at 0 or pi)");
  }
  return num / den;
}

}  // namespace

QuasimomentumPair quasimomenta_from_energy(cplx energy, double t0, double tb) {
  if (!(t0 > 0) || !(tb > 0)) throw InvalidSpec("hopping amplitudes must be positive");
  return {std::acos(-energy / (2.0 * t0)), std::acos(-energy / (2.0 * tb)), energy};
}

SecularTerms secular_terms(const LatticeSpec& spec, cplx energy) {
  require_two_segment(spec, "secular_terms");
  const double t0 = spec.profile().t0();
  const double tb = spec.profile().tb();
  const double g = spec.gamma() / t0;
  const double tr = tb / t0;
  const int n = spec.n_sites();
  const int m = spec.impurity_site();
  const auto q = quasimomenta_from_energy(energy, t0, tb);
  const cplx s_m = std::sin(q.k * double(m));
  const cplx s_m1 = std::sin(q.k * double(m + 1));
  SecularTerms t;
  t.outer = (sq(s_m1) + g * g * sq(s_m)) * std::sin(q.k_prime * double(n + 1 - 2 * m));
  t.inner = tr * tr * sq(s_m) * std::sin(q.k_prime * double(n - 1 - 2 * m));
  t.cross = -2.0 * tr * s_m * s_m1 * std::sin(q.k_prime * double(n - 2 * m));
  return t;
}

double secular_residual(const LatticeSpec& spec, cplx energy) {
  const SecularTerms t = secular_terms(spec, energy);
  if (std::abs(t.outer) < kTinyNormalization && std::abs(t.inner) < kTinyNormalization &&
      std::abs(t.cross) < kTinyNormalization) {
    throw DegenerateNormalization("all secular terms vanish at this energy");
  }
  return std::abs(t.sum()) / t.magnitude();
}

double nearest_neighbor_residual(const LatticeSpec& spec, cplx energy) {
  require_two_segment(spec, "nearest_neighbor_residual");
  require_nearest_neighbor(spec, "nearest_neighbor_residual");
  const double t0 = spec.profile().t0();
  const double tb = spec.profile().tb();
  const double g = spec.gamma();
  const int half = spec.n_sites() / 2;
  const auto q = quasimomenta_from_energy(energy, t0, tb);
  const cplx a = sq(std::sin(q.k * double(half + 1)));
  const cplx b = sq(std::sin(q.k * double(half)));
  const cplx value = t0 * t0 * a - (tb * tb - g * g) * b;
  const double norm = std::abs(t0 * t0 * a + g * g * b) + tb * tb * std::abs(b);
  if (!(norm >= kTinyNormalization)) {
    throw DegenerateNormalization("nearest-neighbour secular terms vanish at this energy");
  }
  return std::abs(value) / norm;
}

double signed_secular(const LatticeSpec& spec, double energy) {
  const SecularTerms t = secular_terms(spec, cplx(energy, 0.0));
  const auto q = quasimomenta_from_energy(cplx(energy, 0.0), spec.profile().t0(),
                                          spec.profile().tb());
  const cplx trivial = std::sin(q.k_prime) * sq(std::sin(q.k));
  const double norm = t.magnitude();
  if (std::abs(trivial) < kTinyNormalization || norm < kTinyNormalization) {
    return std::numeric_limits<double>::quiet_NaN();
  }
  const cplx phase = trivial / std::abs(trivial);
  return (t.sum() / phase).real() / norm;
}

namespace {

// Golden-section search for the minimum of sign * f on [lo, hi]. Returns the
// location if sign * f drops below zero there, NaN otherwise.
double find_hidden_crossing(const LatticeSpec& spec, double lo, double hi, double sign) {
  const double r = 0.5 * (std::sqrt(5.0) - 1.0);
  auto g = [&](double e) {
    const double f = signed_secular(spec, e);
    return std::isnan(f) ? std::numeric_limits<double>::infinity() : sign * f;
  };
  double a = lo, b = hi;
  double x1 = b - r * (b - a), x2 = a + r * (b - a);
  double g1 = g(x1), g2 = g(x2);
  for (int it = 0; it < 200 && b - a > 4 * std::numeric_limits<double>::epsilon() * std::abs(b);
       ++it) {
    if (g1 < 0) return x1;
    if (g2 < 0) return x2;
    if (g1 <= g2) {
      b = x2;
      x2 = x1;
      g2 = g1;
      x1 = b - r * (b - a);
      g1 = g(x1);
    } else {
      a = x1;
      x1 = x2;
      g1 = g2;
      x2 = a + r * (b - a);
      g2 = g(x2);
    }
  }
  if (g1 < 0) return x1;
  if (g2 < 0) return x2;
  return std::numeric_limits<double>::quiet_NaN();
}

}  // namespace

SecularScan scan_secular_roots(const LatticeSpec& spec, int points, double edge_exclusion) {
  require_two_segment(spec, "scan_secular_roots");
  if (points < 2) throw InvalidSpec("scan needs at least two points");
  const double t0 = spec.profile().t0();
  const double tb = spec.profile().tb();
  const double scale = build_hamiltonian(spec).energy_scale();
  const double exclusion = edge_exclusion * scale;
  const double edges[] = {-2 * t0, 2 * t0, -2 * tb, 2 * tb};

  std::vector<double> es, fs;
  for (int i = 0; i < points; ++i) {
    const double e = -scale + 2.0 * scale * i / (points - 1);
    bool near_edge = false;
    for (double edge : edges) near_edge = near_edge || std::abs(e - edge) <= exclusion;
    if (near_edge) continue;
    const double f = signed_secular(spec, e);
    if (std::isnan(f)) continue;
    es.push_back(e);
    fs.push_back(f);
  }

  SecularScan scan;
  scan.points_used = static_cast<int>(es.size());
  for (std::size_t i = 1; i < es.size(); ++i) {
    if ((fs[i - 1] < 0) != (fs[i] < 0)) {
      ++scan.sign_changes;
      scan.bracket_midpoints.push_back(0.5 * (es[i - 1] + es[i]));
      continue;
    }
    // A pair of roots closer than the grid step leaves no sign change on the
    // grid, only a dip of |f| towards zero. Search such dips for a crossing.
    if (i + 1 < es.size() && (fs[i] < 0) == (fs[i + 1] < 0) &&
        std::abs(fs[i]) < std::abs(fs[i - 1]) && std::abs(fs[i]) <= std::abs(fs[i + 1])) {
      const double sign = fs[i] < 0 ? -1.0 : 1.0;
      const double hit = find_hidden_crossing(spec, es[i - 1], es[i + 1], sign);
      if (!std::isnan(hit)) {
        scan.sign_changes += 2;
        scan.bracket_midpoints.push_back(hit);
        scan.bracket_midpoints.push_back(hit);
        ++scan.refined_pairs;
      }
    }
  }
  return scan;
}

AnsatzCoefficients fit_ansatz(const LatticeSpec& spec, const Eigenvector& ev) {
  require_two_segment(spec, "fit_ansatz");
  const int n = spec.n_sites();
  const int m = spec.impurity_site();
  const int mirror = spec.mirror_site();
  if (static_cast<int>(ev.amplitudes.size()) != n) {
    throw InvalidSpec("eigenvector length does not match the lattice");
  }
  const auto q = quasimomenta_from_energy(ev.eigenvalue, spec.profile().t0(), spec.profile().tb());
  std::vector<cplx> psi = rotate_left_real(ev.amplitudes, m);
  const double peak = peak_of(psi);
  for (auto& v : psi) v /= peak;

  AnsatzCoefficients out;

  std::vector<cplx> col, y;
  for (int site = 1; site <= m; ++site) {
    col.push_back(std::sin(q.k * double(site)));
    y.push_back(psi[site - 1]);
  }
  out.a_left = project(col, y);

  col.clear();
  y.clear();
  for (int site = mirror; site <= n; ++site) {
    col.push_back(std::sin(q.k * double(n + 1 - site)));
    y.push_back(psi[site - 1]);
  }
  out.b_right = project(col, y);

  // Middle segment, fitted in a basis centred on the segment so that
  // evanescent k' does not make sin and cos columns collinear.
  const int first = m + 1;
  const int last = mirror - 1;
  const int count = last - first + 1;
  if (count >= 1) {
    const double centre = 0.5 * (first + last);
    std::vector<cplx> s, c;
    y.clear();
    for (int site = first; site <= last; ++site) {
      s.push_back(std::sin(q.k_prime * (site - centre)));
      c.push_back(std::cos(q.k_prime * (site - centre)));
      y.push_back(psi[site - 1]);
    }
    cplx ps{0}, qc{0};
    if (count == 1) {
      // Minimum-norm solution of the single equation s*P' + c*Q' = y.
      const double den = std::norm(s[0]) + std::norm(c[0]);
      if (!(den > kTinyNormalization)) throw IllConditionedFit("middle ansatz row vanishes");
      ps = std::conj(s[0]) * y[0] / den;
      qc = std::conj(c[0]) * y[0] / den;
    } else {
      // Normal equations G [P' Q']^T = r with G Hermitian positive semidefinite.
      double gss = 0, gcc = 0;
      cplx gsc{0}, rs{0}, rc{0};
      for (int i = 0; i < count; ++i) {
        gss += std::norm(s[i]);
        gcc += std::norm(c[i]);
        gsc += std::conj(s[i]) * c[i];
        rs += std::conj(s[i]) * y[i];
        rc += std::conj(c[i]) * y[i];
      }
      const double tr = gss + gcc;
      const double det = gss * gcc - std::norm(gsc);
      const double disc = std::sqrt(std::max(0.0, 0.25 * tr * tr - det));
      const double lmax = 0.5 * tr + disc;
      const double lmin = det / lmax;
      out.condition = lmin > 0 ? std::sqrt(lmax / lmin) : std::numeric_limits<double>::infinity();
      if (!(out.condition <= kMaxCondition)) {
        throw IllConditionedFit("middle-segment design matrix has condition " +
                                std::to_string(out.condition));
      }
      ps = (gcc * rs - gsc * rc) / det;
      qc = (gss * rc - std::conj(gsc) * rs) / det;
    }
    // sin k'(n-c) = sin k'n cos k'c - cos k'n sin k'c, cos k'(n-c) = cos k'n cos k'c + sin k'n sin k'c.
    const cplx cc = std::cos(q.k_prime * centre);
    const cplx sc = std::sin(q.k_prime * centre);
    out.p_mid = ps * cc + qc * sc;
    out.q_mid = -ps * sc + qc * cc;
    double sum = 0;
    for (int i = 0; i < count; ++i) sum += std::norm(ps * s[i] + qc * c[i] - y[i]);
    out.fit_residual += sum;
  }

  for (int site = 1; site <= m; ++site) {
    out.fit_residual += std::norm(out.a_left * std::sin(q.k * double(site)) - psi[site - 1]);
  }
  for (int site = mirror; site <= n; ++site) {
    out.fit_residual +=
        std::norm(out.b_right * std::sin(q.k * double(n + 1 - site)) - psi[site - 1]);
  }
  out.fit_residual = std::sqrt(out.fit_residual / n);
  return out;
}

ImpurityPairDecomposition impurity_pair_residual(const LatticeSpec& spec, double epsilon,
                                                 const Eigenvector& ev) {
  require_nearest_neighbor(spec, "impurity_pair_residual");
  const int n = spec.n_sites();
  const int half = n / 2;
  if (static_cast<int>(ev.amplitudes.size()) != n) {
    throw InvalidSpec("eigenvector length does not match the lattice");
  }
  std::vector<cplx> psi = rotate_left_real(ev.amplitudes, half);
  const double peak = peak_of(psi);
  for (auto& v : psi) v /= peak;
  double worst_imag = 0;
  for (int i = 0; i < half; ++i) worst_imag = std::max(worst_imag, std::abs(psi[i].imag()));
  if (worst_imag > kRealizableTol) {
    throw NotRealizable("left-half amplitudes keep an imaginary part of " +
                        std::to_string(worst_imag) + " after global phase rotation");
  }

  const auto bonds = spec.bonds();
  const double t_mid = bonds[half - 1];
  const double t_side = half >= 2 ? bonds[half - 2] : 0.0;
  const double g = spec.gamma();

  ImpurityPairDecomposition out;
  out.epsilon = epsilon;
  out.alpha_mid = psi[half - 1];
  out.beta_mid = half >= 2 ? psi[half - 2] : cplx(0);
  out.mirror_alpha = psi[half];
  out.mirror_beta = half + 1 < n ? psi[half + 1] : cplx(0);
  if (std::abs(out.alpha_mid) > 1e-8) {
    out.chi = std::arg(out.mirror_alpha / out.alpha_mid);
  } else if (std::abs(out.beta_mid) > 1e-8) {
    out.chi = std::arg(out.mirror_beta / out.beta_mid);
  }

  const cplx a = out.alpha_mid;
  const cplx b = out.beta_mid;
  const cplx minus = t_side * b + cplx(epsilon, -g) * a;
  const cplx plus = t_side * b + cplx(epsilon, g) * a;
  const cplx off = t_mid * a;
  const cplx det = minus * plus - off * off;
  const double norm = std::abs(minus * plus) + std::abs(off * off);
  out.det_residual = norm > 0 ? std::abs(det) / norm : 0.0;
  return out;
}

}  // namespace ptlattice
