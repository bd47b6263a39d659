#include "ptlattice/verify.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ptlattice/error.hpp"
#include "ptlattice/secular.hpp"

namespace ptlattice {

namespace {

constexpr double kOracleTol = 1e-8;
constexpr double kAnalyticTol = 1e-12;
constexpr double kThresholdTol = 1e-6;
constexpr double kResidualTol = 1e-6;
constexpr double kReductionTol = 1e-8;
constexpr double kMirrorTol = 1e-8;
constexpr double kParityTol = 1e-10;
constexpr double kScalingTol = 1e-8;
constexpr double kDegenerateGap = 1e-6;
constexpr double kTrivialTerms = 1e-12;

// Accumulates the worst value of one measured quantity over many cases.
class Tally {
 public:
  Tally(std::string name, double limit) : name_(std::move(name)), limit_(limit) {}

  void observe(double value, const std::string& where) {
    ++cases_;
    if (std::isnan(value) || value > worst_) {
      worst_ = std::isnan(value) ? std::numeric_limits<double>::infinity() : value;
      where_ = where;
    }
  }
  void fail(const std::string& where, const std::string& why) {
    ++cases_;
    ++errors_;
    if (first_error_.empty()) first_error_ = where + ": " + why;
  }
  void note(const std::string& text) { notes_ += (notes_.empty() ? "" : "; ") + text; }

  CheckResult result() const {
    CheckResult r;
    r.name = name_;
    r.measured = worst_;
    r.limit = limit_;
    r.passed = cases_ > 0 && errors_ == 0 && worst_ <= limit_;
    std::ostringstream os;
    os << cases_ << " cases";
    if (errors_ > 0) os << ", " << errors_ << " errors, first " << first_error_;
    if (!where_.empty()) os << ", worst at " << where_;
    if (!notes_.empty()) os << ", " << notes_;
    r.detail = os.str();
    return r;
  }

 private:
  std::string name_;
  double limit_;
  double worst_ = 0.0;
  int cases_ = 0;
  int errors_ = 0;
  std::string where_;
  std::string first_error_;
  std::string notes_;
};

std::string label(const LatticeSpec& spec) {
  std::ostringstream os;
  os.precision(6);
  os << "N=" << spec.n_sites() << " m=" << spec.impurity_site() << " gamma=" << spec.gamma();
  switch (spec.profile().kind()) {
    case HoppingProfile::Kind::TwoSegment:
      os << " t0=" << spec.profile().t0() << " tb=" << spec.profile().tb();
      break;
    case HoppingProfile::Kind::Alpha:
      os << " alpha=" << spec.profile().alpha_exponent();
      break;
    case HoppingProfile::Kind::Custom:
      os << " custom";
      break;
  }
  return os.str();
}

CheckResult boolean_check(std::string name, bool ok, std::string detail) {
  CheckResult r;
  r.name = std::move(name);
  r.passed = ok;
  r.measured = ok ? 0.0 : 1.0;
  r.limit = 0.0;
  r.detail = std::move(detail);
  return r;
}

double min_gap(const std::vector<cplx>& values) {
  double gap = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < values.size(); ++i) {
    for (std::size_t j = i + 1; j < values.size(); ++j) {
      gap = std::min(gap, std::abs(values[i] - values[j]));
    }
  }
  return gap;
}

}  // namespace

bool VerifyReport::passed() const noexcept {
  return !checks.empty() &&
         std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

void VerifyReport::append(const VerifyReport& other) {
  checks.insert(checks.end(), other.checks.begin(), other.checks.end());
}

std::optional<Suite> parse_suite(std::string_view name) {
  if (name == "oracle") return Suite::Oracle;
  if (name == "symmetry") return Suite::Symmetry;
  if (name == "maximal") return Suite::Maximal;
  if (name == "secular") return Suite::Secular;
  if (name == "eq5") return Suite::ImpurityPair;
  if (name == "all") return Suite::All;
  return std::nullopt;
}

VerifyReport run_suite(Suite suite, std::uint64_t seed) {
  switch (suite) {
    case Suite::Oracle:
      return verify_oracle(seed);
    case Suite::Symmetry:
      return verify_symmetry(seed);
    case Suite::Maximal:
      return verify_maximal(seed);
    case Suite::Secular:
      return verify_secular(seed);
    case Suite::ImpurityPair:
      return verify_impurity_pair(seed);
    case Suite::All:
      break;
  }
  VerifyReport all;
  all.append(verify_oracle(seed));
  all.append(verify_symmetry(seed));
  all.append(verify_maximal(seed));
  all.append(verify_secular(seed));
  all.append(verify_impurity_pair(seed));
  return all;
}

SpectrumSymmetry measure_symmetry(const TridiagonalHamiltonian& h, const Spectrum& s) {
  const double scale = h.energy_scale() > 0 ? h.energy_scale() : 1.0;
  std::vector<cplx> conj(s.eigenvalues.size()), flip(s.eigenvalues.size());
  cplx trace{0};
  double max_re = 0;
  for (std::size_t i = 0; i < s.eigenvalues.size(); ++i) {
    conj[i] = std::conj(s.eigenvalues[i]);
    flip[i] = -conj[i];
    trace += s.eigenvalues[i];
    max_re = std::max(max_re, std::abs(s.eigenvalues[i].real()));
  }
  SpectrumSymmetry out;
  out.conjugation = multiset_distance(s.eigenvalues, conj) / scale;
  out.particle_hole = multiset_distance(s.eigenvalues, flip) / scale;
  out.trace = std::abs(trace) / (std::max(h.size(), 1) * scale);
  out.bound_excess = std::max(0.0, max_re - 2.0 * h.max_hopping()) / scale;
  return out;
}

LatticeSpec random_spec(UniformSource& rng, int n_min, int n_max) {
  const int n = rng.next_int(n_min, n_max);
  const int m = rng.next_int(1, n / 2);
  const int kind = rng.next_int(0, 2);
  HoppingProfile profile = HoppingProfile::two_segment(1.0, 1.0);
  if (kind == 0) {
    const double t0 = rng.next(0.5, 2.0);
    profile = HoppingProfile::two_segment(t0, rng.next(0.1, 3.0));
  } else if (kind == 1) {
    profile = HoppingProfile::alpha(rng.next(0.5, 2.0), rng.next(-1.0, 1.0));
  } else {
    profile = random_symmetric_profile(n, 0.2, 2.0, rng);
  }
  const LatticeSpec shape(n, m, 0.0, profile);
  return shape.with_gamma(rng.next(0.0, 1.5) * shape.max_hopping());
}

VerifyReport verify_oracle(std::uint64_t seed, int n_specs) {
  UniformSource rng(seed);
  Tally random("oracle.random_specs_multiset_distance", kOracleTol);
  for (int i = 0; i < n_specs; ++i) {
    const LatticeSpec spec = random_spec(rng, 2, 8);
    const auto h = build_hamiltonian(spec);
    try {
      const Spectrum fast = eigenvalues(h);
      const Spectrum slow = brute_force_spectrum(h);
      random.observe(multiset_distance(fast.eigenvalues, slow.eigenvalues) / h.energy_scale(),
                     label(spec));
    } catch (const Error& e) {
      random.fail(label(spec), e.what());
    }
  }

  Tally analytic("oracle.two_site_closed_form", kAnalyticTol);
  for (double tb : {0.3, 1.0, 2.5}) {
    for (double ratio : {0.0, 0.5, 0.99, 1.01, 2.0}) {
      const LatticeSpec spec(2, 1, ratio * tb, HoppingProfile::two_segment(1.0, tb));
      const auto h = build_hamiltonian(spec);
      const cplx root = std::sqrt(cplx(tb * tb - spec.gamma() * spec.gamma(), 0.0));
      const std::vector<cplx> exact{root, -root};
      try {
        analytic.observe(multiset_distance(eigenvalues(h).eigenvalues, exact) / h.energy_scale(),
                         label(spec));
      } catch (const Error& e) {
        analytic.fail(label(spec), e.what());
      }
    }
  }
  return {{random.result(), analytic.result()}};
}

VerifyReport verify_symmetry(std::uint64_t seed, int n_specs) {
  UniformSource rng(seed);
  Tally conj("symmetry.conjugation_closure", SpectrumSymmetry::kClosureTol);
  Tally ph("symmetry.particle_hole_closure", SpectrumSymmetry::kClosureTol);
  Tally trace("symmetry.zero_trace", SpectrumSymmetry::kTraceTol);
  Tally bound("symmetry.real_part_bound", SpectrumSymmetry::kBoundTol);
  Tally even("symmetry.complex_count_even", 0.0);
  int pt_mismatch = 0, hermitian_mismatch = 0;
  for (int i = 0; i < n_specs; ++i) {
    const LatticeSpec spec = random_spec(rng, 2, 64);
    const auto h = build_hamiltonian(spec);
    if (!(pt_transform_hamiltonian(h) == h)) ++pt_mismatch;
    const auto h0 = build_hamiltonian(spec.with_gamma(0.0));
    for (const auto& d : h0.diagonal) {
      if (d != cplx(0)) ++hermitian_mismatch;
    }
    try {
      const Spectrum s = eigenvalues(h);
      const SpectrumSymmetry sym = measure_symmetry(h, s);
      const std::string where = label(spec);
      conj.observe(sym.conjugation, where);
      ph.observe(sym.particle_hole, where);
      trace.observe(sym.trace, where);
      bound.observe(sym.bound_excess, where);
      even.observe(s.n_complex % 2, where);
    } catch (const Error& e) {
      for (Tally* t : {&conj, &ph, &trace, &bound, &even}) t->fail(label(spec), e.what());
    }
  }

  VerifyReport report{{conj.result(), ph.result(), trace.result(), bound.result(), even.result()}};
  report.checks.push_back(boolean_check("symmetry.pt_transform_identity", pt_mismatch == 0,
                                        std::to_string(pt_mismatch) + " of " +
                                            std::to_string(n_specs) + " Hamiltonians changed"));
  report.checks.push_back(boolean_check("symmetry.hermitian_at_zero_gamma",
                                        hermitian_mismatch == 0,
                                        std::to_string(hermitian_mismatch) +
                                            " nonzero diagonal entries at gamma = 0"));
  {
    bool same = true;
    for (int n : {2, 7, 20}) {
      for (int m = 1; m <= n / 2; ++m) {
        const LatticeSpec a(n, m, 0.3, HoppingProfile::two_segment(1.3, 1.3));
        const LatticeSpec b(n, m, 0.3,
                            HoppingProfile::custom(std::vector<double>(n - 1, 1.3)));
        same = same && build_hamiltonian(a) == build_hamiltonian(b);
      }
    }
    report.checks.push_back(boolean_check("symmetry.uniform_two_segment_equals_custom", same,
                                          "N in {2, 7, 20}, every m"));
  }

  Tally parity("symmetry.threshold_parity_in_m", kParityTol);
  Tally scaling("symmetry.threshold_energy_scaling", kScalingTol);
  const struct {
    int n, m;
    double tb;
  } cases[] = {{20, 8, 0.6}, {21, 9, 0.4}, {12, 3, 1.7}, {9, 2, 0.9}, {16, 8, 0.5}};
  for (const auto& c : cases) {
    const LatticeSpec shape(c.n, c.m, 0.0, HoppingProfile::two_segment(1.0, c.tb));
    const std::string where = label(shape);
    try {
      const double gmax = default_gamma_max(shape);
      const double direct = find_gamma_c(shape, gmax).gamma_c;
      const HamiltonianFamily mirrored = [&shape](double gamma) {
        TridiagonalHamiltonian h = build_hamiltonian(shape.with_gamma(gamma));
        std::swap(h.diagonal[shape.impurity_site() - 1], h.diagonal[shape.mirror_site() - 1]);
        return h;
      };
      const double flipped = find_gamma_c(mirrored, gmax, shape.max_hopping()).gamma_c;
      parity.observe(std::abs(direct - flipped) / direct, where);
      for (double s : {0.5, 3.0}) {
        const LatticeSpec scaled(c.n, c.m, 0.0, HoppingProfile::two_segment(s, s * c.tb));
        const double g = find_gamma_c(scaled, default_gamma_max(scaled)).gamma_c;
        scaling.observe(std::abs(g - s * direct) / (s * direct), where);
      }
    } catch (const Error& e) {
      parity.fail(where, e.what());
      scaling.fail(where, e.what());
    }
  }
  report.checks.push_back(parity.result());
  report.checks.push_back(scaling.result());
  return report;
}

VerifyReport verify_maximal(std::uint64_t seed, int n_profiles) {
  constexpr int kSites = 20;
  VerifyReport report;
  auto run = [&](const std::string& name, const std::vector<HoppingProfile>& profiles) {
    Tally tally(name, kThresholdTol);
    int clause_failures = 0;
    std::string first;
    for (const auto& profile : profiles) {
      const LatticeSpec shape(kSites, kSites / 2, 0.0, profile);
      const std::string where = label(shape);
      try {
        const MaximalBreakingReport r = verify_maximal_breaking(kSites, profile);
        tally.observe(std::abs(r.threshold.gamma_c - r.t_mid) / r.t_mid, where);
        if (!r.above_ok || !r.below_ok) {
          ++clause_failures;
          if (first.empty()) first = where + ": " + r.failure();
        }
      } catch (const Error& e) {
        tally.fail(where, e.what());
      }
    }
    CheckResult c = tally.result();
    if (clause_failures > 0) {
      c.passed = false;
      c.detail += ", " + std::to_string(clause_failures) + " count clauses failed, first " + first;
    }
    report.checks.push_back(std::move(c));
  };

  std::vector<HoppingProfile> two_segment, alpha, random;
  for (double tb : {0.5, 1.0, 2.0, 5.0}) two_segment.push_back(HoppingProfile::two_segment(1.0, tb));
  for (double a : {-1.0, 0.0, 0.5, 1.0}) alpha.push_back(HoppingProfile::alpha(1.0, a));
  UniformSource rng(seed);
  for (int i = 0; i < n_profiles; ++i) {
    random.push_back(random_symmetric_profile(kSites, 0.2, 2.0, rng));
  }
  run("maximal.two_segment_threshold", two_segment);
  run("maximal.alpha_threshold", alpha);
  run("maximal.random_symmetric_threshold", random);
  return report;
}

VerifyReport verify_secular(std::uint64_t seed, int n_specs) {
  UniformSource rng(seed);
  Tally residual("secular.residual_at_real_eigenvalues", kResidualTol);
  Tally count("secular.scan_root_count_mismatch", 0.0);
  Tally ansatz("secular.ansatz_fit_residual", kResidualTol);
  int trivial = 0;

  // Strata: lattice size (even and odd), weak or strong central segment,
  // impurity distance drawn per spec, gamma a random fraction of gamma_c.
  const int sizes[] = {8, 9, 14, 15, 20, 21};
  const double tb_bands[][2] = {{0.4, 0.8}, {0.8, 1.25}, {1.25, 2.0}, {2.0, 3.0}};
  const int strata = 6 * 4;
  for (int i = 0; i < n_specs; ++i) {
    const int stratum = i % strata;
    const int n = sizes[stratum / 4];
    const auto& band = tb_bands[stratum % 4];
    const double t0 = rng.next(0.5, 2.0);
    const double tb = t0 * rng.next(band[0], band[1]);
    const int m = rng.next_int(1, n / 2);
    const LatticeSpec shape(n, m, 0.0, HoppingProfile::two_segment(t0, tb));
    std::string where = label(shape);
    try {
      const double gamma_c = find_gamma_c(shape, default_gamma_max(shape)).gamma_c;
      const LatticeSpec spec = shape.with_gamma(rng.next(0.1, 0.6) * gamma_c);
      where = label(spec);
      const auto h = build_hamiltonian(spec);
      const Spectrum s = eigenvalues(h);
      if (s.n_complex != 0) {
        residual.fail(where, "spectrum is not entirely real below gamma_c");
        continue;
      }
      for (const auto& e : s.eigenvalues) {
        const cplx energy(e.real(), 0.0);
        // Every term vanishing to rounding (e.g. E = 0 with k = k' = pi/2 on an
        // odd lattice) satisfies the equation trivially; the ratio is noise.
        if (secular_terms(spec, energy).magnitude() <= kTrivialTerms) {
          ++trivial;
          continue;
        }
        residual.observe(secular_residual(spec, energy), where);
      }
      const SecularScan scan = scan_secular_roots(spec);
      count.observe(std::abs(scan.sign_changes - n), where);
      if (min_gap(s.eigenvalues) > kDegenerateGap * h.energy_scale()) {
        for (const auto& e : s.eigenvalues) {
          const Eigenvector ev = eigenvector(h, cplx(e.real(), 0.0));
          ansatz.observe(fit_ansatz(spec, ev).fit_residual, where);
        }
      }
    } catch (const Error& e) {
      residual.fail(where, e.what());
    }
  }

  if (trivial > 0) {
    residual.note(std::to_string(trivial) + " eigenvalues where all terms vanish identically");
  }

  Tally reduction("secular.nearest_neighbor_matches_general", kReductionTol);
  for (int i = 0; i < 50; ++i) {
    const int half = rng.next_int(1, 12);
    const double t0 = rng.next(0.5, 2.0);
    const LatticeSpec spec(2 * half, half, t0 * rng.next(0.0, 2.0),
                           HoppingProfile::two_segment(t0, t0 * rng.next(0.1, 3.0)));
    const double scale = build_hamiltonian(spec).energy_scale();
    const cplx e(rng.next(-scale, scale), rng.next(-0.5, 0.5) * scale);
    try {
      reduction.observe(
          std::abs(nearest_neighbor_residual(spec, e) - secular_residual(spec, e)), label(spec));
    } catch (const Error& err) {
      reduction.fail(label(spec), err.what());
    }
  }

  Tally dispersion("secular.dispersion_consistency", 1e-10);
  for (int i = 0; i < 100; ++i) {
    const double t0 = rng.next(0.2, 3.0), tb = rng.next(0.2, 3.0);
    const double scale = 2 * std::max(t0, tb) + 1.0;
    const cplx e(rng.next(-scale, scale), i % 2 == 0 ? 0.0 : rng.next(-1.0, 1.0));
    const auto q = quasimomenta_from_energy(e, t0, tb);
    const double err = std::max(std::abs(-2 * t0 * std::cos(q.k) - e),
                                std::abs(-2 * tb * std::cos(q.k_prime) - e));
    dispersion.observe(err / scale, "E=" + std::to_string(e.real()));
  }

  return {{residual.result(), count.result(), ansatz.result(), reduction.result(),
           dispersion.result()}};
}

VerifyReport verify_impurity_pair(std::uint64_t seed, int n_profiles) {
  UniformSource rng(seed);
  Tally det("eq5.determinant_residual", kResidualTol);
  Tally mirror("eq5.mirror_magnitudes", kMirrorTol);
  int degenerate = 0;

  auto check_lattice = [&](const LatticeSpec& spec) {
    const std::string where = label(spec);
    const auto h = build_hamiltonian(spec);
    try {
      const Spectrum s = eigenvalues(h);
      if (s.n_complex != 0) {
        det.fail(where, "spectrum is not entirely real at gamma < t(N/2)");
        return;
      }
      if (min_gap(s.eigenvalues) <= kDegenerateGap * h.energy_scale()) {
        ++degenerate;
        return;
      }
      for (const auto& e : s.eigenvalues) {
        const double eps = e.real();
        const Eigenvector ev = eigenvector(h, cplx(eps, 0.0));
        const ImpurityPairDecomposition d = impurity_pair_residual(spec, eps, ev);
        det.observe(d.det_residual, where);
        const double a = std::abs(d.alpha_mid), b = std::abs(d.beta_mid);
        double rel = std::abs(std::abs(d.mirror_alpha) - a) / std::max(a, 1e-300);
        if (spec.n_sites() > 2) {
          rel = std::max(rel, std::abs(std::abs(d.mirror_beta) - b) / std::max(b, 1e-300));
        }
        // Amplitudes that vanish by symmetry carry no magnitude information.
        if (std::min(a, spec.n_sites() > 2 ? b : a) > 1e-8) mirror.observe(rel, where);
      }
    } catch (const Error& e) {
      det.fail(where, e.what());
    }
  };

  for (double tb : {0.5, 1.0, 2.0}) {
    for (double ratio : {0.0, 0.3, 0.9}) {
      check_lattice(LatticeSpec(2, 1, ratio * tb, HoppingProfile::two_segment(1.0, tb)));
    }
  }
  for (double a : {-1.0, 0.0, 0.5, 1.0}) {
    const LatticeSpec shape(20, 10, 0.0, HoppingProfile::alpha(1.0, a));
    check_lattice(shape.with_gamma(0.5 * shape.bonds()[9]));
  }
  for (int i = 0; i < n_profiles; ++i) {
    const int n = i < n_profiles / 2 ? 20 : 2 * rng.next_int(2, 16);
    const LatticeSpec shape(n, n / 2, 0.0, random_symmetric_profile(n, 0.2, 2.0, rng));
    check_lattice(shape.with_gamma(0.5 * shape.bonds()[n / 2 - 1]));
  }
  if (degenerate > 0) {
    det.note(std::to_string(degenerate) + " lattices with degenerate eigenvalues reported, not checked");
  }
  return {{det.result(), mirror.result()}};
}

}  // namespace ptlattice
