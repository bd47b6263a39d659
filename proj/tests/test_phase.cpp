#include <doctest.h>

#include <cmath>
#include <vector>

#include "goldens.hpp"
#include "ptlattice/error.hpp"
#include "ptlattice/lattice.hpp"
#include "ptlattice/phase.hpp"

using namespace ptlattice;

namespace {

LatticeSpec shape(int n, int m, double t0, double tb) {
  return LatticeSpec(n, m, 0.0, HoppingProfile::two_segment(t0, tb));
}

double threshold(const LatticeSpec& s) { return find_gamma_c(s, default_gamma_max(s)).gamma_c; }

}  // namespace

TEST_CASE("broken predicate") {
  CHECK_FALSE(is_pt_broken(shape(20, 6, 1, 0.4)).broken);
  const auto two = is_pt_broken(shape(2, 1, 1, 1).with_gamma(1.25));
  CHECK(two.broken);
  CHECK(two.n_complex == 2);
  const auto full = is_pt_broken(shape(20, 10, 1, 1).with_gamma(1.01));
  CHECK(full.broken);
  CHECK(full.n_complex == 20);
}

TEST_CASE("nearest-neighbour threshold equals tb") {
  CHECK(threshold(shape(20, 10, 1, 0.7)) == doctest::Approx(0.7).epsilon(1e-6));
  CHECK(threshold(shape(2, 1, 1, 3)) == doctest::Approx(3.0).epsilon(1e-6));
}

TEST_CASE("threshold result brackets and counts") {
  const auto r = find_gamma_c(shape(20, 10, 1, 0.7), 40.0);
  CHECK(r.gamma_low <= r.gamma_c);
  CHECK(r.gamma_c <= r.gamma_high);
  CHECK(r.bracket_width() <= 1e-10 * 1.0 + 1e-12);
  CHECK(r.n_complex_below == 0);
  CHECK(r.n_complex_above == 20);
}

TEST_CASE("bracket failure when the upper end is unbroken") {
  CHECK_THROWS_AS(find_gamma_c(shape(20, 10, 1, 0.7), 0.5), BracketFailure);
  CHECK_THROWS_AS(find_gamma_c(shape(20, 10, 1, 0.7), -1.0), InvalidSpec);
}

TEST_CASE("frozen thresholds from the high-precision oracle") {
  for (const auto& g : goldens::kThresholds) {
    const auto s = LatticeSpec::from_distance(g.n_sites, g.distance, 0.0,
                                              HoppingProfile::two_segment(g.t0, g.tb));
    INFO("N=" << g.n_sites << " d=" << g.distance << " tb=" << g.tb);
    CHECK(threshold(s) == doctest::Approx(g.gamma_c).epsilon(goldens::kThresholdRelTol));
  }
}

TEST_CASE("odd lattice with d = 2 has a finite threshold below 4") {
  const double g = threshold(LatticeSpec::from_distance(21, 2, 0.0, HoppingProfile::two_segment(1, 1)));
  CHECK(g > 0);
  CHECK(g < 4);
}

TEST_CASE("monotonicity audit on bisection traces") {
  for (const auto& s : {shape(20, 10, 1, 0.7), shape(20, 7, 1, 0.3), shape(21, 8, 1, 1.2)}) {
    const double gmax = default_gamma_max(s);
    const auto r = find_gamma_c(s, gmax);
    const auto audit = audit_monotonicity(s, r, gmax, 32);
    CHECK(audit.monotone);
    CHECK(audit.samples.size() == 32);
  }
}

TEST_CASE("parity in m: swapping gain and loss keeps the threshold") {
  for (const auto& s : {shape(20, 8, 1, 0.6), shape(21, 9, 1, 0.4), shape(12, 3, 1, 1.7)}) {
    const HamiltonianFamily mirrored = [&s](double gamma) {
      auto h = build_hamiltonian(s.with_gamma(gamma));
      std::swap(h.diagonal[s.impurity_site() - 1], h.diagonal[s.mirror_site() - 1]);
      return h;
    };
    const double gmax = default_gamma_max(s);
    const double a = find_gamma_c(s, gmax).gamma_c;
    const double b = find_gamma_c(mirrored, gmax, s.max_hopping()).gamma_c;
    CHECK(std::abs(a - b) <= 1e-10 * std::max(1.0, a));
  }
}

TEST_CASE("threshold scales with the energy unit") {
  for (double s : {0.5, 3.0}) {
    const double base = threshold(shape(16, 5, 1.0, 0.8));
    const double scaled = threshold(shape(16, 5, s, 0.8 * s));
    CHECK(scaled == doctest::Approx(s * base).epsilon(1e-8));
  }
}

TEST_CASE("sweep: d = 1 gives Gamma_c = T_b") {
  const int d[] = {1};
  const double tb[] = {0.5, 1, 2, 5};
  const auto rec = sweep_phase_diagram(20, d, tb, 1.0);
  REQUIRE(rec.size() == 4);
  for (const auto& r : rec) {
    CHECK(r.ok);
    CHECK(r.impurity_site == 10);
    CHECK(r.reduced_gamma_c == doctest::Approx(r.reduced_tb).epsilon(1e-6));
  }
}

TEST_CASE("sweep: Gamma_c approaches T_b for large T_b") {
  const int d[] = {3, 5, 7};
  const double tb[] = {3.0};
  for (const auto& r : sweep_phase_diagram(20, d, tb, 1.0)) {
    INFO("d=" << r.distance);
    CHECK(r.reduced_gamma_c / r.reduced_tb >= 0.9);
    CHECK(r.reduced_gamma_c / r.reduced_tb <= 1.01);
  }
}

TEST_CASE("sweep: Gamma_c decreases with d at small T_b") {
  const int d[] = {1, 3, 5, 7};
  const double tb[] = {0.2};
  const auto rec = sweep_phase_diagram(20, d, tb, 1.0);
  REQUIRE(rec.size() == 4);
  for (std::size_t i = 1; i < rec.size(); ++i) {
    CHECK(rec[i].distance > rec[i - 1].distance);
    CHECK(rec[i].gamma_c < rec[i - 1].gamma_c);
  }
}

TEST_CASE("sweep validation") {
  const double tb[] = {0.5};
  const int even[] = {2};
  CHECK_THROWS_AS(sweep_phase_diagram(20, even, tb, 1.0), InvalidSpec);
  CHECK_THROWS_AS(sweep_phase_diagram(20, std::span<const int>{}, tb, 1.0), InvalidSpec);
  const int odd[] = {3};
  const double bad[] = {0.5, -1.0};
  CHECK_THROWS_AS(sweep_phase_diagram(20, odd, bad, 1.0), InvalidSpec);
}

TEST_CASE("exponent fit") {
  const int d1[] = {1};
  const auto grid = log_grid(0.05, 0.3, 12);
  const auto rec = sweep_phase_diagram(20, d1, grid, 1.0);
  const auto fit = fit_exponent(rec, 0.05, 0.3);
  CHECK(fit.eta == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(fit.stderr_eta < 1e-6);
  CHECK(fit.points.size() == 12);
  CHECK(fit.distance == 1);

  CHECK_THROWS_AS(fit_exponent(std::span(rec).first(7), 0.05, 0.3), InsufficientData);
  CHECK_THROWS_AS(fit_exponent(rec, 0.3, 0.05), InvalidSpec);
  CHECK_THROWS_AS(fit_exponent(rec, 0.05, 1.5), InvalidSpec);
}

TEST_CASE("exponents grow with distance and match the frozen values") {
  const auto grid = log_grid(0.05, 0.3, 12);
  double prev = 0;
  for (int d : {1, 3, 5, 7}) {
    const int dl[] = {d};
    const auto fit = fit_exponent(sweep_phase_diagram(20, dl, grid, 1.0), 0.05, 0.3);
    INFO("d=" << d << " eta=" << fit.eta);
    CHECK(fit.eta > prev);
    CHECK(fit.eta / d >= 0.5);
    CHECK(fit.eta / d <= 1.5);
    prev = fit.eta;
    for (const auto& g : goldens::kExponents) {
      if (g.distance == d) CHECK(fit.eta == doctest::Approx(g.eta).epsilon(goldens::kExponentAbsTol));
    }
  }
}

TEST_CASE("maximal breaking for two-segment, alpha and random profiles") {
  for (double tb : {0.5, 1.0, 2.0, 5.0}) {
    const auto r = verify_maximal_breaking(20, HoppingProfile::two_segment(1.0, tb));
    INFO(r.failure());
    CHECK(r.passed());
    CHECK(r.t_mid == tb);
  }
  for (double a : {-1.0, 0.0, 0.5, 1.0}) {
    const auto r = verify_maximal_breaking(20, HoppingProfile::alpha(1.0, a));
    INFO(r.failure());
    CHECK(r.passed());
  }
  UniformSource rng(314);
  for (int i = 0; i < 10; ++i) {
    const auto r = verify_maximal_breaking(20, random_symmetric_profile(20, 0.2, 2.0, rng));
    INFO(r.failure());
    CHECK(r.passed());
  }
  CHECK_THROWS_AS(verify_maximal_breaking(21, HoppingProfile::two_segment(1, 1)), InvalidSpec);
}

TEST_CASE("fragility: alpha = -1 ratio shrinks, alpha = 0 stays flat") {
  const int ns[] = {8, 16, 32, 64};
  const auto neg = fragility_scan(-1.0, ns);
  REQUIRE(neg.size() == 4);
  for (std::size_t i = 1; i < neg.size(); ++i) CHECK(neg[i].ratio < neg[i - 1].ratio);
  const double slope = std::log(neg.back().ratio / neg.front().ratio) / std::log(64.0 / 8.0);
  CHECK(slope == doctest::Approx(-0.5).epsilon(0.3));
  // Delta(N) = 4 t0 cos(pi/(N+1)) is still 6% short of 4 t0 at N = 8.
  const int large[] = {16, 32, 64};
  const auto flat = fragility_scan(0.0, large);
  for (const auto& p : flat) {
    CHECK(p.gamma_c == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(p.ratio == doctest::Approx(flat.back().ratio).epsilon(0.05));
  }
  const int odd[] = {9};
  CHECK_THROWS_AS(fragility_scan(-1.0, odd), InvalidSpec);
}

TEST_CASE("grids") {
  const auto lin = linear_grid(0.0, 1.0, 5);
  CHECK(lin == std::vector<double>{0.0, 0.25, 0.5, 0.75, 1.0});
  const auto lg = log_grid(0.01, 1.0, 3);
  CHECK(lg.front() == 0.01);
  CHECK(lg[1] == doctest::Approx(0.1).epsilon(1e-14));
  CHECK(lg.back() == 1.0);
  CHECK_THROWS_AS(log_grid(0.0, 1.0, 3), InvalidSpec);
  CHECK_THROWS_AS(linear_grid(0.0, 1.0, 0), InvalidSpec);
}

TEST_CASE("seeded random profiles are reproducible and symmetric") {
  const auto a = random_symmetric_profile(20, 0.2, 2.0, 7);
  const auto b = random_symmetric_profile(20, 0.2, 2.0, 7);
  CHECK(a == b);
  const auto& t = a.amplitudes();
  for (std::size_t i = 0; i < t.size(); ++i) {
    CHECK(t[i] == t[t.size() - 1 - i]);
    CHECK(t[i] >= 0.2);
    CHECK(t[i] <= 2.0);
  }
}
