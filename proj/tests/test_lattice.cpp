#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <vector>

#include "ptlattice/error.hpp"
#include "ptlattice/lattice.hpp"
#include "ptlattice/phase.hpp"

using namespace ptlattice;

TEST_CASE("two-site lattice transcribes gain, loss and hopping") {
  const LatticeSpec spec(2, 1, 0.6, HoppingProfile::two_segment(1.0, 1.0));
  const auto h = build_hamiltonian(spec);
  REQUIRE(h.size() == 2);
  CHECK(h.diagonal[0] == cplx(0.0, 0.6));
  CHECK(h.diagonal[1] == cplx(0.0, -0.6));
  CHECK(h.off_diagonal == std::vector<double>{-1.0});
}

TEST_CASE("four-site two-segment lattice") {
  const LatticeSpec spec(4, 2, 0.5, HoppingProfile::two_segment(1.0, 2.0));
  const auto h = build_hamiltonian(spec);
  CHECK(h.diagonal == std::vector<cplx>{0.0, cplx(0, 0.5), cplx(0, -0.5), 0.0});
  CHECK(h.off_diagonal == std::vector<double>{-1.0, -2.0, -1.0});
}

TEST_CASE("zero gamma gives a real symmetric matrix") {
  const auto h = build_hamiltonian(LatticeSpec(5, 2, 0.0, HoppingProfile::two_segment(1.0, 1.0)));
  for (const auto& d : h.diagonal) CHECK(d == cplx(0.0));
  for (double t : h.off_diagonal) CHECK(t == -1.0);
}

TEST_CASE("hopping between the impurities is tb on bonds m..mbar-1") {
  const LatticeSpec spec(10, 3, 0.0, HoppingProfile::two_segment(1.0, 0.25));
  const auto t = spec.bonds();
  for (int i = 1; i <= 9; ++i) {
    CHECK(t[i - 1] == ((i >= 3 && i <= 7) ? 0.25 : 1.0));
  }
  CHECK(spec.mirror_site() == 8);
  CHECK(spec.distance() == 5);
}

TEST_CASE("nearest-neighbour impurities share one tb bond") {
  const LatticeSpec spec(20, 10, 0.0, HoppingProfile::two_segment(1.0, 0.7));
  const auto t = spec.bonds();
  int tb_bonds = 0;
  for (double v : t) tb_bonds += v == 0.7;
  CHECK(tb_bonds == 1);
  CHECK(t[9] == 0.7);
  CHECK(spec.distance() == 1);
}

TEST_CASE("validation rejects invalid lattices") {
  const auto p = HoppingProfile::two_segment(1.0, 1.0);
  CHECK_THROWS_AS(LatticeSpec(1, 1, 0.0, p), InvalidSpec);
  CHECK_THROWS_AS(LatticeSpec(20, 15, 0.0, p), InvalidSpec);
  CHECK_THROWS_AS(LatticeSpec(20, 0, 0.0, p), InvalidSpec);
  CHECK_THROWS_AS(LatticeSpec(20, 5, -0.1, p), InvalidSpec);
  CHECK_THROWS_AS(HoppingProfile::two_segment(0.0, 1.0), InvalidSpec);
  CHECK_THROWS_AS(HoppingProfile::two_segment(1.0, -1.0), InvalidSpec);
  CHECK_THROWS_AS(HoppingProfile::custom({1.0, 2.0, 1.5}), InvalidSpec);
  CHECK_THROWS_AS(HoppingProfile::custom({1.0, -2.0, 1.0}), InvalidSpec);
  CHECK_THROWS_AS(LatticeSpec(5, 2, 0.0, HoppingProfile::custom({1.0, 1.0})), InvalidSpec);
  CHECK_THROWS_AS(LatticeSpec::from_distance(20, 2, 0.0, p), InvalidSpec);
}

TEST_CASE("m out of range names the constraint") {
  try {
    LatticeSpec(20, 15, 0.0, HoppingProfile::two_segment(1.0, 1.0));
    FAIL("expected InvalidSpec");
  } catch (const InvalidSpec& e) {
    CHECK(std::string(e.what()).find("m <= N/2") != std::string::npos);
  }
}

TEST_CASE("custom symmetry: exact for entered values, relative for computed ones") {
  const double a = 0.1 + 0.2;
  CHECK_THROWS_AS(HoppingProfile::custom({a, 1.0, 0.3}), InvalidSpec);
  CHECK_NOTHROW(
      HoppingProfile::custom({a, 1.0, 0.3}, HoppingProfile::SymmetryCheck::Relative));
  CHECK_THROWS_AS(
      HoppingProfile::custom({0.3, 1.0, 0.3 * (1 + 1e-9)}, HoppingProfile::SymmetryCheck::Relative),
      InvalidSpec);
}

TEST_CASE("alpha profile is t0 [k(N-k)]^(alpha/2) and mirror symmetric") {
  const auto p = HoppingProfile::alpha(1.5, 0.5);
  const auto t = p.bonds(9, 4);
  for (int k = 1; k <= 8; ++k) {
    CHECK(t[k - 1] == doctest::Approx(1.5 * std::pow(k * (9.0 - k), 0.25)).epsilon(1e-15));
    CHECK(t[k - 1] == t[8 - k]);
  }
  const auto flat = HoppingProfile::alpha(2.0, 0.0).bonds(6, 3);
  for (double v : flat) CHECK(v == 2.0);
}

TEST_CASE("parity reverses and is an involution") {
  const std::vector<cplx> v{1.0, 2.0, 3.0};
  CHECK(apply_parity(v) == std::vector<cplx>{3.0, 2.0, 1.0});
  const std::vector<cplx> w{cplx(1, 2), cplx(-3, 0.5)};
  CHECK(apply_parity(w) == std::vector<cplx>{cplx(-3, 0.5), cplx(1, 2)});
  UniformSource rng(11);
  std::vector<cplx> r(17);
  for (auto& x : r) x = cplx(rng.next(-1, 1), rng.next(-1, 1));
  CHECK(apply_parity(apply_parity(r)) == r);
}

TEST_CASE("PT transform leaves every lattice Hamiltonian unchanged") {
  TridiagonalHamiltonian tiny{{cplx(0, 0.4), 0.0, cplx(0, -0.4)}, {-1.0, -1.0}};
  CHECK(pt_transform_hamiltonian(tiny) == tiny);
  UniformSource rng(3);
  for (int i = 0; i < 100; ++i) {
    const int n = rng.next_int(2, 40);
    const int m = rng.next_int(1, n / 2);
    const double g = rng.next(0.0, 2.0);
    const HoppingProfile profiles[] = {HoppingProfile::two_segment(rng.next(0.2, 2), rng.next(0.2, 2)),
                                       HoppingProfile::alpha(1.0, rng.next(-1, 1)),
                                       random_symmetric_profile(n, 0.2, 2.0, rng)};
    for (const auto& p : profiles) {
      const auto h = build_hamiltonian(LatticeSpec(n, m, g, p));
      CHECK(pt_transform_hamiltonian(h) == h);
    }
  }
}

TEST_CASE("tb = t0 two-segment equals the uniform custom profile") {
  for (int n : {2, 3, 8, 21}) {
    for (int m = 1; m <= n / 2; ++m) {
      const auto a = build_hamiltonian(LatticeSpec(n, m, 0.7, HoppingProfile::two_segment(0.9, 0.9)));
      const auto b = build_hamiltonian(
          LatticeSpec(n, m, 0.7, HoppingProfile::custom(std::vector<double>(n - 1, 0.9))));
      CHECK(a == b);
    }
  }
}

TEST_CASE("reduced parameters") {
  const LatticeSpec spec(20, 7, 0.3, HoppingProfile::two_segment(2.0, 0.5));
  CHECK(spec.reduced_gamma() == doctest::Approx(0.15));
  CHECK(spec.reduced_tb() == doctest::Approx(0.25));
  CHECK(spec.max_hopping() == 2.0);
  CHECK(LatticeSpec::from_distance(21, 4, 0.0, HoppingProfile::two_segment(1, 1)).impurity_site() == 9);
}

TEST_CASE("bandwidth of uniform chains") {
  CHECK(bandwidth(HoppingProfile::two_segment(1.0, 1.0), 5) ==
        doctest::Approx(2 * std::sqrt(3.0)).epsilon(1e-12));
  CHECK(bandwidth(HoppingProfile::two_segment(1.0, 1.0), 400) ==
        doctest::Approx(4.0).epsilon(1e-3));
  double prev = 1e300;
  for (int n : {8, 16, 32, 64}) {
    const double bw = bandwidth(HoppingProfile::alpha(1.0, -1.0), n);
    CHECK(bw < prev);
    prev = bw;
  }
}

TEST_CASE("decimal parsing ignores the locale and rejects junk") {
  CHECK(parse_decimal("0.1") == 0.1);
  CHECK(parse_decimal(" +2.5e-3 ") == 2.5e-3);
  CHECK_THROWS_AS(parse_decimal("1,5"), InvalidSpec);
  CHECK_THROWS_AS(parse_decimal(""), InvalidSpec);
  CHECK_THROWS_AS(parse_decimal("abc"), InvalidSpec);
}

TEST_CASE("profile files skip comments and blank lines") {
  const char* path = "test_lattice_profile.txt";
  {
    std::ofstream out(path);
    out << "# symmetric\n0.5\n\n1.25\n0.5\n";
  }
  const auto p = load_profile_file(path);
  CHECK(p.kind() == HoppingProfile::Kind::Custom);
  CHECK(p.amplitudes() == std::vector<double>{0.5, 1.25, 0.5});
  {
    std::ofstream out(path);
    out << "0.5\n1.25\n0.6\n";
  }
  CHECK_THROWS_AS(load_profile_file(path), InvalidSpec);
  std::remove(path);
  CHECK_THROWS_AS(load_profile_file("no/such/profile.txt"), InvalidSpec);
}
