#include <doctest.h>

#include <sstream>

#include "ptlattice/error.hpp"
#include "ptlattice/verify.hpp"

using namespace ptlattice;

namespace {

std::string failures(const VerifyReport& r) {
  std::ostringstream os;
  for (const auto& c : r.checks) {
    if (!c.passed) os << c.name << " measured=" << c.measured << " limit=" << c.limit << " " << c.detail << "\n";
  }
  return os.str();
}

}  // namespace

TEST_CASE("suite names") {
  CHECK(parse_suite("oracle") == Suite::Oracle);
  CHECK(parse_suite("symmetry") == Suite::Symmetry);
  CHECK(parse_suite("maximal") == Suite::Maximal);
  CHECK(parse_suite("secular") == Suite::Secular);
  CHECK(parse_suite("eq5") == Suite::ImpurityPair);
  CHECK(parse_suite("all") == Suite::All);
  CHECK_FALSE(parse_suite("everything").has_value());
}

TEST_CASE("oracle suite passes") {
  const auto r = verify_oracle(1, 60);
  INFO(failures(r));
  CHECK(r.passed());
  CHECK_FALSE(r.checks.empty());
}

TEST_CASE("symmetry suite passes") {
  const auto r = verify_symmetry(2, 60);
  INFO(failures(r));
  CHECK(r.passed());
}

TEST_CASE("maximal-breaking suite passes") {
  const auto r = verify_maximal(3, 10);
  INFO(failures(r));
  CHECK(r.passed());
}

TEST_CASE("secular suite passes") {
  const auto r = verify_secular(4, 30);
  INFO(failures(r));
  CHECK(r.passed());
}

TEST_CASE("impurity-pair suite passes") {
  const auto r = verify_impurity_pair(5, 8);
  INFO(failures(r));
  CHECK(r.passed());
}

TEST_CASE("a failed check fails the report") {
  VerifyReport r;
  r.checks.push_back({"ok", true, 0.0, 1.0, ""});
  CHECK(r.passed());
  VerifyReport bad;
  bad.checks.push_back({"broken", false, 2.0, 1.0, "synthetic"});
  r.append(bad);
  CHECK_FALSE(r.passed());
  CHECK(r.checks.size() == 2);
}

TEST_CASE("symmetry measurement flags a non-closed spectrum") {
  const auto h = build_hamiltonian(LatticeSpec(4, 1, 0.3, HoppingProfile::two_segment(1, 1)));
  auto s = eigenvalues(h);
  CHECK(measure_symmetry(h, s).holds());
  s.eigenvalues[0] += cplx(0, 0.1);
  CHECK_FALSE(measure_symmetry(h, s).holds());
}
