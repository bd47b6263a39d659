#include <pybind11/complex.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>

#include "ptlattice/error.hpp"
#include "ptlattice/lattice.hpp"
#include "ptlattice/phase.hpp"
#include "ptlattice/secular.hpp"
#include "ptlattice/spectral.hpp"
#include "ptlattice/verify.hpp"

namespace py = pybind11;
using namespace ptlattice;

PYBIND11_MODULE(_ptlattice, m) {
  m.doc() = "Spectra and gain/loss thresholds of PT-symmetric tight-binding chains";
  m.attr("__version__") = PTLATTICE_VERSION;

  auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<InvalidSpec>(m, "InvalidSpec", PyExc_ValueError);
  py::register_exception<ConvergenceFailure>(m, "ConvergenceFailure", base.ptr());
  py::register_exception<BracketFailure>(m, "BracketFailure", base.ptr());
  py::register_exception<InsufficientData>(m, "InsufficientData", base.ptr());
  py::register_exception<NotRealizable>(m, "NotRealizable", base.ptr());

  py::class_<HoppingProfile>(m, "HoppingProfile")
      .def_static("two_segment", &HoppingProfile::two_segment, py::arg("t0"), py::arg("tb"))
      .def_static("alpha", &HoppingProfile::alpha, py::arg("t0"), py::arg("alpha"))
      .def_static(
          "custom", [](std::vector<double> t) { return HoppingProfile::custom(std::move(t)); },
          py::arg("amplitudes"))
      .def("bonds", &HoppingProfile::bonds, py::arg("n_sites"), py::arg("impurity_site"))
      .def("__eq__", [](const HoppingProfile& a, const HoppingProfile& b) { return a == b; });

  py::class_<LatticeSpec>(m, "LatticeSpec")
      .def(py::init<int, int, double, HoppingProfile>(), py::arg("n_sites"),
           py::arg("impurity_site"), py::arg("gamma"), py::arg("profile"))
      .def_static("from_distance", &LatticeSpec::from_distance, py::arg("n_sites"),
                  py::arg("distance"), py::arg("gamma"), py::arg("profile"))
      .def_property_readonly("n_sites", &LatticeSpec::n_sites)
      .def_property_readonly("impurity_site", &LatticeSpec::impurity_site)
      .def_property_readonly("mirror_site", &LatticeSpec::mirror_site)
      .def_property_readonly("distance", &LatticeSpec::distance)
      .def_property_readonly("gamma", &LatticeSpec::gamma)
      .def("bonds", &LatticeSpec::bonds)
      .def("with_gamma", &LatticeSpec::with_gamma, py::arg("gamma"));

  py::class_<Spectrum>(m, "Spectrum")
      .def_readonly("eigenvalues", &Spectrum::eigenvalues)
      .def_readonly("residuals", &Spectrum::residuals)
      .def_readonly("n_complex", &Spectrum::n_complex)
      .def_readonly("energy_scale", &Spectrum::energy_scale)
      .def_property_readonly("is_complex", [](const Spectrum& s) {
        std::vector<bool> out;
        for (auto c : s.classifications) out.push_back(c == Classification::Complex);
        return out;
      });

  py::class_<ThresholdResult>(m, "ThresholdResult")
      .def_readonly("gamma_c", &ThresholdResult::gamma_c)
      .def_readonly("gamma_low", &ThresholdResult::gamma_low)
      .def_readonly("gamma_high", &ThresholdResult::gamma_high)
      .def_readonly("n_complex_above", &ThresholdResult::n_complex_above)
      .def_readonly("iterations", &ThresholdResult::iterations);

  py::class_<SweepRecord>(m, "SweepRecord")
      .def_readonly("n_sites", &SweepRecord::n_sites)
      .def_readonly("impurity_site", &SweepRecord::impurity_site)
      .def_readonly("distance", &SweepRecord::distance)
      .def_readonly("t0", &SweepRecord::t0)
      .def_readonly("tb", &SweepRecord::tb)
      .def_readonly("reduced_tb", &SweepRecord::reduced_tb)
      .def_readonly("gamma_c", &SweepRecord::gamma_c)
      .def_readonly("reduced_gamma_c", &SweepRecord::reduced_gamma_c)
      .def_readonly("n_complex_above", &SweepRecord::n_complex_above)
      .def_readonly("ok", &SweepRecord::ok)
      .def_readonly("error", &SweepRecord::error);

  py::class_<ExponentFit>(m, "ExponentFit")
      .def_readonly("distance", &ExponentFit::distance)
      .def_readonly("eta", &ExponentFit::eta)
      .def_readonly("stderr", &ExponentFit::stderr_eta)
      .def_readonly("points", &ExponentFit::points)
      .def_property_readonly("n_points",
                             [](const ExponentFit& f) { return static_cast<int>(f.points.size()); });

  py::class_<FragilityPoint>(m, "FragilityPoint")
      .def_readonly("n_sites", &FragilityPoint::n_sites)
      .def_readonly("gamma_c", &FragilityPoint::gamma_c)
      .def_readonly("bandwidth", &FragilityPoint::bandwidth)
      .def_readonly("ratio", &FragilityPoint::ratio);

  py::class_<CheckResult>(m, "CheckResult")
      .def_readonly("name", &CheckResult::name)
      .def_readonly("passed", &CheckResult::passed)
      .def_readonly("measured", &CheckResult::measured)
      .def_readonly("limit", &CheckResult::limit)
      .def_readonly("detail", &CheckResult::detail);

  m.def(
      "spectrum", [](const LatticeSpec& spec) { return eigenvalues(build_hamiltonian(spec)); },
      py::arg("spec"), "All eigenvalues with real/complex classification.");
  m.def(
      "find_gamma_c",
      [](const LatticeSpec& shape, std::optional<double> gamma_max) {
        return find_gamma_c(shape, gamma_max.value_or(default_gamma_max(shape)));
      },
      py::arg("shape"), py::arg("gamma_max") = py::none(),
      "Bisect gamma for the onset of complex eigenvalues.");
  m.def(
      "sweep",
      [](int n, std::vector<int> d, std::vector<double> tb, double t0) {
        return sweep_phase_diagram(n, d, tb, t0);
      },
      py::arg("n_sites"), py::arg("distances"), py::arg("tb_grid"), py::arg("t0") = 1.0);
  m.def(
      "fit_exponent",
      [](const std::vector<SweepRecord>& records, double lo, double hi) {
        return fit_exponent(records, lo, hi);
      },
      py::arg("records"), py::arg("window_lo") = 0.05, py::arg("window_hi") = 0.3);
  m.def(
      "fragility_scan",
      [](double alpha, std::vector<int> ns, double t0) { return fragility_scan(alpha, ns, t0); },
      py::arg("alpha"), py::arg("n_list"), py::arg("t0") = 1.0);
  m.def("secular_residual", &secular_residual, py::arg("spec"), py::arg("energy"));
  m.def("log_grid", &log_grid, py::arg("lo"), py::arg("hi"), py::arg("points"));
  m.def(
      "verify",
      [](const std::string& suite, std::uint64_t seed) {
        const auto s = parse_suite(suite);
        if (!s) throw InvalidSpec("unknown suite '" + suite + "'");
        return run_suite(*s, seed).checks;
      },
      py::arg("suite"), py::arg("seed"), "Run an invariant suite; returns its checks.");
}
