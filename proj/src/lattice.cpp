#include "ptlattice/lattice.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <string>

#include "ptlattice/error.hpp"
#include "ptlattice/spectral.hpp"

namespace ptlattice {

namespace {

void require_positive(double value, const char* name) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw InvalidSpec(std::string(name) + " must be a positive finite number, got " +
                      std::to_string(value));
  }
}

constexpr double kComputedSymmetryTol = 1e-12;

}  // namespace

HoppingProfile HoppingProfile::two_segment(double t0, double tb) {
  require_positive(t0, "t0");
  require_positive(tb, "tb");
  HoppingProfile p;
  p.kind_ = Kind::TwoSegment;
  p.t0_ = t0;
  p.tb_ = tb;
  return p;
}

HoppingProfile HoppingProfile::alpha(double t0, double alpha) {
  require_positive(t0, "t0");
  if (!std::isfinite(alpha)) throw InvalidSpec("alpha must be finite");
  HoppingProfile p;
  p.kind_ = Kind::Alpha;
  p.t0_ = t0;
  p.tb_ = t0;
  p.alpha_ = alpha;
  return p;
}

HoppingProfile HoppingProfile::custom(std::vector<double> amplitudes, SymmetryCheck check) {
  if (amplitudes.empty()) throw InvalidSpec("custom profile needs at least one bond");
  for (double t : amplitudes) require_positive(t, "hopping amplitude");
  const std::size_t bonds = amplitudes.size();
  for (std::size_t i = 0; i < bonds / 2; ++i) {
    const double a = amplitudes[i];
    const double b = amplitudes[bonds - 1 - i];
    const bool ok = check == SymmetryCheck::Exact
                        ? a == b
                        : std::abs(a - b) <= kComputedSymmetryTol * std::max(a, b);
    if (!ok) {
      throw InvalidSpec("custom profile is not parity-symmetric: t(" + std::to_string(i + 1) +
                        ") != t(" + std::to_string(bonds - i) + ")");
    }
  }
  HoppingProfile p;
  p.kind_ = Kind::Custom;
  p.t0_ = amplitudes.front();
  p.tb_ = amplitudes[bonds / 2];
  p.amplitudes_ = std::move(amplitudes);
  return p;
}

std::vector<double> HoppingProfile::bonds(int n_sites, int impurity_site) const {
  const int n_bonds = n_sites - 1;
  std::vector<double> t(static_cast<std::size_t>(std::max(n_bonds, 0)));
  switch (kind_) {
    case Kind::TwoSegment: {
      const int mirror = n_sites + 1 - impurity_site;
      for (int i = 1; i <= n_bonds; ++i) {
        t[i - 1] = (i >= impurity_site && i <= mirror - 1) ? tb_ : t0_;
      }
      break;
    }
    case Kind::Alpha:
      for (int k = 1; k <= n_bonds; ++k) {
        t[k - 1] = t0_ * std::pow(static_cast<double>(k) * (n_sites - k), alpha_ / 2.0);
      }
      // pow is not guaranteed to round identically for k and N-k; mirror exactly.
      for (int k = 1; k <= n_bonds / 2; ++k) t[n_bonds - k] = t[k - 1];
      break;
    case Kind::Custom:
      if (static_cast<int>(amplitudes_.size()) != n_bonds) {
        throw InvalidSpec("custom profile has " + std::to_string(amplitudes_.size()) +
                          " bonds but the lattice needs N-1 = " + std::to_string(n_bonds));
      }
      t = amplitudes_;
      break;
  }
  return t;
}

double HoppingProfile::reference_hopping() const noexcept {
  return kind_ == Kind::Custom ? amplitudes_.front() : t0_;
}

double parse_decimal(std::string_view text) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || ec != std::errc() || ptr != text.data() + text.size()) {
    throw InvalidSpec("not a decimal number: '" + std::string(text) + "'");
  }
  return value;
}

HoppingProfile load_profile_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidSpec("cannot open profile file " + path.string());
  std::vector<double> amplitudes;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    try {
      amplitudes.push_back(parse_decimal(line));
    } catch (const InvalidSpec& e) {
      throw InvalidSpec(path.string() + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  return HoppingProfile::custom(std::move(amplitudes), HoppingProfile::SymmetryCheck::Exact);
}

LatticeSpec::LatticeSpec(int n_sites, int impurity_site, double gamma, HoppingProfile profile)
    : n_sites_(n_sites), impurity_site_(impurity_site), gamma_(gamma), profile_(std::move(profile)) {
  if (n_sites < 2) throw InvalidSpec("N must be >= 2, got " + std::to_string(n_sites));
  if (impurity_site < 1 || impurity_site > n_sites / 2) {
    throw InvalidSpec("impurity site must satisfy 1 <= m <= N/2 = " +
                      std::to_string(n_sites / 2) + ", got m = " + std::to_string(impurity_site));
  }
  if (!(gamma >= 0.0) || !std::isfinite(gamma)) {
    throw InvalidSpec("gamma must be finite and >= 0");
  }
  if (profile_.kind() == HoppingProfile::Kind::Custom &&
      static_cast<int>(profile_.amplitudes().size()) != n_sites - 1) {
    throw InvalidSpec("custom profile has " + std::to_string(profile_.amplitudes().size()) +
                      " bonds but N-1 = " + std::to_string(n_sites - 1));
  }
}

LatticeSpec LatticeSpec::from_distance(int n_sites, int distance, double gamma,
                                       HoppingProfile profile) {
  if (distance < 1 || (n_sites + 1 - distance) % 2 != 0) {
    throw InvalidSpec("distance d = " + std::to_string(distance) +
                      " is incompatible with N = " + std::to_string(n_sites) +
                      " (need d >= 1 and N + 1 - d even)");
  }
  return LatticeSpec(n_sites, (n_sites + 1 - distance) / 2, gamma, std::move(profile));
}

double LatticeSpec::reduced_tb() const noexcept {
  return profile_.kind() == HoppingProfile::Kind::TwoSegment ? profile_.tb() / profile_.t0() : 1.0;
}

double LatticeSpec::max_hopping() const {
  const auto t = bonds();
  return *std::max_element(t.begin(), t.end());
}

LatticeSpec LatticeSpec::with_gamma(double gamma) const {
  return LatticeSpec(n_sites_, impurity_site_, gamma, profile_);
}

double TridiagonalHamiltonian::gain_loss() const noexcept {
  double g = 0.0;
  for (const auto& d : diagonal) g = std::max(g, std::abs(d.imag()));
  return g;
}

double TridiagonalHamiltonian::max_hopping() const noexcept {
  double t = 0.0;
  for (double o : off_diagonal) t = std::max(t, std::abs(o));
  return t;
}

TridiagonalHamiltonian build_hamiltonian(const LatticeSpec& spec) {
  const int n = spec.n_sites();
  TridiagonalHamiltonian h;
  h.diagonal.assign(static_cast<std::size_t>(n), cplx{0.0, 0.0});
  h.diagonal[spec.impurity_site() - 1] = cplx{0.0, spec.gamma()};
  h.diagonal[spec.mirror_site() - 1] = cplx{0.0, -spec.gamma()};
  h.off_diagonal = spec.bonds();
  for (double& t : h.off_diagonal) t = -t;
  return h;
}

std::vector<cplx> apply_parity(std::span<const cplx> amplitudes) {
  return {amplitudes.rbegin(), amplitudes.rend()};
}

TridiagonalHamiltonian pt_transform_hamiltonian(const TridiagonalHamiltonian& h) {
  TridiagonalHamiltonian out;
  out.diagonal = apply_parity(h.diagonal);
  for (auto& d : out.diagonal) d = std::conj(d);
  out.off_diagonal.assign(h.off_diagonal.rbegin(), h.off_diagonal.rend());
  return out;
}

double bandwidth(const HoppingProfile& profile, int n_sites, int impurity_site) {
  const LatticeSpec spec(n_sites, impurity_site, 0.0, profile);
  const Spectrum s = eigenvalues(build_hamiltonian(spec));
  double lo = s.eigenvalues.front().real();
  double hi = lo;
  for (const auto& e : s.eigenvalues) {
    lo = std::min(lo, e.real());
    hi = std::max(hi, e.real());
  }
  return hi - lo;
}

double bandwidth(const HoppingProfile& profile, int n_sites) {
  return bandwidth(profile, n_sites, n_sites / 2);
}

}  // namespace ptlattice
