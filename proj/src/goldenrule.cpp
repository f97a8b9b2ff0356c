#include "reskit/goldenrule.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <string>

#include "reskit/error.hpp"

namespace reskit::goldenrule {

namespace {

constexpr double kPi = std::numbers::pi;

double momentum_of(double E, const SystemParams& params) { return std::sqrt(2.0 * params.mass * E); }

void require_positive_energy(double E) {
  if (!(E > 0) || !std::isfinite(E)) {
    throw Error(ErrorCode::NonPositiveEnergy, "energy must be positive and finite, got " + std::to_string(E));
  }
}

void require_valid_grid(const std::vector<double>& grid) {
  if (grid.empty()) {
    throw Error(ErrorCode::InvalidGrid, "grid is empty");
  }
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!std::isfinite(grid[i])) {
      throw Error(ErrorCode::InvalidGrid, "grid value " + std::to_string(i) + " is not finite");
    }
    if (i > 0 && !(grid[i] > grid[i - 1])) {
      throw Error(ErrorCode::InvalidGrid, "grid is not strictly increasing at index " + std::to_string(i));
    }
  }
}

void require_positive_energies(const std::vector<double>& grid) {
  require_valid_grid(grid);
  if (!(grid.front() > 0)) {
    throw Error(ErrorCode::InvalidGrid, "energy grid must lie above threshold (E > 0)");
  }
}

double relative_gap(double a, double b) { return std::abs(a - b) / std::abs(b); }

// ∫₀^∞ weight(E) dE for integrands built on one resonance lineshape.
// The resonance window E_R ± 10³Γ_R is split at E_R ± {1, 10, 100}Γ_R and,
// when the integrand carries sin²(pa/ħ), at every quarter period of it.
numerics::IntegralResult energy_integral(const ResonancePole& pole, const SystemParams& params,
                                         const std::function<double(double)>& weight, bool oscillatory,
                                         const numerics::QuadratureConfig& cfg) {
  // Integrates over κ = sqrt(E/E0), where sin(κ) has a fixed period.
  const double E_R = pole.E_R;
  const double G = pole.Gamma_R;
  const double E0 = params.energy_scale();
  const double hi = std::max(E_R + 1e3 * G, 4.0 * E0);
  const double lo = std::max(0.0, E_R - 1e3 * G);
  auto kappa_of = [E0](double E) { return std::sqrt(E / E0); };

  std::vector<double> points = {0.0, kappa_of(hi)};
  if (lo > 0.0) {
    points.push_back(kappa_of(lo));
  }
  for (double s : {-100.0, -10.0, -1.0, 0.0, 1.0, 10.0, 100.0}) {
    const double e = E_R + s * G;
    if (e > 0.0 && e < hi) {
      points.push_back(kappa_of(e));
    }
  }
  std::sort(points.begin(), points.end());
  const double k_hi = points.back();
  points.erase(std::unique(points.begin(), points.end(),
                           [k_hi](double a, double b) { return b - a <= 1e-14 * k_hi; }),
               points.end());
  points.back() = k_hi;

  auto integrand = [&weight, E0](double kappa) { return cplx{weight(E0 * kappa * kappa) * 2.0 * E0 * kappa, 0.0}; };
  numerics::QuadratureConfig qcfg = cfg;
  if (oscillatory) {
    qcfg.max_panel_width = 0.5 * kPi;
  } else {
    qcfg.max_panel_width.reset();
  }
  numerics::IntegralResult result = numerics::integrate_piecewise(integrand, points, qcfg);
  // Lorentzian · |M|² · dE/dκ falls as κ⁻⁴ for the s-wave element, κ⁻³ for a constant one.
  result += numerics::integrate_semi_infinite(integrand, k_hi, qcfg, oscillatory ? 4.0 : 3.0);
  return result;
}

Spectrum make_spectrum(Axis axis, std::vector<double> grid, std::vector<double> values,
                       std::vector<PoleMeta> meta) {
  Spectrum spec;
  spec.axis = axis;
  spec.grid = std::move(grid);
  spec.values = std::move(values);
  spec.pole_meta = std::move(meta);
  spec.total = trapezoid(spec.grid, spec.values);
  spec.validate();
  return spec;
}

}  // namespace

std::string_view to_string(Axis axis) {
  switch (axis) {
    case Axis::Energy: return "energy";
    case Axis::CosTheta: return "cos_theta";
    case Axis::Phi: return "phi";
    case Axis::EnergySolidAngle: return "energy_solid_angle";
  }
  return "energy";
}

Axis axis_from_string(std::string_view text) {
  if (text == "energy") return Axis::Energy;
  if (text == "cos_theta") return Axis::CosTheta;
  if (text == "phi") return Axis::Phi;
  if (text == "energy_solid_angle") return Axis::EnergySolidAngle;
  throw Error(ErrorCode::ParseError, "unknown axis '" + std::string(text) + "'");
}

void Spectrum::validate() const {
  if (grid.size() != values.size()) {
    throw Error(ErrorCode::InvalidGrid, "grid and values differ in length");
  }
  require_valid_grid(grid);
  double scale = 1.0;
  for (double v : values) {
    if (!std::isfinite(v)) {
      throw Error(ErrorCode::InvalidGrid, "spectrum value is not finite");
    }
    scale = std::max(scale, std::abs(v));
  }
  for (double v : values) {
    if (v < -1e-12 * scale) {
      throw Error(ErrorCode::InvalidGrid, "spectrum value is negative");
    }
  }
}

void Superposition::validate() const {
  if (terms.empty()) {
    throw Error(ErrorCode::EmptySuperposition, "superposition has no terms");
  }
  for (std::size_t i = 0; i < terms.size(); ++i) {
    const cplx c = terms[i].coefficient;
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) {
      throw Error(ErrorCode::InvalidArgument, "superposition coefficient is not finite");
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (terms[i].pole.k == terms[j].pole.k) {
        throw Error(ErrorCode::InvalidArgument, "superposition poles must be distinct");
      }
    }
  }
}

DecayConstants DecayConstants::from(double gamma_r, double gamma) {
  return DecayConstants{gamma_r, gamma, gamma_r * gamma};
}

double lorentzian(double E, double E_R, double Gamma_R) {
  if (!(Gamma_R > 0)) {
    throw Error(ErrorCode::NonPositiveWidth, "Lorentzian width must be positive");
  }
  const double d = E - E_R;
  const double h = 0.5 * Gamma_R;
  return 1.0 / (d * d + h * h);
}

cplx reduced_element(double E, const ResonancePole& pole, const SystemParams& params, const PartialWave& wave) {
  if (wave.l < 0 || std::abs(wave.m) > wave.l) {
    throw Error(ErrorCode::InvalidQuantumNumbers,
                "need |m| <= l, got l = " + std::to_string(wave.l) + ", m = " + std::to_string(wave.m));
  }
  if (wave.reduced_me) {
    return *wave.reduced_me;
  }
  if (wave.l != 0) {
    throw Error(ErrorCode::InvalidArgument, "l > 0 needs a caller-supplied reduced matrix element");
  }
  return deltashell::matrix_element(momentum_of(E, params), pole, params);
}

double differential_decay_d3p(double p, Direction direction, const ResonancePole& pole, const SystemParams& params) {
  if (!(p > 0)) {
    throw Error(ErrorCode::ZeroMomentum, "differential decay needs p > 0");
  }
  const double E = p * p / (2.0 * params.mass);
  const cplx element = std::sqrt(1.0 / (params.mass * p)) * deltashell::matrix_element(p, pole, params) *
                       numerics::spherical_harmonic(0, 0, direction.theta, direction.phi);
  return lorentzian(E, pole.E_R, pole.Gamma_R) * std::norm(element);
}

double spectrum_dE_dOmega(double E, Direction direction, const ResonancePole& pole, const SystemParams& params,
                          const PartialWave& wave) {
  require_positive_energy(E);
  const cplx y = numerics::spherical_harmonic(wave.l, wave.m, direction.theta, direction.phi);
  const double m = params.mass;
  const double p = momentum_of(E, params);
  const cplx element = reduced_element(E, pole, params, wave);
  return m * p * lorentzian(E, pole.E_R, pole.Gamma_R) * (1.0 / (m * p)) * std::norm(element) * std::norm(y);
}

Spectrum spectrum_dE_dOmega_grid(const std::vector<double>& E_grid, Direction direction, const ResonancePole& pole,
                                 const SystemParams& params, const PartialWave& wave) {
  require_positive_energies(E_grid);
  std::vector<double> values;
  values.reserve(E_grid.size());
  for (double E : E_grid) {
    values.push_back(spectrum_dE_dOmega(E, direction, pole, params, wave));
  }
  return make_spectrum(Axis::EnergySolidAngle, E_grid, std::move(values), {{pole.E_R, pole.Gamma_R}});
}

Spectrum spectrum_dE(const std::vector<double>& E_grid, const ResonancePole& pole, const SystemParams& params,
                     const PartialWave& wave) {
  require_positive_energies(E_grid);
  const double m = params.mass;
  std::vector<double> values;
  values.reserve(E_grid.size());
  for (double E : E_grid) {
    const double p = momentum_of(E, params);
    // ∫|Y_l^m|² dΩ = 1
    values.push_back(m * p * lorentzian(E, pole.E_R, pole.Gamma_R) * (1.0 / (m * p)) *
                     std::norm(reduced_element(E, pole, params, wave)));
  }
  return make_spectrum(Axis::Energy, E_grid, std::move(values), {{pole.E_R, pole.Gamma_R}});
}

Spectrum angular_spectrum(Axis axis, const std::vector<double>& grid, const ResonancePole& pole,
                          const PartialWave& wave, const SystemParams& params, const numerics::QuadratureConfig& cfg) {
  if (axis != Axis::CosTheta && axis != Axis::Phi) {
    throw Error(ErrorCode::InvalidArgument, "angular spectra use the cos_theta or phi axis");
  }
  require_valid_grid(grid);
  if (wave.l < 0 || std::abs(wave.m) > wave.l) {
    throw Error(ErrorCode::InvalidQuantumNumbers,
                "need |m| <= l, got l = " + std::to_string(wave.l) + ", m = " + std::to_string(wave.m));
  }
  if (axis == Axis::CosTheta && (grid.front() < -1.0 || grid.back() > 1.0)) {
    throw Error(ErrorCode::InvalidGrid, "cos(theta) grid must lie in [-1, 1]");
  }

  // Energy part: m√(2mE)·(1/mp) = 1, leaving ∫ Lorentzian |⟨E|V|E_res⟩_l|² dE.
  auto weight = [&](double E) {
    if (E <= 0.0) {
      return 0.0;
    }
    return lorentzian(E, pole.E_R, pole.Gamma_R) * std::norm(reduced_element(E, pole, params, wave));
  };
  const double energy_part = energy_integral(pole, params, weight, !wave.reduced_me, cfg).value.real();

  std::vector<double> values;
  values.reserve(grid.size());
  if (axis == Axis::CosTheta) {
    for (double c : grid) {
      // |Y_l^m|² does not depend on φ.
      const double theta = std::acos(c);
      values.push_back(energy_part * 2.0 * kPi * std::norm(numerics::spherical_harmonic(wave.l, wave.m, theta, 0.0)));
    }
  } else {
    const auto rule = numerics::gauss_legendre(wave.l + 8);
    for (double phi : grid) {
      double polar = 0.0;
      for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        polar += rule.weights[i] *
                 std::norm(numerics::spherical_harmonic(wave.l, wave.m, std::acos(rule.nodes[i]), phi));
      }
      values.push_back(energy_part * polar);
    }
  }
  return make_spectrum(axis, grid, std::move(values), {{pole.E_R, pole.Gamma_R}});
}

std::vector<double> midpoint_grid(double lo, double hi, int points) {
  if (points < 1 || !(hi > lo)) {
    throw Error(ErrorCode::InvalidGrid, "grid needs points >= 1 and hi > lo");
  }
  std::vector<double> grid(points);
  const double h = (hi - lo) / points;
  for (int i = 0; i < points; ++i) {
    grid[i] = lo + (i + 0.5) * h;
  }
  return grid;
}

std::vector<double> default_energy_grid(const ResonancePole& pole, int points) {
  return midpoint_grid(std::max(0.0, pole.E_R - 20.0 * pole.Gamma_R), pole.E_R + 20.0 * pole.Gamma_R, points);
}

double total_gamma_energy_route(const ResonancePole& pole, const SystemParams& params,
                                const numerics::QuadratureConfig& cfg) {
  auto weight = [&](double E) {
    if (E <= 0.0) {
      return 0.0;
    }
    const double p = momentum_of(E, params);
    return lorentzian(E, pole.E_R, pole.Gamma_R) * std::norm(deltashell::matrix_element(p, pole, params));
  };
  return energy_integral(pole, params, weight, true, cfg).value.real();
}

double total_gamma_momentum_route(const ResonancePole& pole, const SystemParams& params,
                                  const numerics::QuadratureConfig& cfg) {
  // p = κ ħ/a; sin(κ) sets the π/2 panel guard.
  const double scale = params.momentum_scale();
  auto integrand = [&](double kappa) {
    return cplx{std::norm(deltashell::gamow_momentum(kappa * scale, pole, params)) * scale, 0.0};
  };
  const double center = pole.k.real();
  const double width = std::abs(pole.k.imag());
  const double cutoff = std::max(40.0, 4.0 * std::abs(pole.k) + 200.0 * width);
  std::vector<double> points = {0.0, cutoff};
  for (double s : {-100.0, -10.0, -1.0, 0.0, 1.0, 10.0, 100.0}) {
    const double x = center + s * width;
    if (x > 0.0 && x < cutoff) {
      points.push_back(x);
    }
  }
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());

  numerics::QuadratureConfig qcfg = cfg;
  qcfg.max_panel_width = 0.5 * kPi;
  numerics::IntegralResult result = numerics::integrate_piecewise(integrand, points, qcfg);
  result += numerics::integrate_semi_infinite(integrand, cutoff, qcfg, 4.0);
  return result.value.real();
}

DecayConstants decay_constants(const ResonancePole& pole, const SystemParams& params,
                               const numerics::QuadratureConfig& cfg) {
  return DecayConstants::from(pole.Gamma_R, total_gamma_momentum_route(pole, params, cfg));
}

double fermi_total_width(const ResonancePole& pole, const SystemParams& params) {
  require_positive_energy(pole.E_R);
  return 2.0 * kPi * std::norm(deltashell::matrix_element(momentum_of(pole.E_R, params), pole, params));
}

FermiComparison compare_with_fermi(const ResonancePole& pole, const SystemParams& params,
                                   const numerics::QuadratureConfig& cfg) {
  FermiComparison out;
  out.Gamma_bar_exact = decay_constants(pole, params, cfg).Gamma_bar;
  out.Gamma_bar_fermi = fermi_total_width(pole, params);
  out.relative_gap = relative_gap(out.Gamma_bar_fermi, out.Gamma_bar_exact);
  return out;
}

double box_density_of_states(double E, const BoxConfig& box, double dOmega, const SystemParams& params) {
  require_positive_energy(E);
  if (!(box.side_length_L > 0)) {
    throw Error(ErrorCode::InvalidArgument, "box side length must be positive");
  }
  if (!(dOmega > 0) || dOmega > 4.0 * kPi) {
    throw Error(ErrorCode::InvalidArgument, "solid angle must lie in (0, 4π]");
  }
  const double L3 = std::pow(box.side_length_L, 3);
  const double h3 = std::pow(2.0 * kPi * params.hbar, 3);
  return L3 / h3 * params.mass * momentum_of(E, params) * dOmega;
}

double fermi_golden_rule_box(double E, const ResonancePole& pole, const BoxConfig& box, const SystemParams& params) {
  require_positive_energy(E);
  const double p = momentum_of(E, params);
  const cplx delta_element = std::sqrt(1.0 / (params.mass * p)) * deltashell::matrix_element(p, pole, params) *
                             numerics::spherical_harmonic(0, 0, 0.0, 0.0);
  const double conversion = std::pow(2.0 * kPi * params.hbar, 1.5) / std::pow(box.side_length_L, 1.5);
  const double box_element_sq = std::norm(conversion * delta_element);
  return 2.0 * kPi * box_density_of_states(E, box, 4.0 * kPi, params) * box_element_sq;
}

InterferenceTerms interference_terms(const Superposition& sup, const std::vector<double>& E_grid,
                                     const SystemParams& params) {
  sup.validate();
  require_positive_energies(E_grid);
  const std::size_t n = sup.terms.size();
  const double m = params.mass;

  InterferenceTerms out;
  out.diagonal.assign(n, std::vector<double>(E_grid.size(), 0.0));
  out.cross.assign(E_grid.size(), 0.0);
  out.total.assign(E_grid.size(), 0.0);

  std::vector<cplx> element(n);
  for (std::size_t g = 0; g < E_grid.size(); ++g) {
    const double E = E_grid[g];
    const double p = momentum_of(E, params);
    // m√(2mE) · (1/mp) · ∫|Y₀⁰|² dΩ
    const double jacobian = m * p * (1.0 / (m * p));
    for (std::size_t j = 0; j < n; ++j) {
      element[j] = deltashell::matrix_element(p, sup.terms[j].pole, params);
    }
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const auto& ti = sup.terms[i];
      const double diag = jacobian * std::norm(ti.coefficient) *
                          lorentzian(E, ti.pole.E_R, ti.pole.Gamma_R) * std::norm(element[i]);
      out.diagonal[i][g] = diag;
      total += diag;
    }
    double cross = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        const auto& ti = sup.terms[i];
        const auto& tj = sup.terms[j];
        const cplx prop_i = 1.0 / cplx{E - ti.pole.E_R, 0.5 * ti.pole.Gamma_R};
        const cplx prop_j = 1.0 / cplx{E - tj.pole.E_R, -0.5 * tj.pole.Gamma_R};
        cross += jacobian * 2.0 *
                 (ti.coefficient * std::conj(tj.coefficient) * prop_i * prop_j * element[i] * std::conj(element[j]))
                     .real();
      }
    }
    out.cross[g] = cross;
    out.total[g] = total + cross;
  }
  return out;
}

Spectrum interference_spectrum(const Superposition& sup, const std::vector<double>& E_grid,
                               const SystemParams& params) {
  InterferenceTerms terms = interference_terms(sup, E_grid, params);
  std::vector<PoleMeta> meta;
  for (const auto& t : sup.terms) {
    meta.push_back({t.pole.E_R, t.pole.Gamma_R});
  }
  return make_spectrum(Axis::Energy, E_grid, std::move(terms.total), std::move(meta));
}

double trapezoid(const std::vector<double>& grid, const std::vector<double>& values) {
  double sum = 0.0;
  for (std::size_t i = 1; i < grid.size(); ++i) {
    sum += 0.5 * (grid[i] - grid[i - 1]) * (values[i] + values[i - 1]);
  }
  return sum;
}

Spectrum normalize(const Spectrum& spec) {
  spec.validate();
  const double total = trapezoid(spec.grid, spec.values);
  if (!(total > 0) || !std::isfinite(total)) {
    throw Error(ErrorCode::ZeroTotal, "spectrum integrates to a non-positive total");
  }
  Spectrum out = spec;
  for (double& v : out.values) {
    v /= total;
  }
  out.normalized = true;
  out.total = trapezoid(out.grid, out.values);
  return out;
}

BasisEquivalenceReport basis_equivalence_check(const ResonancePole& pole, const SystemParams& params,
                                               const numerics::QuadratureConfig& cfg) {
  constexpr int kPolarNodes = 8;
  constexpr int kAzimuthNodes = 8;
  const auto rule = numerics::gauss_legendre(kPolarNodes);

  // Product rule: Gauss-Legendre in cos θ, trapezoid in φ.
  auto over_sphere = [&](const std::function<double(Direction)>& g) {
    double sum = 0.0;
    for (int i = 0; i < kPolarNodes; ++i) {
      const double theta = std::acos(rule.nodes[i]);
      for (int j = 0; j < kAzimuthNodes; ++j) {
        const double phi = 2.0 * kPi * j / kAzimuthNodes;
        sum += rule.weights[i] * (2.0 * kPi / kAzimuthNodes) * g(Direction{theta, phi});
      }
    }
    return sum;
  };

  BasisEquivalenceReport report;
  report.angular_integral =
      over_sphere([](Direction d) { return std::norm(numerics::spherical_harmonic(0, 0, d.theta, d.phi)); });

  auto weight = [&](double E) {
    if (E <= 0.0) {
      return 0.0;
    }
    return over_sphere([&](Direction d) { return spectrum_dE_dOmega(E, d, pole, params); });
  };
  report.gamma_momentum_basis = energy_integral(pole, params, weight, true, cfg).value.real();
  report.gamma_angular_basis = total_gamma_energy_route(pole, params, cfg);
  report.relative_gap = relative_gap(report.gamma_momentum_basis, report.gamma_angular_basis);
  return report;
}

}  // namespace reskit::goldenrule
