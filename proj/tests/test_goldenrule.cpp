#include <cmath>
#include <numbers>
#include <vector>

#include <doctest.h>

#include "oracles.hpp"
#include "reskit/deltashell.hpp"
#include "reskit/error.hpp"
#include "reskit/goldenrule.hpp"
#include "reskit/numerics.hpp"

using namespace reskit;
using namespace reskit::goldenrule;
using deltashell::ResonancePole;
using deltashell::SystemParams;
using cplx = std::complex<double>;
constexpr double pi = std::numbers::pi;

namespace {

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected reskit::Error");
  return ErrorCode::InvalidArgument;
}

SystemParams with_lambda(double lambda) {
  SystemParams p;
  p.lambda = lambda;
  return p;
}

ResonancePole pole_at(double lambda, int n = 1) { return deltashell::find_resonances(with_lambda(lambda), n)[n - 1]; }

}  // namespace

TEST_CASE("Lorentzian has area 2π/Γ") {
  numerics::QuadratureConfig cfg;
  const double G = 0.3;
  auto f = [G](double E) { return cplx{lorentzian(E, 5.0, G), 0.0}; };
  const std::vector<double> points = {-1e4, 4.0, 5.0, 6.0, 1e4};
  const double area = numerics::integrate_piecewise(f, points, cfg).value.real();
  const double exact = 2.0 / G * (std::atan((1e4 - 5.0) / (0.5 * G)) + std::atan((1e4 + 5.0) / (0.5 * G)));
  CHECK(area == doctest::Approx(exact).epsilon(1e-10));
  CHECK(code_of([] { lorentzian(1.0, 1.0, 0.0); }) == ErrorCode::NonPositiveWidth);
}

TEST_CASE("decay constant matches the Simpson oracle") {
  for (double lambda : {3.0, 10.0, 100.0}) {
    const auto pole = pole_at(lambda);
    const double ref = oracle::gamma_decay_constant(pole.k, lambda);
    CHECK(total_gamma_momentum_route(pole, with_lambda(lambda)) == doctest::Approx(ref).epsilon(1e-7));
  }
}

TEST_CASE("energy and momentum routes agree, including non-unit parameters") {
  for (const SystemParams& params : {with_lambda(3.0), with_lambda(100.0), SystemParams{0.7, 1.9, 2.3, 10.0}}) {
    const auto pole = deltashell::find_resonances(params, 2)[1];
    const double a = total_gamma_energy_route(pole, params);
    const double b = total_gamma_momentum_route(pole, params);
    CHECK(std::abs(a - b) < 1e-6 * b);
  }
}

TEST_CASE("decay constant does not depend on the unit system") {
  const double base = decay_constants(pole_at(10.0), with_lambda(10.0)).Gamma;
  SystemParams other{3.0, 0.5, 4.0, 10.0};
  const auto pole = deltashell::find_resonances(other, 1).front();
  const auto dc = decay_constants(pole, other);
  CHECK(dc.Gamma == doctest::Approx(base).epsilon(1e-8));
  CHECK(dc.Gamma_bar == doctest::Approx(dc.Gamma * dc.Gamma_R).epsilon(1e-15));
}

TEST_CASE("energy spectrum is the Lorentzian times the squared element") {
  const SystemParams params = with_lambda(10.0);
  const auto pole = pole_at(10.0);
  const auto grid = default_energy_grid(pole, 101);
  const auto spec = spectrum_dE(grid, pole, params);
  CHECK(spec.axis == Axis::Energy);
  REQUIRE(spec.values.size() == grid.size());
  for (std::size_t i = 0; i < grid.size(); i += 10) {
    const double p = std::sqrt(2.0 * params.mass * grid[i]);
    const double expected = lorentzian(grid[i], pole.E_R, pole.Gamma_R) *
                            std::norm(deltashell::matrix_element(p, pole, params));
    CHECK(spec.values[i] == doctest::Approx(expected).epsilon(1e-13));
  }
  CHECK(grid.front() > 0.0);
}

TEST_CASE("solid-angle spectrum integrates back to the energy spectrum") {
  const SystemParams params = with_lambda(10.0);
  const auto pole = pole_at(10.0);
  const double E = pole.E_R;
  const auto rule = numerics::gauss_legendre(12);
  double integral = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    for (int j = 0; j < 16; ++j) {
      const Direction d{std::acos(rule.nodes[i]), 2.0 * pi * j / 16};
      integral += rule.weights[i] * (2.0 * pi / 16) * spectrum_dE_dOmega(E, d, pole, params, {});
    }
  }
  CHECK(integral == doctest::Approx(spectrum_dE({E}, pole, params).values[0]).epsilon(1e-12));
}

TEST_CASE("angular spectra of an s-wave are flat") {
  const SystemParams params = with_lambda(10.0);
  const auto pole = pole_at(10.0);
  const double gamma = total_gamma_energy_route(pole, params);
  const auto cos_spec = angular_spectrum(Axis::CosTheta, {-0.9, 0.0, 0.5}, pole, {}, params);
  for (double v : cos_spec.values) {
    CHECK(v == doctest::Approx(0.5 * gamma).epsilon(1e-9));
  }
  const auto phi_spec = angular_spectrum(Axis::Phi, {0.0, 1.0, 4.0}, pole, {}, params);
  for (double v : phi_spec.values) {
    CHECK(v == doctest::Approx(gamma / (2.0 * pi)).epsilon(1e-9));
  }
}

TEST_CASE("higher partial waves use the supplied element and |Y_l^m|²") {
  const SystemParams params = with_lambda(10.0);
  const auto pole = pole_at(10.0);
  PartialWave wave{2, 1, cplx{0.3, -0.2}};
  const auto spec = angular_spectrum(Axis::CosTheta, {-0.5, 0.2}, pole, wave, params);
  const double ratio = spec.values[0] / spec.values[1];
  CHECK(ratio == doctest::Approx(oracle::ylm_norm_sq(2, 1, std::acos(-0.5)) / oracle::ylm_norm_sq(2, 1, std::acos(0.2)))
                     .epsilon(1e-12));
  CHECK(code_of([&] { reduced_element(1.0, pole, params, PartialWave{1, 0, std::nullopt}); }) ==
        ErrorCode::InvalidArgument);
  CHECK(code_of([&] { reduced_element(1.0, pole, params, PartialWave{1, 3, cplx{1.0, 0.0}}); }) ==
        ErrorCode::InvalidQuantumNumbers);
}

TEST_CASE("grids below threshold or out of order are rejected") {
  const SystemParams params = with_lambda(10.0);
  const auto pole = pole_at(10.0);
  CHECK(code_of([&] { spectrum_dE({0.0, 1.0}, pole, params); }) == ErrorCode::InvalidGrid);
  CHECK(code_of([&] { spectrum_dE({2.0, 1.0}, pole, params); }) == ErrorCode::InvalidGrid);
  CHECK(code_of([&] { spectrum_dE({}, pole, params); }) == ErrorCode::InvalidGrid);
  CHECK(code_of([&] { midpoint_grid(1.0, 1.0, 3); }) == ErrorCode::InvalidGrid);
  CHECK(code_of([&] { spectrum_dE_dOmega(-1.0, {0.0, 0.0}, pole, params, {}); }) == ErrorCode::NonPositiveEnergy);
}

TEST_CASE("box Golden Rule reduces to the delta-normalized Fermi width") {
  const SystemParams params = with_lambda(10.0);
  const auto pole = pole_at(10.0);
  const double fermi = fermi_total_width(pole, params);
  for (double L : {1.0, 3.0, 50.0}) {
    CHECK(fermi_golden_rule_box(pole.E_R, pole, {L}, params) == doctest::Approx(fermi).epsilon(1e-14));
  }
  const double rho = box_density_of_states(2.0, {2.0}, 4.0 * pi, params);
  CHECK(rho == doctest::Approx(8.0 / std::pow(2.0 * pi, 3) * 2.0 * 4.0 * pi).epsilon(1e-15));
  CHECK(code_of([&] { box_density_of_states(2.0, {0.0}, 1.0, params); }) == ErrorCode::InvalidArgument);
  CHECK(code_of([&] { box_density_of_states(2.0, {1.0}, 5.0 * pi, params); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("Fermi comparison uses the exact and peak-evaluated widths") {
  const SystemParams params = with_lambda(10.0);
  const auto pole = pole_at(10.0);
  const auto cmp = compare_with_fermi(pole, params);
  const double p = std::sqrt(2.0 * params.mass * pole.E_R);
  CHECK(cmp.Gamma_bar_fermi == doctest::Approx(2.0 * pi * std::norm(deltashell::matrix_element(p, pole, params))));
  CHECK(cmp.Gamma_bar_exact == doctest::Approx(decay_constants(pole, params).Gamma_bar));
  CHECK(cmp.relative_gap ==
        doctest::Approx(std::abs(cmp.Gamma_bar_exact - cmp.Gamma_bar_fermi) / cmp.Gamma_bar_exact));
}

TEST_CASE("narrow-resonance limit: the peak carries half of the exact width") {
  // The element has its sin(pa/ħ) node next to the pole, so the smooth
  // background contributes as much as the Lorentzian peak.
  for (double lambda : {100.0, 1000.0}) {
    const auto cmp = compare_with_fermi(pole_at(lambda), with_lambda(lambda));
    CHECK(cmp.relative_gap == doctest::Approx(0.5).epsilon(2e-3));
  }
}

TEST_CASE("interference expansion equals the squared amplitude") {
  const SystemParams params = with_lambda(10.0);
  const auto poles = deltashell::find_resonances(params, 2);
  Superposition sup{{{cplx{0.8, 0.3}, poles[0]}, {cplx{-0.4, 0.6}, poles[1]}}};
  const auto grid = midpoint_grid(0.5, 40.0, 2001);
  const auto terms = interference_terms(sup, grid, params);
  for (std::size_t g = 0; g < grid.size(); ++g) {
    const double E = grid[g];
    const double p = std::sqrt(2.0 * E);
    cplx amp{0.0, 0.0};
    for (const auto& t : sup.terms) {
      amp += t.coefficient * deltashell::matrix_element(p, t.pole, params) /
             cplx{E - t.pole.E_R, 0.5 * t.pole.Gamma_R};
    }
    CHECK(std::abs(terms.total[g] - std::norm(amp)) <= 1e-12 * std::norm(amp));
    CHECK(terms.total[g] >= -1e-12);
    CHECK(terms.total[g] == doctest::Approx(terms.diagonal[0][g] + terms.diagonal[1][g] + terms.cross[g]));
  }
}

TEST_CASE("superposition validation") {
  const auto pole = pole_at(10.0);
  Superposition empty;
  CHECK(code_of([&] { empty.validate(); }) == ErrorCode::EmptySuperposition);
  Superposition dup{{{cplx{1.0, 0.0}, pole}, {cplx{1.0, 0.0}, pole}}};
  CHECK(code_of([&] { dup.validate(); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("normalize produces unit area and refuses empty spectra") {
  const SystemParams params = with_lambda(10.0);
  const auto pole = pole_at(10.0);
  const auto spec = normalize(spectrum_dE(default_energy_grid(pole), pole, params));
  CHECK(spec.normalized);
  CHECK(trapezoid(spec.grid, spec.values) == doctest::Approx(1.0).epsilon(1e-12));
  Spectrum zero;
  zero.grid = {1.0, 2.0};
  zero.values = {0.0, 0.0};
  CHECK(code_of([&] { normalize(zero); }) == ErrorCode::ZeroTotal);
}

TEST_CASE("basis equivalence holds") {
  const auto report = basis_equivalence_check(pole_at(10.0), with_lambda(10.0));
  CHECK(report.angular_integral == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(report.relative_gap < 1e-6);
}

TEST_CASE("axis names round-trip") {
  for (Axis a : {Axis::Energy, Axis::CosTheta, Axis::Phi, Axis::EnergySolidAngle}) {
    CHECK(axis_from_string(to_string(a)) == a);
  }
  CHECK(code_of([] { axis_from_string("nope"); }) == ErrorCode::ParseError);
}
