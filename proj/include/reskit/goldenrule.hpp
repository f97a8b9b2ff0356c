#pragma once

// Decay distributions from a Gamow state: the Lorentzian lineshape times the
// squared interaction matrix element, in momentum, energy and angular form,
// plus the long-lived (Fermi) limit, box normalization and interference of
// several resonances.

#include <complex>
#include <optional>
#include <string_view>
#include <vector>

#include "reskit/deltashell.hpp"
#include "reskit/numerics.hpp"

namespace reskit::goldenrule {

using cplx = std::complex<double>;
using deltashell::ResonancePole;
using deltashell::SystemParams;

enum class Axis { Energy, CosTheta, Phi, EnergySolidAngle };

std::string_view to_string(Axis axis);
Axis axis_from_string(std::string_view text);

struct PoleMeta {
  double E_R;
  double Gamma_R;

  bool operator==(const PoleMeta&) const = default;
};

struct Spectrum {
  Axis axis = Axis::Energy;
  std::vector<double> grid;
  std::vector<double> values;
  bool normalized = false;
  std::vector<PoleMeta> pole_meta;
  std::optional<double> total;

  void validate() const;
};

struct SuperpositionTerm {
  cplx coefficient;
  ResonancePole pole;
};

struct Superposition {
  std::vector<SuperpositionTerm> terms;

  void validate() const;
};

struct DecayConstants {
  double Gamma_R;
  double Gamma;
  double Gamma_bar;

  static DecayConstants from(double gamma_r, double gamma);
};

struct BoxConfig {
  double side_length_L;
};

struct Direction {
  double theta;
  double phi;
};

// Partial wave of the decay. With no reduced element supplied, l = 0 uses
// the closed-form delta-shell element at each energy.
struct PartialWave {
  int l = 0;
  int m = 0;
  std::optional<cplx> reduced_me;
};

double lorentzian(double E, double E_R, double Gamma_R);

// Reduced element ⟨E|V|E_res⟩_l for the given wave.
cplx reduced_element(double E, const ResonancePole& pole, const SystemParams& params, const PartialWave& wave);

double differential_decay_d3p(double p, Direction direction, const ResonancePole& pole, const SystemParams& params);

double spectrum_dE_dOmega(double E, Direction direction, const ResonancePole& pole, const SystemParams& params,
                          const PartialWave& wave = {});

// dΓ/dE dΩ at a fixed direction over an energy grid.
Spectrum spectrum_dE_dOmega_grid(const std::vector<double>& E_grid, Direction direction, const ResonancePole& pole,
                                 const SystemParams& params, const PartialWave& wave = {});

Spectrum spectrum_dE(const std::vector<double>& E_grid, const ResonancePole& pole, const SystemParams& params,
                     const PartialWave& wave = {});

Spectrum angular_spectrum(Axis axis, const std::vector<double>& grid, const ResonancePole& pole,
                          const PartialWave& wave, const SystemParams& params,
                          const numerics::QuadratureConfig& cfg = {});

// `points` bin midpoints over [max(0, E_R − 20Γ_R), E_R + 20Γ_R].
std::vector<double> default_energy_grid(const ResonancePole& pole, int points = 2001);
// `points` bin midpoints over [lo, hi].
std::vector<double> midpoint_grid(double lo, double hi, int points);

double total_gamma_energy_route(const ResonancePole& pole, const SystemParams& params,
                                const numerics::QuadratureConfig& cfg = {});
double total_gamma_momentum_route(const ResonancePole& pole, const SystemParams& params,
                                  const numerics::QuadratureConfig& cfg = {});

DecayConstants decay_constants(const ResonancePole& pole, const SystemParams& params,
                               const numerics::QuadratureConfig& cfg = {});

double fermi_total_width(const ResonancePole& pole, const SystemParams& params);

struct FermiComparison {
  double Gamma_bar_exact;
  double Gamma_bar_fermi;
  double relative_gap;
};

FermiComparison compare_with_fermi(const ResonancePole& pole, const SystemParams& params,
                                   const numerics::QuadratureConfig& cfg = {});

double box_density_of_states(double E, const BoxConfig& box, double dOmega, const SystemParams& params);

double fermi_golden_rule_box(double E, const ResonancePole& pole, const BoxConfig& box, const SystemParams& params);

struct InterferenceTerms {
  std::vector<std::vector<double>> diagonal;  // one column per superposition term
  std::vector<double> cross;                  // sum of all 2 Re(...) pair terms
  std::vector<double> total;
};

InterferenceTerms interference_terms(const Superposition& sup, const std::vector<double>& E_grid,
                                     const SystemParams& params);

Spectrum interference_spectrum(const Superposition& sup, const std::vector<double>& E_grid,
                               const SystemParams& params);

double trapezoid(const std::vector<double>& grid, const std::vector<double>& values);

Spectrum normalize(const Spectrum& spec);

struct BasisEquivalenceReport {
  double gamma_momentum_basis;  // E and Ω integrated separately
  double gamma_angular_basis;   // 1-D partial-wave integral
  double angular_integral;      // ∫|Y₀⁰|² dΩ on the quadrature grid
  double relative_gap;
};

BasisEquivalenceReport basis_equivalence_check(const ResonancePole& pole, const SystemParams& params,
                                               const numerics::QuadratureConfig& cfg = {});

}  // namespace reskit::goldenrule
