#pragma once

// s-wave resonances of the delta-shell potential V(r) = (ħ²/2ma) λ δ(r − a).
//
// Root finding and wave evaluation run in the dimensionless momentum
// k = p a / ħ, where the pole condition depends on (k, λ) only. Physical
// units enter through SystemParams at the public boundary.

#include <complex>
#include <vector>

#include "reskit/numerics.hpp"

namespace reskit::deltashell {

using cplx = std::complex<double>;

struct SystemParams {
  double mass = 1.0;
  double hbar = 1.0;
  double radius_a = 1.0;
  double lambda = 10.0;

  // E₀ = ħ²/(2 m a²); dimensionless energy is E / E₀ = k².
  double energy_scale() const { return hbar * hbar / (2.0 * mass * radius_a * radius_a); }
  // Momentum carried by k = 1.
  double momentum_scale() const { return hbar / radius_a; }

  void validate() const;
};

struct ResonancePole {
  cplx k;         // dimensionless pole momentum
  cplx p_res;     // momentum units
  cplx E_res;     // E_R − iΓ_R/2
  double E_R;
  double Gamma_R;
  cplx N_res;     // length^(-1/2)
  double residual;
  int index_n;
};

struct RadialWaveSample {
  double argument;
  cplx value;
};

cplx resonance_condition(cplx k, double lambda);
cplx resonance_condition_derivative(cplx k, double lambda);

// Seed for the n-th pole: fixed point of k = nπ − (i/2) Log(1 − 2ik/λ),
// an exact rearrangement of the pole condition on its n-th branch.
cplx pole_seed(int n, double lambda);

// Builds the derived quantities for a validated dimensionless root.
ResonancePole make_pole(cplx k, const SystemParams& params, int index_n);

// Default root-finding settings for pole search: strict 1e-12 residual,
// relaxed to the roundoff floor only when the pole is ill-conditioned
// (very large lambda).
numerics::RootFindConfig pole_search_config();

std::vector<ResonancePole> find_resonances(const SystemParams& params, int n_max,
                                           const numerics::RootFindConfig& cfg = pole_search_config());

// Rectangle used to certify that find_resonances missed nothing.
numerics::Rectangle completeness_rectangle(int n_max, double lambda, double top);
// The rectangle find_resonances actually integrates around for these poles.
numerics::Rectangle certification_rectangle(const std::vector<ResonancePole>& poles, int n_max, double lambda);

cplx normalization_constant(cplx k, const SystemParams& params);

cplx gamow_position(double r, const ResonancePole& pole, const SystemParams& params);
std::vector<RadialWaveSample> sample_gamow_position(const std::vector<double>& radii, const ResonancePole& pole,
                                                    const SystemParams& params);

// û₀(p) = N √(2ħ/π) p_res sin(pa/ħ) / (p² − p_res²)
cplx gamow_momentum(double p, const ResonancePole& pole, const SystemParams& params);

// Reduced s-wave element ⟨E|V|E_res⟩₀ at E = p²/2m.
cplx matrix_element(double p, const ResonancePole& pole, const SystemParams& params);

// ∫₀^∞ û₀(p; q)² dp by quadrature, for Im q > 0. N_res is taken from the pole.
cplx continuation_norm(cplx q, const ResonancePole& pole, const SystemParams& params,
                       const numerics::QuadratureConfig& cfg = {});

// Closed form of the same integral, analytic in q; equals 1 at q = p_res.
cplx closed_form_norm(cplx q, const ResonancePole& pole, const SystemParams& params);

}  // namespace reskit::deltashell
