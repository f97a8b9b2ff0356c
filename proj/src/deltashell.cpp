#include "reskit/deltashell.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "reskit/error.hpp"

namespace reskit::deltashell {

namespace {

constexpr cplx kI{0.0, 1.0};
constexpr double kPi = std::numbers::pi;

// Acceptance threshold for the resonance quadrant.
constexpr double kMinImaginaryDepth = 1e-12;

void require_nonzero(cplx k) {
  if (k == cplx{0.0, 0.0}) {
    throw Error(ErrorCode::ZeroMomentum, "resonance condition is singular at k = 0");
  }
}

bool within_residual(const numerics::RootFindConfig& cfg, cplx k, double lambda, double residual) {
  if (residual < cfg.residual_tolerance) {
    return true;
  }
  const double floor = cfg.roundoff_floor_factor * std::numeric_limits<double>::epsilon() *
                       (1.0 + std::abs(k) * std::abs(resonance_condition_derivative(k, lambda)));
  return residual <= floor;
}

}  // namespace

void SystemParams::validate() const {
  if (!(mass > 0) || !(hbar > 0) || !(radius_a > 0) || !std::isfinite(mass) || !std::isfinite(hbar) ||
      !std::isfinite(radius_a)) {
    throw Error(ErrorCode::InvalidArgument, "mass, hbar and radius must be finite and positive");
  }
  if (!std::isfinite(lambda)) {
    throw Error(ErrorCode::InvalidArgument, "lambda must be finite");
  }
}

cplx resonance_condition(cplx k, double lambda) {
  require_nonzero(k);
  return 1.0 + (lambda / k) * std::exp(kI * k) * std::sin(k);
}

cplx resonance_condition_derivative(cplx k, double lambda) {
  require_nonzero(k);
  const cplx s = std::sin(k);
  return lambda * std::exp(kI * k) * ((kI * s + std::cos(k)) / k - s / (k * k));
}

cplx pole_seed(int n, double lambda) {
  if (n < 1 || !(lambda > 0)) {
    throw Error(ErrorCode::InvalidArgument, "pole seeds need n >= 1 and lambda > 0");
  }
  const double branch = n * kPi;
  cplx k{branch, 0.0};
  for (int it = 0; it < 200; ++it) {
    const cplx next = branch - 0.5 * kI * std::log(1.0 - 2.0 * kI * k / lambda);
    const double change = std::abs(next - k);
    k = next;
    if (change <= 1e-15 * std::abs(k)) {
      break;
    }
  }
  return k;
}

ResonancePole make_pole(cplx k, const SystemParams& params, int index_n) {
  params.validate();
  ResonancePole pole;
  pole.k = k;
  pole.p_res = k * params.momentum_scale();
  pole.E_res = pole.p_res * pole.p_res / (2.0 * params.mass);
  pole.E_R = pole.E_res.real();
  pole.Gamma_R = -2.0 * pole.E_res.imag();
  pole.N_res = normalization_constant(k, params);
  pole.residual = std::abs(resonance_condition(k, params.lambda));
  pole.index_n = index_n;
  return pole;
}

numerics::RootFindConfig pole_search_config() {
  numerics::RootFindConfig cfg;
  cfg.roundoff_floor_factor = 64.0;
  return cfg;
}

numerics::Rectangle completeness_rectangle(int n_max, double lambda, double top) {
  return numerics::Rectangle{0.5 * kPi, (n_max + 0.5) * kPi, -(1.0 + 4.0 * kPi * n_max / lambda), top};
}

namespace {

// e^{2ik} overflows near Im k = -354; small λ would put the default floor
// far beyond that.
double deepest_bottom_edge(double deepest_im) { return std::min(-300.0, 2.0 * deepest_im - 1.0); }

}  // namespace

numerics::Rectangle certification_rectangle(const std::vector<ResonancePole>& poles, int n_max, double lambda) {
  double shallowest = 1e300;
  double deepest = 0.0;
  for (const auto& p : poles) {
    shallowest = std::min(shallowest, std::abs(p.k.imag()));
    deepest = std::min(deepest, p.k.imag());
  }
  // For λ > 0 there are no zeros with Im k >= 0, so a pole hugging the real
  // axis is enclosed by lifting the top edge into the upper half plane.
  const double top = shallowest > 2e-6 ? -1e-6 : 0.5;
  numerics::Rectangle rect = completeness_rectangle(n_max, lambda, top);
  rect.im_min = std::max(std::min(rect.im_min, 2.0 * deepest - 1.0), deepest_bottom_edge(deepest));
  return rect;
}

std::vector<ResonancePole> find_resonances(const SystemParams& params, int n_max,
                                           const numerics::RootFindConfig& cfg) {
  params.validate();
  cfg.validate();
  if (!(params.lambda > 0)) {
    throw Error(ErrorCode::InvalidArgument,
                "pole search is defined for a repulsive shell only (lambda > 0), got " +
                    std::to_string(params.lambda));
  }
  if (n_max < 1) {
    throw Error(ErrorCode::InvalidArgument, "n_max must be >= 1");
  }
  const double lambda = params.lambda;
  auto f = [lambda](cplx k) { return resonance_condition(k, lambda); };
  auto df = [lambda](cplx k) { return resonance_condition_derivative(k, lambda); };

  std::vector<numerics::Root> roots;
  std::vector<int> branch_of;
  for (int n = 1; n <= n_max; ++n) {
    cplx k;
    try {
      k = numerics::newton_root(f, df, pole_seed(n, lambda), cfg);
    } catch (const Error& err) {
      throw Error(ErrorCode::SeedNonConvergence, "n = " + std::to_string(n) + ": " + err.what());
    }
    const double residual = std::abs(f(k));
    if (!(k.real() > 0) || !(k.imag() < -kMinImaginaryDepth)) {
      throw Error(ErrorCode::SeedNonConvergence,
                  "n = " + std::to_string(n) + ": root (" + std::to_string(k.real()) + ", " +
                      std::to_string(k.imag()) + ") is outside the resonance quadrant");
    }
    if (!within_residual(cfg, k, lambda, residual)) {
      throw Error(ErrorCode::SeedNonConvergence,
                  "n = " + std::to_string(n) + ": residual " + std::to_string(residual) + " above tolerance");
    }
    roots.push_back({k, residual});
    branch_of.push_back(n);
  }

  const auto distinct = numerics::dedupe_roots(roots, cfg.dedupe_radius);
  if (distinct.size() != roots.size()) {
    throw Error(ErrorCode::SeedNonConvergence, "two seeds converged to the same root");
  }

  std::vector<ResonancePole> poles;
  for (std::size_t i = 0; i < roots.size(); ++i) {
    poles.push_back(make_pole(roots[i].z, params, branch_of[i]));
  }
  std::sort(poles.begin(), poles.end(),
            [](const ResonancePole& a, const ResonancePole& b) { return a.k.real() < b.k.real(); });

  std::vector<cplx> hints;
  for (const auto& p : poles) {
    hints.push_back(p.k);
  }
  numerics::Rectangle rect = certification_rectangle(poles, n_max, lambda);

  numerics::QuadratureConfig qcfg;
  qcfg.relative_tolerance = 1e-8;
  qcfg.absolute_tolerance = 1e-10;
  qcfg.max_panel_width = 0.5 * kPi;
  qcfg.max_subdivisions = 100000;

  int counted = 0;
  for (int attempt = 0; attempt < 4; ++attempt) {
    counted = numerics::count_zeros(f, df, rect, qcfg, hints).count;
    if (counted >= n_max) {
      break;
    }
    double deepest = 0.0;
    for (const auto& p : poles) {
      deepest = std::min(deepest, p.k.imag());
    }
    const double next = std::max(2.0 * rect.im_min, deepest_bottom_edge(deepest));
    if (next == rect.im_min) {
      break;
    }
    rect.im_min = next;
  }
  if (counted != n_max) {
    throw Error(ErrorCode::CompletenessMismatch,
                "argument principle counts " + std::to_string(counted) + " zeros in the search rectangle, found " +
                    std::to_string(n_max));
  }
  return poles;
}

cplx normalization_constant(cplx k, const SystemParams& params) {
  params.validate();
  const cplx denom = params.radius_a * (1.0 + params.lambda - 2.0 * kI * k);
  if (denom == cplx{0.0, 0.0} || params.lambda == 0.0) {
    throw Error(ErrorCode::BranchDegenerate, "normalization constant is degenerate for this (k, lambda)");
  }
  return std::sqrt(2.0 * params.lambda / denom);
}

cplx gamow_position(double r, const ResonancePole& pole, const SystemParams& params) {
  if (!(r >= 0)) {
    throw Error(ErrorCode::InvalidArgument, "radius must be nonnegative");
  }
  const double x = r / params.radius_a;
  const cplx k = pole.k;
  if (x <= 1.0) {
    return pole.N_res * (std::exp(kI * k) * std::sin(k * x));
  }
  return pole.N_res * (std::sin(k) * std::exp(kI * k * x));
}

std::vector<RadialWaveSample> sample_gamow_position(const std::vector<double>& radii, const ResonancePole& pole,
                                                    const SystemParams& params) {
  std::vector<RadialWaveSample> out;
  out.reserve(radii.size());
  for (double r : radii) {
    out.push_back({r, gamow_position(r, pole, params)});
  }
  return out;
}

cplx gamow_momentum(double p, const ResonancePole& pole, const SystemParams& params) {
  if (!(p >= 0)) {
    throw Error(ErrorCode::InvalidArgument, "momentum must be nonnegative");
  }
  const double phase = p * params.radius_a / params.hbar;
  return pole.N_res * std::sqrt(2.0 * params.hbar / kPi) * pole.p_res * std::sin(phase) /
         (p * p - pole.p_res * pole.p_res);
}

cplx matrix_element(double p, const ResonancePole& pole, const SystemParams& params) {
  if (!(p > 0)) {
    throw Error(ErrorCode::ZeroMomentum, "matrix element needs p > 0");
  }
  const double m = params.mass;
  const double hbar = params.hbar;
  const double a = params.radius_a;
  const cplx u_at_shell = pole.N_res * (std::exp(kI * pole.k) * std::sin(pole.k));
  return std::sqrt(2.0 * m / (kPi * hbar * p)) * (hbar * hbar * params.lambda / (2.0 * m * a)) *
         std::sin(p * a / hbar) * u_at_shell;
}

cplx continuation_norm(cplx q, const ResonancePole& pole, const SystemParams& params,
                       const numerics::QuadratureConfig& cfg) {
  if (!(q.imag() > 0)) {
    throw Error(ErrorCode::WrongHalfPlane, "numeric continuation norm needs Im(q) > 0");
  }
  // Dimensionless: p = κ ħ/a, q = Q ħ/a.
  const cplx Q = q / params.momentum_scale();
  const cplx prefactor = pole.N_res * pole.N_res * params.radius_a * (2.0 / kPi) * Q * Q;
  auto integrand = [&](double kappa) -> cplx {
    const double s = std::sin(kappa);
    const cplx d = kappa * kappa - Q * Q;
    return prefactor * s * s / (d * d);
  };

  numerics::QuadratureConfig qcfg = cfg;
  qcfg.max_panel_width = 0.5 * kPi;
  const double center = std::abs(Q.real());
  const double width = Q.imag();
  const double cutoff = std::max(20.0, 4.0 * std::abs(Q) + 10.0 * width);
  std::vector<double> points = {0.0, cutoff};
  for (double s : {-10.0, -1.0, 0.0, 1.0, 10.0}) {
    const double x = center + s * width;
    if (x > 0.0 && x < cutoff) {
      points.push_back(x);
    }
  }
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());

  cplx total = numerics::integrate_piecewise(integrand, points, qcfg).value;
  total += numerics::integrate_semi_infinite(integrand, cutoff, qcfg, 4.0).value;
  return total;
}

cplx closed_form_norm(cplx q, const ResonancePole& pole, const SystemParams& params) {
  const cplx Q = q / params.momentum_scale();
  require_nonzero(Q);
  return pole.N_res * pole.N_res * params.radius_a * (2.0 / kPi) * (-kI * kPi / (8.0 * Q)) *
         (1.0 + std::exp(2.0 * kI * Q) * (-1.0 + 2.0 * kI * Q));
}

}  // namespace reskit::deltashell
