#pragma once

// Complex root finding, zero counting, adaptive quadrature and the two
// special functions (Riccati-Bessel, spherical harmonics) used by the
// resonance code. Everything here is a pure function of its arguments.

#include <complex>
#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

namespace reskit::numerics {

using cplx = std::complex<double>;
using ComplexFn = std::function<cplx(cplx)>;
using RealToComplexFn = std::function<cplx(double)>;

struct RootFindConfig {
  int max_iterations = 100;
  double residual_tolerance = 1e-12;
  double step_tolerance = 1e-14;
  double dedupe_radius = 1e-8;
  // When > 0, a stalled iterate is also accepted if |f| is within
  // roundoff_floor_factor * eps * (1 + |z f'(z)|) of zero. Zero keeps the
  // plain |f| < residual_tolerance contract.
  double roundoff_floor_factor = 0.0;

  void validate() const;
};

inline constexpr int kMaxGuardPanels = 4'000'000;

struct QuadratureConfig {
  double relative_tolerance = 1e-9;
  double absolute_tolerance = 1e-13;
  // Bisections allowed beyond the initial partition.
  int max_subdivisions = 20000;
  // Initial panels are no wider than this; capped at kMaxGuardPanels per call.
  std::optional<double> max_panel_width;

  void validate() const;
};

struct IntegralResult {
  cplx value{0.0, 0.0};
  double error_estimate = 0.0;
  int subdivisions_used = 0;

  IntegralResult& operator+=(const IntegralResult& other);
};

struct Rectangle {
  double re_min;
  double re_max;
  double im_min;
  double im_max;

  bool contains(cplx z) const {
    return z.real() > re_min && z.real() < re_max && z.imag() > im_min && z.imag() < im_max;
  }
};

struct ZeroCount {
  int count = 0;
  cplx winding{0.0, 0.0};      // raw (1/2πi)∮ f'/f dz
  double rounding_distance = 0.0;
};

struct Root {
  cplx z;
  double residual;
};

cplx newton_root(const ComplexFn& f, const ComplexFn& df, cplx seed, const RootFindConfig& cfg);

// Merges roots closer than `radius`, keeping the one with the smaller residual.
// Output order follows first appearance in the input.
std::vector<Root> dedupe_roots(std::span<const Root> roots, double radius);

// Argument-principle count of zeros of f inside `rect`. Edges are split at
// the projections of `hints` so sharp features near the contour are not
// stepped over.
ZeroCount count_zeros(const ComplexFn& f, const ComplexFn& df, const Rectangle& rect,
                      const QuadratureConfig& cfg, std::span<const cplx> hints = {});

// Same, with f' estimated by a four-point complex stencil.
ZeroCount count_zeros(const ComplexFn& f, const Rectangle& rect, const QuadratureConfig& cfg);

IntegralResult integrate(const RealToComplexFn& f, double lo, double hi, const QuadratureConfig& cfg);

// Integrates over consecutive intervals [points[i], points[i+1]] with one
// shared error budget. `points` must be strictly increasing.
IntegralResult integrate_piecewise(const RealToComplexFn& f, std::span<const double> points,
                                   const QuadratureConfig& cfg);

IntegralResult integrate_semi_infinite(const RealToComplexFn& f, double lo, const QuadratureConfig& cfg,
                                       double tail_exponent_hint);

// ĵ_l(x) = x j_l(x).
double riccati_bessel_j(int l, double x);

// Orthonormal spherical harmonic with the Condon-Shortley phase.
cplx spherical_harmonic(int l, int m, double theta, double phi);

struct GaussLegendreRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

// n-point rule on [-1, 1].
GaussLegendreRule gauss_legendre(int n);

}  // namespace reskit::numerics
