#pragma once

// Independent reference computations for the tests. Nothing here calls
// into the library: root locations come from a brute-force grid scan,
// integrals from composite Simpson rules on fine uniform grids.

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <vector>

namespace oracle {

using cplx = std::complex<double>;
constexpr double pi = std::numbers::pi;

// 1 + (λ/k) e^{ik} sin k, written via exponentials only.
inline cplx pole_function(cplx k, double lambda) {
  const cplx i{0.0, 1.0};
  return 1.0 + lambda / k * (std::exp(2.0 * i * k) - 1.0) / (2.0 * i);
}

// Local minima of |f| on an nx × ny grid, each polished by secant steps.
inline std::vector<cplx> scan_roots(const std::function<cplx(cplx)>& f, double re_lo, double re_hi, double im_lo,
                                    double im_hi, int nx = 2000, int ny = 2000) {
  const double dx = (re_hi - re_lo) / (nx - 1);
  const double dy = (im_hi - im_lo) / (ny - 1);
  std::vector<double> mag(static_cast<std::size_t>(nx) * ny);
  auto at = [&](int ix, int iy) -> double& { return mag[static_cast<std::size_t>(iy) * nx + ix]; };
  for (int iy = 0; iy < ny; ++iy) {
    for (int ix = 0; ix < nx; ++ix) {
      at(ix, iy) = std::abs(f({re_lo + ix * dx, im_lo + iy * dy}));
    }
  }
  std::vector<cplx> roots;
  for (int iy = 1; iy + 1 < ny; ++iy) {
    for (int ix = 1; ix + 1 < nx; ++ix) {
      const double v = at(ix, iy);
      bool minimum = true;
      for (int sy = -1; sy <= 1 && minimum; ++sy) {
        for (int sx = -1; sx <= 1; ++sx) {
          if ((sx || sy) && at(ix + sx, iy + sy) <= v) {
            minimum = false;
            break;
          }
        }
      }
      if (!minimum) {
        continue;
      }
      cplx z0{re_lo + ix * dx, im_lo + iy * dy};
      cplx z1 = z0 + cplx{0.25 * dx, 0.25 * dy};
      cplx f0 = f(z0);
      cplx f1 = f(z1);
      for (int it = 0; it < 60 && std::abs(f1) > 0.0 && f1 != f0; ++it) {
        const cplx z2 = z1 - f1 * (z1 - z0) / (f1 - f0);
        z0 = z1;
        f0 = f1;
        z1 = z2;
        f1 = f(z1);
        if (std::abs(z1 - z0) < 1e-15 * std::abs(z1)) {
          break;
        }
      }
      if (std::abs(f1) < 1e-8) {
        bool fresh = true;
        for (const cplx& r : roots) {
          fresh = fresh && std::abs(r - z1) > 1e-6;
        }
        if (fresh) {
          roots.push_back(z1);
        }
      }
    }
  }
  return roots;
}

// Composite Simpson on [a, b] with n (even) intervals.
inline cplx simpson(const std::function<cplx(double)>& f, double a, double b, int n) {
  if (n % 2) {
    ++n;
  }
  const double h = (b - a) / n;
  cplx sum = f(a) + f(b);
  for (int i = 1; i < n; ++i) {
    sum += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
  }
  return sum * h / 3.0;
}

// Decay constant Γ = ∫₀^∞ |û₀(κ)|² dκ in units m = ħ = a = 1, from the pole
// alone: N² = 2λ/(1 + λ − 2ik), û₀ ∝ N √(2/π) k sin κ /(κ² − k²).
// The κ⁻⁴ tail beyond K is added from its sin² average.
inline double gamma_decay_constant(cplx k, double lambda, double K = 4000.0, int n = 4'000'000) {
  const cplx N = std::sqrt(2.0 * lambda / (1.0 + lambda - cplx{0.0, 2.0} * k));
  const cplx c = N * std::sqrt(2.0 / pi) * k;
  auto g = [&](double x) { return cplx{std::norm(c * std::sin(x) / (x * x - k * k)), 0.0}; };
  // Resolve the Lorentzian peak separately: its width is |Im k|.
  const double w = std::abs(k.imag());
  const double a = std::max(0.0, k.real() - 50.0 * w);
  const double b = k.real() + 50.0 * w;
  const double body =
      (simpson(g, 0.0, a, n / 4) + simpson(g, a, b, 200'000) + simpson(g, b, K, n)).real();
  const double tail = 0.5 * std::norm(c) / (3.0 * K * K * K);
  return body + tail;
}

// ∫₀^∞ û₀(κ; q)² dκ for Im q > 0, same units, with N taken at the pole k.
inline cplx continuation_integral(cplx q, cplx k, double lambda, double K = 3000.0, int n = 3'000'000) {
  const cplx N = std::sqrt(2.0 * lambda / (1.0 + lambda - cplx{0.0, 2.0} * k));
  const cplx c = N * std::sqrt(2.0 / pi) * q;
  auto g = [&](double x) {
    const cplx u = c * std::sin(x) / (x * x - q * q);
    return u * u;
  };
  const cplx tail = 0.5 * c * c / (3.0 * K * K * K);
  return simpson(g, 0.0, K, n) + tail;
}

// |Y_l^m(θ, φ)|² from std::sph_legendre (which carries the normalization).
inline double ylm_norm_sq(int l, int m, double theta) {
  const double y = std::sph_legendre(static_cast<unsigned>(l), static_cast<unsigned>(std::abs(m)), theta);
  return y * y;
}

}  // namespace oracle
