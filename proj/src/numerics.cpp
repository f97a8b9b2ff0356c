#include "reskit/numerics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <queue>
#include <string>

#include "reskit/error.hpp"

namespace reskit::numerics {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

bool finite(cplx z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

// Kronrod 15-point abscissae and weights; every odd abscissa is also a
// 7-point Gauss node.
constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  double lo;
  double hi;
  cplx value;
  double error;
};

struct ByError {
  bool operator()(const Panel& a, const Panel& b) const { return a.error < b.error; }
};

double quadpack_error(double resk, double resg, double resabs, double resasc, double half) {
  double err = std::abs((resk - resg) * half);
  if (resasc != 0.0 && err != 0.0) {
    err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
  }
  if (resabs > std::numeric_limits<double>::min() / (50.0 * kEps)) {
    err = std::max(50.0 * kEps * resabs, err);
  }
  return err;
}

Panel gauss_kronrod(const RealToComplexFn& f, double lo, double hi) {
  const double center = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);

  std::array<cplx, 15> fv;
  auto sample = [&](double x) {
    cplx v = f(x);
    if (!finite(v)) {
      throw Error(ErrorCode::NonFiniteSample, "integrand is not finite at x = " + std::to_string(x));
    }
    return v;
  };
  fv[7] = sample(center);
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kXgk[j];
    fv[j] = sample(center - dx);
    fv[14 - j] = sample(center + dx);
  }

  cplx resk = kWgk[7] * fv[7];
  cplx resg = kWg[3] * fv[7];
  for (int j = 0; j < 7; ++j) {
    resk += kWgk[j] * (fv[j] + fv[14 - j]);
  }
  for (int j = 0; j < 3; ++j) {
    const int node = 2 * j + 1;
    resg += kWg[j] * (fv[node] + fv[14 - node]);
  }

  // Error estimate per component, combined in quadrature.
  auto component_error = [&](auto part) {
    const double mean = 0.5 * part(resk);
    double resabs = kWgk[7] * std::abs(part(fv[7]));
    double resasc = kWgk[7] * std::abs(part(fv[7]) - mean);
    for (int j = 0; j < 7; ++j) {
      resabs += kWgk[j] * (std::abs(part(fv[j])) + std::abs(part(fv[14 - j])));
      resasc += kWgk[j] * (std::abs(part(fv[j]) - mean) + std::abs(part(fv[14 - j]) - mean));
    }
    const double h = std::abs(half);
    return quadpack_error(part(resk), part(resg), resabs * h, resasc * h, h);
  };
  const double err_re = component_error([](cplx z) { return z.real(); });
  const double err_im = component_error([](cplx z) { return z.imag(); });

  return Panel{lo, hi, resk * half, std::hypot(err_re, err_im)};
}

double tolerance_for(const QuadratureConfig& cfg, cplx value) {
  return std::max(cfg.absolute_tolerance, cfg.relative_tolerance * std::abs(value));
}

// Splits [lo, hi] so no panel is wider than the configured guard.
void append_initial_panels(std::vector<std::pair<double, double>>& out, double lo, double hi,
                           const QuadratureConfig& cfg) {
  int pieces = 1;
  if (cfg.max_panel_width) {
    const double needed = std::ceil((hi - lo) / *cfg.max_panel_width);
    if (!(needed <= kMaxGuardPanels)) {
      throw Error(ErrorCode::SubdivisionLimit, "oscillation guard needs more than " +
                                                   std::to_string(kMaxGuardPanels) + " panels");
    }
    pieces = std::max(1, static_cast<int>(needed));
  }
  const double width = (hi - lo) / pieces;
  for (int i = 0; i < pieces; ++i) {
    const double a = lo + i * width;
    const double b = (i + 1 == pieces) ? hi : lo + (i + 1) * width;
    out.emplace_back(a, b);
  }
}

IntegralResult adaptive(const RealToComplexFn& f, const std::vector<std::pair<double, double>>& initial,
                        const QuadratureConfig& cfg) {
  if (initial.size() > static_cast<std::size_t>(kMaxGuardPanels)) {
    throw Error(ErrorCode::SubdivisionLimit, "oscillation guard needs " + std::to_string(initial.size()) +
                                                 " panels, above " + std::to_string(kMaxGuardPanels));
  }
  std::priority_queue<Panel, std::vector<Panel>, ByError> active;
  std::vector<Panel> frozen;
  cplx total{0.0, 0.0};
  double total_error = 0.0;
  for (const auto& [a, b] : initial) {
    Panel p = gauss_kronrod(f, a, b);
    total += p.value;
    total_error += p.error;
    active.push(p);
  }
  int bisections = 0;

  while (!active.empty() && total_error > tolerance_for(cfg, total)) {
    Panel worst = active.top();
    active.pop();
    const double mid = 0.5 * (worst.lo + worst.hi);
    const double scale = std::max(std::abs(worst.lo), std::abs(worst.hi));
    if (!(mid > worst.lo && mid < worst.hi) || (worst.hi - worst.lo) < 64.0 * kEps * scale) {
      frozen.push_back(worst);
      continue;
    }
    if (bisections + 1 > cfg.max_subdivisions) {
      throw Error(ErrorCode::SubdivisionLimit,
                  "reached " + std::to_string(cfg.max_subdivisions) +
                      " subdivisions; error estimate " + std::to_string(total_error));
    }
    Panel left = gauss_kronrod(f, worst.lo, mid);
    Panel right = gauss_kronrod(f, mid, worst.hi);
    total += left.value + right.value - worst.value;
    total_error += left.error + right.error - worst.error;
    active.push(left);
    active.push(right);
    ++bisections;
  }

  std::vector<Panel> all = std::move(frozen);
  while (!active.empty()) {
    all.push_back(active.top());
    active.pop();
  }
  // Fixed summation order, independent of heap history.
  std::sort(all.begin(), all.end(), [](const Panel& a, const Panel& b) { return a.lo < b.lo; });
  IntegralResult result;
  for (const Panel& p : all) {
    result.value += p.value;
    result.error_estimate += p.error;
  }
  result.subdivisions_used = bisections;
  if (result.error_estimate > tolerance_for(cfg, result.value)) {
    throw Error(ErrorCode::SubdivisionLimit,
                "panels reached roundoff width; error estimate " + std::to_string(result.error_estimate));
  }
  return result;
}

}  // namespace

void RootFindConfig::validate() const {
  if (max_iterations < 1 || !(residual_tolerance > 0) || !(step_tolerance > 0) || !(dedupe_radius > 0) ||
      !(roundoff_floor_factor >= 0)) {
    throw Error(ErrorCode::InvalidArgument, "RootFindConfig needs positive tolerances and max_iterations >= 1");
  }
}

void QuadratureConfig::validate() const {
  if (!(relative_tolerance > 0) || !(absolute_tolerance > 0) || max_subdivisions < 1) {
    throw Error(ErrorCode::InvalidArgument,
                "QuadratureConfig needs positive tolerances and max_subdivisions >= 1");
  }
  if (max_panel_width && !(*max_panel_width > 0)) {
    throw Error(ErrorCode::InvalidArgument, "max_panel_width must be positive");
  }
}

IntegralResult& IntegralResult::operator+=(const IntegralResult& other) {
  value += other.value;
  error_estimate += other.error_estimate;
  subdivisions_used += other.subdivisions_used;
  return *this;
}

cplx newton_root(const ComplexFn& f, const ComplexFn& df, cplx seed, const RootFindConfig& cfg) {
  cfg.validate();
  if (!finite(seed)) {
    throw Error(ErrorCode::InvalidArgument, "Newton seed is not finite");
  }
  cplx z = seed;
  for (int it = 0; it < cfg.max_iterations; ++it) {
    const cplx fz = f(z);
    const cplx dfz = df(z);
    if (!finite(fz) || !finite(dfz)) {
      throw Error(ErrorCode::NonConvergence, "non-finite function value during Newton iteration");
    }
    const double step_limit = std::max(cfg.step_tolerance * std::max(1.0, std::abs(z)), 8.0 * kEps * std::abs(z));
    if (fz == cplx{0.0, 0.0}) {
      return z;
    }
    if (std::abs(dfz) < 1e8 * std::numeric_limits<double>::min()) {
      throw Error(ErrorCode::DerivativeVanished, "|f'(z)| vanished during Newton iteration");
    }
    const cplx step = fz / dfz;
    if (!finite(step)) {
      throw Error(ErrorCode::DerivativeVanished, "Newton step overflowed");
    }
    const bool small_step = std::abs(step) <= step_limit;
    if (small_step && std::abs(fz) < cfg.residual_tolerance) {
      return z;
    }
    if (small_step && cfg.roundoff_floor_factor > 0.0) {
      const double floor = cfg.roundoff_floor_factor * kEps * (1.0 + std::abs(z) * std::abs(dfz));
      if (std::abs(fz) <= floor) {
        return z;
      }
    }
    z -= step;
  }
  throw Error(ErrorCode::NonConvergence,
              "Newton did not converge in " + std::to_string(cfg.max_iterations) + " iterations");
}

std::vector<Root> dedupe_roots(std::span<const Root> roots, double radius) {
  std::vector<Root> kept;
  for (const Root& r : roots) {
    auto match = std::find_if(kept.begin(), kept.end(),
                              [&](const Root& k) { return std::abs(k.z - r.z) < radius; });
    if (match == kept.end()) {
      kept.push_back(r);
    } else if (r.residual < match->residual) {
      *match = r;
    }
  }
  return kept;
}

ZeroCount count_zeros(const ComplexFn& f, const ComplexFn& df, const Rectangle& rect, const QuadratureConfig& cfg,
                      std::span<const cplx> hints) {
  cfg.validate();
  if (!(rect.re_min < rect.re_max) || !(rect.im_min < rect.im_max)) {
    throw Error(ErrorCode::InvalidArgument, "degenerate rectangle");
  }
  const std::array<cplx, 5> corners = {cplx{rect.re_min, rect.im_min}, cplx{rect.re_max, rect.im_min},
                                       cplx{rect.re_max, rect.im_max}, cplx{rect.re_min, rect.im_max},
                                       cplx{rect.re_min, rect.im_min}};
  cplx contour{0.0, 0.0};
  for (int e = 0; e < 4; ++e) {
    const cplx start = corners[e];
    const cplx delta = corners[e + 1] - start;
    const double length = std::abs(delta);
    const cplx dir = delta / length;

    std::vector<double> cuts = {0.0, length};
    for (cplx h : hints) {
      // Position along the edge and distance from it.
      const cplx rel = (h - start) / dir;
      const double t = rel.real();
      const double d = std::max(std::abs(rel.imag()), 1e-300);
      for (double offset : {0.0, 1.0, 10.0, 100.0, 1000.0}) {
        for (double sign : {-1.0, 1.0}) {
          const double c = t + sign * offset * d;
          if (c > 0.0 && c < length) {
            cuts.push_back(c);
          }
        }
      }
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end(),
                           [&](double a, double b) { return b - a <= 16.0 * kEps * length; }),
               cuts.end());
    cuts.back() = length;

    auto integrand = [&](double t) -> cplx {
      const cplx z = start + t * dir;
      const cplx fz = f(z);
      const cplx dfz = df(z);
      if (std::abs(fz) <= 64.0 * kEps * (1.0 + std::abs(z) * std::abs(dfz))) {
        throw Error(ErrorCode::BoundaryZero, "f vanishes on the contour near z = (" + std::to_string(z.real()) +
                                                 ", " + std::to_string(z.imag()) + ")");
      }
      return dfz / fz * dir;
    };
    QuadratureConfig edge_cfg = cfg;
    edge_cfg.absolute_tolerance = std::max(cfg.absolute_tolerance, 1e-10);
    try {
      contour += integrate_piecewise(integrand, cuts, edge_cfg).value;
    } catch (const Error& err) {
      if (err.code() == ErrorCode::NonFiniteSample) {
        throw Error(ErrorCode::BoundaryZero, err.what());
      }
      throw;
    }
  }
  ZeroCount out;
  out.winding = contour / cplx{0.0, 2.0 * std::numbers::pi};
  out.count = static_cast<int>(std::lround(out.winding.real()));
  out.rounding_distance = std::abs(out.winding - cplx{static_cast<double>(out.count), 0.0});
  if (out.rounding_distance > 0.1) {
    throw Error(ErrorCode::NonIntegerWinding,
                "winding number " + std::to_string(out.winding.real()) + " is not near an integer");
  }
  return out;
}

ZeroCount count_zeros(const ComplexFn& f, const Rectangle& rect, const QuadratureConfig& cfg) {
  auto derivative = [&f](cplx z) {
    const double h = 1e-3 * std::max(1.0, std::abs(z));
    const cplx ih{0.0, h};
    return (f(z + h) - f(z - h) - cplx{0.0, 1.0} * (f(z + ih) - f(z - ih))) / (4.0 * h);
  };
  return count_zeros(f, derivative, rect, cfg);
}

IntegralResult integrate(const RealToComplexFn& f, double lo, double hi, const QuadratureConfig& cfg) {
  const std::array<double, 2> points = {lo, hi};
  return integrate_piecewise(f, points, cfg);
}

IntegralResult integrate_piecewise(const RealToComplexFn& f, std::span<const double> points,
                                   const QuadratureConfig& cfg) {
  cfg.validate();
  if (points.size() < 2) {
    throw Error(ErrorCode::InvalidArgument, "need at least two integration limits");
  }
  std::vector<std::pair<double, double>> initial;
  for (std::size_t i = 0; i + 1 < points.size(); ++i) {
    if (!std::isfinite(points[i]) || !std::isfinite(points[i + 1]) || !(points[i] < points[i + 1])) {
      throw Error(ErrorCode::InvalidArgument, "integration limits must be finite and strictly increasing");
    }
    append_initial_panels(initial, points[i], points[i + 1], cfg);
  }
  return adaptive(f, initial, cfg);
}

IntegralResult integrate_semi_infinite(const RealToComplexFn& f, double lo, const QuadratureConfig& cfg,
                                       double tail_exponent_hint) {
  cfg.validate();
  if (!(tail_exponent_hint > 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "tail_exponent_hint must exceed 1");
  }
  if (!std::isfinite(lo)) {
    throw Error(ErrorCode::InvalidArgument, "lower limit must be finite");
  }
  constexpr int kMaxWindows = 40;
  constexpr int kEnvelopeSamples = 33;
  const double width = std::max(1.0, lo);

  IntegralResult total;
  double left = lo;
  for (int n = 0; n < kMaxWindows; ++n) {
    const double right = lo + std::ldexp(width, n);
    const IntegralResult window = integrate(f, left, right, cfg);
    total += window;

    // Power-law envelope from the back half of the window.
    double envelope = 0.0;
    for (int s = 0; s < kEnvelopeSamples; ++s) {
      const double x = right - 0.5 * (right - left) * s / (kEnvelopeSamples - 1);
      const cplx v = f(x);
      if (!finite(v)) {
        throw Error(ErrorCode::NonFiniteSample, "integrand is not finite at x = " + std::to_string(x));
      }
      envelope = std::max(envelope, std::abs(v) * std::pow(x, tail_exponent_hint));
    }
    const double tail = envelope * std::pow(right, 1.0 - tail_exponent_hint) / (tail_exponent_hint - 1.0);
    const double tol = tolerance_for(cfg, total.value);
    if (n > 0 && std::abs(window.value) <= tol && tail <= tol) {
      total.error_estimate += tail;
      return total;
    }
    left = right;
  }
  throw Error(ErrorCode::TailNonConvergent,
              "tail did not fall below tolerance within " + std::to_string(kMaxWindows) + " windows");
}

double riccati_bessel_j(int l, double x) {
  if (l < 0) {
    throw Error(ErrorCode::InvalidArgument, "Riccati-Bessel order must be nonnegative");
  }
  if (x == 0.0) {
    return 0.0;
  }
  if (l == 0) {
    return std::sin(x);
  }
  const double s = std::sin(x);
  const double c = std::cos(x);
  if (std::abs(x) > l) {
    // Upward recurrence is stable once x exceeds the order.
    double prev = s;
    double cur = s / x - c;
    for (int n = 1; n < l; ++n) {
      const double next = (2 * n + 1) / x * cur - prev;
      prev = cur;
      cur = next;
    }
    return cur;
  }
  // Miller's downward recurrence, normalised against the larger of ĵ₀, ĵ₁.
  const int start = l + 16 + static_cast<int>(std::sqrt(40.0 * (l + 1)));
  double upper = 0.0;
  double cur = 1e-300;
  double result = 0.0;
  double j0 = 0.0;
  double j1 = 0.0;
  for (int n = start; n >= 1; --n) {
    // ĵ_{n-1} = (2n+1)/x ĵ_n − ĵ_{n+1}
    const double lower = (2 * n + 1) / x * cur - upper;
    upper = cur;
    cur = lower;
    if (std::abs(cur) > 1e250) {
      upper *= 1e-250;
      cur *= 1e-250;
      result *= 1e-250;
    }
    if (n - 1 == l) {
      result = cur;
    }
    if (n == 1) {
      j0 = cur;
      j1 = upper;
    }
  }
  const double exact_j1 = s / x - c;
  if (std::abs(s) >= std::abs(exact_j1)) {
    return result * (s / j0);
  }
  return result * (exact_j1 / j1);
}

cplx spherical_harmonic(int l, int m, double theta, double phi) {
  if (l < 0 || std::abs(m) > l) {
    throw Error(ErrorCode::InvalidQuantumNumbers,
                "need |m| <= l, got l = " + std::to_string(l) + ", m = " + std::to_string(m));
  }
  const int am = std::abs(m);
  const double x = std::cos(theta);
  const double sin_theta = std::sin(theta);

  // Fully normalised associated Legendre functions by the standard
  // three-term recurrence in l at fixed m.
  double pmm = 1.0 / std::sqrt(4.0 * std::numbers::pi);
  for (int i = 1; i <= am; ++i) {
    pmm *= -std::sqrt((2.0 * i + 1.0) / (2.0 * i)) * sin_theta;
  }
  double plm = pmm;
  if (l > am) {
    double prev = pmm;
    double cur = x * std::sqrt(2.0 * am + 3.0) * pmm;
    double a_prev = std::sqrt(2.0 * am + 3.0);
    for (int ll = am + 2; ll <= l; ++ll) {
      const double a = std::sqrt((4.0 * ll * ll - 1.0) / (static_cast<double>(ll) * ll - static_cast<double>(am) * am));
      const double next = a * (x * cur - prev / a_prev);
      prev = cur;
      cur = next;
      a_prev = a;
    }
    plm = cur;
  }
  const cplx phase = std::polar(1.0, am * phi);
  const cplx y = plm * phase;
  if (m >= 0) {
    return y;
  }
  return (am % 2 == 0 ? 1.0 : -1.0) * std::conj(y);
}

GaussLegendreRule gauss_legendre(int n) {
  if (n < 1) {
    throw Error(ErrorCode::InvalidArgument, "Gauss-Legendre rule needs n >= 1");
  }
  GaussLegendreRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) {
        p1 = x;
        p0 = 1.0;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) {
        break;
      }
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  return rule;
}

}  // namespace reskit::numerics
