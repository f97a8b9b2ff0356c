#include "reskit/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <functional>
#include <numbers>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "reskit/deltashell.hpp"
#include "reskit/error.hpp"
#include "reskit/goldenrule.hpp"
#include "reskit/numerics.hpp"
#include "reskit/plot.hpp"
#include "reskit/spectra_io.hpp"

namespace reskit::cli {

namespace {

using deltashell::ResonancePole;
using deltashell::SystemParams;
using goldenrule::Spectrum;
using io::format_double;
using io::json;
using cplx = std::complex<double>;

constexpr const char* kToolVersion = "0.1.0";
constexpr double kPi = std::numbers::pi;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct CommonOptions {
  double lambda = 10.0;
  double mass = 1.0;
  double hbar = 1.0;
  double radius = 1.0;
  std::string format;
  std::string output;
  std::string manifest;

  SystemParams params() const { return SystemParams{mass, hbar, radius, lambda}; }
};

void add_common(CLI::App* cmd, CommonOptions& opts, const std::string& default_format,
                const std::vector<std::string>& formats) {
  cmd->add_option("--lambda", opts.lambda, "Shell strength (dimensionless)");
  cmd->add_option("--mass", opts.mass, "Particle mass (default 1)");
  cmd->add_option("--hbar", opts.hbar, "Action unit (default 1)");
  cmd->add_option("--radius", opts.radius, "Shell radius a (default 1)");
  opts.format = default_format;
  cmd->add_option("--format", opts.format, "Output format")->check(CLI::IsMember(formats));
  cmd->add_option("--output,-o", opts.output, "Write to this file instead of stdout");
}

numerics::QuadratureConfig quadrature_config() {
  numerics::QuadratureConfig cfg;
  if (const char* env = std::getenv("RESKIT_QUAD_TOL")) {
    try {
      cfg.relative_tolerance = io::parse_double(env);
      cfg.validate();
    } catch (const Error&) {
      throw UsageError(std::string("RESKIT_QUAD_TOL must be a positive number, got '") + env + "'");
    }
  }
  return cfg;
}

cplx parse_complex_arg(const std::string& text, const std::string& flag) {
  const auto comma = text.find(',');
  if (comma == std::string::npos) {
    throw UsageError(flag + " expects re,im");
  }
  try {
    return {io::parse_double(std::string_view(text).substr(0, comma)),
            io::parse_double(std::string_view(text).substr(comma + 1))};
  } catch (const Error&) {
    throw UsageError(flag + " expects re,im with finite numbers, got '" + text + "'");
  }
}

void require_repulsive(const SystemParams& params) {
  if (!(params.lambda > 0)) {
    throw UsageError("--lambda must be > 0: pole search covers the repulsive-shell domain only");
  }
}

ResonancePole select_pole(const SystemParams& params, int n) {
  if (n < 1) {
    throw UsageError("pole index must be >= 1");
  }
  const auto poles = deltashell::find_resonances(params, n);
  for (const auto& p : poles) {
    if (p.index_n == n) {
      return p;
    }
  }
  throw Error(ErrorCode::SeedNonConvergence, "pole n = " + std::to_string(n) + " not found");
}

void emit(const CommonOptions& opts, std::ostream& out, const std::function<void(std::ostream&)>& body) {
  if (opts.output.empty()) {
    body(out);
    return;
  }
  std::ofstream file(opts.output, std::ios::binary);
  if (!file) {
    throw Error(ErrorCode::IoFailure, "cannot open " + opts.output + " for writing");
  }
  body(file);
  if (!file) {
    throw Error(ErrorCode::IoFailure, "failed writing " + opts.output);
  }
}

std::string units_line(const SystemParams& params) {
  return "# units: mass=" + format_double(params.mass) + " hbar=" + format_double(params.hbar) +
         " radius=" + format_double(params.radius_a) + " (E0 = hbar^2/(2 m a^2) = " +
         format_double(params.energy_scale()) + ")";
}

std::string utc_timestamp() {
  std::time_t now = std::time(nullptr);
  if (const char* epoch = std::getenv("SOURCE_DATE_EPOCH")) {
    now = static_cast<std::time_t>(std::strtoll(epoch, nullptr, 10));
  }
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string joined_command_line(int argc, const char* const* argv) {
  std::string out;
  for (int i = 0; i < argc; ++i) {
    out += (i ? " " : "") + std::string(argv[i]);
  }
  return out;
}

void write_manifest(const CommonOptions& opts, const std::vector<io::PoleSummary>& poles,
                    const numerics::QuadratureConfig& cfg, const std::string& command_line) {
  if (opts.manifest.empty()) {
    return;
  }
  io::RunManifest m;
  m.tool_version = kToolVersion;
  m.created_utc = utc_timestamp();
  m.params = opts.params();
  m.pole_summaries = poles;
  m.quadrature_settings = cfg;
  m.command_line = command_line;
  io::write_json(io::to_json(m), std::filesystem::path(opts.manifest));
}

void print_row(std::ostream& out, const std::vector<std::string>& cells) {
  for (std::size_t i = 0; i < cells.size(); ++i) {
    out << cells[i];
    if (i + 1 < cells.size()) {
      out << std::string(cells[i].size() < 28 ? 30 - cells[i].size() : 2, ' ');
    }
  }
  out << '\n';
}

// ---- poles ----

struct PolesOptions {
  CommonOptions common;
  int n_max = 1;
  double tolerance = 1e-12;
};

int cmd_poles(const PolesOptions& o, std::ostream& out, const std::string& command_line) {
  const SystemParams params = o.common.params();
  require_repulsive(params);
  if (o.n_max < 1) {
    throw UsageError("--n-max must be >= 1");
  }
  if (!(o.tolerance > 0)) {
    throw UsageError("--tolerance must be > 0");
  }
  numerics::RootFindConfig rcfg = deltashell::pole_search_config();
  rcfg.residual_tolerance = o.tolerance;
  const auto poles = deltashell::find_resonances(params, o.n_max, rcfg);

  emit(o.common, out, [&](std::ostream& s) {
    if (o.common.format == "json") {
      json arr = json::array();
      for (const auto& p : poles) {
        arr.push_back(io::to_json(p));
      }
      io::write_json(json{{"format_version", io::kFormatVersion}, {"params", io::to_json(params)}, {"poles", arr}},
                     s);
      return;
    }
    s << "# delta-shell s-wave resonance poles, lambda=" << format_double(params.lambda) << '\n'
      << units_line(params) << '\n';
    const std::vector<std::string> head = {"n", "k_re", "k_im", "E_R", "Gamma_R", "residual"};
    if (o.common.format == "csv") {
      s << "n,k_re,k_im,E_R,Gamma_R,residual\n";
    } else {
      print_row(s, head);
    }
    for (const auto& p : poles) {
      std::vector<std::string> row = {std::to_string(p.index_n), format_double(p.k.real()), format_double(p.k.imag()),
                                      format_double(p.E_R),      format_double(p.Gamma_R),  format_double(p.residual)};
      if (o.common.format == "csv") {
        for (std::size_t i = 0; i < row.size(); ++i) {
          s << (i ? "," : "") << row[i];
        }
        s << '\n';
      } else {
        print_row(s, row);
      }
    }
  });
  std::vector<io::PoleSummary> summaries;
  for (const auto& p : poles) {
    summaries.push_back(io::PoleSummary{p.index_n, p.k, p.E_R, p.Gamma_R, 0.0, 0.0, p.residual});
  }
  write_manifest(o.common, summaries, numerics::QuadratureConfig{}, command_line);
  return kExitOk;
}

// ---- spectrum ----

struct GridOptions {
  std::optional<double> emin;
  std::optional<double> emax;
  std::optional<int> points;
};

void add_grid(CLI::App* cmd, GridOptions& g) {
  cmd->add_option("--emin", g.emin, "Lower end of the energy grid");
  cmd->add_option("--emax", g.emax, "Upper end of the energy grid");
  cmd->add_option("--points", g.points, "Number of grid points");
}

std::vector<double> energy_grid(const GridOptions& g, double default_lo, double default_hi) {
  const double lo = g.emin.value_or(default_lo);
  const double hi = g.emax.value_or(default_hi);
  const int points = g.points.value_or(2001);
  if (points < 2 || !(hi > lo) || lo < 0.0) {
    throw UsageError("energy grid needs 0 <= emin < emax and points >= 2");
  }
  return goldenrule::midpoint_grid(lo, hi, points);
}

std::vector<double> linspace(double lo, double hi, int points) {
  if (points < 2) {
    throw UsageError("--points must be >= 2");
  }
  std::vector<double> v(points);
  for (int i = 0; i < points; ++i) {
    v[i] = (i + 1 == points) ? hi : lo + (hi - lo) * i / (points - 1);
  }
  return v;
}

void write_spectrum_output(const CommonOptions& common, const Spectrum& spec, std::ostream& out,
                           const std::vector<io::ExtraColumn>& extra) {
  emit(common, out, [&](std::ostream& s) {
    if (common.format == "json") {
      json j = io::to_json(spec);
      for (const auto& [name, column] : extra) {
        j["columns"][name] = column;
      }
      io::write_json(j, s);
    } else {
      io::write_spectrum_csv(spec, s, extra);
    }
  });
}

struct SpectrumOptions {
  CommonOptions common;
  int n = 1;
  GridOptions grid;
  std::string axis = "E";
  int l = 0;
  int m = 0;
  std::string reduced_me;
  bool normalize = false;
  std::string plot;
};

int cmd_spectrum(const SpectrumOptions& o, std::ostream& out, const std::string& command_line) {
  const SystemParams params = o.common.params();
  require_repulsive(params);
  if (o.l < 0 || std::abs(o.m) > o.l) {
    throw UsageError("need l >= 0 and |m| <= l");
  }
  goldenrule::PartialWave wave{o.l, o.m, std::nullopt};
  if (!o.reduced_me.empty()) {
    wave.reduced_me = parse_complex_arg(o.reduced_me, "--reduced-me");
  } else if (o.l != 0) {
    throw UsageError("--l > 0 needs --reduced-me re,im");
  }
  const ResonancePole pole = select_pole(params, o.n);
  const auto cfg = quadrature_config();

  Spectrum spec;
  std::string x_label;
  if (o.axis == "E") {
    const double lo = std::max(0.0, pole.E_R - 20.0 * pole.Gamma_R);
    spec = goldenrule::spectrum_dE(energy_grid(o.grid, lo, pole.E_R + 20.0 * pole.Gamma_R), pole, params, wave);
    x_label = "E";
  } else {
    if (o.grid.emin || o.grid.emax) {
      throw UsageError("--emin/--emax apply to --axis E only");
    }
    const int points = o.grid.points.value_or(201);
    if (o.axis == "cos") {
      spec = goldenrule::angular_spectrum(goldenrule::Axis::CosTheta, linspace(-1.0, 1.0, points), pole, wave, params,
                                          cfg);
      x_label = "cos(theta)";
    } else {
      spec = goldenrule::angular_spectrum(goldenrule::Axis::Phi, linspace(0.0, 2.0 * kPi, points), pole, wave, params,
                                          cfg);
      x_label = "phi";
    }
  }
  if (o.normalize) {
    spec = goldenrule::normalize(spec);
  }
  write_spectrum_output(o.common, spec, out, {});
  if (!o.plot.empty()) {
    plot::write_svg(std::filesystem::path(o.plot), spec.grid, {{"dGamma/d" + x_label, spec.values}},
                    "decay spectrum, lambda=" + format_double(params.lambda) + ", n=" + std::to_string(o.n), x_label);
  }
  write_manifest(o.common, {io::PoleSummary{pole.index_n, pole.k, pole.E_R, pole.Gamma_R, 0.0, 0.0, pole.residual}},
                 cfg, command_line);
  return kExitOk;
}

// ---- gamma ----

struct GammaOptions {
  CommonOptions common;
  int n = 1;
  std::string route = "both";
};

int cmd_gamma(const GammaOptions& o, std::ostream& out, const std::string& command_line) {
  const SystemParams params = o.common.params();
  require_repulsive(params);
  const ResonancePole pole = select_pole(params, o.n);
  const auto cfg = quadrature_config();

  std::optional<double> energy;
  std::optional<double> momentum;
  if (o.route != "momentum") {
    energy = goldenrule::total_gamma_energy_route(pole, params, cfg);
  }
  if (o.route != "energy") {
    momentum = goldenrule::total_gamma_momentum_route(pole, params, cfg);
  }
  const auto constants = goldenrule::DecayConstants::from(pole.Gamma_R, momentum ? *momentum : *energy);
  std::optional<double> gap;
  if (energy && momentum) {
    gap = std::abs(*energy - *momentum) / std::abs(*momentum);
  }

  emit(o.common, out, [&](std::ostream& s) {
    if (o.common.format == "json") {
      json j{{"format_version", io::kFormatVersion},
             {"index_n", pole.index_n},
             {"params", io::to_json(params)},
             {"decay_constants", io::to_json(constants)},
             {"energy_domain", "E in [0, inf)"}};
      if (energy) j["gamma_energy_route"] = *energy;
      if (momentum) j["gamma_momentum_route"] = *momentum;
      if (gap) j["relative_gap"] = *gap;
      io::write_json(j, s);
      return;
    }
    s << "# decay constants, lambda=" << format_double(params.lambda) << ", n=" << o.n << '\n'
      << units_line(params) << '\n'
      << "# energy integrals run over E in [0, inf)\n";
    print_row(s, {"Gamma_R", format_double(constants.Gamma_R)});
    if (energy) print_row(s, {"Gamma (energy route)", format_double(*energy)});
    if (momentum) print_row(s, {"Gamma (momentum route)", format_double(*momentum)});
    print_row(s, {"Gamma", format_double(constants.Gamma)});
    print_row(s, {"Gamma_bar", format_double(constants.Gamma_bar)});
    if (gap) print_row(s, {"route relative gap", format_double(*gap)});
  });
  write_manifest(o.common, {io::summarize(pole, constants)}, cfg, command_line);
  return kExitOk;
}

// ---- fermi-compare ----

struct FermiOptions {
  CommonOptions common;
  std::vector<double> lambdas = {3.0, 10.0, 30.0, 100.0};
  int n = 1;
};

int cmd_fermi_compare(const FermiOptions& o, std::ostream& out) {
  if (o.lambdas.empty()) {
    throw UsageError("--lambda-list must not be empty");
  }
  for (double l : o.lambdas) {
    if (!(l > 0)) {
      throw UsageError("every lambda in --lambda-list must be > 0");
    }
  }
  const auto cfg = quadrature_config();
  std::vector<goldenrule::FermiComparison> rows;
  for (double l : o.lambdas) {
    SystemParams params = o.common.params();
    params.lambda = l;
    rows.push_back(goldenrule::compare_with_fermi(select_pole(params, o.n), params, cfg));
  }
  bool decreasing = true;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    decreasing = decreasing && rows[i].relative_gap < rows[i - 1].relative_gap;
  }

  emit(o.common, out, [&](std::ostream& s) {
    if (o.common.format == "json") {
      json arr = json::array();
      for (std::size_t i = 0; i < rows.size(); ++i) {
        arr.push_back(json{{"lambda", o.lambdas[i]},
                           {"Gamma_bar_exact", rows[i].Gamma_bar_exact},
                           {"Gamma_bar_fermi", rows[i].Gamma_bar_fermi},
                           {"relative_gap", rows[i].relative_gap}});
      }
      json j{{"format_version", io::kFormatVersion}, {"n", o.n}, {"rows", arr}};
      if (rows.size() > 1) {
        j["strictly_decreasing"] = decreasing;
      }
      io::write_json(j, s);
      return;
    }
    s << "# Gamow vs Fermi total width, n=" << o.n << '\n';
    print_row(s, {"lambda", "Gamma_bar_exact", "Gamma_bar_fermi", "relative_gap"});
    for (std::size_t i = 0; i < rows.size(); ++i) {
      print_row(s, {format_double(o.lambdas[i]), format_double(rows[i].Gamma_bar_exact),
                    format_double(rows[i].Gamma_bar_fermi), format_double(rows[i].relative_gap)});
    }
    if (rows.size() > 1) {
      s << "verdict: relative gap " << (decreasing ? "is" : "is NOT") << " strictly decreasing in lambda\n";
    }
  });
  return kExitOk;
}

// ---- interfere ----

struct InterfereOptions {
  CommonOptions common;
  int n1 = 1;
  int n2 = 2;
  std::string c1 = "1,0";
  std::string c2 = "1,0";
  GridOptions grid;
  bool decompose = false;
  std::string plot;
};

int cmd_interfere(const InterfereOptions& o, std::ostream& out, const std::string& command_line) {
  const SystemParams params = o.common.params();
  require_repulsive(params);
  if (o.n1 == o.n2) {
    throw UsageError("--n1 and --n2 must name distinct poles");
  }
  if (o.n1 < 1 || o.n2 < 1) {
    throw UsageError("pole indices must be >= 1");
  }
  const auto poles = deltashell::find_resonances(params, std::max(o.n1, o.n2));
  auto by_index = [&](int n) {
    return *std::find_if(poles.begin(), poles.end(), [n](const ResonancePole& p) { return p.index_n == n; });
  };
  goldenrule::Superposition sup;
  sup.terms.push_back({parse_complex_arg(o.c1, "--c1"), by_index(o.n1)});
  sup.terms.push_back({parse_complex_arg(o.c2, "--c2"), by_index(o.n2)});
  // Canonical order so swapping the (n, c) pairs gives identical output.
  std::sort(sup.terms.begin(), sup.terms.end(),
            [](const auto& a, const auto& b) { return a.pole.index_n < b.pole.index_n; });

  double lo = 1e300;
  double hi = 0.0;
  for (const auto& t : sup.terms) {
    lo = std::min(lo, std::max(0.0, t.pole.E_R - 20.0 * t.pole.Gamma_R));
    hi = std::max(hi, t.pole.E_R + 20.0 * t.pole.Gamma_R);
  }
  const auto grid = energy_grid(o.grid, lo, hi);
  const auto terms = goldenrule::interference_terms(sup, grid, params);
  const Spectrum spec = goldenrule::interference_spectrum(sup, grid, params);

  std::vector<io::ExtraColumn> extra;
  if (o.decompose) {
    extra = {{"term1", terms.diagonal[0]}, {"term2", terms.diagonal[1]}, {"cross", terms.cross}};
  }
  write_spectrum_output(o.common, spec, out, extra);
  if (!o.plot.empty()) {
    std::vector<plot::Series> series = {{"total", spec.values}};
    if (o.decompose) {
      series.push_back({"term1", terms.diagonal[0]});
      series.push_back({"term2", terms.diagonal[1]});
      series.push_back({"cross", terms.cross});
    }
    plot::write_svg(std::filesystem::path(o.plot), grid, series, "two-resonance decay spectrum", "E");
  }
  std::vector<io::PoleSummary> summaries;
  for (const auto& t : sup.terms) {
    summaries.push_back(io::PoleSummary{t.pole.index_n, t.pole.k, t.pole.E_R, t.pole.Gamma_R, 0.0, 0.0,
                                        t.pole.residual});
  }
  write_manifest(o.common, summaries, numerics::QuadratureConfig{}, command_line);
  return kExitOk;
}

// ---- check ----

struct CheckResult {
  std::string name;
  bool passed = false;
  double value = 0.0;
  double threshold = 0.0;
  std::string detail;
};

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

std::vector<CheckResult> run_checks(const SystemParams& params, int n, const numerics::QuadratureConfig& cfg) {
  std::vector<CheckResult> results;
  auto record = [&](const std::string& name, double threshold, const std::function<double()>& measure) {
    CheckResult r{name, false, 0.0, threshold, ""};
    try {
      r.value = measure();
      r.passed = std::isfinite(r.value) && r.value < threshold;
    } catch (const std::exception& e) {
      r.detail = e.what();
    }
    results.push_back(r);
  };

  std::vector<ResonancePole> poles;
  record("pole_search_completeness", 0.5, [&] {
    poles = deltashell::find_resonances(params, n + 1);
    return 0.0;
  });
  if (poles.empty()) {
    return results;
  }
  const ResonancePole& pole = poles[n - 1];
  const ResonancePole& next = poles[n];

  record("pole_residual", 1e-12, [&] { return std::abs(deltashell::resonance_condition(pole.k, params.lambda)); });
  record("mirror_root_residual", 1e-10,
         [&] { return std::abs(deltashell::resonance_condition(-std::conj(pole.k), params.lambda)); });
  record("regularized_norm", 1e-10,
         [&] { return std::abs(deltashell::closed_form_norm(pole.p_res, pole, params) - 1.0); });
  record("continuation_norm_agreement", 1e-8, [&] {
    const cplx q = pole.p_res.real() * cplx{1.0, 0.3};
    numerics::QuadratureConfig tight = cfg;
    tight.relative_tolerance = std::min(cfg.relative_tolerance, 1e-11);
    const cplx numeric = deltashell::continuation_norm(q, pole, params, tight);
    const cplx closed = deltashell::closed_form_norm(q, pole, params);
    return std::abs(numeric - closed) / std::abs(closed);
  });
  record("route_equivalence", 1e-6, [&] {
    return rel(goldenrule::total_gamma_energy_route(pole, params, cfg),
               goldenrule::total_gamma_momentum_route(pole, params, cfg));
  });
  record("basis_equivalence", 1e-6, [&] { return goldenrule::basis_equivalence_check(pole, params, cfg).relative_gap; });
  record("box_length_invariance", 1e-14, [&] {
    double worst = 0.0;
    const double ref = goldenrule::fermi_golden_rule_box(pole.E_R, pole, {params.radius_a}, params);
    for (double s : {2.0, 10.0}) {
      worst = std::max(worst, rel(goldenrule::fermi_golden_rule_box(pole.E_R, pole, {s * params.radius_a}, params), ref));
    }
    return worst;
  });
  record("spectrum_normalization", 1e-6, [&] {
    const auto spec = goldenrule::normalize(goldenrule::spectrum_dE(goldenrule::default_energy_grid(pole), pole, params));
    return std::abs(goldenrule::trapezoid(spec.grid, spec.values) - 1.0);
  });
  record("interference_degenerate_limit", 1e-12, [&] {
    goldenrule::Superposition sup{{{cplx{1.0, 0.0}, pole}, {cplx{0.0, 0.0}, next}}};
    const auto grid = goldenrule::default_energy_grid(pole);
    const auto mixed = goldenrule::interference_spectrum(sup, grid, params);
    const auto single = goldenrule::spectrum_dE(grid, pole, params);
    double worst = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      worst = std::max(worst, rel(mixed.values[i], single.values[i]));
    }
    return worst;
  });
  return results;
}

struct CheckOptions {
  CommonOptions common;
  int n = 1;
  bool json_out = false;
};

int cmd_check(const CheckOptions& o, std::ostream& out) {
  const SystemParams params = o.common.params();
  require_repulsive(params);
  if (o.n < 1) {
    throw UsageError("--n must be >= 1");
  }
  const auto results = run_checks(params, o.n, quadrature_config());
  const bool all = std::all_of(results.begin(), results.end(), [](const CheckResult& r) { return r.passed; });

  emit(o.common, out, [&](std::ostream& s) {
    if (o.json_out || o.common.format == "json") {
      json arr = json::array();
      for (const auto& r : results) {
        json c{{"name", r.name}, {"status", r.passed ? "pass" : "fail"}, {"value", r.value}, {"threshold", r.threshold}};
        if (!r.detail.empty()) c["detail"] = r.detail;
        arr.push_back(c);
      }
      io::write_json(json{{"format_version", io::kFormatVersion},
                          {"lambda", params.lambda},
                          {"n", o.n},
                          {"passed", all},
                          {"checks", arr}},
                     s);
      return;
    }
    s << "# self-check, lambda=" << format_double(params.lambda) << ", n=" << o.n << '\n';
    print_row(s, {"check", "status", "value", "threshold"});
    for (const auto& r : results) {
      print_row(s, {r.name, r.passed ? "pass" : "FAIL", format_double(r.value), format_double(r.threshold)});
      if (!r.detail.empty()) {
        s << "  " << r.detail << '\n';
      }
    }
    s << (all ? "all checks passed\n" : "some checks FAILED\n");
  });
  return all ? kExitOk : kExitCheckFailed;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"reskit: delta-shell resonance poles and Gamow Golden Rule decay spectra"};
  app.require_subcommand(1);

  PolesOptions poles_opts;
  auto* poles_cmd = app.add_subcommand("poles", "Find resonance poles");
  add_common(poles_cmd, poles_opts.common, "table", {"table", "csv", "json"});
  poles_cmd->add_option("--n-max", poles_opts.n_max, "Number of poles (n = 1..n_max)");
  poles_cmd->add_option("--tolerance", poles_opts.tolerance, "Residual tolerance");
  poles_cmd->add_option("--manifest", poles_opts.common.manifest, "Write a run manifest (JSON)");

  SpectrumOptions spec_opts;
  auto* spec_cmd = app.add_subcommand("spectrum", "Decay spectrum of one pole");
  add_common(spec_cmd, spec_opts.common, "csv", {"csv", "json"});
  spec_cmd->add_option("--n", spec_opts.n, "Pole index");
  add_grid(spec_cmd, spec_opts.grid);
  spec_cmd->add_option("--axis", spec_opts.axis, "E, cos or phi")->check(CLI::IsMember({"E", "cos", "phi"}));
  spec_cmd->add_option("--l", spec_opts.l, "Orbital angular momentum");
  spec_cmd->add_option("--m", spec_opts.m, "Magnetic quantum number");
  spec_cmd->add_option("--reduced-me", spec_opts.reduced_me, "Reduced matrix element re,im (required for l > 0)");
  spec_cmd->add_flag("--normalize", spec_opts.normalize, "Divide by the trapezoid integral");
  spec_cmd->add_option("--plot", spec_opts.plot, "Also write an SVG line plot");
  spec_cmd->add_option("--manifest", spec_opts.common.manifest, "Write a run manifest (JSON)");

  GammaOptions gamma_opts;
  auto* gamma_cmd = app.add_subcommand("gamma", "Decay constants of one pole");
  add_common(gamma_cmd, gamma_opts.common, "table", {"table", "json"});
  gamma_cmd->add_option("--n", gamma_opts.n, "Pole index");
  gamma_cmd->add_option("--route", gamma_opts.route, "energy, momentum or both")
      ->check(CLI::IsMember({"energy", "momentum", "both"}));
  gamma_cmd->add_option("--manifest", gamma_opts.common.manifest, "Write a run manifest (JSON)");

  FermiOptions fermi_opts;
  auto* fermi_cmd = app.add_subcommand("fermi-compare", "Gamow vs Fermi total widths over lambda");
  add_common(fermi_cmd, fermi_opts.common, "table", {"table", "json"});
  fermi_cmd->add_option("--lambda-list", fermi_opts.lambdas, "Comma-separated lambdas")->delimiter(',');
  fermi_cmd->add_option("--n", fermi_opts.n, "Pole index");

  InterfereOptions inter_opts;
  auto* inter_cmd = app.add_subcommand("interfere", "Two-resonance spectrum with interference");
  add_common(inter_cmd, inter_opts.common, "csv", {"csv", "json"});
  inter_cmd->add_option("--n1", inter_opts.n1, "First pole index");
  inter_cmd->add_option("--n2", inter_opts.n2, "Second pole index");
  inter_cmd->add_option("--c1", inter_opts.c1, "First coefficient re,im");
  inter_cmd->add_option("--c2", inter_opts.c2, "Second coefficient re,im");
  add_grid(inter_cmd, inter_opts.grid);
  inter_cmd->add_flag("--decompose", inter_opts.decompose, "Add term1, term2 and cross columns");
  inter_cmd->add_option("--plot", inter_opts.plot, "Also write an SVG line plot");
  inter_cmd->add_option("--manifest", inter_opts.common.manifest, "Write a run manifest (JSON)");

  CheckOptions check_opts;
  auto* check_cmd = app.add_subcommand("check", "Run the built-in invariant checks");
  add_common(check_cmd, check_opts.common, "table", {"table", "json"});
  check_cmd->add_option("--n", check_opts.n, "Pole index");
  check_cmd->add_flag("--json", check_opts.json_out, "Machine-readable report");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  const std::string command_line = joined_command_line(argc, argv);
  try {
    if (*poles_cmd) return cmd_poles(poles_opts, out, command_line);
    if (*spec_cmd) return cmd_spectrum(spec_opts, out, command_line);
    if (*gamma_cmd) return cmd_gamma(gamma_opts, out, command_line);
    if (*fermi_cmd) return cmd_fermi_compare(fermi_opts, out);
    if (*inter_cmd) return cmd_interfere(inter_opts, out, command_line);
    if (*check_cmd) return cmd_check(check_opts, out);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    if (is_usage_error(e.code())) {
      err << "usage error: " << e.what() << '\n';
      return kExitUsage;
    }
    const bool io = e.code() == ErrorCode::IoFailure || e.code() == ErrorCode::ParseError;
    err << (io ? "error: " : "numeric failure: ") << e.what() << '\n';
    if (e.code() == ErrorCode::CompletenessMismatch) {
      err << "the argument-principle count disagrees with the poles found; widen the search or check lambda\n";
    }
    return kExitNumeric;
  }
  return kExitUsage;
}

}  // namespace reskit::cli
