#include "reskit/spectra_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "reskit/error.hpp"

namespace reskit::io {

namespace {

using goldenrule::Spectrum;

[[noreturn]] void parse_fail(std::size_t line, std::size_t column, const std::string& what) {
  throw Error(ErrorCode::ParseError,
              "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + what);
}

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = text.find(sep, start);
    if (pos == std::string_view::npos) {
      out.push_back(text.substr(start));
      return out;
    }
    out.push_back(text.substr(start, pos - start));
    start = pos + 1;
  }
}

double finite_number(const json& j, const char* key) {
  if (!j.contains(key)) {
    throw Error(ErrorCode::ParseError, std::string("missing field '") + key + "'");
  }
  const json& v = j.at(key);
  if (!v.is_number()) {
    throw Error(ErrorCode::ParseError, std::string("field '") + key + "' is not a finite number");
  }
  const double d = v.get<double>();
  if (!std::isfinite(d)) {
    throw Error(ErrorCode::ParseError, std::string("field '") + key + "' is not finite");
  }
  return d;
}

void require_finite(double v, const char* what) {
  if (!std::isfinite(v)) {
    throw Error(ErrorCode::InvalidArgument, std::string(what) + " is not finite");
  }
}

void check_version(const json& j) {
  if (!j.contains("format_version") || !j.at("format_version").is_number_integer() ||
      j.at("format_version").get<int>() != kFormatVersion) {
    throw Error(ErrorCode::ParseError, "unsupported or missing format_version");
  }
}

std::string pole_list(const std::vector<goldenrule::PoleMeta>& meta) {
  std::string out;
  for (std::size_t i = 0; i < meta.size(); ++i) {
    if (i > 0) {
      out += ';';
    }
    out += format_double(meta[i].E_R) + ":" + format_double(meta[i].Gamma_R);
  }
  return out;
}

}  // namespace

std::string format_double(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

double parse_double(std::string_view text) {
  double value = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  if (!text.empty() && *first == '+') {
    ++first;
  }
  const auto res = std::from_chars(first, last, value);
  if (res.ec != std::errc{} || res.ptr != last || text.empty()) {
    throw Error(ErrorCode::ParseError, "not a number: '" + std::string(text) + "'");
  }
  if (!std::isfinite(value)) {
    throw Error(ErrorCode::ParseError, "non-finite number: '" + std::string(text) + "'");
  }
  return value;
}

void write_spectrum_csv(const Spectrum& spec, std::ostream& out, const std::vector<ExtraColumn>& extra) {
  spec.validate();
  for (const auto& [name, column] : extra) {
    if (column.size() != spec.grid.size()) {
      throw Error(ErrorCode::InvalidArgument, "extra column '" + name + "' has the wrong length");
    }
  }
  out << "# axis=" << goldenrule::to_string(spec.axis) << " normalized=" << (spec.normalized ? "true" : "false")
      << " poles=" << pole_list(spec.pole_meta) << " total=" << (spec.total ? format_double(*spec.total) : "none")
      << " format_version=" << kFormatVersion << '\n';
  out << "x,value";
  for (const auto& column : extra) {
    out << ',' << column.first;
  }
  out << '\n';
  for (std::size_t i = 0; i < spec.grid.size(); ++i) {
    out << format_double(spec.grid[i]) << ',' << format_double(spec.values[i]);
    for (const auto& column : extra) {
      out << ',' << format_double(column.second[i]);
    }
    out << '\n';
  }
  if (!out) {
    throw Error(ErrorCode::IoFailure, "failed writing spectrum CSV");
  }
}

void write_spectrum_csv(const Spectrum& spec, const std::filesystem::path& path, const std::vector<ExtraColumn>& extra) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw Error(ErrorCode::IoFailure, "cannot open " + path.string() + " for writing");
  }
  write_spectrum_csv(spec, out, extra);
}

Spectrum read_spectrum_csv(std::istream& in) {
  Spectrum spec;
  std::string line;
  std::size_t line_no = 0;

  if (!std::getline(in, line)) {
    parse_fail(1, 1, "missing header line");
  }
  ++line_no;
  if (line.rfind("# ", 0) != 0) {
    parse_fail(line_no, 1, "header must start with '# '");
  }
  bool seen_axis = false;
  bool seen_normalized = false;
  bool seen_version = false;
  std::size_t column = 3;
  for (std::string_view token : split(std::string_view(line).substr(2), ' ')) {
    const std::size_t eq = token.find('=');
    if (eq == std::string_view::npos) {
      parse_fail(line_no, column, "expected key=value");
    }
    const std::string_view key = token.substr(0, eq);
    const std::string_view value = token.substr(eq + 1);
    try {
      if (key == "axis") {
        spec.axis = goldenrule::axis_from_string(value);
        seen_axis = true;
      } else if (key == "normalized") {
        if (value != "true" && value != "false") {
          parse_fail(line_no, column, "normalized must be true or false");
        }
        spec.normalized = value == "true";
        seen_normalized = true;
      } else if (key == "poles") {
        if (!value.empty()) {
          for (std::string_view pair : split(value, ';')) {
            const auto parts = split(pair, ':');
            if (parts.size() != 2) {
              parse_fail(line_no, column, "pole entries are E_R:Gamma_R");
            }
            spec.pole_meta.push_back({parse_double(parts[0]), parse_double(parts[1])});
          }
        }
      } else if (key == "total") {
        if (value != "none") {
          spec.total = parse_double(value);
        }
      } else if (key == "format_version") {
        if (value != std::to_string(kFormatVersion)) {
          parse_fail(line_no, column, "unsupported format_version");
        }
        seen_version = true;
      } else {
        parse_fail(line_no, column, "unknown header key '" + std::string(key) + "'");
      }
    } catch (const Error& err) {
      if (err.code() == ErrorCode::ParseError && std::string_view(err.what()).find("line ") != std::string_view::npos) {
        throw;
      }
      parse_fail(line_no, column, err.what());
    }
    column += token.size() + 1;
  }
  if (!seen_axis || !seen_normalized || !seen_version) {
    parse_fail(line_no, 1, "header lacks axis, normalized or format_version");
  }

  if (!std::getline(in, line)) {
    parse_fail(2, 1, "missing column header");
  }
  ++line_no;
  if (line.rfind("x,value", 0) != 0) {
    parse_fail(line_no, 1, "column header must begin with 'x,value'");
  }
  const std::size_t columns = split(line, ',').size();

  while (std::getline(in, line)) {
    ++line_no;
    const auto fields = split(line, ',');
    if (fields.size() != columns) {
      parse_fail(line_no, 1,
                 "row has " + std::to_string(fields.size()) + " fields, expected " + std::to_string(columns));
    }
    std::size_t col = 1;
    double values[2] = {0.0, 0.0};
    for (std::size_t f = 0; f < 2; ++f) {
      try {
        values[f] = parse_double(fields[f]);
      } catch (const Error& err) {
        parse_fail(line_no, col, err.what());
      }
      col += fields[f].size() + 1;
    }
    spec.grid.push_back(values[0]);
    spec.values.push_back(values[1]);
  }
  try {
    spec.validate();
  } catch (const Error& err) {
    throw Error(ErrorCode::ParseError, std::string("spectrum rows are invalid: ") + err.what());
  }
  return spec;
}

Spectrum read_spectrum_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::IoFailure, "cannot open " + path.string());
  }
  return read_spectrum_csv(in);
}

json to_json(cplx z) {
  require_finite(z.real(), "complex real part");
  require_finite(z.imag(), "complex imaginary part");
  return json{{"re", z.real()}, {"im", z.imag()}};
}

json to_json(const deltashell::SystemParams& params) {
  params.validate();
  return json{{"mass", params.mass}, {"hbar", params.hbar}, {"radius_a", params.radius_a}, {"lambda", params.lambda}};
}

json to_json(const deltashell::ResonancePole& pole) {
  require_finite(pole.E_R, "E_R");
  require_finite(pole.Gamma_R, "Gamma_R");
  require_finite(pole.residual, "residual");
  return json{{"format_version", kFormatVersion},
              {"index_n", pole.index_n},
              {"k", to_json(pole.k)},
              {"p_res", to_json(pole.p_res)},
              {"E_res", to_json(pole.E_res)},
              {"E_R", pole.E_R},
              {"Gamma_R", pole.Gamma_R},
              {"N_res", to_json(pole.N_res)},
              {"residual", pole.residual}};
}

json to_json(const Spectrum& spec) {
  spec.validate();
  json poles = json::array();
  for (const auto& m : spec.pole_meta) {
    require_finite(m.E_R, "pole E_R");
    require_finite(m.Gamma_R, "pole Gamma_R");
    poles.push_back(json{{"E_R", m.E_R}, {"Gamma_R", m.Gamma_R}});
  }
  json j{{"format_version", kFormatVersion},
         {"axis", std::string(goldenrule::to_string(spec.axis))},
         {"normalized", spec.normalized},
         {"poles", poles},
         {"grid", spec.grid},
         {"values", spec.values}};
  if (spec.total) {
    require_finite(*spec.total, "total");
    j["total"] = *spec.total;
  }
  return j;
}

json to_json(const goldenrule::DecayConstants& c) {
  require_finite(c.Gamma_R, "Gamma_R");
  require_finite(c.Gamma, "Gamma");
  require_finite(c.Gamma_bar, "Gamma_bar");
  return json{{"format_version", kFormatVersion}, {"Gamma_R", c.Gamma_R}, {"Gamma", c.Gamma}, {"Gamma_bar", c.Gamma_bar}};
}

json to_json(const numerics::QuadratureConfig& cfg) {
  json j{{"relative_tolerance", cfg.relative_tolerance},
         {"absolute_tolerance", cfg.absolute_tolerance},
         {"max_subdivisions", cfg.max_subdivisions}};
  if (cfg.max_panel_width) {
    j["max_panel_width"] = *cfg.max_panel_width;
  }
  return j;
}

json to_json(const RunManifest& manifest) {
  manifest.validate();
  json poles = json::array();
  for (const auto& p : manifest.pole_summaries) {
    poles.push_back(json{{"index_n", p.index_n},
                         {"k", to_json(p.k)},
                         {"E_R", p.E_R},
                         {"Gamma_R", p.Gamma_R},
                         {"Gamma", p.Gamma},
                         {"Gamma_bar", p.Gamma_bar},
                         {"residual", p.residual}});
  }
  return json{{"format_version", kFormatVersion},
              {"tool_version", manifest.tool_version},
              {"created_utc", manifest.created_utc},
              {"params", to_json(manifest.params)},
              {"pole_summaries", poles},
              {"quadrature_settings", to_json(manifest.quadrature_settings)},
              {"command_line", manifest.command_line}};
}

cplx complex_from_json(const json& j) {
  if (!j.is_object()) {
    throw Error(ErrorCode::ParseError, "complex number must be an object with re and im");
  }
  return {finite_number(j, "re"), finite_number(j, "im")};
}

deltashell::SystemParams params_from_json(const json& j) {
  deltashell::SystemParams p;
  p.mass = finite_number(j, "mass");
  p.hbar = finite_number(j, "hbar");
  p.radius_a = finite_number(j, "radius_a");
  p.lambda = finite_number(j, "lambda");
  p.validate();
  return p;
}

deltashell::ResonancePole pole_from_json(const json& j) {
  check_version(j);
  deltashell::ResonancePole pole;
  pole.index_n = j.at("index_n").get<int>();
  pole.k = complex_from_json(j.at("k"));
  pole.p_res = complex_from_json(j.at("p_res"));
  pole.E_res = complex_from_json(j.at("E_res"));
  pole.E_R = finite_number(j, "E_R");
  pole.Gamma_R = finite_number(j, "Gamma_R");
  pole.N_res = complex_from_json(j.at("N_res"));
  pole.residual = finite_number(j, "residual");
  return pole;
}

Spectrum spectrum_from_json(const json& j) {
  check_version(j);
  Spectrum spec;
  spec.axis = goldenrule::axis_from_string(j.at("axis").get<std::string>());
  spec.normalized = j.at("normalized").get<bool>();
  for (const auto& p : j.at("poles")) {
    spec.pole_meta.push_back({finite_number(p, "E_R"), finite_number(p, "Gamma_R")});
  }
  for (const char* key : {"grid", "values"}) {
    auto& target = std::string_view(key) == "grid" ? spec.grid : spec.values;
    for (const auto& v : j.at(key)) {
      if (!v.is_number() || !std::isfinite(v.get<double>())) {
        throw Error(ErrorCode::ParseError, std::string("non-finite entry in '") + key + "'");
      }
      target.push_back(v.get<double>());
    }
  }
  if (j.contains("total")) {
    spec.total = finite_number(j, "total");
  }
  spec.validate();
  return spec;
}

goldenrule::DecayConstants decay_constants_from_json(const json& j) {
  check_version(j);
  return goldenrule::DecayConstants{finite_number(j, "Gamma_R"), finite_number(j, "Gamma"),
                                    finite_number(j, "Gamma_bar")};
}

numerics::QuadratureConfig quadrature_from_json(const json& j) {
  numerics::QuadratureConfig cfg;
  cfg.relative_tolerance = finite_number(j, "relative_tolerance");
  cfg.absolute_tolerance = finite_number(j, "absolute_tolerance");
  cfg.max_subdivisions = j.at("max_subdivisions").get<int>();
  if (j.contains("max_panel_width")) {
    cfg.max_panel_width = finite_number(j, "max_panel_width");
  }
  cfg.validate();
  return cfg;
}

RunManifest manifest_from_json(const json& j) {
  check_version(j);
  RunManifest m;
  m.tool_version = j.at("tool_version").get<std::string>();
  m.created_utc = j.at("created_utc").get<std::string>();
  m.params = params_from_json(j.at("params"));
  for (const auto& p : j.at("pole_summaries")) {
    PoleSummary s;
    s.index_n = p.at("index_n").get<int>();
    s.k = complex_from_json(p.at("k"));
    s.E_R = finite_number(p, "E_R");
    s.Gamma_R = finite_number(p, "Gamma_R");
    s.Gamma = finite_number(p, "Gamma");
    s.Gamma_bar = finite_number(p, "Gamma_bar");
    s.residual = finite_number(p, "residual");
    m.pole_summaries.push_back(s);
  }
  m.quadrature_settings = quadrature_from_json(j.at("quadrature_settings"));
  m.command_line = j.at("command_line").get<std::string>();
  return m;
}

void RunManifest::validate() const {
  params.validate();
  quadrature_settings.validate();
  for (const auto& p : pole_summaries) {
    for (double v : {p.k.real(), p.k.imag(), p.E_R, p.Gamma_R, p.Gamma, p.Gamma_bar, p.residual}) {
      require_finite(v, "pole summary field");
    }
  }
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

json parse(std::string_view text) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error& err) {
    throw Error(ErrorCode::ParseError, err.what());
  }
}

void write_json(const json& j, std::ostream& out) {
  out << dump(j);
  if (!out) {
    throw Error(ErrorCode::IoFailure, "failed writing JSON");
  }
}

void write_json(const json& j, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw Error(ErrorCode::IoFailure, "cannot open " + path.string() + " for writing");
  }
  write_json(j, out);
}

PoleSummary summarize(const deltashell::ResonancePole& pole, const goldenrule::DecayConstants& constants) {
  return PoleSummary{pole.index_n, pole.k, pole.E_R, pole.Gamma_R, constants.Gamma, constants.Gamma_bar,
                     pole.residual};
}

}  // namespace reskit::io
