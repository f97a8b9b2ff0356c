#pragma once

// CSV and JSON encodings for spectra, poles and run manifests.
//
// CSV layout:
//   # axis=<kind> normalized=<bool> poles=<E_R:Gamma_R;...> total=<value|none> format_version=1
//   x,value[,extra...]
//   <rows, 17 significant digits>
//
// JSON objects carry "format_version": 1, keys are sorted and complex
// numbers are {"im": y, "re": x}.

#include <complex>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "reskit/deltashell.hpp"
#include "reskit/goldenrule.hpp"
#include "reskit/numerics.hpp"

namespace reskit::io {

using json = nlohmann::json;
using cplx = std::complex<double>;

inline constexpr int kFormatVersion = 1;

struct PoleSummary {
  int index_n = 0;
  cplx k;
  double E_R = 0.0;
  double Gamma_R = 0.0;
  double Gamma = 0.0;
  double Gamma_bar = 0.0;
  double residual = 0.0;

  bool operator==(const PoleSummary&) const = default;
};

struct RunManifest {
  std::string tool_version;
  std::string created_utc;
  deltashell::SystemParams params;
  std::vector<PoleSummary> pole_summaries;
  numerics::QuadratureConfig quadrature_settings;
  std::string command_line;

  void validate() const;
};

// Shortest form with 17 significant digits; '.' decimal point, no grouping.
std::string format_double(double value);
// Whole-string parse; rejects trailing junk and non-finite values.
double parse_double(std::string_view text);

using ExtraColumn = std::pair<std::string, std::vector<double>>;

void write_spectrum_csv(const goldenrule::Spectrum& spec, std::ostream& out,
                        const std::vector<ExtraColumn>& extra = {});
void write_spectrum_csv(const goldenrule::Spectrum& spec, const std::filesystem::path& path,
                        const std::vector<ExtraColumn>& extra = {});

goldenrule::Spectrum read_spectrum_csv(std::istream& in);
goldenrule::Spectrum read_spectrum_csv(const std::filesystem::path& path);

json to_json(cplx z);
json to_json(const deltashell::SystemParams& params);
json to_json(const deltashell::ResonancePole& pole);
json to_json(const goldenrule::Spectrum& spec);
json to_json(const goldenrule::DecayConstants& constants);
json to_json(const numerics::QuadratureConfig& cfg);
json to_json(const RunManifest& manifest);

cplx complex_from_json(const json& j);
deltashell::SystemParams params_from_json(const json& j);
deltashell::ResonancePole pole_from_json(const json& j);
goldenrule::Spectrum spectrum_from_json(const json& j);
goldenrule::DecayConstants decay_constants_from_json(const json& j);
numerics::QuadratureConfig quadrature_from_json(const json& j);
RunManifest manifest_from_json(const json& j);

// Byte-deterministic text: two-space indent, sorted keys, trailing newline.
std::string dump(const json& j);
// Parses text; malformed input and non-finite numbers raise ParseError.
json parse(std::string_view text);

void write_json(const json& j, std::ostream& out);
void write_json(const json& j, const std::filesystem::path& path);

PoleSummary summarize(const deltashell::ResonancePole& pole, const goldenrule::DecayConstants& constants);

}  // namespace reskit::io
