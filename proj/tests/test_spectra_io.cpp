#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>

#include <doctest.h>

#include "reskit/deltashell.hpp"
#include "reskit/error.hpp"
#include "reskit/goldenrule.hpp"
#include "reskit/spectra_io.hpp"

using namespace reskit;
using namespace reskit::io;
using goldenrule::Axis;
using goldenrule::Spectrum;

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

std::string message_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.what();
  }
  return {};
}

Spectrum sample_spectrum() {
  Spectrum s;
  s.axis = Axis::Energy;
  s.grid = {0.5, 1.0, 1.5};
  s.values = {0.1, 1.0 / 3.0, 2e-300};
  s.pole_meta = {{4.1, 0.38}, {17.0, 2.4}};
  s.total = 0.25;
  return s;
}

}  // namespace

TEST_CASE("doubles print with 17 significant digits and parse back exactly") {
  CHECK(format_double(0.1) == "0.10000000000000001");
  CHECK(format_double(1.0) == "1");
  CHECK(format_double(1.0 / 3.0) == "0.33333333333333331");
  CHECK(format_double(-2.5e-300) == "-2.5e-300");
  for (double v : {0.1, 1.0 / 3.0, 6.02214076e23, -1e-310, 0.0}) {
    CHECK(parse_double(format_double(v)) == v);
  }
  CHECK(code_of([] { parse_double("1.0x"); }) == ErrorCode::ParseError);
  CHECK(code_of([] { parse_double(""); }) == ErrorCode::ParseError);
  CHECK(code_of([] { parse_double("nan"); }) == ErrorCode::ParseError);
  CHECK(code_of([] { parse_double("inf"); }) == ErrorCode::ParseError);
}

TEST_CASE("CSV layout") {
  std::ostringstream out;
  write_spectrum_csv(sample_spectrum(), out);
  const std::string text = out.str();
  CHECK(text.rfind("# axis=energy normalized=false poles=4.0999999999999996:0.38;17:2.3999999999999999 "
                   "total=0.25 format_version=1\nx,value\n",
                   0) == 0);
  CHECK(text.find("1,0.33333333333333331\n") != std::string::npos);
}

TEST_CASE("CSV round trip preserves every field") {
  std::ostringstream out;
  const Spectrum s = sample_spectrum();
  write_spectrum_csv(s, out);
  std::istringstream in(out.str());
  const Spectrum r = read_spectrum_csv(in);
  CHECK(r.axis == s.axis);
  CHECK(r.grid == s.grid);
  CHECK(r.values == s.values);
  CHECK(r.pole_meta == s.pole_meta);
  CHECK(r.total == s.total);
  CHECK(r.normalized == s.normalized);
}

TEST_CASE("CSV extra columns are written after value") {
  std::ostringstream out;
  write_spectrum_csv(sample_spectrum(), out, {{"cross", {1.0, 2.0, 3.0}}});
  CHECK(out.str().find("x,value,cross\n0.5,0.10000000000000001,1\n") != std::string::npos);
  CHECK(code_of([] {
          std::ostringstream o;
          write_spectrum_csv(sample_spectrum(), o, {{"short", {1.0}}});
        }) == ErrorCode::InvalidArgument);
}

TEST_CASE("malformed CSV reports line and column") {
  const std::string header = "# axis=energy normalized=false poles= total=none format_version=1\nx,value\n";
  std::istringstream bad_number(header + "1,2\n2,abc\n");
  const std::string msg = message_of([&] { read_spectrum_csv(bad_number); });
  CHECK(msg.find("line 4") != std::string::npos);
  CHECK(msg.find("column 3") != std::string::npos);

  std::istringstream no_header("x,value\n1,2\n");
  CHECK(code_of([&] { read_spectrum_csv(no_header); }) == ErrorCode::ParseError);
  std::istringstream wrong_version("# axis=energy normalized=false poles= total=none format_version=9\nx,value\n");
  CHECK(code_of([&] { read_spectrum_csv(wrong_version); }) == ErrorCode::ParseError);
  std::istringstream unordered(header + "2,1\n1,1\n");
  CHECK(code_of([&] { read_spectrum_csv(unordered); }) == ErrorCode::ParseError);
  std::istringstream ragged(header + "1\n");
  CHECK(code_of([&] { read_spectrum_csv(ragged); }) == ErrorCode::ParseError);
}

TEST_CASE("non-finite values are refused on write") {
  Spectrum s = sample_spectrum();
  s.values[1] = std::numeric_limits<double>::quiet_NaN();
  std::ostringstream out;
  CHECK_THROWS_AS(write_spectrum_csv(s, out), Error);
  CHECK_THROWS_AS(to_json(s), Error);
}

TEST_CASE("JSON is sorted, versioned and round-trips") {
  const Spectrum s = sample_spectrum();
  const json j = to_json(s);
  CHECK(j.at("format_version") == kFormatVersion);
  const Spectrum r = spectrum_from_json(parse(dump(j)));
  CHECK(r.grid == s.grid);
  CHECK(r.values == s.values);
  CHECK(r.pole_meta == s.pole_meta);
  CHECK(r.total == s.total);
  CHECK(dump(to_json(r)) == dump(j));

  const std::string text = dump(json{{"b", 1}, {"a", 2}});
  CHECK(text.find("\"a\"") < text.find("\"b\""));
  CHECK(text.back() == '\n');
  CHECK(code_of([] { parse("{not json"); }) == ErrorCode::ParseError);
  CHECK(code_of([] { spectrum_from_json(json{{"format_version", 2}}); }) == ErrorCode::ParseError);
}

TEST_CASE("pole and decay-constant records round-trip") {
  deltashell::SystemParams params;
  const auto pole = deltashell::find_resonances(params, 2)[1];
  const auto back = pole_from_json(parse(dump(to_json(pole))));
  CHECK(back.k == pole.k);
  CHECK(back.p_res == pole.p_res);
  CHECK(back.E_R == pole.E_R);
  CHECK(back.Gamma_R == pole.Gamma_R);
  CHECK(back.N_res == pole.N_res);
  CHECK(back.index_n == pole.index_n);
  const auto dc = goldenrule::DecayConstants::from(0.4, 1.5);
  const auto dc2 = decay_constants_from_json(parse(dump(to_json(dc))));
  CHECK(dc2.Gamma_bar == dc.Gamma_bar);
  CHECK(complex_from_json(to_json(std::complex<double>{1.5, -2.0})) == std::complex<double>{1.5, -2.0});
}

TEST_CASE("manifest round-trips and writes to disk") {
  RunManifest m;
  m.tool_version = "0.1.0";
  m.created_utc = "2026-01-01T00:00:00Z";
  m.params = deltashell::SystemParams{1.0, 1.0, 1.0, 10.0};
  m.pole_summaries = {PoleSummary{1, {2.87, -0.066}, 4.13, 0.38, 1.55, 0.59, 1e-16}};
  m.command_line = "reskit gamma";
  const auto path = std::filesystem::temp_directory_path() / "reskit_manifest_test.json";
  write_json(to_json(m), path);
  std::ifstream in(path);
  std::stringstream buf;
  buf << in.rdbuf();
  const RunManifest r = manifest_from_json(parse(buf.str()));
  CHECK(r.pole_summaries == m.pole_summaries);
  CHECK(r.command_line == m.command_line);
  CHECK(r.quadrature_settings.relative_tolerance == m.quadrature_settings.relative_tolerance);
  std::filesystem::remove(path);
  CHECK(code_of([] { write_json(json::object(), std::filesystem::path("/nonexistent/dir/x.json")); }) ==
        ErrorCode::IoFailure);
}
