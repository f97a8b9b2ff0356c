#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <doctest.h>

#include "reskit/cli.hpp"
#include "reskit/spectra_io.hpp"

using namespace reskit;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome run(std::vector<std::string> args) {
  args.insert(args.begin(), "reskit");
  std::vector<const char*> argv;
  for (const auto& a : args) {
    argv.push_back(a.c_str());
  }
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::filesystem::path temp_file(const std::string& name) { return std::filesystem::temp_directory_path() / name; }

}  // namespace

TEST_CASE("poles prints a table with units and a JSON form") {
  const auto table = run({"poles", "--n-max", "2"});
  CHECK(table.code == cli::kExitOk);
  CHECK(table.out.find("# units: mass=1 hbar=1 radius=1") != std::string::npos);
  CHECK(table.out.find("2.8775774584") != std::string::npos);

  const auto js = run({"poles", "--n-max", "3", "--format", "json"});
  REQUIRE(js.code == cli::kExitOk);
  const auto j = io::parse(js.out);
  CHECK(j.at("poles").size() == 3);
  CHECK(j.at("format_version") == io::kFormatVersion);

  const auto csv = run({"poles", "--n-max", "1", "--format", "csv"});
  CHECK(csv.out.find("n,k_re,k_im,E_R,Gamma_R,residual\n1,") != std::string::npos);
}

TEST_CASE("spectrum output is deterministic and readable") {
  const auto a = run({"spectrum", "--points", "11", "--normalize"});
  const auto b = run({"spectrum", "--points", "11", "--normalize"});
  REQUIRE(a.code == cli::kExitOk);
  CHECK(a.out == b.out);
  std::istringstream in(a.out);
  const auto spec = io::read_spectrum_csv(in);
  CHECK(spec.normalized);
  CHECK(spec.grid.size() == 11);

  const auto path = temp_file("reskit_cli_spec.json");
  const auto svg = temp_file("reskit_cli_spec.svg");
  REQUIRE(run({"spectrum", "--points", "7", "--format", "json", "--output", path.string(), "--plot", svg.string()})
              .code == cli::kExitOk);
  CHECK(io::spectrum_from_json(io::parse(slurp(path))).grid.size() == 7);
  CHECK(slurp(svg).find("<svg") != std::string::npos);
  std::filesystem::remove(path);
  std::filesystem::remove(svg);
}

TEST_CASE("angular spectra need a reduced element for l > 0") {
  CHECK(run({"spectrum", "--axis", "cos", "--points", "5"}).code == cli::kExitOk);
  CHECK(run({"spectrum", "--axis", "phi", "--l", "2", "--m", "1", "--reduced-me", "0.1,0.2", "--points", "4"}).code ==
        cli::kExitOk);
  CHECK(run({"spectrum", "--axis", "cos", "--l", "1"}).code == cli::kExitUsage);
  CHECK(run({"spectrum", "--l", "1", "--m", "3", "--reduced-me", "1,0"}).code == cli::kExitUsage);
  CHECK(run({"spectrum", "--reduced-me", "oops"}).code == cli::kExitUsage);
}

TEST_CASE("gamma reports both routes") {
  const auto r = run({"gamma", "--format", "json"});
  REQUIRE(r.code == cli::kExitOk);
  const auto j = io::parse(r.out);
  CHECK(j.at("relative_gap").get<double>() < 1e-6);
  CHECK(j.at("decay_constants").at("Gamma").get<double>() == doctest::Approx(1.5527057770016).epsilon(1e-9));
  CHECK(run({"gamma", "--route", "energy"}).out.find("momentum route") == std::string::npos);
}

TEST_CASE("fermi-compare prints a verdict only for two or more lambdas") {
  const auto many = run({"fermi-compare", "--lambda-list", "3,10"});
  CHECK(many.code == cli::kExitOk);
  CHECK(many.out.find("verdict") != std::string::npos);
  const auto one = run({"fermi-compare", "--lambda-list", "10"});
  CHECK(one.code == cli::kExitOk);
  CHECK(one.out.find("verdict") == std::string::npos);
  CHECK(run({"fermi-compare", "--lambda-list", "3,-1"}).code == cli::kExitUsage);
}

TEST_CASE("interfere is symmetric under swapping its terms") {
  const auto a = run({"interfere", "--n1", "1", "--c1", "1,0.5", "--n2", "2", "--c2", "0.3,0", "--points", "9",
                      "--decompose"});
  const auto b = run({"interfere", "--n1", "2", "--c1", "0.3,0", "--n2", "1", "--c2", "1,0.5", "--points", "9",
                      "--decompose"});
  REQUIRE(a.code == cli::kExitOk);
  CHECK(a.out == b.out);
  CHECK(a.out.find("x,value,term1,term2,cross\n") != std::string::npos);
  CHECK(run({"interfere", "--n1", "1", "--n2", "1"}).code == cli::kExitUsage);
}

TEST_CASE("manifest is written on request") {
  const auto path = temp_file("reskit_cli_manifest.json");
  setenv("SOURCE_DATE_EPOCH", "0", 1);
  REQUIRE(run({"gamma", "--manifest", path.string()}).code == cli::kExitOk);
  unsetenv("SOURCE_DATE_EPOCH");
  const auto m = io::manifest_from_json(io::parse(slurp(path)));
  CHECK(m.created_utc == "1970-01-01T00:00:00Z");
  REQUIRE(m.pole_summaries.size() == 1);
  CHECK(m.pole_summaries[0].Gamma > 0.0);
  CHECK(m.command_line.find("gamma --manifest") != std::string::npos);
  std::filesystem::remove(path);
}

TEST_CASE("check passes by default and reports JSON") {
  const auto r = run({"check", "--json"});
  CHECK(r.code == cli::kExitOk);
  const auto j = io::parse(r.out);
  CHECK(j.at("passed").get<bool>());
  CHECK(j.at("checks").size() >= 6);
}

TEST_CASE("exit codes for failing invocations") {
  CHECK(run({}).code == cli::kExitUsage);
  CHECK(run({"nonsense"}).code == cli::kExitUsage);
  CHECK(run({"poles", "--lambda", "-3"}).code == cli::kExitUsage);
  CHECK(run({"poles", "--format", "xml"}).code == cli::kExitUsage);
  CHECK(run({"spectrum", "--emin", "5", "--emax", "1"}).code == cli::kExitUsage);
  CHECK(run({"poles", "--help"}).code == cli::kExitOk);

  // At λ = 10¹² the pole sits ~1e-23 below the real axis, under the 1e-12
  // depth needed to tell it from a real-axis root.
  const auto numeric = run({"poles", "--lambda", "1e12"});
  CHECK(numeric.code == cli::kExitNumeric);
  CHECK(numeric.err.find("numeric failure") != std::string::npos);

  setenv("RESKIT_QUAD_TOL", "-1", 1);
  CHECK(run({"gamma"}).code == cli::kExitUsage);
  unsetenv("RESKIT_QUAD_TOL");

  // At λ = 10⁶ the residual floor in double precision is above 1e-12.
  CHECK(run({"check", "--lambda", "1e6"}).code == cli::kExitCheckFailed);

  CHECK(run({"spectrum", "--output", "/nonexistent/dir/out.csv"}).code == cli::kExitNumeric);
}
