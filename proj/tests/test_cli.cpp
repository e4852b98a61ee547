#include "lve/cli.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

using namespace lve;
using namespace lve::cli;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome invoke(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

const std::filesystem::path data_dir = LVE_TEST_DATA_DIR;
const std::filesystem::path schema_path = LVE_SCHEMA_PATH;

void check_against_schema(const std::string& text) {
  const auto report = nlohmann::json::parse(text);
  const auto schema = nlohmann::json::parse(slurp(schema_path));
  for (const auto& key : schema.at("required")) CHECK(report.contains(key.get<std::string>()));
  for (const auto& [key, value] : report.items()) CHECK(schema.at("properties").contains(key));
  CHECK(report.at("schema_version") == schema.at("properties").at("schema_version").at("const"));
  const auto& subcommands = schema.at("properties").at("subcommand").at("enum");
  CHECK(std::find(subcommands.begin(), subcommands.end(), report.at("subcommand")) != subcommands.end());
  CHECK(report.at("config").contains("seed"));
  CHECK(report.contains("columns") == report.contains("rows"));
}

}  // namespace

TEST_CASE("series log rows match the golden file") {
  const auto r = invoke({"series", "--k", "3", "--order", "2", "--log"});
  CHECK(r.code == exit_ok);
  CHECK(r.out == slurp(data_dir / "series_log_k3_order2.csv"));
  CHECK(r.out.find("\n0,0\n1,-15\n2,5085\n") != std::string::npos);
}

TEST_CASE("series emits exact fractions") {
  const auto r = invoke({"series", "--order", "2"});
  CHECK(r.out.find("2,10395/2") != std::string::npos);
}

TEST_CASE("lve-verify passes at order lambda") {
  const auto r = invoke({"lve-verify", "--order", "1"});
  CHECK(r.code == exit_ok);
  CHECK(r.out.find("1,-15,-15,PASS") != std::string::npos);
}

TEST_CASE("lve-verify reports incomplete tree sums as a failure") {
  const auto r = invoke({"lve-verify", "--order", "2", "--nmax", "4"});
  CHECK(r.code == exit_fail);
  CHECK(r.err.find("n=5") != std::string::npos);
}

TEST_CASE("usage errors exit with 2") {
  auto unknown_flag = invoke({"series", "--bogus"});
  CHECK(unknown_flag.code == exit_usage);
  CHECK(unknown_flag.err.find("Usage") != std::string::npos);
  CHECK(invoke({"transmogrify"}).code == exit_usage);
  CHECK(invoke({}).code == exit_usage);
  CHECK(invoke({"z-eval", "--lambda", "zero"}).code == exit_usage);
  CHECK(invoke({"z-eval"}).code == exit_usage);
  CHECK(invoke({"series", "--order", "x"}).code == exit_usage);
  CHECK(invoke({"series", "--k", "1"}).code == exit_usage);
  CHECK(invoke({"lve-tree", "--channels", "d"}).code == exit_usage);
  CHECK(invoke({"lve-tree", "--numeric", "--samples", "2.5"}).code == exit_usage);
  CHECK(invoke({"borel-resum", "--lambda", "0.01", "--pade", "five"}).code == exit_usage);
  CHECK(invoke({"forest-verify", "--json", "{not json"}).code == exit_usage);
  CHECK(invoke({"forest-verify"}).code == exit_usage);
  CHECK(invoke({"series", "--format", "xml"}).code == exit_usage);
}

TEST_CASE("help exits cleanly") {
  const auto r = invoke({"--help"});
  CHECK(r.code == exit_ok);
  CHECK(r.out.find("lve-verify") != std::string::npos);
}

TEST_CASE("runtime errors exit with 1") {
  // Arg λ = 3.5 lies outside the k=3 sector |Arg λ| < π.
  const auto r = invoke({"z-eval", "--lambda", "0.01@3.5"});
  CHECK(r.code == exit_fail);
  CHECK(r.err.find("outside") != std::string::npos);
}

TEST_CASE("coupling parsing") {
  CHECK(parse_coupling("0.01").modulus == 0.01);
  CHECK(parse_coupling("-0.5").argument == Catch::Approx(std::numbers::pi));
  const auto c = parse_coupling("0.01+0.00i");
  CHECK(c.modulus == 0.01);
  CHECK(c.argument == 0.0);
  const auto z = parse_coupling(" 3 - 4i ").value();
  CHECK(z.real() == Catch::Approx(3.0));
  CHECK(z.imag() == Catch::Approx(-4.0));
  CHECK(parse_coupling("0.05i").argument == Catch::Approx(std::numbers::pi / 2));
  const auto p = parse_coupling("0.05@4.5");
  CHECK(p.modulus == 0.05);
  CHECK(p.argument == 4.5);  // kept beyond π
  CHECK(parse_coupling("1e-3").modulus == 1e-3);
  CHECK_THROWS_AS(parse_coupling("1+i"), UsageError);
  CHECK_THROWS_AS(parse_coupling("-1@0"), UsageError);
}

TEST_CASE("number formatting") {
  CHECK(format_complex(std::complex<double>(1.5, -2.0)) == "1.5-2i");
  CHECK(format_complex(std::complex<double>(0.1, 0.0)) == "0.10000000000000001+0i");
  CHECK(format_exact(GaussRational(Rational(1, 3), Rational(-248, 3))) == "1/3-248/3i");
  CHECK(format_exact(GaussRational(Rational(-5, 2))) == "-5/2");
  const std::string s = format_complex(std::complex<double>(0.1, 1.0 / 3.0));
  const auto back = parse_coupling(s).value();
  CHECK(back.real() == Catch::Approx(0.1).epsilon(1e-15));
  CHECK(back.imag() == Catch::Approx(1.0 / 3.0).epsilon(1e-15));
}

TEST_CASE("json reports follow the schema") {
  check_against_schema(invoke({"series", "--order", "3", "--format", "json"}).out);
  check_against_schema(invoke({"borel-resum", "--k", "3", "--leroy", "2", "--lambda", "0.01", "--n", "10"}).out);
  check_against_schema(invoke({"lve-verify", "--order", "1", "--format", "json"}).out);
  check_against_schema(
      invoke({"resolvent-scan", "--samples", "200", "--arg-lambda", "0,0.5", "--format", "json"}).out);
  check_against_schema(invoke({"--format", "json", "z-eval", "--lambda", "0.02"}).out);
}

TEST_CASE("borel-resum reports and checks tolerances") {
  const auto r = invoke({"borel-resum", "--k", "3", "--leroy", "2", "--lambda", "0.01", "--n", "10", "--pade", "auto"});
  CHECK(r.code == exit_ok);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j.at("report").at("pade_L") == 5);
  CHECK(j.at("report").at("pade_M") == 5);
  CHECK(j.at("report").at("leroy_order") == 2);
  CHECK(std::stod(j.at("report").at("relative_error").get<std::string>()) < 1e-3);
  CHECK(invoke({"borel-resum", "--lambda", "0.01", "--tolerance", "1e-3"}).code == exit_ok);
  CHECK(invoke({"borel-resum", "--lambda", "0.01", "--tolerance", "1e-12"}).code == exit_fail);
  CHECK(invoke({"borel-resum", "--lambda", "0.01", "--pade", "4/4", "--format", "csv"}).out.find(",4,4,") !=
        std::string::npos);
}

TEST_CASE("reports are byte-identical for identical flags") {
  const std::vector<std::string> scan{"resolvent-scan", "--samples", "500", "--arg-lambda", "0,0.785", "--seed", "9"};
  CHECK(invoke(scan).out == invoke(scan).out);
  const std::vector<std::string> mc{"lve-tree", "--n", "1", "--numeric", "--lambda", "0.001",
                                    "--samples", "20000", "--seed", "7"};
  const auto first = invoke(mc);
  CHECK(first.out == invoke(mc).out);
  CHECK(first.out.find("seed=7") != std::string::npos);
  const std::vector<std::string> other{"lve-tree", "--n", "1", "--numeric", "--lambda", "0.001",
                                       "--samples", "20000", "--seed", "8"};
  CHECK(first.out != invoke(other).out);
}

TEST_CASE("every report records its seed") {
  CHECK(invoke({"series", "--order", "1"}).out.find("seed=none") != std::string::npos);
  CHECK(invoke({"resolvent-scan", "--samples", "100"}).out.find("seed=42") != std::string::npos);
}

TEST_CASE("resolvent-scan checks the k=3 bound") {
  const auto r = invoke({"resolvent-scan", "--k", "3", "--samples", "2000", "--arg-lambda", "0,0.785,1.57"});
  CHECK(r.code == exit_ok);
  CHECK(r.out.find("FAIL") == std::string::npos);
  CHECK(invoke({"resolvent-scan", "--k", "3", "--arg-lambda", "3.2"}).code == exit_fail);
}

TEST_CASE("lve-tree lists exact grade coefficients") {
  const auto r = invoke({"lve-tree", "--n", "2", "--channels", "a"});
  CHECK(r.code == exit_ok);
  CHECK(r.out.find("2;1-2:a,2,0+1i") != std::string::npos);
  CHECK(r.out.find("2;1-2:a,4,-6") != std::string::npos);
  CHECK(r.out.find("1-2:b") == std::string::npos);
  const auto fixed = invoke({"lve-tree", "--n", "3", "--tree", "3;1-2,2-3", "--channels", "a", "--order", "1"});
  CHECK(fixed.out.find("3;1-2:a,2-3:a,4,-3") != std::string::npos);
  CHECK(fixed.out.find("1-3") == std::string::npos);
  CHECK(invoke({"lve-tree", "--n", "3", "--tree", "3;1-2"}).code == exit_usage);
}

TEST_CASE("lve-tree numeric mode compares with the symbolic truncation") {
  const auto r = invoke({"lve-tree", "--n", "2", "--channels", "a,b", "--numeric", "--lambda", "0.0001",
                         "--samples", "200000", "--seed", "7", "--band-A", "1"});
  CHECK(r.code == exit_ok);
  CHECK(r.out.find("2;1-2:a,") != std::string::npos);
  CHECK(r.out.find("2;1-2:b,") != std::string::npos);
  CHECK(r.out.find("2;1-2:c,") == std::string::npos);
  CHECK(invoke({"lve-tree", "--n", "3", "--numeric"}).code == exit_fail);
}

TEST_CASE("forest-verify from a file and inline") {
  const auto r = invoke({"forest-verify", "--input", (data_dir / "link_exponential.json").string()});
  CHECK(r.code == exit_ok);
  CHECK(r.out.find("# status: PASS") != std::string::npos);
  CHECK(r.out.find("\"4;\",1,0") != std::string::npos);
  const auto poly = invoke({"forest-verify", "--json",
                            R"({"n":3,"kind":"polynomial","monomials":[{"coefficient":"2","powers":{"1-2":2,"2-3":1}}]})"});
  CHECK(poly.code == exit_ok);
  CHECK(invoke({"forest-verify", "--json", R"({"n":2,"linear":{"1-3":1}})"}).code == exit_usage);
  CHECK(invoke({"forest-verify", "--json", R"({"n":2,"linear":{"1-2":"1/0"}})"}).code == exit_usage);
}

TEST_CASE("reports are written to the output directory") {
  const auto dir = std::filesystem::temp_directory_path() / "lve_cli_test_reports";
  std::filesystem::remove_all(dir);
  ::setenv(output_dir_variable, dir.c_str(), 1);
  const auto r = invoke({"series", "--order", "2", "--log"});
  ::unsetenv(output_dir_variable);
  CHECK(slurp(dir / "series.csv") == r.out);
  const auto explicit_path = dir / "nested" / "resum.json";
  const auto j = invoke({"--output", explicit_path.string(), "borel-resum", "--lambda", "0.01"});
  CHECK(slurp(explicit_path) == j.out);
  std::filesystem::remove_all(dir);
}
