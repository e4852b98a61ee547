#pragma once

// Command-line front end. `run` parses one invocation, executes it and
// writes a CSV or JSON report to the given stream (and to a file when an
// output path or LVE_OUTPUT_DIR is set). Exit codes: 0 success, 1 failed
// check or runtime error, 2 usage error.

#include "lve/borel.hpp"
#include "lve/errors.hpp"
#include "lve/exact.hpp"
#include "lve/forest_formula.hpp"
#include "lve/intermediate_field.hpp"
#include "lve/lve.hpp"
#include "lve/quadrature.hpp"
#include "lve/series.hpp"
#include "lve/trees.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <regex>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace lve::cli {

inline constexpr int exit_ok = 0;
inline constexpr int exit_fail = 1;
inline constexpr int exit_usage = 2;
inline constexpr int schema_version = 1;
inline constexpr const char* output_dir_variable = "LVE_OUTPUT_DIR";

/// Malformed flag values detected after parsing.
struct UsageError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// ---------------------------------------------------------------------------
// Serialization

inline std::string format_real(long double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17Lg", x);
  return buf;
}

/// "re±im i", 17 significant digits.
template <class Real>
std::string format_complex(const std::complex<Real>& z) {
  const long double re = z.real(), im = z.imag();
  char buf[128];
  std::snprintf(buf, sizeof buf, "%.17Lg%c%.17Lgi", re, std::signbit(im) ? '-' : '+', std::fabs(im));
  return buf;
}

inline std::string format_exact(const GaussRational& z) {
  if (z.is_real()) return to_string(z.real());
  std::ostringstream os;
  os << to_string(z.real()) << (z.imag() < 0 ? "-" : "+") << to_string(Rational(abs(z.imag()))) << "i";
  return os.str();
}

/// Accepts "x", "x+yi", "x-yi", "yi" and the polar form "r@theta" (theta in
/// radians, kept verbatim so branches stay unambiguous).
inline Coupling parse_coupling(const std::string& text) {
  std::string s;
  for (char ch : text)
    if (!std::isspace(static_cast<unsigned char>(ch))) s += ch;
  static const std::string num = R"(([+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?))";
  static const std::regex polar(num + "@" + num);
  static const std::regex real_only(num);
  static const std::regex imag_only(num + "i");
  static const std::regex full(num + R"(([+-](?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)i)");
  std::smatch m;
  if (std::regex_match(s, m, polar)) {
    const double r = std::stod(m[1]), theta = std::stod(m[2]);
    if (r < 0) throw UsageError("polar modulus must be >= 0: " + text);
    return {r, theta};
  }
  if (std::regex_match(s, m, real_only)) return Coupling::real(std::stod(m[1]));
  if (std::regex_match(s, m, imag_only)) return Coupling::from_complex({0.0, std::stod(m[1])});
  if (std::regex_match(s, m, full)) return Coupling::from_complex({std::stod(m[1]), std::stod(m[2])});
  throw UsageError("cannot parse coupling '" + text + "' (use x, x+yi, yi or r@theta)");
}

inline std::string format_coupling(const Coupling& c) {
  return format_real(c.modulus) + "@" + format_real(c.argument);
}

/// Parameters of one invocation; every report echoes them.
struct RunConfig {
  std::string subcommand;
  int k = 3;
  std::optional<std::uint64_t> seed;
  std::string format = "csv";
  std::string output;
  std::vector<std::pair<std::string, std::string>> settings;  // flag, value
};

enum class Status { ok, pass, fail };

inline const char* status_name(Status s) {
  switch (s) {
    case Status::ok: return "OK";
    case Status::pass: return "PASS";
    case Status::fail: return "FAIL";
  }
  return "OK";
}

/// Tabular result plus summary entries, rendered as CSV or JSON.
struct Report {
  RunConfig config;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
  std::vector<std::pair<std::string, std::string>> summary;
  nlohmann::ordered_json body;  // optional structured payload for JSON output
  Status status = Status::ok;

  void check(bool passed) {
    if (!passed) status = Status::fail;
    else if (status == Status::ok) status = Status::pass;
  }

  std::string seed_text() const { return config.seed ? std::to_string(*config.seed) : "none"; }

  std::string csv() const {
    std::ostringstream os;
    os << "# run: " << config.subcommand << " k=" << config.k;
    for (const auto& [flag, value] : config.settings) os << " " << flag << "=" << value;
    os << " seed=" << seed_text() << "\n";
    for (std::size_t c = 0; c < columns.size(); ++c) os << (c ? "," : "") << columns[c];
    os << "\n";
    for (const auto& row : rows) {
      for (std::size_t c = 0; c < row.size(); ++c) os << (c ? "," : "") << row[c];
      os << "\n";
    }
    for (const auto& [key, value] : summary) os << "# " << key << ": " << value << "\n";
    os << "# status: " << status_name(status) << "\n";
    return os.str();
  }

  std::string json() const {
    nlohmann::ordered_json j;
    j["schema_version"] = schema_version;
    j["subcommand"] = config.subcommand;
    nlohmann::ordered_json cfg;
    cfg["k"] = config.k;
    cfg["seed"] = config.seed ? nlohmann::ordered_json(*config.seed) : nlohmann::ordered_json(nullptr);
    for (const auto& [flag, value] : config.settings) cfg[flag] = value;
    j["config"] = cfg;
    if (!body.is_null()) j["report"] = body;
    if (!columns.empty()) {
      j["columns"] = columns;
      j["rows"] = rows;
    }
    nlohmann::ordered_json sum = nlohmann::ordered_json::object();
    for (const auto& [key, value] : summary) sum[key] = value;
    j["summary"] = sum;
    j["status"] = status_name(status);
    return j.dump(2) + "\n";
  }

  std::string render() const { return config.format == "json" ? json() : csv(); }
};

// ---------------------------------------------------------------------------
// Subcommand implementations

inline void require(bool ok, const std::string& message) {
  if (!ok) throw UsageError(message);
}

inline std::size_t sample_count(double requested) {
  require(requested >= 2 && requested <= 1e9 && std::floor(requested) == requested,
          "--samples must be an integer in [2, 1e9]");
  return static_cast<std::size_t>(requested);
}

inline Report run_series(RunConfig cfg, int order, bool log) {
  require(cfg.k >= 2, "--k must be >= 2");
  require(order >= 0 && order <= 200, "--order must lie in [0, 200]");
  cfg.settings = {{"order", std::to_string(order)}, {"log", log ? "true" : "false"}};
  Report r{cfg};
  const auto z = partition_series(ModelSpec(cfg.k), order);
  const auto s = log ? log_series(z) : z;
  r.columns = {"n", "coefficient"};
  for (int n = 0; n <= order; ++n) r.rows.push_back({std::to_string(n), to_string(s[n])});
  return r;
}

inline Report run_z_eval(RunConfig cfg, const std::string& lambda_text, double tol) {
  const Coupling lambda = parse_coupling(lambda_text);
  cfg.settings = {{"lambda", format_coupling(lambda)}, {"tol", format_real(tol)}};
  Report r{cfg};
  const auto z = evaluate_Z(DomainPoint{lambda, cfg.k}, tol);
  r.columns = {"lambda", "value", "error_estimate"};
  r.rows.push_back({format_complex(lambda.value()), format_complex(z.value), format_real(z.error_estimate)});
  return r;
}

inline Report run_remainder_scan(RunConfig cfg, int n_max, const std::vector<double>& rays,
                                 const std::vector<double>& radii, std::optional<double> leroy) {
  require(!rays.empty() && !radii.empty(), "--rays and --radii need at least one value");
  for (double x : radii) require(x > 0, "--radii must be positive");
  const double order = leroy.value_or(cfg.k - 1);
  require(order > 0, "--leroy must be positive");
  cfg.settings = {{"nmax", std::to_string(n_max)}, {"leroy", format_real(order)}};
  Report r{cfg};
  r.columns = {"argument", "modulus", "N", "remainder", "bound_ratio"};
  const auto scan = remainder_bound_scan(cfg.k, n_max, rays, radii);
  std::vector<double> logs;
  for (std::size_t i = 0; i < scan.size(); ++i) {
    const auto& row = scan[i];
    const double ratio = bound_ratio(row.record, order);
    r.rows.push_back({format_real(row.argument), format_real(row.modulus), std::to_string(row.record.N),
                      format_complex(row.record.value), format_real(ratio)});
    logs.push_back(std::log(ratio));
    if (row.record.N == n_max) {
      if (logs.size() >= 3) {
        const auto fit = fit_growth(logs);
        r.summary.push_back({"fit arg=" + format_real(row.argument) + " modulus=" + format_real(row.modulus),
                             "log_A=" + format_real(fit.log_A) + " log_B=" + format_real(fit.log_B) +
                                 " excess_order=" + format_real(fit.excess_order)});
      }
      logs.clear();
    }
  }
  return r;
}

inline Report run_borel_resum(RunConfig cfg, const std::string& lambda_text, int N, const std::string& pade_text,
                              std::optional<int> leroy, std::optional<double> tolerance) {
  const Coupling lambda = parse_coupling(lambda_text);
  require(N >= 0 && N <= 60, "--n must lie in [0, 60]");
  std::optional<PadeDegrees> degrees;
  if (pade_text != "auto") {
    std::smatch m;
    static const std::regex lm(R"((\d+)/(\d+))");
    require(std::regex_match(pade_text, m, lm), "--pade must be 'auto' or 'L/M'");
    degrees = PadeDegrees{std::stoi(m[1]), std::stoi(m[2])};
  }
  if (leroy) require(*leroy >= 1, "--leroy must be >= 1");
  cfg.settings = {{"lambda", format_coupling(lambda)},
                  {"n", std::to_string(N)},
                  {"pade", pade_text},
                  {"leroy", leroy ? std::to_string(*leroy) : "auto"}};
  if (tolerance) cfg.settings.push_back({"tolerance", format_real(*tolerance)});
  Report r{cfg};
  const auto rep = resum(ModelSpec(cfg.k), lambda, N, degrees, leroy);
  nlohmann::ordered_json b;
  b["lambda"] = format_complex(rep.lambda.value());
  b["k"] = rep.k;
  b["leroy_order"] = rep.leroy_order;
  b["N_used"] = rep.N_used;
  b["pade_L"] = rep.pade_L;
  b["pade_M"] = rep.pade_M;
  b["resummed"] = format_complex(rep.resummed);
  b["oracle"] = format_complex(rep.oracle);
  b["relative_error"] = format_real(rep.relative_error);
  r.body = b;
  r.columns = {"lambda", "k", "leroy_order", "N_used", "pade_L", "pade_M", "resummed", "oracle", "relative_error"};
  r.rows.push_back({b["lambda"], std::to_string(rep.k), std::to_string(rep.leroy_order), std::to_string(rep.N_used),
                    std::to_string(rep.pade_L), std::to_string(rep.pade_M), b["resummed"], b["oracle"],
                    b["relative_error"]});
  if (tolerance) r.check(rep.relative_error <= *tolerance);
  return r;
}

/// k = 3 checks the resolvent-norm bound √2; k >= 4 checks the envelope
/// |1 + iω_±| >= ½ sin(π/(2k)).
inline Report run_resolvent_scan(RunConfig cfg, double samples, const std::vector<double>& args, double modulus) {
  require(!args.empty(), "--arg-lambda needs at least one value");
  require(modulus > 0, "--modulus must be positive");
  ResolventScanOptions opt;
  opt.samples = sample_count(samples);
  opt.seed = cfg.seed.value_or(42);
  opt.modulus = modulus;
  cfg.seed = opt.seed;
  cfg.settings = {{"samples", std::to_string(opt.samples)}, {"modulus", format_real(modulus)}};
  Report r{cfg};
  r.columns = {"k", "argument", "samples", "min_norm", "max_norm", "min_one_plus_i_omega", "bound", "status"};
  for (const auto& row : resolvent_scan(cfg.k, args, opt)) {
    bool ok;
    double bound;
    if (cfg.k == 3) {
      bound = std::sqrt(2.0) + 1e-9;
      ok = row.max_norm <= bound;
    } else {
      bound = 0.5 * std::sin(std::numbers::pi / (2 * cfg.k));
      ok = row.min_one_plus_i_omega > 0 && row.min_one_plus_i_omega >= bound;
    }
    r.check(ok);
    r.rows.push_back({std::to_string(row.k), format_real(row.argument), std::to_string(row.samples),
                      format_real(row.min_norm), format_real(row.max_norm), format_real(row.min_one_plus_i_omega),
                      format_real(bound), ok ? "PASS" : "FAIL"});
    if (!ok && cfg.k != 3) r.summary.push_back({"worst fields arg=" + format_real(row.argument), row.worst_fields.to_string()});
  }
  return r;
}

inline Report run_lve_verify(RunConfig cfg, int order, std::optional<int> n_max) {
  require(cfg.k == 3, "the loop vertex expansion is implemented for k = 3");
  require(order >= 1 && order <= 2, "--order must be 1 or 2");
  const int nm = n_max.value_or(2 * order + 1);
  require(nm >= 1 && nm <= typed_tree_cap, "--nmax must lie in [1, " + std::to_string(typed_tree_cap) + "]");
  cfg.settings = {{"order", std::to_string(order)}, {"nmax", std::to_string(nm)}};
  Report r{cfg};
  const auto assembled = lve_logZ_series(nm, order);
  const auto oracle = log_series(partition_series(ModelSpec(3), order));
  r.columns = {"order", "lve", "oracle", "status"};
  for (int m = 1; m <= order; ++m) {
    const bool ok = assembled[m] == oracle[m];
    r.check(ok);
    r.rows.push_back({std::to_string(m), to_string(assembled[m]), to_string(oracle[m]), ok ? "PASS" : "FAIL"});
  }
  return r;
}

struct LveTreeOptions {
  int n = 2;
  std::vector<std::string> channels{"a", "b", "c"};
  std::string tree;
  int order = 2;
  bool numeric = false;
  std::string lambda = "0.001";
  double samples = 1e6;
  double band_A = 10.0;
};

/// Typed trees on n vertices whose edge channels all lie in --channels
/// (optionally restricted to one underlying tree). Symbolic mode lists the
/// exact grade coefficients; numeric mode compares Monte Carlo with the
/// symbolic truncation, passing within 3 standard errors.
inline Report run_lve_tree(RunConfig cfg, const LveTreeOptions& o) {
  require(cfg.k == 3, "the loop vertex expansion is implemented for k = 3");
  require(o.n >= 1 && o.n <= typed_tree_cap, "--n must lie in [1, " + std::to_string(typed_tree_cap) + "]");
  require(o.order >= 0 && o.order <= tree_amplitude_order_cap, "--order outside [0, 3]");
  std::vector<Channel> allowed;
  for (const auto& c : o.channels) {
    require(c.size() == 1, "--channels takes single letters a, b, c");
    try {
      allowed.push_back(parse_channel(c[0]));
    } catch (const ContractViolation& e) {
      throw UsageError(e.what());
    }
  }
  std::optional<LabeledForest> fixed;
  if (!o.tree.empty()) {
    try {
      fixed = LabeledForest::parse(o.tree);
    } catch (const ContractViolation& e) {
      throw UsageError(e.what());
    }
    require(fixed->vertex_count() == o.n && fixed->is_tree(), "--tree must be a spanning tree on --n vertices");
  }
  std::vector<TypedTree> selected;
  for (auto& t : enumerate_typed_trees(o.n)) {
    if (fixed && !(t.tree.edges() == fixed->edges())) continue;
    bool keep = true;
    for (Channel s : t.channels) keep = keep && std::find(allowed.begin(), allowed.end(), s) != allowed.end();
    if (keep) selected.push_back(std::move(t));
  }

  std::string channel_list;
  for (const auto& c : o.channels) channel_list += (channel_list.empty() ? "" : ";") + c;
  cfg.settings = {{"n", std::to_string(o.n)}, {"channels", channel_list}, {"order", std::to_string(o.order)}};
  if (!o.tree.empty()) cfg.settings.push_back({"tree", o.tree});

  if (!o.numeric) {
    Report r{cfg};
    r.columns = {"tree", "grade", "coefficient"};
    for (const auto& t : selected) {
      const auto amp = tree_amplitude(t, o.order);
      for (std::size_t g = 0; g < amp.by_grade.size(); ++g)
        if (!amp.by_grade[g].is_zero())
          r.rows.push_back({t.to_string(), std::to_string(g), format_exact(amp.by_grade[g])});
    }
    r.summary.push_back({"grade", "power of (2 lambda)^(1/4)"});
    return r;
  }

  const Coupling lambda = parse_coupling(o.lambda);
  const std::size_t samples = sample_count(o.samples);
  require(o.band_A > 0, "--band-A must be positive");
  cfg.seed = cfg.seed.value_or(0);
  cfg.settings.push_back({"lambda", format_coupling(lambda)});
  cfg.settings.push_back({"samples", std::to_string(samples)});
  cfg.settings.push_back({"band_A", format_real(o.band_A)});
  Report r{cfg};
  r.columns = {"tree", "symbolic", "numeric", "standard_error", "deviation_in_se", "rejected", "samples", "status"};
  for (const auto& t : selected) {
    const auto symbolic = tree_amplitude(t, o.order).evaluate<double>(lambda);
    const auto est = tree_amplitude_numeric(t, lambda, samples, o.band_A, *cfg.seed);
    const double dev = std::abs(est.value - symbolic);
    const double in_se = est.standard_error > 0 ? dev / est.standard_error : (dev == 0 ? 0.0 : INFINITY);
    const bool ok = in_se <= 3.0;
    r.check(ok);
    r.rows.push_back({t.to_string(), format_complex(symbolic), format_complex(est.value),
                      format_real(est.standard_error), format_real(in_se), std::to_string(est.rejected),
                      std::to_string(est.samples), ok ? "PASS" : "FAIL"});
  }
  return r;
}

/// Link function description:
///   {"n": 3, "kind": "exponential", "linear": {"1-2": "1/2", "2-3": -0.25}}
///   {"n": 2, "kind": "polynomial", "monomials": [{"coefficient": "2", "powers": {"1-2": 3}}]}
/// Coefficients are decimal numbers or exact "p/q" strings.
inline LinkFunction parse_link_function(const nlohmann::json& j) {
  auto rational = [](const nlohmann::json& v) -> Rational {
    if (v.is_string()) {
      static const std::regex frac(R"(([+-]?\d+)(?:/(\d+))?)");
      std::smatch m;
      const std::string s = v.get<std::string>();
      if (!std::regex_match(s, m, frac)) throw UsageError("coefficient '" + s + "' is not p/q");
      const BigInt den = m[2].matched ? BigInt(m[2].str()) : BigInt(1);
      if (den == 0) throw UsageError("zero denominator in '" + s + "'");
      return Rational(BigInt(m[1].str()), den);
    }
    if (v.is_number()) return Rational(v.get<double>());
    throw UsageError("coefficient must be a number or a p/q string");
  };
  auto edge = [](const std::string& key) {
    static const std::regex pair(R"((\d+)-(\d+))");
    std::smatch m;
    if (!std::regex_match(key, m, pair)) throw UsageError("link key '" + key + "' is not i-j");
    return make_edge(std::stoi(m[1]), std::stoi(m[2]));
  };
  try {
    const int n = j.at("n").get<int>();
    const std::string kind = j.value("kind", "exponential");
    if (kind == "exponential") {
      std::map<Edge, Rational> c;
      for (const auto& [key, v] : j.at("linear").items()) c[edge(key)] = rational(v);
      return LinkFunction::exponential(n, c);
    }
    if (kind == "polynomial") {
      std::vector<Monomial> ms;
      for (const auto& m : j.at("monomials")) {
        Monomial mono{rational(m.at("coefficient")), {}};
        for (const auto& [key, p] : m.at("powers").items()) mono.powers[edge(key)] = p.get<int>();
        ms.push_back(mono);
      }
      return LinkFunction::polynomial(n, ms);
    }
    throw UsageError("kind must be 'exponential' or 'polynomial'");
  } catch (const nlohmann::json::exception& e) {
    throw UsageError(std::string("malformed link function: ") + e.what());
  } catch (const ContractViolation& e) {
    throw UsageError(e.what());
  }
}

inline Report run_forest_verify(RunConfig cfg, const std::string& input, const std::string& inline_json,
                                double tolerance) {
  require(input.empty() != inline_json.empty(), "give exactly one of --input and --json");
  nlohmann::json j;
  try {
    if (!input.empty()) {
      std::ifstream in(input);
      if (!in) throw UsageError("cannot read " + input);
      j = nlohmann::json::parse(in);
    } else {
      j = nlohmann::json::parse(inline_json);
    }
  } catch (const nlohmann::json::parse_error& e) {
    throw UsageError(std::string("invalid JSON: ") + e.what());
  }
  const LinkFunction f = parse_link_function(j);
  cfg.settings = {{"n", std::to_string(f.n)}, {"tolerance", format_real(tolerance)}};
  if (!input.empty()) cfg.settings.push_back({"input", input});
  Report r{cfg};
  const auto ex = forest_expand(f);
  r.columns = {"forest", "value", "error_estimate"};
  for (const auto& c : ex.contributions)
    r.rows.push_back({"\"" + c.forest.to_string() + "\"", format_real(c.value), format_real(c.error_estimate)});
  const double rel = std::abs(ex.total - ex.direct) / std::max(std::abs(ex.direct), 1e-300);
  r.summary = {{"forest_sum", format_real(ex.total)},
               {"direct", format_real(ex.direct)},
               {"quadrature_error", format_real(ex.error_estimate)},
               {"relative_error", format_real(rel)}};
  r.check(rel <= tolerance);
  return r;
}

// ---------------------------------------------------------------------------
// Dispatch

inline void write_report(const Report& r, std::ostream& out) {
  const std::string text = r.render();
  out << text;
  std::filesystem::path path;
  if (!r.config.output.empty()) {
    path = r.config.output;
  } else if (const char* dir = std::getenv(output_dir_variable); dir && *dir) {
    path = std::filesystem::path(dir) / (r.config.subcommand + "." + r.config.format);
  } else {
    return;
  }
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream file(path, std::ios::binary);
  if (!file) throw std::runtime_error("cannot write report to " + path.string());
  file << text;
}

inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Zero-dimensional phi^2k toolkit: forest formula, loop vertex expansion, Borel-Le Roy resummation",
               "lve_cli"};
  app.require_subcommand(1);
  app.fallthrough();
  RunConfig cfg;
  std::string format = "csv";
  std::string output;
  app.add_option("--format", format, "Report format")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--output", output, "Report path (default: $LVE_OUTPUT_DIR/<subcommand>.<format>)");

  int k = 3;
  auto add_k = [&](CLI::App* sub) { sub->add_option("--k", k, "Half-degree of the interaction phi^(2k)"); };
  std::uint64_t seed = 0;
  bool seed_given = false;
  auto add_seed = [&](CLI::App* sub) {
    sub->add_option_function<std::uint64_t>("--seed", [&](const std::uint64_t& s) {
      seed = s;
      seed_given = true;
    }, "Random seed");
  };

  auto* series = app.add_subcommand("series", "Exact perturbative coefficients of Z or log Z");
  int order = 12;
  bool log_flag = false;
  add_k(series);
  series->add_option("--order", order, "Truncation order");
  series->add_flag("--log", log_flag, "Coefficients of log Z");

  auto* zeval = app.add_subcommand("z-eval", "Z(lambda) by quadrature");
  std::string lambda = "0.01";
  double tol = 1e-14;
  add_k(zeval);
  zeval->add_option("--lambda", lambda, "Coupling: x, x+yi, yi or r@theta")->required();
  zeval->add_option("--tol", tol, "Relative tolerance");

  auto* scan = app.add_subcommand("remainder-scan", "Taylor remainders and bound ratios");
  int n_max = 10;
  std::vector<double> rays{0.0}, radii{0.01};
  std::optional<double> scan_leroy;
  add_k(scan);
  scan->add_option("--nmax", n_max, "Largest truncation order");
  scan->add_option("--rays", rays, "Arguments of lambda")->delimiter(',');
  scan->add_option("--radii", radii, "Moduli of lambda")->delimiter(',');
  scan->add_option("--leroy", scan_leroy, "Gamma(order*N+1) normalisation order (default k-1)");

  auto* borel = app.add_subcommand("borel-resum", "Borel-Le Roy-Pade resummation against quadrature");
  int borel_n = 10;
  std::string pade_text = "auto";
  std::optional<int> leroy;
  std::optional<double> tolerance;
  add_k(borel);
  borel->add_option("--lambda", lambda, "Coupling")->required();
  borel->add_option("--n", borel_n, "Number of series coefficients used");
  borel->add_option("--pade", pade_text, "'auto' or L/M");
  borel->add_option("--leroy", leroy, "Le Roy order (default k-1)");
  borel->add_option("--tolerance", tolerance, "Fail when the relative error exceeds this");

  auto* resolvent = app.add_subcommand("resolvent-scan", "Resolvent norms over random intermediate fields");
  double samples = 10000;
  std::vector<double> arg_lambda{0.0};
  double modulus = 1.0;
  add_k(resolvent);
  add_seed(resolvent);
  resolvent->add_option("--samples", samples, "Field draws per ray");
  resolvent->add_option("--arg-lambda", arg_lambda, "Arguments of lambda")->delimiter(',');
  resolvent->add_option("--modulus", modulus, "Modulus of lambda");

  auto* verify = app.add_subcommand("lve-verify", "Loop vertex expansion against the exact log Z series");
  int verify_order = 2;
  std::optional<int> verify_nmax;
  verify->add_option("--order", verify_order, "Highest order in lambda");
  verify->add_option("--nmax", verify_nmax, "Largest tree size (default 2*order+1)");

  auto* tree = app.add_subcommand("lve-tree", "Typed-tree amplitudes, exact or Monte Carlo");
  LveTreeOptions tree_opt;
  add_seed(tree);
  tree->add_option("--n", tree_opt.n, "Number of loop vertices");
  tree->add_option("--channels", tree_opt.channels, "Allowed edge channels")->delimiter(',');
  tree->add_option("--tree", tree_opt.tree, "Restrict to one tree, e.g. \"3;1-2,2-3\"");
  tree->add_option("--order", tree_opt.order, "Symbolic truncation order in lambda");
  tree->add_flag("--numeric", tree_opt.numeric, "Monte Carlo mode (n <= 2)");
  tree->add_option("--lambda", tree_opt.lambda, "Coupling for the numeric mode");
  tree->add_option("--samples", tree_opt.samples, "Monte Carlo samples");
  tree->add_option("--band-A", tree_opt.band_A, "Contour band parameter A");

  auto* forest = app.add_subcommand("forest-verify", "Check the forest interpolation identity");
  std::string input, inline_json;
  double forest_tol = 1e-8;
  forest->add_option("--input", input, "JSON link-function file");
  forest->add_option("--json", inline_json, "Inline JSON link function");
  forest->add_option("--tolerance", forest_tol, "Relative tolerance on the identity");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return exit_ok;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return exit_ok;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n\n" << app.help();
    return exit_usage;
  }

  cfg.format = format;
  cfg.output = output;
  cfg.k = k;
  if (seed_given) cfg.seed = seed;
  try {
    Report r;
    if (*series) {
      cfg.subcommand = "series";
      r = run_series(cfg, order, log_flag);
    } else if (*zeval) {
      cfg.subcommand = "z-eval";
      r = run_z_eval(cfg, lambda, tol);
    } else if (*scan) {
      cfg.subcommand = "remainder-scan";
      r = run_remainder_scan(cfg, n_max, rays, radii, scan_leroy);
    } else if (*borel) {
      cfg.subcommand = "borel-resum";
      if (app.get_option("--format")->count() == 0) cfg.format = "json";
      r = run_borel_resum(cfg, lambda, borel_n, pade_text, leroy, tolerance);
    } else if (*resolvent) {
      cfg.subcommand = "resolvent-scan";
      r = run_resolvent_scan(cfg, samples, arg_lambda, modulus);
    } else if (*verify) {
      cfg.subcommand = "lve-verify";
      r = run_lve_verify(cfg, verify_order, verify_nmax);
    } else if (*tree) {
      cfg.subcommand = "lve-tree";
      r = run_lve_tree(cfg, tree_opt);
    } else {
      cfg.subcommand = "forest-verify";
      r = run_forest_verify(cfg, input, inline_json, forest_tol);
    }
    write_report(r, out);
    return r.status == Status::fail ? exit_fail : exit_ok;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return exit_usage;
  } catch (const ContractViolation& e) {
    err << "usage error: " << e.what() << "\n";
    return exit_usage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return exit_fail;
  }
}

}  // namespace lve::cli
