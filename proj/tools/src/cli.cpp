#include "qfreg_cli/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qfreg/bouleau.hpp"
#include "qfreg/certify.hpp"
#include "qfreg/clt_experiment.hpp"
#include "qfreg/determinantal.hpp"
#include "qfreg/dirichlet_polynomial.hpp"
#include "qfreg/error.hpp"
#include "qfreg/estimation.hpp"
#include "qfreg/ibp.hpp"
#include "qfreg/io.hpp"
#include "qfreg/parallel.hpp"
#include "qfreg/smallball.hpp"
#include "qfreg/spectral.hpp"
#include "qfreg/splitting.hpp"

namespace qfreg::cli {
namespace {

using io::json;

const std::vector<std::string> kCommands{"spectral", "certify",        "split",    "smallball",
                                         "charfn",   "clt-experiment", "ibp-check"};

struct Global {
  std::uint64_t seed = 1;
  std::optional<std::size_t> samples;
  std::string out_dir;
  std::optional<std::size_t> threads;
  std::string format = "auto";
};

struct Outcome {
  std::string text;
  std::string extension;
  int code = 0;
};

enum class Format { json, csv };

Format resolve_format(const Global& g, Format fallback, bool csv_supported) {
  if (g.format == "auto") return fallback;
  if (g.format == "json") return Format::json;
  if (!csv_supported) throw InputError("this command writes JSON only");
  return Format::csv;
}

json number(double v) {
  if (std::isfinite(v)) return v;
  return io::format_double(v);
}

Outcome json_outcome(const json& j, int code = 0) { return {j.dump(2) + "\n", "json", code}; }

std::size_t samples_or(const Global& g, std::size_t fallback) { return g.samples.value_or(fallback); }

// ------------------------------------------------------------------ config

bool mentions_flag(const std::vector<std::string>& args, const std::string& flag) {
  return std::any_of(args.begin(), args.end(),
                     [&](const std::string& a) { return a == flag || a.rfind(flag + "=", 0) == 0; });
}

/// Keys also given explicitly in `explicit_args` are left out, so that
/// explicit values replace config values instead of extending lists.
std::vector<std::string> tokens_from_object(const json& obj, const std::vector<std::string>& explicit_args) {
  std::vector<std::string> t;
  if (obj.is_null()) return t;
  if (!obj.is_object()) throw InputError("config sections must be JSON objects");
  for (const auto& [key, value] : obj.items()) {
    const std::string flag = "--" + key;
    if (mentions_flag(explicit_args, flag)) continue;
    if (value.is_boolean()) {
      if (value.get<bool>()) t.push_back(flag);
    } else if (value.is_array()) {
      t.push_back(flag);
      for (const auto& e : value) t.push_back(e.is_string() ? e.get<std::string>() : e.dump());
    } else if (value.is_string()) {
      t.push_back(flag);
      t.push_back(value.get<std::string>());
    } else if (!value.is_null()) {
      t.push_back(flag);
      t.push_back(value.dump());
    }
  }
  return t;
}

/// Splices a JSON config {"command", "global", "args"} in front of the
/// explicit arguments; explicit options take precedence.
std::vector<std::string> expand_config(const std::vector<std::string>& args) {
  std::vector<std::string> rest;
  std::optional<std::string> path;
  for (std::size_t k = 0; k < args.size(); ++k) {
    if (args[k] == "--config") {
      if (k + 1 >= args.size()) throw InputError("--config needs a file");
      path = args[++k];
    } else if (args[k].rfind("--config=", 0) == 0) {
      path = args[k].substr(9);
    } else {
      rest.push_back(args[k]);
    }
  }
  if (!path) return rest;
  const json cfg = io::read_json_file(*path);
  if (!cfg.is_object() || !cfg.contains("command") || !cfg.at("command").is_string()) {
    throw InputError("config needs a 'command' string");
  }
  const std::string command = cfg.at("command").get<std::string>();
  auto split = std::find(rest.begin(), rest.end(), command);
  const std::vector<std::string> explicit_global(rest.begin(), split);
  const std::vector<std::string> explicit_sub(split == rest.end() ? split : split + 1, rest.end());
  std::vector<std::string> out = tokens_from_object(cfg.value("global", json::object()), explicit_global);
  out.insert(out.end(), rest.begin(), split);
  out.push_back(command);
  const auto sub = tokens_from_object(cfg.value("args", json::object()), explicit_sub);
  out.insert(out.end(), sub.begin(), sub.end());
  if (split != rest.end()) out.insert(out.end(), split + 1, rest.end());
  return out;
}

json option_config(const CLI::App& sub) {
  json args = json::object();
  for (const CLI::Option* opt : sub.get_options()) {
    if (opt->get_lnames().empty()) continue;
    const std::string key = opt->get_lnames().front();
    if (key == "help") continue;
    if (opt->get_type_size() == 0) {
      args[key] = opt->count() > 0;
      continue;
    }
    std::vector<std::string> values;
    if (opt->count() > 0) {
      values = opt->results();
    } else {
      std::string d = opt->get_default_str();
      if (d.empty()) continue;
      if (d.front() == '[' && d.back() == ']') d = d.substr(1, d.size() - 2);
      std::stringstream ss(d);
      std::string tok;
      while (std::getline(ss, tok, ',')) values.push_back(tok);
    }
    if (opt->get_expected_max() > 1) {
      args[key] = values;
    } else if (!values.empty()) {
      args[key] = values.back();
    }
  }
  return args;
}

// ---------------------------------------------------------------- commands

struct SpectralArgs {
  std::string op;
  std::size_t q_max = 4;
  bool oracle = false;
};

Outcome run_spectral(const SpectralArgs& a, const Global& g) {
  resolve_format(g, Format::json, false);
  const SymmetricOperator op = io::load_operator(a.op);
  const std::size_t n = op.dimension();
  const std::size_t q_max = std::min(a.q_max, n);
  const SpectrumSummary s = summarize(op, q_max);
  json j = io::spectrum_to_json(s);
  j["n"] = n;
  j["q_max"] = q_max;
  if (s.frobenius_sq > 0.0) {
    const SymmetricOperator nop = op.normalized();
    json bounds = json::array();
    for (std::size_t q = 1; q <= q_max; ++q) {
      const auto b = spectral_radius_bounds_check(nop, q);
      bounds.push_back({{"q", q},
                        {"remainder_tuple", b.remainder_tuple},
                        {"product_bound", b.product_bound},
                        {"product_applicable", b.product_applicable},
                        {"remainder_bound_holds", b.remainder_bound_holds},
                        {"tau", b.tau},
                        {"rho_sq", b.rho_sq},
                        {"influence_bound_holds", b.influence_bound_holds}});
    }
    j["normalized_bounds"] = bounds;
  }
  if (a.oracle) {
    if (n > 12) {
      j["oracle"] = {{"skipped", "brute-force minor sums need n <= 12"}};
    } else {
      json rows = json::array();
      for (std::size_t q = 1; q <= std::min<std::size_t>(q_max, 6); ++q) {
        const double cb = cauchy_binet_oracle(op, q);
        const double eq = s.remainders_set[q];
        const double rel = std::abs(cb - eq) / std::max(std::abs(eq), 1e-300);
        rows.push_back({{"q", q},
                        {"minor_sum", cb},
                        {"elementary_symmetric", eq},
                        {"relative_gap", rel},
                        {"agrees", rel <= 1e-8 || std::abs(cb - eq) <= 1e-14}});
      }
      j["oracle"] = rows;
    }
  }
  return json_outcome(j);
}

struct CertifyArgs {
  std::string op;
  std::size_t q = 1;
  double theta = 0.5;
  std::string reading = "literal";
  std::string theta_mode = "recursion";
  std::optional<double> override_tau_q;
  std::optional<double> override_theta_2qprime;
};

Outcome run_certify(const CertifyArgs& a, const Global& g) {
  resolve_format(g, Format::json, false);
  const SymmetricOperator op = io::load_operator(a.op);
  if (!(a.theta > 0.0)) throw InputError("theta must be positive");
  CertifyOptions o;
  o.reading = io::tau_reading_from_string(a.reading);
  o.theta_mode = io::theta_mode_from_string(a.theta_mode);
  if (a.override_tau_q) o.tau_q_override = LogScalar::from_log2(*a.override_tau_q);
  if (a.override_theta_2qprime) o.theta_2qprime_override = LogScalar::from_log2(*a.override_theta_2qprime);
  const CertificateReport r = certify_quadratic(op, a.q, LogScalar::from_double(a.theta), o);
  return json_outcome(io::certificate_to_json(r), exit_code(r));
}

struct SplitArgs {
  std::string input;
  std::optional<std::size_t> q;
  std::optional<std::size_t> kappa;
  std::string mode = "sampling";
  std::size_t depth_limit = 16;
  std::size_t max_attempts = 1024;
  bool once = false;
};

SplitMode split_mode_from_string(const std::string& s) {
  if (s == "sampling") return SplitMode::sampling;
  if (s == "greedy") return SplitMode::greedy;
  throw InputError("unknown split mode '" + s + "' (sampling|greedy)");
}

Outcome run_split(const SplitArgs& a, const Global& g, std::ostream& err) {
  resolve_format(g, Format::json, false);
  const json in = io::read_json_file(a.input);
  DeterminantalOperator b;
  if (in.is_object() && in.contains("entries")) {
    b = io::determinantal_from_json(in);
  } else {
    if (!a.q) throw InputError("--q is required when the input is an operator");
    b = build_from_operator(io::operator_from_json(in), *a.q);
  }
  const SplitMode mode = split_mode_from_string(a.mode);
  try {
    if (a.once) {
      SplitOptions o{g.seed, a.max_attempts, mode};
      return json_outcome(io::split_result_to_json(split_once(b, o)));
    }
    IteratedSplitOptions o;
    o.seed = g.seed;
    o.target_kappa = a.kappa;
    o.depth_limit = a.depth_limit;
    o.max_attempts = a.max_attempts;
    o.mode = mode;
    return json_outcome(io::split_tree_to_json(iterated_split(b, o)));
  } catch (const SplitFailure& f) {
    err << "refused: " << f.what() << "\n";
    return json_outcome({{"refused", f.what()}, {"best", io::split_result_to_json(f.best())}}, 2);
  }
}

struct SmallballArgs {
  std::string poly;
  std::string law = "gaussian";
  std::vector<double> eps{1e-2, 1e-3, 1e-4};
};

Outcome run_smallball(const SmallballArgs& a, const Global& g) {
  const Format f = resolve_format(g, Format::csv, true);
  const MultilinearPolynomial p = io::polynomial_from_json(io::read_json_file(a.poly));
  const io::LawSpec spec = io::parse_law_argument(a.law);
  const SmallBallTable t = smallball_estimate(p, spec.law, a.eps, samples_or(g, 100000), g.seed);
  if (f == Format::json) return json_outcome(io::smallball_to_json(t));
  std::ostringstream ss;
  io::write_smallball_csv(ss, t);
  return {ss.str(), "csv", 0};
}

struct CharfnArgs {
  std::vector<double> lambdas;
  std::string op;
  std::string law = "gaussian";
  double xi_max = kDefaultXiMax;
  std::size_t xi_points = kDefaultXiPoints;
  std::size_t q_max = 4;
};

Outcome run_charfn(const CharfnArgs& a, const Global& g) {
  const Format f = resolve_format(g, Format::csv, true);
  if (a.lambdas.empty() == a.op.empty()) throw InputError("give exactly one of --lambdas or --operator");
  const std::size_t M = samples_or(g, 100000);
  std::vector<double> lam;
  bool exact = true;
  std::vector<double> samples;
  if (!a.lambdas.empty()) {
    lam = a.lambdas;
    if (M > 0) samples = sample_gaussian_qf(lam, M, g.seed);
  } else {
    const SymmetricOperator op = io::load_operator(a.op);
    const io::LawSpec spec = io::parse_law_argument(a.law);
    exact = spec.law.kind() == LawKind::gaussian;
    if (exact) {
      const auto& ev = op.eigenvalues();
      lam.assign(ev.data(), ev.data() + ev.size());
    }
    if (M > 0) samples = sample_quadratic_form(op, spec.law, M, g.seed, false);
  }
  if (!exact && M == 0) throw InputError("no exact formula for this law; need --samples > 0");
  const std::vector<double> grid = uniform_grid(a.xi_max, a.xi_points);
  std::optional<EcfTable> table;
  if (M > 0) table = ecf(samples, grid);
  const std::size_t q_max = std::min(a.q_max, lam.size());

  std::vector<std::string> columns{"xi"};
  if (table) columns.insert(columns.end(), {"ecf_re", "ecf_im", "ecf_modulus", "band"});
  if (exact) {
    columns.push_back("exact_modulus");
    for (std::size_t q = 1; q <= q_max; ++q) columns.push_back("bound_q" + std::to_string(q));
    columns.push_back("bounds_hold");
  }
  std::vector<std::vector<double>> rows;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    std::vector<double> r{grid[k]};
    if (table) r.insert(r.end(), {table->re[k], table->im[k], table->modulus(k), table->band});
    if (exact) {
      const GaussianQfCf c = gaussian_qf_cf(lam, grid[k]);
      r.push_back(c.modulus);
      for (std::size_t q = 1; q <= q_max; ++q) r.push_back(c.bounds[q - 1].to_double());
      r.push_back(c.bounds_hold ? 1.0 : 0.0);
    }
    rows.push_back(std::move(r));
  }
  if (f == Format::json) {
    json jr = json::array();
    for (const auto& r : rows) {
      json row = json::array();
      for (double v : r) row.push_back(number(v));
      jr.push_back(std::move(row));
    }
    return json_outcome({{"schema_version", io::kSchemaVersion},
                         {"M", M},
                         {"seed", g.seed},
                         {"xi_max", a.xi_max},
                         {"xi_points", a.xi_points},
                         {"columns", columns},
                         {"rows", jr}});
  }
  std::ostringstream ss;
  io::CsvWriter w(ss);
  w.header(columns);
  for (const auto& r : rows) w.row(r);
  return {ss.str(), "csv", 0};
}

struct CltArgs {
  std::string family = "banded";
  std::vector<std::size_t> n_list{32, 64, 128, 256};
  std::vector<std::string> operators;
  std::string law = "gaussian";
  double xi_max = 8.0;
  std::size_t xi_points = 257;
  std::vector<double> s_list{1.0, 2.0, 4.0};
};

Outcome run_clt(const CltArgs& a, const Global& g, std::ostream& err) {
  const Format f = resolve_format(g, Format::csv, true);
  CltOptions o;
  o.family = operator_family_from_string(a.family);
  o.n_list = a.n_list;
  o.M = samples_or(g, 100000);
  o.seed = g.seed;
  o.xi_max = a.xi_max;
  o.xi_points = a.xi_points;
  o.s_list = a.s_list;
  std::vector<SymmetricOperator> custom;
  for (const auto& p : a.operators) custom.push_back(io::load_operator(p));
  const CltReport r = run_clt_experiment(o, io::parse_law_argument(a.law).law, custom);
  for (const auto& w : r.warnings) err << "warning: " << w << "\n";
  if (f == Format::json) return json_outcome(io::clt_to_json(r));
  std::ostringstream ss;
  io::write_clt_csv(ss, r);
  return {ss.str(), "csv", 0};
}

struct IbpArgs {
  std::string law = "gaussian";
  std::string functional = "sum";
  std::size_t n = 2;
  std::size_t k = 1;
  std::string test = "both";
  std::string recursion = "as_stated";
};

IbpRecursion recursion_from_string(const std::string& s) {
  if (s == "as_stated" || s == "as-stated") return IbpRecursion::as_stated;
  if (s == "corrected") return IbpRecursion::corrected;
  throw InputError("unknown recursion '" + s + "' (as_stated|corrected)");
}

Outcome run_ibp(const IbpArgs& a, const Global& g) {
  const Format f = resolve_format(g, Format::csv, true);
  if (a.n == 0) throw InputError("--n must be positive");
  const io::LawSpec spec = io::parse_law_argument(a.law);
  const SampleBatch batch = sample_batch(spec.law, a.n, samples_or(g, 100000), g.seed, spec.standardize);

  std::optional<SmoothField> field;
  std::optional<Polynomial> poly;
  if (a.functional == "sum") {
    field = fields::linear(std::vector<double>(a.n, 1.0));
    Polynomial p(a.n);
    for (std::size_t i = 0; i < a.n; ++i) p = p + Polynomial::variable(a.n, i);
    poly = p;
  } else if (a.functional == "cubic") {
    Polynomial p(a.n);
    for (std::size_t i = 0; i < a.n; ++i) p = p + Polynomial::variable(a.n, i);
    const Polynomial x0 = Polynomial::variable(a.n, 0);
    poly = p + x0 * x0 * x0 * (1.0 / 3.0);
  } else if (a.functional == "sine-chain") {
    field = fields::sine_chain(a.n);
  } else {
    throw InputError("unknown functional '" + a.functional + "' (sum|cubic|sine-chain)");
  }
  const IbpRecursion rec = recursion_from_string(a.recursion);

  std::vector<double> fv(batch.M);
  for (std::size_t m = 0; m < batch.M; ++m) {
    fv[m] = field ? field->value(batch.row(m)) : poly->evaluate(batch.row(m));
  }
  std::vector<TestFunction> tests;
  if (a.test == "sine" || a.test == "both") tests.push_back(TestFunction{});
  if (a.test == "bump" || a.test == "both") tests.push_back(default_bump(fv));
  if (tests.empty()) throw InputError("unknown test function '" + a.test + "' (sine|bump|both)");

  std::vector<IbpCheck> checks;
  for (const auto& phi : tests) {
    if (a.k == 1 && field) {
      checks.push_back(ibp_check(CylinderFunctional{*field, spec.law}, batch, phi));
    } else if (poly) {
      checks.push_back(ibp_check_polynomial(*poly, spec.law, a.k, batch, phi, rec));
    } else {
      throw InputError("k > 1 needs a polynomial functional (sum|cubic)");
    }
  }
  if (f == Format::json) {
    json rows = json::array();
    for (const auto& c : checks) {
      rows.push_back({{"k", c.k},
                      {"test_function", c.test_function},
                      {"lhs", number(c.lhs)},
                      {"rhs", number(c.rhs)},
                      {"gap", number(c.gap)},
                      {"std_error", number(c.std_error)},
                      {"gap_in_std_errors", number(c.gap_in_std_errors)},
                      {"floor_fraction", c.floor_fraction},
                      {"skipped", c.skipped},
                      {"diagnosis", c.diagnosis},
                      {"passed", c.passed},
                      {"M", c.M}});
    }
    return json_outcome({{"schema_version", io::kSchemaVersion},
                         {"law", spec.law.name()},
                         {"functional", a.functional},
                         {"recursion", to_string(rec)},
                         {"checks", rows}});
  }
  std::ostringstream ss;
  io::CsvWriter w(ss);
  w.header({"k", "test_function", "lhs", "rhs", "gap", "std_error", "gap_in_std_errors",
            "floor_fraction", "skipped", "passed"});
  for (const auto& c : checks) {
    w.cells({std::to_string(c.k), c.test_function, io::CsvWriter::cell(c.lhs), io::CsvWriter::cell(c.rhs),
             io::CsvWriter::cell(c.gap), io::CsvWriter::cell(c.std_error),
             io::CsvWriter::cell(c.gap_in_std_errors), io::CsvWriter::cell(c.floor_fraction),
             c.skipped ? "1" : "0", c.passed ? "1" : "0"});
  }
  return {ss.str(), "csv", 0};
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"qfreg: regularity of quadratic forms and multilinear chaos"};
  app.name("qfreg");
  app.require_subcommand(1);
  app.fallthrough();
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

  Global g;
  std::string config_unused;
  app.add_option("--seed", g.seed, "Master seed")->capture_default_str();
  app.add_option("--samples", g.samples, "Monte Carlo sample count M");
  app.add_option("--out", g.out_dir, "Directory for result and manifest files");
  app.add_option("--threads", g.threads, "Worker threads (default: QFREG_THREADS or all cores)");
  app.add_option("--format", g.format, "Output format")
      ->check(CLI::IsMember({"auto", "json", "csv"}))
      ->capture_default_str();
  app.add_option("--config", config_unused, "JSON config {command, global, args}");

  SpectralArgs sp;
  auto* c_sp = app.add_subcommand("spectral", "Spectrum, remainders and influences of an operator");
  c_sp->add_option("--operator", sp.op, "Operator JSON file")->required();
  c_sp->add_option("--q-max", sp.q_max)->capture_default_str();
  c_sp->add_flag("--oracle", sp.oracle, "Compare with brute-force minor sums");

  CertifyArgs ce;
  auto* c_ce = app.add_subcommand("certify", "Regularity certificate for <X, A X>");
  c_ce->add_option("--operator", ce.op, "Operator JSON file")->required();
  c_ce->add_option("--q", ce.q)->capture_default_str();
  c_ce->add_option("--theta", ce.theta, "Small-ball exponent of the coordinates")->capture_default_str();
  c_ce->add_option("--reading", ce.reading)
      ->check(CLI::IsMember({"literal", "reciprocal"}))
      ->capture_default_str();
  c_ce->add_option("--theta-mode", ce.theta_mode)->capture_default_str();
  c_ce->add_option("--override-tau-q", ce.override_tau_q, "log2 of a replacement tau_q");
  c_ce->add_option("--override-theta-2qprime", ce.override_theta_2qprime,
                   "log2 of a replacement theta_{2q'}");

  SplitArgs sl;
  auto* c_sl = app.add_subcommand("split", "Iterated mass splitting of a determinantal operator");
  c_sl->add_option("--input", sl.input, "Determinantal dump or operator JSON")->required();
  c_sl->add_option("--q", sl.q, "Subset size when the input is an operator");
  c_sl->add_option("--kappa", sl.kappa, "Target depth");
  c_sl->add_option("--mode", sl.mode)->capture_default_str();
  c_sl->add_option("--depth-limit", sl.depth_limit)->capture_default_str();
  c_sl->add_option("--max-attempts", sl.max_attempts)->capture_default_str();
  c_sl->add_flag("--once", sl.once, "Single split instead of the tree");

  SmallballArgs sb;
  auto* c_sb = app.add_subcommand("smallball", "Small-ball probabilities of a multilinear polynomial");
  c_sb->add_option("--poly", sb.poly, "Polynomial JSON file")->required();
  c_sb->add_option("--law", sb.law)->capture_default_str();
  c_sb->add_option("--eps", sb.eps)->capture_default_str();

  CharfnArgs cf;
  auto* c_cf = app.add_subcommand("charfn", "Characteristic function of a quadratic form");
  c_cf->add_option("--lambdas", cf.lambdas, "Eigenvalues (Gaussian coordinates)");
  c_cf->add_option("--operator", cf.op, "Operator JSON file");
  c_cf->add_option("--law", cf.law)->capture_default_str();
  c_cf->add_option("--xi-max", cf.xi_max)->capture_default_str();
  c_cf->add_option("--xi-points", cf.xi_points)->capture_default_str();
  c_cf->add_option("--q-max", cf.q_max)->capture_default_str();

  CltArgs cl;
  auto* c_cl = app.add_subcommand("clt-experiment", "Normal convergence of quadratic forms");
  c_cl->add_option("--family", cl.family)
      ->check(CLI::IsMember({"banded", "wigner", "custom", "custom-list"}))
      ->capture_default_str();
  c_cl->add_option("--n-list", cl.n_list)->capture_default_str();
  c_cl->add_option("--operators", cl.operators, "Operator files for the custom family");
  c_cl->add_option("--law", cl.law)->capture_default_str();
  c_cl->add_option("--xi-max", cl.xi_max)->capture_default_str();
  c_cl->add_option("--xi-points", cl.xi_points)->capture_default_str();
  c_cl->add_option("--s-list", cl.s_list)->capture_default_str();

  IbpArgs ib;
  auto* c_ib = app.add_subcommand("ibp-check", "Monte Carlo integration-by-parts identity");
  c_ib->add_option("--law", ib.law)->capture_default_str();
  c_ib->add_option("--functional", ib.functional)->capture_default_str();
  c_ib->add_option("--n", ib.n)->capture_default_str();
  c_ib->add_option("--k", ib.k)->capture_default_str();
  c_ib->add_option("--test", ib.test)->capture_default_str();
  c_ib->add_option("--recursion", ib.recursion)->capture_default_str();

  try {
    std::vector<std::string> args(argv + 1, argv + argc);
    args = expand_config(args);
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }

  try {
    if (g.threads) set_thread_count(*g.threads);
    CLI::App* sub = app.get_subcommands().front();
    const std::string name = sub->get_name();
    Outcome o;
    if (name == "spectral") o = run_spectral(sp, g);
    else if (name == "certify") o = run_certify(ce, g);
    else if (name == "split") o = run_split(sl, g, err);
    else if (name == "smallball") o = run_smallball(sb, g);
    else if (name == "charfn") o = run_charfn(cf, g);
    else if (name == "clt-experiment") o = run_clt(cl, g, err);
    else o = run_ibp(ib, g);

    out << o.text;
    if (!g.out_dir.empty()) {
      json global{{"seed", std::to_string(g.seed)}, {"format", g.format}};
      if (g.samples) global["samples"] = std::to_string(*g.samples);
      if (g.threads) global["threads"] = std::to_string(*g.threads);
      json cfg{{"command", name}, {"global", global}, {"args", option_config(*sub)}};
      const std::filesystem::path dir(g.out_dir);
      io::write_text_file(dir / ("result." + o.extension), o.text);
      io::write_text_file(dir / "manifest.json", io::manifest(name, cfg, g.seed).dump(2) + "\n");
      io::write_text_file(dir / "config.json", cfg.dump(2) + "\n");
    }
    return o.code;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace qfreg::cli
