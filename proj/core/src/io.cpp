#include "qfreg/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "qfreg/error.hpp"
#include "qfreg/smooth_map.hpp"

namespace qfreg::io {

namespace {

std::size_t require_size(const json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_number_integer() || j.at(key).get<long long>() < 0) {
    throw InputError(std::string("expected nonnegative integer field '") + key + "'");
  }
  return j.at(key).get<std::size_t>();
}

double require_number(const json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_number()) {
    throw InputError(std::string("expected numeric field '") + key + "'");
  }
  return j.at(key).get<double>();
}

double number_or_string(const json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s == "inf" || s == "+inf") return INFINITY;
    if (s == "-inf") return -INFINITY;
    if (s == "nan") return NAN;
  }
  throw InputError("expected a number");
}

json number_json(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}

std::vector<std::size_t> index_list(const json& j) {
  if (!j.is_array()) throw InputError("expected an array of indices");
  std::vector<std::size_t> out;
  for (const auto& e : j) {
    if (!e.is_number_integer() || e.get<long long>() < 0) {
      throw InputError("indices must be nonnegative integers");
    }
    out.push_back(e.get<std::size_t>());
  }
  return out;
}

json subset_json(SubsetCode c) { return decode_subset(c); }

json family_json(const std::vector<SubsetCode>& family) {
  json a = json::array();
  for (SubsetCode c : family) a.push_back(subset_json(c));
  return a;
}

}  // namespace

json parse_json(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw InputError(std::string("malformed JSON: ") + e.what());
  }
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  try {
    return parse_json(ss.str());
  } catch (const InputError& e) {
    throw InputError(path.string() + ": " + e.what());
  }
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write '" + path.string() + "'");
  out << text;
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

json log2_json(LogScalar v) {
  if (v.is_zero()) return "-inf";
  if (v.is_infinite()) return "inf";
  return v.log2();
}

LogScalar log_scalar_from_json(const json& j) {
  const double l = number_or_string(j);
  if (std::isnan(l)) throw InputError("log2 value is nan");
  if (l == -INFINITY) return LogScalar::zero();
  if (l == INFINITY) return LogScalar::infinity();
  return LogScalar::from_log2(l);
}

// ---------------------------------------------------------------- operators

SymmetricOperator operator_from_json(const json& j) {
  if (!j.is_object()) throw InputError("operator must be a JSON object");
  const std::size_t n = require_size(j, "n");
  if (n == 0) throw InputError("operator dimension must be positive");
  const std::string format = j.value("format", std::string("dense"));
  if (!j.contains("data") || !j.at("data").is_array()) throw InputError("operator needs a 'data' array");
  const json& data = j.at("data");
  const auto N = static_cast<Eigen::Index>(n);
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(N, N);
  if (format == "dense") {
    if (data.size() != n) throw InputError("dense operator needs n rows");
    for (std::size_t i = 0; i < n; ++i) {
      const json& row = data.at(i);
      if (!row.is_array() || row.size() != n) throw InputError("dense operator rows need n entries");
      for (std::size_t k = 0; k < n; ++k) {
        if (!row.at(k).is_number()) throw InputError("operator entries must be numbers");
        a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = row.at(k).get<double>();
      }
    }
  } else if (format == "sparse") {
    std::vector<std::vector<bool>> seen(n, std::vector<bool>(n, false));
    for (const json& e : data) {
      if (!e.is_array() || e.size() != 3 || !e[0].is_number_integer() || !e[1].is_number_integer() ||
          !e[2].is_number()) {
        throw InputError("sparse entries must be [i, j, value]");
      }
      const long long i = e[0].get<long long>(), k = e[1].get<long long>();
      if (i < 0 || k < 0 || static_cast<std::size_t>(i) >= n || static_cast<std::size_t>(k) >= n) {
        throw InputError("sparse entry index out of range");
      }
      if (seen[i][k]) throw InputError("duplicate sparse entry");
      seen[i][k] = true;
      a(i, k) = e[2].get<double>();
    }
  } else {
    throw InputError("unknown operator format '" + format + "'");
  }
  if (!a.allFinite()) throw InputError("operator entries must be finite");
  return SymmetricOperator(std::move(a));
}

json operator_to_json(const SymmetricOperator& op, bool sparse) {
  const std::size_t n = op.dimension();
  json j{{"n", n}, {"format", sparse ? "sparse" : "dense"}};
  json data = json::array();
  for (std::size_t i = 0; i < n; ++i) {
    if (sparse) {
      for (std::size_t k = 0; k < n; ++k) {
        if (op(i, k) != 0.0) data.push_back(json::array({i, k, op(i, k)}));
      }
    } else {
      json row = json::array();
      for (std::size_t k = 0; k < n; ++k) row.push_back(op(i, k));
      data.push_back(std::move(row));
    }
  }
  j["data"] = std::move(data);
  return j;
}

SymmetricOperator load_operator(const std::filesystem::path& path) {
  const json j = read_json_file(path);
  try {
    return operator_from_json(j);
  } catch (const InputError& e) {
    throw InputError(path.string() + ": " + e.what());
  }
}

// --------------------------------------------------------------------- laws

LawSpec law_from_json(const json& j) {
  if (j.is_string()) return parse_law_argument(j.get<std::string>());
  if (!j.is_object() || !j.contains("kind") || !j.at("kind").is_string()) {
    throw InputError("law spec needs a 'kind'");
  }
  const std::string kind = j.at("kind").get<std::string>();
  const json params = j.value("params", json::object());
  LawSpec spec;
  spec.standardize = j.value("standardize", true);
  if (kind == "gaussian") {
    spec.law = DirichletVariable::gaussian();
  } else if (kind == "beta") {
    spec.law = DirichletVariable::beta(require_number(params, "alpha"), require_number(params, "beta"));
  } else if (kind == "gamma") {
    spec.law = DirichletVariable::gamma(require_number(params, "alpha"));
  } else if (kind == "phi_gaussian") {
    if (!params.contains("map") || !params.at("map").is_string()) {
      throw InputError("phi_gaussian needs params.map");
    }
    std::optional<double> theta, mean, var;
    if (params.contains("theta")) theta = require_number(params, "theta");
    if (params.contains("mean")) mean = require_number(params, "mean");
    if (params.contains("variance")) var = require_number(params, "variance");
    spec.law = DirichletVariable::phi_gaussian(smooth_map_by_name(params.at("map").get<std::string>()),
                                               theta, mean, var);
  } else if (kind == "chaos") {
    if (!params.contains("base") || !params.contains("polynomial")) {
      throw InputError("chaos needs params.base and params.polynomial");
    }
    std::vector<DirichletVariable> base;
    const json& b = params.at("base");
    if (b.is_array()) {
      for (const auto& e : b) base.push_back(law_from_json(e).law);
    } else {
      base.push_back(law_from_json(b).law);
    }
    spec.law = DirichletVariable::chaos(std::move(base), polynomial_from_json(params.at("polynomial")));
  } else {
    throw InputError("unknown law kind '" + kind + "'");
  }
  return spec;
}

json law_to_json(const LawSpec& spec) {
  const DirichletVariable& v = spec.law;
  json params = json::object();
  switch (v.kind()) {
    case LawKind::gaussian: break;
    case LawKind::beta:
      params["alpha"] = v.alpha();
      params["beta"] = v.beta_param();
      break;
    case LawKind::gamma: params["alpha"] = v.alpha(); break;
    case LawKind::phi_gaussian:
      params["map"] = v.map().name;
      if (v.declared_theta()) params["theta"] = *v.declared_theta();
      if (v.has_moments()) {
        params["mean"] = v.mean();
        params["variance"] = v.variance();
      }
      break;
    case LawKind::chaos: {
      json base = json::array();
      for (const auto& b : v.chaos_base()) base.push_back(law_to_json({b, true}));
      params["base"] = std::move(base);
      params["polynomial"] = polynomial_to_json(v.chaos_poly());
      break;
    }
  }
  return json{{"kind", to_string(v.kind())}, {"params", params}, {"standardize", spec.standardize}};
}

LawSpec parse_law_argument(const std::string& text) {
  const auto colon = text.find(':');
  const std::string kind = text.substr(0, colon);
  std::vector<double> args;
  std::string map_name;
  if (colon != std::string::npos) {
    std::stringstream ss(text.substr(colon + 1));
    std::string tok;
    while (std::getline(ss, tok, ',')) {
      if (kind == "phi" || kind == "phi_gaussian") {
        if (map_name.empty()) {
          map_name = tok;
          continue;
        }
      }
      double v = 0.0;
      const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
      if (res.ec != std::errc() || res.ptr != tok.data() + tok.size()) {
        throw InputError("bad law parameter '" + tok + "' in '" + text + "'");
      }
      args.push_back(v);
    }
  }
  auto need = [&](std::size_t k) {
    if (args.size() != k) {
      throw InputError("law '" + kind + "' expects " + std::to_string(k) + " parameter(s)");
    }
  };
  LawSpec spec;
  if (kind == "gaussian") {
    need(0);
  } else if (kind == "beta") {
    need(2);
    spec.law = DirichletVariable::beta(args[0], args[1]);
  } else if (kind == "gamma") {
    need(1);
    spec.law = DirichletVariable::gamma(args[0]);
  } else if (kind == "phi" || kind == "phi_gaussian") {
    if (map_name.empty()) throw InputError("phi law needs a map name, e.g. phi:sine");
    std::optional<double> theta;
    if (!args.empty()) theta = args[0];
    spec.law = DirichletVariable::phi_gaussian(smooth_map_by_name(map_name), theta);
  } else if (std::filesystem::exists(text)) {
    return law_from_json(read_json_file(text));
  } else {
    throw InputError("unknown law '" + text + "'");
  }
  return spec;
}

// -------------------------------------------------------------- polynomials

MultilinearPolynomial polynomial_from_json(const json& j) {
  if (!j.is_object()) throw InputError("polynomial must be a JSON object");
  const std::size_t n = require_size(j, "n");
  if (!j.contains("terms") || !j.at("terms").is_array()) throw InputError("polynomial needs 'terms'");
  std::vector<MultilinearPolynomial::Term> terms;
  for (const json& t : j.at("terms")) {
    if (!t.is_array() || t.size() != 2 || !t[1].is_number()) {
      throw InputError("polynomial terms must be [[indices], coeff]");
    }
    terms.emplace_back(index_list(t[0]), t[1].get<double>());
  }
  return MultilinearPolynomial(n, terms);
}

json polynomial_to_json(const MultilinearPolynomial& p) {
  json terms = json::array();
  for (const auto& [mono, c] : p.coefficients()) terms.push_back(json::array({mono, c}));
  return json{{"n", p.variable_count()}, {"terms", terms}};
}

// ---------------------------------------------------- determinantal operators

DeterminantalOperator determinantal_from_json(const json& j) {
  if (!j.is_object()) throw InputError("determinantal dump must be a JSON object");
  const std::size_t q = require_size(j, "q");
  const std::size_t n = require_size(j, "n");
  if (!j.contains("entries") || !j.at("entries").is_array()) {
    throw InputError("determinantal dump needs 'entries'");
  }
  std::vector<DeterminantalEntry> entries;
  for (const json& e : j.at("entries")) {
    if (!e.is_array() || e.size() != 3 || !e[2].is_number()) {
      throw InputError("determinantal entries must be [[i...], [j...], value]");
    }
    const auto rows = index_list(e[0]);
    const auto cols = index_list(e[1]);
    for (std::size_t i : rows) {
      if (i >= n) throw InputError("subset index out of range");
    }
    for (std::size_t i : cols) {
      if (i >= n) throw InputError("subset index out of range");
    }
    entries.push_back({encode_subset(rows), encode_subset(cols), e[2].get<double>()});
  }
  return DeterminantalOperator(q, n, std::move(entries));
}

json determinantal_to_json(const DeterminantalOperator& b) {
  json entries = json::array();
  for (const auto& e : b.entries()) {
    entries.push_back(json::array({subset_json(e.row), subset_json(e.col), e.value}));
  }
  return json{{"q", b.q()}, {"n", b.ground_set_size()}, {"entries", entries}};
}

// ------------------------------------------------------------------ reports

json split_result_to_json(const SplitResult& r) {
  return json{{"selected", family_json(r.selected)},
              {"complement", family_json(r.complement)},
              {"mass_selected", r.mass_selected},
              {"mass_complement", r.mass_complement},
              {"sigma", r.sigma},
              {"upsilon", r.upsilon},
              {"threshold", r.threshold},
              {"attempts", r.attempts}};
}

json split_tree_to_json(const SplitTree& t) {
  json levels = json::array();
  for (const auto& level : t.levels) {
    json blocks = json::array();
    for (const auto& b : level) blocks.push_back(json{{"mass", b.mass}, {"subsets", family_json(b.family)}});
    levels.push_back(std::move(blocks));
  }
  return json{{"schema_version", kSchemaVersion},
              {"sigma", t.sigma},
              {"upsilon", t.upsilon},
              {"kappa", t.kappa},
              {"predicted_depth", t.predicted_depth},
              {"stop_reason", to_string(t.stop_reason)},
              {"levels", levels}};
}

json spectrum_to_json(const SpectrumSummary& s) {
  return json{{"schema_version", kSchemaVersion},
              {"frobenius_sq", s.frobenius_sq},
              {"spectral_radius", s.spectral_radius},
              {"remainders_tuple", s.remainders_tuple},
              {"remainders_set", s.remainders_set},
              {"influences", s.influences},
              {"max_influence", s.max_influence}};
}

json certificate_to_json(const CertificateReport& r) {
  json j{{"schema_version", kSchemaVersion},
         {"q", r.q},
         {"n", r.n},
         {"q_prime", r.q_prime},
         {"reading", to_string(r.reading)},
         {"theta_mode", to_string(r.theta_mode)},
         {"log2_theta", log2_json(r.theta)},
         {"log2_tau_q", log2_json(r.tau_q)},
         {"tau_q_overridden", r.tau_q_overridden},
         {"theta_2qprime_overridden", r.theta_2qprime_overridden},
         {"input_frobenius_sq", number_json(r.input_frobenius_sq)},
         {"rank", r.rank},
         {"log2_tau_a", log2_json(r.tau_a)},
         {"log2_remainder_q", log2_json(r.remainder_q)},
         {"log2_remainder_q_prime", log2_json(r.remainder_q_prime)},
         {"kappa", r.kappa},
         {"log2_theta_2qprime", log2_json(r.theta_2qprime)},
         {"log2_eta_q", log2_json(r.eta_q)},
         {"eta_exceeds_quarter", r.eta_exceeds_quarter},
         {"checks",
          {{"trace_normalized", r.checks.trace_normalized},
           {"remainder_positive", r.checks.remainder_positive},
           {"influence_small", r.checks.influence_small}}},
         {"verdict", to_string(r.verdict)},
         {"reasons", r.reasons},
         {"disclaimer", r.disclaimer}};
  j["log2_sobolev_bound"] = r.sobolev_bound ? log2_json(*r.sobolev_bound) : json(nullptr);
  return j;
}

json smallball_to_json(const SmallBallTable& t) {
  json rows = json::array();
  for (const auto& r : t.rows) {
    rows.push_back(json{{"eps", r.eps},
                        {"best_center", r.best_center},
                        {"probability", r.probability},
                        {"std_error", r.std_error}});
  }
  return json{{"schema_version", kSchemaVersion},
              {"M", t.M},
              {"seed", t.seed},
              {"degree", t.degree},
              {"slope", number_json(t.slope)},
              {"log2_certified_theta", log2_json(t.certified_theta)},
              {"certified_theta", number_json(t.certified_theta.to_double())},
              {"rows", rows}};
}

json clt_to_json(const CltReport& r) {
  json rows = json::array();
  for (const auto& row : r.rows) {
    rows.push_back(json{{"n", row.n},
                        {"rho", row.rho},
                        {"tau", row.tau},
                        {"ks", row.ks},
                        {"profiles", row.profiles}});
  }
  return json{{"schema_version", kSchemaVersion},
              {"family", to_string(r.options.family)},
              {"law", r.law},
              {"M", r.options.M},
              {"seed", r.options.seed},
              {"xi_max", r.options.xi_max},
              {"xi_points", r.options.xi_points},
              {"s_list", r.options.s_list},
              {"law_fourth_moment", r.law_fourth_moment},
              {"fourth_moment_band", r.fourth_moment_band},
              {"leptokurtic", r.leptokurtic},
              {"warnings", r.warnings},
              {"rows", rows}};
}

json manifest(const std::string& command, const json& config, std::uint64_t seed) {
  return json{{"schema_version", kSchemaVersion},
              {"library", "qfreg"},
              {"library_version", QFREG_VERSION_STRING},
              {"command", command},
              {"seed", seed},
              {"config", config}};
}

TauReading tau_reading_from_string(const std::string& s) {
  if (s == "literal") return TauReading::literal;
  if (s == "reciprocal") return TauReading::reciprocal;
  throw InputError("unknown tau reading '" + s + "' (literal|reciprocal)");
}

ThetaMode theta_mode_from_string(const std::string& s) {
  if (s == "recursion") return ThetaMode::recursion;
  if (s == "closed_form" || s == "closed-form") return ThetaMode::closed_form;
  if (s == "log_concave" || s == "log-concave") return ThetaMode::log_concave;
  throw InputError("unknown theta mode '" + s + "'");
}

std::string to_string(ThetaMode m) {
  switch (m) {
    case ThetaMode::recursion: return "recursion";
    case ThetaMode::closed_form: return "closed_form";
    case ThetaMode::log_concave: return "log_concave";
  }
  return "?";
}

// ---------------------------------------------------------------------- csv

std::string CsvWriter::cell(double v) {
  if (!std::isfinite(v)) return format_double(v);
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void CsvWriter::header(const std::vector<std::string>& names) { cells(names); }

void CsvWriter::row(const std::vector<double>& values) {
  std::vector<std::string> c;
  c.reserve(values.size());
  for (double v : values) c.push_back(cell(v));
  cells(c);
}

void CsvWriter::cells(const std::vector<std::string>& values) {
  for (std::size_t k = 0; k < values.size(); ++k) {
    if (k) out_ << ',';
    out_ << values[k];
  }
  out_ << '\n';
}

void write_smallball_csv(std::ostream& out, const SmallBallTable& t) {
  CsvWriter w(out);
  w.header({"eps", "best_center", "probability", "std_error"});
  for (const auto& r : t.rows) w.row({r.eps, r.best_center, r.probability, r.std_error});
}

void write_clt_csv(std::ostream& out, const CltReport& r) {
  CsvWriter w(out);
  std::vector<std::string> names{"n", "rho", "tau", "ks"};
  for (double s : r.options.s_list) names.push_back("profile_s" + format_double(s));
  w.header(names);
  for (const auto& row : r.rows) {
    std::vector<double> v{static_cast<double>(row.n), row.rho, row.tau, row.ks};
    v.insert(v.end(), row.profiles.begin(), row.profiles.end());
    w.row(v);
  }
}

}  // namespace qfreg::io
