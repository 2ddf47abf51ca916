#pragma once

#include <cstdint>
#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "qfreg/certify.hpp"
#include "qfreg/clt_experiment.hpp"
#include "qfreg/determinantal.hpp"
#include "qfreg/laws.hpp"
#include "qfreg/log_scalar.hpp"
#include "qfreg/multilinear_polynomial.hpp"
#include "qfreg/smallball.hpp"
#include "qfreg/spectral.hpp"
#include "qfreg/splitting.hpp"

namespace qfreg::io {

using nlohmann::json;

/// Current schema version written into every document.
inline constexpr int kSchemaVersion = 1;

/// Parse errors and missing files become InputError.
json read_json_file(const std::filesystem::path& path);
json parse_json(const std::string& text);
void write_text_file(const std::filesystem::path& path, const std::string& text);

/// Shortest round-tripping text for a double ("inf", "-inf", "nan" spelled out).
std::string format_double(double v);

/// LogScalars are written as their base-2 logarithm; zero is "-inf".
json log2_json(LogScalar v);
LogScalar log_scalar_from_json(const json& j);

/// {"n", "format": "dense"|"sparse", "data"}; asymmetry beyond 1e-12 is rejected.
SymmetricOperator operator_from_json(const json& j);
json operator_to_json(const SymmetricOperator& op, bool sparse = false);
SymmetricOperator load_operator(const std::filesystem::path& path);

struct LawSpec {
  DirichletVariable law = DirichletVariable::gaussian();
  bool standardize = true;
};
/// {"kind", "params", "standardize"}. Also accepts a bare kind string.
LawSpec law_from_json(const json& j);
json law_to_json(const LawSpec& spec);
/// Short forms such as "gaussian", "beta:2,2", "gamma:0.5", "phi:sine",
/// or a path to a JSON law file.
LawSpec parse_law_argument(const std::string& text);

/// {"n", "terms": [[[indices], coeff], ...]}.
MultilinearPolynomial polynomial_from_json(const json& j);
json polynomial_to_json(const MultilinearPolynomial& p);

/// {"q", "n", "entries": [[[i...], [j...], value], ...]} in colex order.
DeterminantalOperator determinantal_from_json(const json& j);
json determinantal_to_json(const DeterminantalOperator& b);

json split_result_to_json(const SplitResult& r);
json split_tree_to_json(const SplitTree& t);
json spectrum_to_json(const SpectrumSummary& s);
json certificate_to_json(const CertificateReport& r);
json smallball_to_json(const SmallBallTable& t);
json clt_to_json(const CltReport& r);

/// Config, library version and seeds of a run.
json manifest(const std::string& command, const json& config, std::uint64_t seed);

TauReading tau_reading_from_string(const std::string& s);
ThetaMode theta_mode_from_string(const std::string& s);
std::string to_string(ThetaMode m);

/// Comma-separated rows; doubles printed with 17 significant digits.
class CsvWriter {
 public:
  explicit CsvWriter(std::ostream& out) : out_(out) {}
  void header(const std::vector<std::string>& names);
  void row(const std::vector<double>& values);
  /// Mixed row of preformatted cells.
  void cells(const std::vector<std::string>& values);
  static std::string cell(double v);

 private:
  std::ostream& out_;
};

void write_smallball_csv(std::ostream& out, const SmallBallTable& t);
void write_clt_csv(std::ostream& out, const CltReport& r);

}  // namespace qfreg::io
