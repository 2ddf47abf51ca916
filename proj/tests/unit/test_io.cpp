#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <random>
#include <sstream>

#include "qfreg/error.hpp"
#include "qfreg/io.hpp"

using namespace qfreg;
using qfreg::io::json;

TEST_SUITE("io") {
  TEST_CASE("doubles and log scalars") {
    for (double v : {0.1, 1.0 / 3.0, -2.5e-300, 6.02e23}) {
      CHECK(std::stod(io::format_double(v)) == v);
    }
    CHECK(io::format_double(INFINITY) == "inf");
    CHECK(io::format_double(-INFINITY) == "-inf");
    CHECK(io::log2_json(LogScalar::zero()) == "-inf");
    CHECK(io::log2_json(LogScalar::infinity()) == "inf");
    CHECK(io::log2_json(LogScalar::power_of_two(-1466)) == -1466.0);
    CHECK(io::log_scalar_from_json(json("-inf")).is_zero());
    CHECK(io::log_scalar_from_json(json(-3.5)).log2() == -3.5);
    CHECK(io::CsvWriter::cell(0.1) == "0.10000000000000001");
  }

  TEST_CASE("operators round-trip") {
    std::mt19937_64 rng(1);
    std::normal_distribution<double> nd;
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(5, 5);
    for (int i = 0; i < 5; ++i)
      for (int j = i; j < 5; ++j)
        if (rng() % 2) a(i, j) = a(j, i) = nd(rng);
    const SymmetricOperator op(a);
    for (bool sparse : {false, true}) {
      const auto j = io::operator_to_json(op, sparse);
      const auto back = io::operator_from_json(io::parse_json(j.dump()));
      CHECK(back.entries() == op.entries());
    }
    CHECK_THROWS_AS(io::operator_from_json(json{{"n", 2}, {"data", {{0, 1}, {2, 0}}}}), InputError);
    CHECK_THROWS_AS(io::operator_from_json(json{{"n", 2}, {"data", {{0, 1}}}}), InputError);
    CHECK_THROWS_AS(io::operator_from_json(json{{"n", 2}, {"format", "sparse"}, {"data", {{0, 2, 1.0}}}}), InputError);
    CHECK_THROWS_AS(io::operator_from_json(json{{"n", 2}, {"format", "csr"}, {"data", json::array()}}), InputError);
    CHECK_THROWS_AS(io::parse_json("{not json"), InputError);
    CHECK_THROWS_AS(io::read_json_file("/nonexistent/file.json"), InputError);
  }

  TEST_CASE("files") {
    const auto dir = std::filesystem::temp_directory_path() / "qfreg_io_test";
    std::filesystem::create_directories(dir);
    const auto path = dir / "op.json";
    io::write_text_file(path, io::operator_to_json(SymmetricOperator::identity(3)).dump());
    CHECK(io::load_operator(path).entries() == Eigen::MatrixXd::Identity(3, 3));
    io::write_text_file(path, R"({"n": 2, "data": [[1, 2], [3, 4]]})");
    try {
      io::load_operator(path);
      FAIL("expected an error");
    } catch (const InputError& e) {
      const std::string msg = e.what();
      CHECK(msg.find(path.string()) == 0);
      CHECK(msg.find(path.string(), 1) == std::string::npos);
    }
    std::filesystem::remove_all(dir);
  }

  TEST_CASE("law specs") {
    CHECK(io::parse_law_argument("gaussian").law.kind() == LawKind::gaussian);
    const auto b = io::parse_law_argument("beta:2,3").law;
    CHECK(b.kind() == LawKind::beta);
    CHECK(b.alpha() == 2.0);
    CHECK(b.beta_param() == 3.0);
    CHECK(io::parse_law_argument("gamma:0.5").law.alpha() == 0.5);
    const auto p = io::parse_law_argument("phi:gaussian_cdf,0.5").law;
    CHECK(p.kind() == LawKind::phi_gaussian);
    CHECK(*p.declared_theta() == 0.5);
    CHECK(io::parse_law_argument("phi:sine").law.map().name == "sin");
    CHECK_THROWS_AS(io::parse_law_argument("beta:2"), InputError);
    CHECK_THROWS_AS(io::parse_law_argument("gamma:x"), InputError);
    CHECK_THROWS_AS(io::parse_law_argument("cauchy"), InputError);

    const std::vector<DirichletVariable> laws{
        DirichletVariable::gaussian(), DirichletVariable::beta(0.5, 2), DirichletVariable::gamma(3),
        DirichletVariable::phi_gaussian(maps::gaussian_cdf(), 1.0),
        DirichletVariable::chaos({DirichletVariable::gaussian()}, MultilinearPolynomial(2, {{{0, 1}, 1.0}}))};
    for (const auto& law : laws) {
      for (bool standardize : {true, false}) {
        const io::LawSpec spec{law, standardize};
        const auto j = io::law_to_json(spec);
        const auto back = io::law_from_json(io::parse_json(j.dump()));
        CHECK(back.standardize == standardize);
        CHECK(io::law_to_json(back) == j);
      }
    }
    CHECK(io::law_from_json(json("gamma:2")).law.alpha() == 2.0);
    CHECK_THROWS_AS(io::law_from_json(json{{"kind", "beta"}, {"params", {{"alpha", 1}}}}), InputError);
  }

  TEST_CASE("polynomials and determinantal dumps round-trip") {
    const MultilinearPolynomial p(4, {{{}, 1.0}, {{0, 3}, -2.0}, {{1, 2, 3}, 0.5}});
    const auto back = io::polynomial_from_json(io::parse_json(io::polynomial_to_json(p).dump()));
    CHECK(back.coefficients() == p.coefficients());
    CHECK(back.variable_count() == 4);
    CHECK_THROWS_AS(io::polynomial_from_json(json{{"n", 2}, {"terms", {{{0, 0}, 1.0}}}}), InputError);

    Eigen::MatrixXd a(3, 3);
    a << 0, 1, 2, 1, 0, 3, 2, 3, 0;
    const auto b = build_from_operator(SymmetricOperator(a).normalized(), 2);
    const auto bj = io::determinantal_to_json(b);
    const auto b2 = io::determinantal_from_json(io::parse_json(bj.dump()));
    CHECK(b2.q() == 2);
    CHECK(b2.sigma() == doctest::Approx(b.sigma()).epsilon(1e-15));
    CHECK(io::determinantal_to_json(b2) == bj);
  }

  TEST_CASE("reports") {
    const auto cert = certify_quadratic(SymmetricOperator::identity(4), 1, LogScalar::from_double(0.5));
    const auto j = io::certificate_to_json(cert);
    CHECK(j.at("log2_tau_q") == -1466.0);
    CHECK(j.at("reading") == "literal");
    CHECK(j.at("verdict") == "refused");
    CHECK(j.at("schema_version") == io::kSchemaVersion);

    const auto m = io::manifest("spectral", json{{"q_max", 2}}, 7);
    CHECK(m.at("seed") == 7);
    CHECK(m.at("command") == "spectral");
    CHECK(m.at("config").at("q_max") == 2);
    CHECK_FALSE(m.at("library_version").get<std::string>().empty());

    CHECK(io::tau_reading_from_string("reciprocal") == TauReading::reciprocal);
    CHECK(io::theta_mode_from_string("closed_form") == ThetaMode::closed_form);
    CHECK(io::to_string(ThetaMode::log_concave) == "log_concave");
    CHECK_THROWS_AS(io::tau_reading_from_string("other"), InputError);

    const MultilinearPolynomial p(1, {{{0}, 1.0}});
    const auto t = smallball_estimate(p, DirichletVariable::gaussian(), {0.1, 0.01}, 1000, 1);
    std::ostringstream os;
    io::write_smallball_csv(os, t);
    std::istringstream is(os.str());
    std::string line;
    int lines = 0;
    while (std::getline(is, line)) ++lines;
    CHECK(lines == 3);
  }
}
