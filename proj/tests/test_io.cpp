#include "doctest.h"

#include <cmath>
#include <random>
#include <sstream>

#include "json.hpp"

#include "kernid/errors.hpp"
#include "kernid/io.hpp"

using namespace kernid;

TEST_CASE("design documents parse and validate") {
    const Design d = parse_design(R"({"dim": 1, "points": [[1],[8],[15]]})");
    CHECK(d.size() == 3);
    CHECK(d.dim() == 1);

    // Bare numbers are fine for 1-d, labels must match the point count.
    CHECK(parse_design(R"({"dim": 1, "points": [1, 2, 3]})").size() == 3);
    CHECK_NOTHROW(parse_design(R"({"dim": 1, "points": [1], "labels": ["a"]})"));

    CHECK_THROWS_AS(parse_design(R"({"points": [[1]]})"), ParseError);
    CHECK_THROWS_AS(parse_design(R"({"dim": 2, "points": [[1, 2], [3]]})"), ParseError);
    CHECK_THROWS_AS(parse_design(R"({"dim": 1, "points": []})"), ParseError);
    CHECK_THROWS_AS(parse_design(R"({"dim": 1, "points": [1], "labels": []})"), ParseError);
    CHECK_THROWS_AS(parse_design(R"({"dim": 1, "points": [1], "typo": 3})"), ParseError);
    CHECK_THROWS_AS(parse_design("not json"), ParseError);
}

TEST_CASE("params documents parse both variants") {
    const auto periodic = parse_params(
        R"({"variant": "rbf_periodic", "sigma": 1.5, "ell": 2.0, "tau": 0.5, "s": 1.0, "p": 7.0})");
    CHECK_FALSE(periodic.reordered);
    CHECK(periodic.spec.family() == KernelFamily::RbfPeriodic);
    CHECK(periodic.spec.rbf().sigma == 1.5);
    CHECK(periodic.spec.noise_var() == 0.0);

    const auto two = parse_params(
        R"({"variant": "two_rbf", "sigma1": 1.0, "ell1": 3.0, "sigma2": 2.0, "ell2": 1.0, "noise_var": 0.5})");
    CHECK(two.reordered); // given long-then-short, stored canonically
    CHECK(two.spec.short_rbf().ell == 1.0);
    CHECK(two.spec.noise_var() == 0.5);

    CHECK_THROWS_AS(parse_params(R"({"variant": "matern", "sigma": 1})"), ParseError);
    CHECK_THROWS_AS(
        parse_params(R"({"variant": "rbf_periodic", "sigma": -1, "ell": 1, "tau": 1, "s": 1, "p": 1})"),
        ParseError);
    CHECK_THROWS_AS(
        parse_params(R"({"variant": "rbf_periodic", "sigma": 1, "ell": 1, "tau": 1, "s": 1})"),
        ParseError); // missing p
    CHECK_THROWS_AS(
        parse_params(
            R"({"variant": "two_rbf", "sigma1": 1, "ell1": 1, "sigma2": 1, "ell2": 1})"),
        ParseError); // equal length-scales
}

TEST_CASE("dataset documents parse") {
    const Dataset data =
        parse_dataset(R"({"dim": 1, "points": [[0],[1],[2]], "responses": [0.5, -1.0, 2.0]})");
    CHECK(data.responses.size() == 3);
    CHECK(data.responses[2] == 2.0);
    CHECK_THROWS_AS(parse_dataset(R"({"dim": 1, "points": [[0],[1]], "responses": [1.0]})"),
                    ParseError);
}

TEST_CASE("format_double round-trips exactly") {
    std::mt19937_64 gen(13);
    std::uniform_real_distribution<double> u(-1e6, 1e6);
    std::vector<double> values = {0.0,       -0.0,     1.0 / 3.0, 4.5118543,
                                  1e-17,     -2.5e300, 0.1,       2.0 * std::sqrt(2.0)};
    for (int i = 0; i < 500; ++i) values.push_back(u(gen) * std::pow(10.0, i % 30 - 15));
    for (double v : values) {
        const std::string text = format_double(v);
        CHECK(std::stod(text) == v);
    }
}

TEST_CASE("CSV matrices round-trip bit-exactly") {
    std::mt19937_64 gen(29);
    std::uniform_real_distribution<double> u(-10.0, 10.0);
    for (int rep = 0; rep < 20; ++rep) {
        Eigen::MatrixXd m(4, 4);
        for (int i = 0; i < 4; ++i) {
            for (int j = 0; j < 4; ++j) m(i, j) = u(gen) * std::pow(10.0, (i + j) % 9 - 4);
        }
        std::istringstream in(csv_matrix_string(m));
        const Eigen::MatrixXd back = parse_csv_matrix(in);
        REQUIRE(back.rows() == 4);
        CHECK((back.array() == m.array()).all());
    }
}

TEST_CASE("CSV parsing rejects malformed input") {
    std::istringstream ragged("1,2\n3\n");
    CHECK_THROWS_AS(parse_csv_matrix(ragged), ParseError);
    std::istringstream junk("1,abc\n");
    CHECK_THROWS_AS(parse_csv_matrix(junk), ParseError);
    std::istringstream empty("");
    CHECK_THROWS_AS(parse_csv_matrix(empty), ParseError);
}

TEST_CASE("JSON double serialization re-parses to the same bits") {
    std::mt19937_64 gen(41);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int rep = 0; rep < 200; ++rep) {
        const double v = u(gen) * std::pow(10.0, rep % 40 - 20);
        const nlohmann::json doc = {{"value", v}};
        const auto back = nlohmann::json::parse(doc.dump());
        CHECK(back["value"].get<double>() == v);
    }
}
