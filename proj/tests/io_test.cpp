#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <fstream>

#include "esstime/io.hpp"

using namespace esstime;
using nlohmann::json;

TEST_CASE("disturbance json round trip") {
    const auto u = disturbance_from_json(
        json{{"kind", "uniform"}, {"t_low", 0.5}, {"t_high", 0.9}});
    CHECK(u.kind() == Disturbance::Kind::Uniform);
    CHECK(u.t_low() == 0.5);
    CHECK(u.t_high() == 0.9);
    CHECK(disturbance_to_json(u) ==
          json{{"kind", "uniform"}, {"t_low", 0.5}, {"t_high", 0.9}});

    const json tri{{"kind", "piecewise"},
                   {"knots", json::array({{0.0, 0.0}, {0.5, 2.0}, {1.0, 0.0}})}};
    const auto d = disturbance_from_json(tri);
    CHECK(d.cdf(0.5) == doctest::Approx(0.5));
    const auto back = disturbance_from_json(disturbance_to_json(d));
    CHECK(back.cdf(0.25) == doctest::Approx(d.cdf(0.25)));

    CHECK_THROWS_AS(disturbance_from_json(json{{"kind", "gaussian"}}),
                    std::invalid_argument);
}

TEST_CASE("strategy json round trip") {
    const json j{{"atom_at_zero", 0.1},
                 {"ac_knots", json::array({{0.5, 0.0}, {0.9, 1.0}})}};
    const auto s = strategy_from_json(j);
    CHECK(s.atom_at_zero() == 0.1);
    CHECK(s.F_nu(0.7) == doctest::Approx(0.5));
    CHECK(strategy_to_json(s) == j);
    // Atom-only strategy needs no knots.
    const auto atom = strategy_from_json(json{{"atom_at_zero", 1.0}});
    CHECK(atom.atom_at_zero() == 1.0);
}

TEST_CASE("disturbance flag grammar") {
    const auto u = parse_disturbance_spec("uniform:0.5,0.9");
    CHECK(u.t_low() == 0.5);
    CHECK(u.t_high() == 0.9);

    const char* path = "io_test_knots.json";
    {
        std::ofstream out(path);
        out << R"({"kind":"piecewise","knots":[[0,0],[0.5,2],[1,0]]})";
    }
    const auto d = parse_disturbance_spec(std::string("piecewise:@") + path);
    CHECK(d.cdf(0.5) == doctest::Approx(0.5));
    std::remove(path);

    CHECK_THROWS_AS(parse_disturbance_spec("uniform"), std::invalid_argument);
    CHECK_THROWS_AS(parse_disturbance_spec("uniform:0.5"), std::invalid_argument);
    CHECK_THROWS_AS(parse_disturbance_spec("piecewise:file.json"), std::invalid_argument);
    CHECK_THROWS_AS(parse_disturbance_spec("normal:0,1"), std::invalid_argument);
}

TEST_CASE("csv numbers use 12 significant digits and a point separator") {
    CHECK(csv_num(0.5) == "0.5");
    CHECK(csv_num(1.0 / 3.0) == "0.333333333333");
    CHECK(csv_num(123456.789012345) == "123456.789012");
    CHECK(csv_num(-2.5e-7) == "-2.5e-07");
    CHECK(csv_num(0.0) == "0");
}

TEST_CASE("missing files are reported") {
    CHECK_THROWS_AS(load_json_file("definitely_not_here.json"), std::runtime_error);
}
