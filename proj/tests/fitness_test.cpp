#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "esstime/ess.hpp"
#include "esstime/fitness.hpp"

using namespace esstime;

TEST_CASE("conditional fitness psi") {
    const MixedStrategy s(0.0, {{0.0, 0.0}, {1.0, 1.0}});
    const CompetitionParams params{2.0, 0.4};
    // Arrival before the disturbance: survive it, compete with everyone
    // already there.
    CHECK(psi(0.5, 0.8, s, params) == doctest::Approx(0.4 * std::exp(-2.0 * 0.5)));
    // Arrival after: only survivors of the pre-disturbance crowd compete.
    const double expected =
        std::exp(-2.0 * 0.4 * 0.3 - 2.0 * (0.9 - 0.3));
    CHECK(psi(0.9, 0.3, s, params) == doctest::Approx(expected).epsilon(1e-12));
    // No competition limit.
    CHECK(psi(0.5, 0.8, s, {1e-14, 0.4}) == doctest::Approx(0.4).epsilon(1e-10));
}

TEST_CASE("phi without competition is the survival probability") {
    const auto d = Disturbance::uniform(0.0, 1.0);
    const MixedStrategy s(0.0, {{0.0, 0.0}, {1.0, 1.0}});
    for (double p : {0.1, 0.6}) {
        for (double y : {0.0, 0.3, 0.8, 1.0}) {
            CHECK(phi(y, s, {1e-12, p}, d) ==
                  doctest::Approx(1.0 - (1.0 - p) * d.tail(y)).epsilon(1e-8));
        }
    }
}

TEST_CASE("phi at zero") {
    const auto d = Disturbance::uniform(0.2, 0.8);
    // No atom: phi(0) = p.
    const MixedStrategy plain(0.0, {{0.3, 0.0}, {0.8, 1.0}});
    CHECK(phi(0.0, plain, {1.5, 0.35}, d) == doctest::Approx(0.35).epsilon(1e-10));
    // Atom of mass 0.25 competes with itself.
    const MixedStrategy atom(0.25, {{0.3, 0.0}, {0.8, 1.0}});
    CHECK(phi(0.0, atom, {1.5, 0.35}, d) ==
          doctest::Approx(0.35 * std::exp(-1.5 * 0.25)).epsilon(1e-10));
}

TEST_CASE("evaluator agrees with one-shot phi") {
    const auto d = Disturbance::piecewise_linear({{0.1, 0.0}, {0.5, 2.0}, {0.9, 0.0}});
    const MixedStrategy s(0.1, {{0.2, 0.0}, {0.6, 0.7}, {0.9, 1.0}});
    const CompetitionParams params{1.3, 0.25};
    const FitnessEvaluator eval(s, params, d);
    for (double y : {0.0, 0.15, 0.4, 0.62, 0.9, 1.1})
        CHECK(eval.phi(y) == doctest::Approx(phi(y, s, params, d)).epsilon(1e-9));
}

TEST_CASE("phi is flat at lambda on the ESS support") {
    const auto d = Disturbance::uniform(0.0, 1.0);
    const auto sol = solve_ess({0.2, 0.2}, d);
    const FitnessEvaluator eval(sol.strategy, sol.params, d);
    for (double q : {0.0, 0.2, 0.5, 0.8, 1.0}) {
        const double y = sol.strategy.quantile_nu(q);
        CHECK(eval.phi(y) == doctest::Approx(sol.lambda).epsilon(1e-7));
    }
    // Before x_c the expected fitness cannot beat lambda.
    CHECK(eval.phi(0.5 * sol.x_c) <= sol.lambda + 1e-9);
}

TEST_CASE("average fitness of the ESS is lambda") {
    const auto d = Disturbance::uniform(0.0, 1.0);
    for (auto [a, p] : {std::pair{0.2, 0.2}, {5.0, 0.2}, {1.0, 0.4}, {5.0, 0.5}}) {
        const auto sol = solve_ess({a, p}, d);
        CHECK(average_fitness(sol.strategy, sol.params, d) ==
              doctest::Approx(sol.lambda).epsilon(1e-7));
    }
}

TEST_CASE("average fitness bound and the late-arrival family") {
    const double a = 1.7, p = 0.3;
    const auto d = Disturbance::uniform(0.0, 1.0);
    const double bound = max_average_fitness(a);
    CHECK(bound == doctest::Approx((1.0 - std::exp(-a)) / a).epsilon(1e-12));
    CHECK(max_average_fitness(5.0) == doctest::Approx(0.1986524106001829).epsilon(1e-12));
    // Arrivals wholly after the disturbance attain the bound exactly.
    const auto after = MixedStrategy::late_arrival_family(16, 2.0);
    CHECK(average_fitness(after, {a, p}, d) == doctest::Approx(bound).epsilon(1e-8));
    // Within the disturbance window the bound is strict, approached as n grows.
    double prev = 0.0;
    for (int n : {1, 2, 4, 8, 16}) {
        const auto s = MixedStrategy::late_arrival_family(n, 1.0);
        const double lb = average_fitness(s, {a, p}, d);
        CHECK(lb < bound);
        CHECK(lb > prev);
        prev = lb;
    }
    // Small-a limit is continuous.
    CHECK(max_average_fitness(1e-9) == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("certificate accepts the ESS and rejects a uniform strategy") {
    const auto d = Disturbance::uniform(0.0, 1.0);
    const CompetitionParams params{0.2, 0.2};
    const auto sol = solve_ess(params, d);
    const auto good = ess_certificate(sol.strategy, params, d, 1001, 1e-6, sol.lambda);
    CHECK(good.certified);
    CHECK(good.support_deviation < 1e-6);
    CHECK(good.off_support_excess < 1e-6);

    const MixedStrategy uniform_s(0.0, {{0.0, 0.0}, {1.0, 1.0}});
    const auto bad = ess_certificate(uniform_s, params, d, 1001);
    CHECK(!bad.certified);
    CHECK(bad.support_deviation > 1e-3);
}

TEST_CASE("certificate flags mass moved off the equilibrium support") {
    const auto d = Disturbance::uniform(0.0, 1.0);
    const CompetitionParams params{0.2, 0.2};
    // Shift the arrival window well before x_c (about 0.79 here): probes
    // after the disturbance then beat the on-support level.
    const MixedStrategy early(0.0, {{0.1, 0.0}, {0.3, 1.0}});
    const auto prof = ess_certificate(early, params, d, 1001);
    CHECK(!prof.certified);
}
