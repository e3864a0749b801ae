#include "esstime/ess.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace esstime {

namespace {

// Relative tolerance for classifying a as critical, per the boundary being
// measure-zero in floats.
constexpr double kCriticalRel = 1e-9;

double kernel_C(double a, double p, const Tolerances& tol) {
    return kernel_K_log(0.0, a, p, tol);
}

}  // namespace

void CompetitionParams::validate() const {
    if (!(a > 0.0))
        throw std::invalid_argument("CompetitionParams: a > 0 required");
    if (!(p >= 0.0 && p < 1.0))
        throw std::invalid_argument("CompetitionParams: p in [0,1) required");
}

std::string to_string(Regime r) {
    switch (r) {
        case Regime::Subcritical: return "subcritical";
        case Regime::Critical: return "critical";
        case Regime::Supercritical: return "supercritical";
    }
    return "?";
}

std::optional<double> compute_a_M(double p, const Tolerances& tol) {
    if (!(p >= 0.0 && p < 1.0))
        throw std::invalid_argument("compute_a_M: p in [0,1) required");
    if (p == 0.0) return std::nullopt;
    const double target = 1.0 / p;
    auto residual = [&](double a) { return kernel_C(a, p, tol) - target; };
    double hi = 1.0;
    while (residual(hi) < 0.0) {
        hi *= 2.0;
        if (hi > 1e9) throw std::runtime_error("compute_a_M: failed to bracket");
    }
    return bracketed_root(residual, 1e-12, hi, tol);
}

double compute_p_M(double a, const Tolerances& tol) {
    if (!(a > 0.0))
        throw std::invalid_argument("compute_p_M: a > 0 required");
    // p * C(a,p) - 1 is strictly increasing in p, negative near 0, positive
    // near 1.
    auto residual = [&](double p) { return p * kernel_C(a, p, tol) - 1.0; };
    return bracketed_root(residual, 1e-14, 1.0 - 1e-14, tol);
}

Regime classify_regime(const CompetitionParams& params, const Tolerances& tol) {
    params.validate();
    const auto a_M = compute_a_M(params.p, tol);
    if (!a_M) return Regime::Subcritical;
    const double margin = kCriticalRel * std::max(1.0, *a_M);
    if (std::abs(params.a - *a_M) <= margin) return Regime::Critical;
    return params.a < *a_M ? Regime::Subcritical : Regime::Supercritical;
}

double compute_gamma(const CompetitionParams& params, const Tolerances& tol) {
    params.validate();
    if (classify_regime(params, tol) != Regime::Supercritical) return 0.0;
    const double a = params.a, p = params.p;
    const double target = 1.0 / p;
    auto residual = [&](double g) {
        return std::exp(-a * g) * kernel_K_log(a * g, a, p, tol) - target;
    };
    return bracketed_root(residual, 0.0, 1.0, tol);
}

double compute_lambda(const CompetitionParams& params, const Tolerances& tol) {
    params.validate();
    const double a = params.a, p = params.p;
    if (p == 0.0) return 1.0 / (1.0 + a);
    if (classify_regime(params, tol) == Regime::Supercritical) {
        const double g = compute_gamma(params, tol);
        return p * std::exp(-a * g);
    }
    return 1.0 / (1.0 + (1.0 - p) * kernel_C(a, p, tol));
}

double compute_x_c(const CompetitionParams& params, const Disturbance& d,
                   const Tolerances& tol) {
    params.validate();
    if (classify_regime(params, tol) == Regime::Supercritical) return 0.0;
    const double C = kernel_C(params.a, params.p, tol);
    const double R = 1.0 / (1.0 - params.p + 1.0 / C);
    const double q = std::clamp(1.0 - R, 0.0, 1.0);
    // Maximal x with cdf(x) == q; on a flat span take its right endpoint.
    // Scan knots from the right so the tolerance tie-break lands there.
    const auto& xs = d.knot_x();
    const auto& Fs = d.knot_cdf();
    // Wider than the quadrature error in q, so a level hitting a knot (or a
    // flat span) snaps to the knot instead of landing on either side of it.
    constexpr double eps_q = 1e-9;
    std::size_t j = xs.size() - 1;
    while (j > 0 && Fs[j] > q + eps_q) --j;
    if (Fs[j] >= q - eps_q)
        return std::clamp(xs[j], d.t_low(), d.t_high());
    auto residual = [&](double x) { return d.cdf(x) - q; };
    return bracketed_root(residual, xs[j], xs[j + 1], tol);
}

UniformAlphaR uniform_alpha_R(const CompetitionParams& params, const Tolerances& tol) {
    params.validate();
    if (classify_regime(params, tol) == Regime::Supercritical)
        throw std::invalid_argument("uniform_alpha_R: requires a <= a_M(p)");
    const double C = kernel_C(params.a, params.p, tol);
    const double R = 1.0 / (1.0 - params.p + 1.0 / C);
    const double alpha = (1.0 - params.p * C) / (1.0 + (1.0 - params.p) * C);
    return {alpha, R};
}

EssSolution solve_ess(const CompetitionParams& params, const Disturbance& d,
                      std::size_t grid_points, const Tolerances& tol) {
    params.validate();
    if (grid_points < 3)
        throw std::invalid_argument("solve_ess: grid_points >= 3 required");
    const double a = params.a, p = params.p;

    const auto a_M = compute_a_M(p, tol);
    const Regime regime = classify_regime(params, tol);
    const double gamma = compute_gamma(params, tol);
    const double lambda = compute_lambda(params, tol);
    const double x_c = compute_x_c(params, d, tol);

    const double x_start = std::max(x_c, d.t_low());
    const double t_high = d.t_high();
    const double q0 = d.cdf(x_c);
    const double total_mass = 1.0 - q0;

    EssResiduals res{};
    if (regime == Regime::Supercritical) {
        res.gamma = std::abs(std::exp(-a * gamma) * kernel_K_log(a * gamma, a, p, tol) -
                             1.0 / p) * p;
    } else {
        res.x_c = std::abs(d.tail(x_c) - (1.0 - lambda) / (1.0 - p));
    }

    // Grid: uniform quantiles of the disturbance mass past x_c (equidistributes
    // the interpolation error where f is large) united with a uniform-x grid
    // (keeps panels narrow where f vanishes and quantiles spread out), plus
    // every density knot, so F_nu is exact on support gaps.
    std::vector<double> grid{x_start};
    const std::size_t m = grid_points - 1;
    for (std::size_t k = 1; k < m; ++k) {
        const double frac = static_cast<double>(k) / static_cast<double>(m);
        grid.push_back(d.quantile(q0 + total_mass * frac));
        grid.push_back(x_start + (t_high - x_start) * frac);
    }
    grid.push_back(t_high);
    for (double x : d.knot_x())
        if (x > x_start && x < t_high) grid.push_back(x);
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end(),
                           [](double u, double v) { return std::abs(u - v) < 1e-13; }),
               grid.end());
    if (grid.back() != t_high) grid.push_back(t_high);

    std::vector<std::pair<double, double>> knots;
    knots.reserve(grid.size());
    if (p == 0.0) {
        // Closed form: F_nu(x) = ((1+a)/a) * (cdf(x) - cdf(x_c)).
        const double scale = (1.0 + a) / a;
        for (double x : grid)
            knots.emplace_back(x, std::clamp(scale * (d.cdf(x) - q0), 0.0, 1.0));
        res.endpoint = std::abs(scale * total_mass - 1.0);
    } else {
        const KernelTable table(a * gamma, a, p, 8192);
        const double K_total = table.total();
        res.endpoint = std::abs(K_total - total_mass / lambda) / std::max(1.0, K_total);
        double w_prev = 0.0;
        for (double x : grid) {
            const double target = std::clamp((d.cdf(x) - q0) / lambda, 0.0, K_total);
            const double s = table.invert(target, tol);
            res.max_inversion = std::max(
                res.max_inversion,
                std::abs(table.value(s) - target) / std::max(1.0, K_total));
            double w = (s / a - gamma) / (1.0 - gamma);
            w = std::clamp(w, w_prev, 1.0);
            knots.emplace_back(x, w);
            w_prev = w;
        }
        res.endpoint = std::max(res.endpoint, std::abs(knots.back().second - 1.0));
    }
    knots.front().second = 0.0;
    knots.back().second = 1.0;

    if (res.endpoint > 100.0 * std::max(tol.abs_tol, 1e-12) && res.endpoint > 1e-6)
        throw std::runtime_error("solve_ess: inconsistent solution (endpoint residual " +
                                 std::to_string(res.endpoint) + ")");

    MixedStrategy strategy(gamma, std::move(knots));
    return EssSolution{params, a_M, regime, gamma, x_c, lambda, std::move(strategy), res};
}

DegenerateCase degenerate_cases(double a, double p, const Disturbance& d) {
    if (a == 0.0 && p == 1.0)
        return {DegenerateKind::EveryStrategy,
                "no competition, no effective disturbance: every strategy is an ESS"};
    if (a == 0.0)
        return {DegenerateKind::AnyAfterDisturbance,
                "no competition: ESS iff all arrivals at or after t_high = " +
                    std::to_string(d.t_high())};
    if (p == 1.0)
        return {DegenerateKind::AtomAtZero,
                "competition without effective disturbance: unique ESS is the atom at 0"};
    throw std::invalid_argument("degenerate_cases: requires a = 0 or p = 1 (use solve_ess)");
}

}  // namespace esstime
