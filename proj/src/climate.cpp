#include "esstime/climate.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace esstime {

ProfileComparison compare_profiles(const MixedStrategy& s, const CompetitionParams& params,
                                   const Disturbance& d1, const Disturbance& d2,
                                   std::size_t probe_count) {
    const FitnessEvaluator ev1(s, params, d1);
    const FitnessEvaluator ev2(s, params, d2);
    const double hi = std::max({d1.t_high(), d2.t_high(), s.knot_x().empty() ? 0.0 : s.knot_x().back()});

    ProfileComparison cmp;
    for (std::size_t k = 0; k < probe_count; ++k) {
        const double y = hi * 1.05 * static_cast<double>(k) / static_cast<double>(probe_count - 1);
        cmp.y.push_back(y);
        cmp.phi_1.push_back(ev1.phi(y));
        cmp.phi_2.push_back(ev2.phi(y));
    }
    auto diff = [&](double y) { return ev1.phi(y) - ev2.phi(y); };
    for (std::size_t k = 1; k < cmp.y.size(); ++k) {
        const double da = cmp.phi_1[k - 1] - cmp.phi_2[k - 1];
        const double db = cmp.phi_1[k] - cmp.phi_2[k];
        if (da == 0.0 || da * db >= 0.0) continue;
        double lo = cmp.y[k - 1], up = cmp.y[k];
        for (int iter = 0; iter < 60; ++iter) {
            const double mid = 0.5 * (lo + up);
            if (diff(lo) * diff(mid) <= 0.0)
                up = mid;
            else
                lo = mid;
        }
        cmp.crossings.push_back(0.5 * (lo + up));
    }
    return cmp;
}

double average_fitness_delta(const CompetitionParams& params, const Disturbance& d1,
                             const Disturbance& d2, const Tolerances& tol) {
    const EssSolution sol = solve_ess(params, d1, 2001, tol);
    const double l1 = average_fitness(sol.strategy, params, d1, tol);
    const double l2 = average_fitness(sol.strategy, params, d2, tol);
    return l2 - l1;
}

double dp_average_fitness(const MixedStrategy& s, double a, double p,
                          const Disturbance& d, double h, const Tolerances& tol) {
    if (!(h > 0.0) || !(p - h > 0.0) || !(p + h < 1.0))
        throw std::invalid_argument("dp_average_fitness: requires 0 < p-h and p+h < 1");
    const double up = average_fitness(s, {a, p + h}, d, tol);
    const double lo = average_fitness(s, {a, p - h}, d, tol);
    return (up - lo) / (2.0 * h);
}

Disturbance shift_disturbance(const Disturbance& d, double delta) {
    const double lo = d.knot_x().front(), hi = d.knot_x().back();
    if (lo + delta < 0.0)
        throw std::invalid_argument("shift_disturbance: t_low + delta >= 0 required");
    return d.rescale(lo + delta, hi + delta);
}

}  // namespace esstime
