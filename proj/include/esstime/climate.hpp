#pragma once

#include <vector>

#include "esstime/fitness.hpp"

namespace esstime {

struct ProfileComparison {
    std::vector<double> y;
    std::vector<double> phi_1;
    std::vector<double> phi_2;
    std::vector<double> crossings;  // sign changes of phi_1 - phi_2
};

/// phi under two disturbance regimes on a shared probe grid, with crossing
/// points located by bisection between probes.
ProfileComparison compare_profiles(const MixedStrategy& s, const CompetitionParams& params,
                                   const Disturbance& d1, const Disturbance& d2,
                                   std::size_t probe_count = 512);

/// lambda_bar under d2 minus lambda_bar under d1, for the ESS solved on d1.
double average_fitness_delta(const CompetitionParams& params, const Disturbance& d1,
                             const Disturbance& d2, const Tolerances& tol = {});

/// Central finite difference of p |-> lambda_bar at fixed strategy.
double dp_average_fitness(const MixedStrategy& s, double a, double p,
                          const Disturbance& d, double h = 1e-4,
                          const Tolerances& tol = {});

/// Pure translation of the disturbance by delta (t_low + delta >= 0).
Disturbance shift_disturbance(const Disturbance& d, double delta);

}  // namespace esstime
