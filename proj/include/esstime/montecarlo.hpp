#pragma once

#include <cstdint>
#include <vector>

#include "esstime/fitness.hpp"

namespace esstime {

struct McConfig {
    std::size_t population = 100000;
    std::size_t replications = 200;
    std::uint64_t seed = 0;
    /// Whether individuals in the atom at 0 count the atom's own mass as
    /// competition (matching the use of the right-continuous F_mu(y)).
    bool atom_self_competition = true;

    void validate() const;
};

struct McEstimate {
    double mean;
    double ci_half_width;  // 99% normal CI over replications
};

/// Finite-population estimate of phi(y): per replication draw a disturbance
/// time, a population of arrivals and survival flips, and score the focal
/// arrival at y against the realized competition.
McEstimate mc_phi(double y, const MixedStrategy& s, const CompetitionParams& params,
                  const Disturbance& d, const McConfig& cfg);

/// Finite-population estimate of the average fitness over all individuals.
McEstimate mc_average_fitness(const MixedStrategy& s, const CompetitionParams& params,
                              const Disturbance& d, const McConfig& cfg);

struct BestResponseHistory {
    int iteration;
    double ks_to_previous;
    double residual;
};

struct BestResponseResult {
    MixedStrategy strategy;
    double residual;  // exploitability: sup phi - average fitness
    std::vector<BestResponseHistory> history;
};

/// Damped fictitious-play iteration on a discretized arrival grid; an
/// equilibrium approximation independent of the implicit-equation solver.
BestResponseResult best_response_iterate(const CompetitionParams& params,
                                         const Disturbance& d, std::size_t grid = 200,
                                         std::size_t iterations = 500,
                                         double damping = 0.1);

}  // namespace esstime
