#pragma once

#include <optional>
#include <vector>

#include "esstime/disturbance.hpp"
#include "esstime/ess.hpp"
#include "esstime/strategy.hpp"

namespace esstime {

struct FitnessProbe {
    double y;
    double phi;
    bool on_support;
};

struct FitnessProfile {
    std::vector<FitnessProbe> probes;
    double lambda_hat;            // max phi over probes
    double support_deviation;     // max |phi - lambda| on support
    double off_support_excess;    // max phi - lambda off support (signed)
    bool certified;
};

/// Fitness of an arrival at y given the disturbance strikes at x.
double psi(double y, double x, const MixedStrategy& s, const CompetitionParams& params);

/// Expected fitness phi(y) = e^{-aF_mu(y)} [ int_0^y (e^{a(1-p)F_mu} - p) f + p ].
/// Precomputes cumulative panel integrals at the merged knots of F_mu and f so
/// repeated evaluation only integrates one narrow panel.
class FitnessEvaluator {
public:
    FitnessEvaluator(const MixedStrategy& s, const CompetitionParams& params,
                     const Disturbance& d, const Tolerances& tol = {});

    double phi(double y) const;

private:
    double inner(double y) const;  // the bracketed integral up to y

    const MixedStrategy& s_;
    const Disturbance& d_;
    double a_, p_;
    std::vector<double> cuts_, cum_;
};

/// One-shot phi; builds an evaluator internally.
double phi(double y, const MixedStrategy& s, const CompetitionParams& params,
           const Disturbance& d, const Tolerances& tol = {});

/// Average fitness  lambda_bar = gamma0 * phi(0) + (1-gamma0) int phi dF_nu.
double average_fitness(const MixedStrategy& s, const CompetitionParams& params,
                       const Disturbance& d, const Tolerances& tol = {});

/// Supremum of the average fitness over all strategies: (1 - e^{-a}) / a.
double max_average_fitness(double a);

/// Probes phi on a grid plus all strategy/density knots and reports how far
/// the profile is from the equilibrium property (constant on support, no
/// larger elsewhere).  lambda_ref defaults to the max over probes.
FitnessProfile ess_certificate(const MixedStrategy& s, const CompetitionParams& params,
                               const Disturbance& d, std::size_t probe_count = 2001,
                               double tol_certify = 1e-6,
                               std::optional<double> lambda_ref = std::nullopt,
                               const Tolerances& tol = {});

}  // namespace esstime
