#pragma once

#include <optional>
#include <string>

#include "esstime/disturbance.hpp"
#include "esstime/strategy.hpp"

namespace esstime {

struct CompetitionParams {
    double a;  // competition strength, > 0
    double p;  // disturbance survival probability, in [0,1)

    void validate() const;
};

enum class Regime { Subcritical, Critical, Supercritical };

std::string to_string(Regime r);

struct EssResiduals {
    double gamma = 0.0;          // residual of the atom-mass equation
    double x_c = 0.0;            // residual of the first-arrival equation
    double endpoint = 0.0;       // |F_nu(t_high) - 1| in kernel units
    double max_inversion = 0.0;  // worst per-knot inversion residual
};

struct EssSolution {
    CompetitionParams params;
    std::optional<double> a_M;  // nullopt means +infinity (p = 0)
    Regime regime;
    double gamma;
    double x_c;
    double lambda;
    MixedStrategy strategy;
    EssResiduals residuals;
};

/// Phase-transition competition level; nullopt encodes +infinity at p = 0.
std::optional<double> compute_a_M(double p, const Tolerances& tol = {});

/// Inverse of a_M: the unique p with a_M(p) = a.
double compute_p_M(double a, const Tolerances& tol = {});

Regime classify_regime(const CompetitionParams& params, const Tolerances& tol = {});

double compute_lambda(const CompetitionParams& params, const Tolerances& tol = {});

/// Atom mass at 0; zero when a <= a_M(p).
double compute_gamma(const CompetitionParams& params, const Tolerances& tol = {});

/// First arrival date of the continuous part: the MAXIMAL solution of the
/// tail equation (right endpoint of a flat tail span); 0 when a > a_M.
double compute_x_c(const CompetitionParams& params, const Disturbance& d,
                   const Tolerances& tol = {});

EssSolution solve_ess(const CompetitionParams& params, const Disturbance& d,
                      std::size_t grid_points = 2001, const Tolerances& tol = {});

struct UniformAlphaR {
    double alpha;  // x_c = t_low + alpha * (t_high - t_low) for uniform f
    double R;      // tail(x_c), the arrival/disturbance interval length ratio
};

UniformAlphaR uniform_alpha_R(const CompetitionParams& params, const Tolerances& tol = {});

enum class DegenerateKind {
    EveryStrategy,        // a = 0, p = 1
    AnyAfterDisturbance,  // a = 0, p < 1: ESS iff supp(mu) in [t_high, inf)
    AtomAtZero            // a > 0, p = 1: unique ESS delta_0
};

struct DegenerateCase {
    DegenerateKind kind;
    std::string description;
};

/// Classification of the edge cases a = 0 and/or p = 1.
DegenerateCase degenerate_cases(double a, double p, const Disturbance& d);

}  // namespace esstime
