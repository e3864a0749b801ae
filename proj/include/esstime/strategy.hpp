#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "esstime/disturbance.hpp"

namespace esstime {

struct SupportSummary {
    double min_support;
    double max_support;
    std::vector<SupportGap> gaps;
};

/// Arrival-time law mu = gamma0 * delta_0 + (1 - gamma0) * nu, with nu given
/// by a continuous nondecreasing piecewise-linear CDF on x >= 0.  This is the
/// only shape an equilibrium can take; it is enforced for all strategies.
class MixedStrategy {
public:
    /// ac_knots: ordered (x, F_nu) pairs with F_nu(first)=0, F_nu(last)=1.
    /// When atom_at_zero == 1 the knots may be omitted.
    MixedStrategy(double atom_at_zero, std::vector<std::pair<double, double>> ac_knots);

    /// Strategy uniform on the last 1/n fraction of [0, t_high].
    static MixedStrategy late_arrival_family(int n, double t_high);

    double atom_at_zero() const { return gamma0_; }
    const std::vector<double>& knot_x() const { return xs_; }
    const std::vector<double>& knot_F() const { return Fs_; }

    /// CDF of the continuous part (0 before the first knot, 1 after the last).
    double F_nu(double x) const;
    /// Right-continuous CDF of mu: jump of size gamma0 at 0.
    double F_mu(double x) const;
    /// Minimal x with F_nu(x) >= q.
    double quantile_nu(double q) const;

    /// i.i.d. draws; deterministic given seed.
    std::vector<double> sample(std::size_t n, std::uint64_t seed) const;

    SupportSummary support() const;
    bool on_support(double x, double eps = 1e-12) const;

private:
    double gamma0_;
    std::vector<double> xs_, Fs_;
};

}  // namespace esstime
