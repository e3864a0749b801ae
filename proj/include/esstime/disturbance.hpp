#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "esstime/numerics.hpp"

namespace esstime {

/// An interval on which the disturbance density vanishes (between two pieces
/// of its essential support).
struct SupportGap {
    double lo;
    double hi;
};

/// The disturbance-time density f: piecewise linear on explicit knots, with a
/// uniform density as a special kind.  Densities supplied unnormalized are
/// renormalized at construction; the applied factor is recorded.
///
/// t_low() / t_high() are min/max of the essential support Esupp(f); knots may
/// carry zero-density spans before, between, or after the support pieces.
class Disturbance {
public:
    enum class Kind { Uniform, PiecewiseLinear };

    static Disturbance uniform(double lo, double hi);
    static Disturbance piecewise_linear(std::vector<std::pair<double, double>> knots);

    Kind kind() const { return kind_; }
    double t_low() const { return t_low_; }
    double t_high() const { return t_high_; }

    double density(double x) const;
    /// Exact piecewise-quadratic CDF; cdf + tail == 1 by construction.
    double cdf(double x) const;
    double tail(double x) const { return 1.0 - cdf(x); }
    /// Minimal x with cdf(x) >= q.
    double quantile(double q) const;

    /// Affine transport of the density onto [new_low, new_high].
    Disturbance rescale(double new_low, double new_high) const;

    /// Zero-density spans strictly inside [t_low, t_high].
    std::vector<SupportGap> support_gaps() const;

    const std::vector<double>& knot_x() const { return xs_; }
    const std::vector<double>& knot_density() const { return ds_; }
    const std::vector<double>& knot_cdf() const { return Fs_; }
    /// Factor the raw knot densities were divided by at construction.
    double normalization() const { return norm_; }

private:
    Disturbance() = default;
    void finalize();

    Kind kind_ = Kind::PiecewiseLinear;
    std::vector<double> xs_, ds_, Fs_;
    double t_low_ = 0.0, t_high_ = 0.0;
    double norm_ = 1.0;
};

/// \int_lo^hi weight(x) f(x) dx with panel splits at every density knot.
double integrate_density_product(const Disturbance& d,
                                 const std::function<double(double)>& weight,
                                 double lo, double hi, const Tolerances& tol = {});

}  // namespace esstime
