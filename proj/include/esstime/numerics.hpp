#pragma once

#include <cstddef>
#include <functional>
#include <stdexcept>
#include <vector>

namespace esstime {

struct Tolerances {
    double abs_tol = 1e-10;
    double rel_tol = 1e-10;
    int max_iter = 200;

    void validate() const {
        if (abs_tol <= 0 || rel_tol <= 0 || max_iter < 1)
            throw std::invalid_argument("Tolerances: abs_tol > 0, rel_tol > 0, max_iter >= 1 required");
    }
};

/// Adaptive Gauss-Kronrod (G7/K15) quadrature of a smooth integrand.
double integrate(const std::function<double(double)>& fn, double lo, double hi,
                 const Tolerances& tol = {});

/// Non-adaptive single-panel K15 estimate (used by kernel tables where the
/// panel width is already small).
double gk15_panel(const std::function<double(double)>& fn, double lo, double hi);

/// The recurring kernel integral  K(u,v,p) = \int_u^v dz / (z^{1-p} - p),
/// requires 1 <= u <= v and p in [0,1).  p = 0 uses the closed form ln(v/u).
double kernel_K(double u, double v, double p, const Tolerances& tol = {});

/// Same integral with the limits given as logarithms (u = e^{log_u}), so that
/// large exponents never materialize an overflowing intermediate.
double kernel_K_log(double log_u, double log_v, double p, const Tolerances& tol = {});

/// Brent-style bracketed root finding for a function with a sign change on
/// [lo, hi].  Throws std::invalid_argument if no bracket, std::runtime_error
/// if max_iter is exhausted.
double bracketed_root(const std::function<double(double)>& fn, double lo, double hi,
                      const Tolerances& tol = {});

/// Tabulated cumulative kernel  s |-> K(e^{s_lo}, e^s, p)  on [s_lo, s_hi].
/// Precomputes panel sums once so that repeated evaluation and monotone
/// inversion only touch a single panel.
class KernelTable {
public:
    KernelTable(double s_lo, double s_hi, double p, std::size_t panels = 2048);

    double s_lo() const { return s_lo_; }
    double s_hi() const { return s_hi_; }
    double total() const { return cum_.back(); }

    /// K(e^{s_lo}, e^s, p) for s in [s_lo, s_hi].
    double value(double s) const;

    /// The unique s with value(s) == target, target in [0, total()].
    double invert(double target, const Tolerances& tol = {}) const;

private:
    double integrand(double s) const;

    double s_lo_, s_hi_, p_;
    std::vector<double> nodes_;
    std::vector<double> cum_;
};

}  // namespace esstime
