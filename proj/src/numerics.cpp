#include "esstime/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace esstime {

namespace {

// Gauss-Kronrod 15-point nodes/weights on [-1,1]; the embedded 7-point Gauss
// rule gives the error estimate.
constexpr double kKronrodNodes[8] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769, 0.741531185599394,
    0.586087235467691, 0.405845151377397, 0.207784955007898, 0.000000000000000};
constexpr double kKronrodWeights[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250, 0.140653259715525,
    0.169004726639267, 0.190350578064785, 0.204432940075298, 0.209482141084728};
constexpr double kGaussWeights[4] = {
    0.129484966168870, 0.279705391489277, 0.381830050505119, 0.417959183673469};

struct PanelResult {
    double integral;
    double error;
};

PanelResult gk15(const std::function<double(double)>& fn, double lo, double hi) {
    const double c = 0.5 * (lo + hi);
    const double h = 0.5 * (hi - lo);
    double fv[15];
    for (int i = 0; i < 7; ++i) {
        fv[i] = fn(c - h * kKronrodNodes[i]);
        fv[14 - i] = fn(c + h * kKronrodNodes[i]);
    }
    fv[7] = fn(c);
    double kronrod = kKronrodWeights[7] * fv[7];
    for (int i = 0; i < 7; ++i)
        kronrod += kKronrodWeights[i] * (fv[i] + fv[14 - i]);
    double gauss = kGaussWeights[3] * fv[7];
    for (int i = 0; i < 3; ++i) {
        const int j = 2 * i + 1;
        gauss += kGaussWeights[i] * (fv[j] + fv[14 - j]);
    }
    kronrod *= h;
    gauss *= h;
    return {kronrod, std::abs(kronrod - gauss)};
}

double integrate_adaptive(const std::function<double(double)>& fn, double lo, double hi,
                          double tol, int depth, int max_depth) {
    const PanelResult r = gk15(fn, lo, hi);
    if (r.error <= tol || hi - lo < 1e-14 * (1.0 + std::abs(lo)))
        return r.integral;
    if (depth >= max_depth)
        throw std::runtime_error("integrate: adaptive refinement did not converge");
    const double mid = 0.5 * (lo + hi);
    return integrate_adaptive(fn, lo, mid, 0.5 * tol, depth + 1, max_depth) +
           integrate_adaptive(fn, mid, hi, 0.5 * tol, depth + 1, max_depth);
}

}  // namespace

double gk15_panel(const std::function<double(double)>& fn, double lo, double hi) {
    return gk15(fn, lo, hi).integral;
}

double integrate(const std::function<double(double)>& fn, double lo, double hi,
                 const Tolerances& tol) {
    tol.validate();
    if (lo == hi) return 0.0;
    const double sign = lo < hi ? 1.0 : -1.0;
    if (lo > hi) std::swap(lo, hi);
    // max_iter bounds the recursion depth of the bisection tree.
    const int max_depth = std::min(tol.max_iter, 60);
    // Scale the panel tolerance with the integral's magnitude, not just the
    // interval width, so huge integrands still terminate.
    const double scale = std::max(std::abs(hi - lo), std::abs(gk15(fn, lo, hi).integral));
    const double local = std::max(tol.abs_tol, tol.rel_tol * scale);
    return sign * integrate_adaptive(fn, lo, hi, local, 0, max_depth);
}

double kernel_K(double u, double v, double p, const Tolerances& tol) {
    if (!(u >= 1.0) || !(v >= u) || !(p >= 0.0 && p < 1.0))
        throw std::invalid_argument("kernel_K: requires 1 <= u <= v and p in [0,1)");
    return kernel_K_log(std::log(u), std::log(v), p, tol);
}

double kernel_K_log(double log_u, double log_v, double p, const Tolerances& tol) {
    if (!(log_u >= -1e-12) || !(log_v >= log_u) || !(p >= 0.0 && p < 1.0))
        throw std::invalid_argument("kernel_K_log: requires 0 <= log_u <= log_v and p in [0,1)");
    log_u = std::max(log_u, 0.0);
    if (log_v == log_u) return 0.0;
    if (p == 0.0) return log_v - log_u;
    // z = e^s turns the integrand into e^{ps} / (1 - p e^{-(1-p)s}), bounded
    // by e^{ps}/(1-p) on s >= 0.
    auto g = [p](double s) {
        return std::exp(p * s) / (1.0 - p * std::exp(-(1.0 - p) * s));
    };
    return integrate(g, log_u, log_v, tol);
}

double bracketed_root(const std::function<double(double)>& fn, double lo, double hi,
                      const Tolerances& tol) {
    tol.validate();
    double a = lo, b = hi;
    double fa = fn(a), fb = fn(b);
    if (std::abs(fa) <= tol.abs_tol) return a;
    if (std::abs(fb) <= tol.abs_tol) return b;
    if (fa * fb > 0.0)
        throw std::invalid_argument("bracketed_root: no sign change on [lo, hi]");

    // Brent: inverse quadratic / secant with a bisection fallback.
    double c = a, fc = fa;
    double d = b - a, e = d;
    for (int iter = 0; iter < tol.max_iter; ++iter) {
        if (std::abs(fc) < std::abs(fb)) {
            a = b; b = c; c = a;
            fa = fb; fb = fc; fc = fa;
        }
        const double tol1 = 2.0 * std::numeric_limits<double>::epsilon() * std::abs(b) +
                            0.5 * (tol.rel_tol * std::abs(b) + tol.abs_tol);
        const double xm = 0.5 * (c - b);
        if (std::abs(xm) <= tol1 || fb == 0.0 || std::abs(fb) <= tol.abs_tol)
            return b;
        if (std::abs(e) >= tol1 && std::abs(fa) > std::abs(fb)) {
            double s = fb / fa, pq, q;
            if (a == c) {
                pq = 2.0 * xm * s;
                q = 1.0 - s;
            } else {
                const double qq = fa / fc, r = fb / fc;
                pq = s * (2.0 * xm * qq * (qq - r) - (b - a) * (r - 1.0));
                q = (qq - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if (pq > 0.0) q = -q;
            pq = std::abs(pq);
            if (2.0 * pq < std::min(3.0 * xm * q - std::abs(tol1 * q), std::abs(e * q))) {
                e = d;
                d = pq / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        b += std::abs(d) > tol1 ? d : (xm > 0 ? tol1 : -tol1);
        fb = fn(b);
        if ((fb > 0) == (fc > 0)) {
            c = a; fc = fa;
            d = b - a; e = d;
        }
    }
    throw std::runtime_error("bracketed_root: max_iter exceeded");
}

KernelTable::KernelTable(double s_lo, double s_hi, double p, std::size_t panels)
    : s_lo_(s_lo), s_hi_(s_hi), p_(p) {
    if (!(s_lo >= -1e-12) || !(s_hi >= s_lo) || !(p >= 0.0 && p < 1.0))
        throw std::invalid_argument("KernelTable: requires 0 <= s_lo <= s_hi and p in [0,1)");
    s_lo_ = std::max(s_lo_, 0.0);
    panels = std::max<std::size_t>(panels, 16);
    nodes_.resize(panels + 1);
    cum_.resize(panels + 1);
    const double h = (s_hi_ - s_lo_) / static_cast<double>(panels);
    auto g = [this](double s) { return integrand(s); };
    nodes_[0] = s_lo_;
    cum_[0] = 0.0;
    for (std::size_t i = 1; i <= panels; ++i) {
        nodes_[i] = s_lo_ + h * static_cast<double>(i);
        cum_[i] = cum_[i - 1] + (s_hi_ > s_lo_ ? gk15_panel(g, nodes_[i - 1], nodes_[i]) : 0.0);
    }
}

double KernelTable::integrand(double s) const {
    if (p_ == 0.0) return 1.0;
    return std::exp(p_ * s) / (1.0 - p_ * std::exp(-(1.0 - p_) * s));
}

double KernelTable::value(double s) const {
    if (s <= s_lo_) return 0.0;
    if (s >= s_hi_) return total();
    const auto it = std::upper_bound(nodes_.begin(), nodes_.end(), s);
    const std::size_t i = static_cast<std::size_t>(it - nodes_.begin()) - 1;
    auto g = [this](double t) { return integrand(t); };
    return cum_[i] + gk15_panel(g, nodes_[i], s);
}

double KernelTable::invert(double target, const Tolerances& tol) const {
    if (target <= 0.0) return s_lo_;
    if (target >= total()) return s_hi_;
    const auto it = std::upper_bound(cum_.begin(), cum_.end(), target);
    const std::size_t i = static_cast<std::size_t>(it - cum_.begin()) - 1;
    auto g = [this](double t) { return integrand(t); };
    auto residual = [&](double s) { return cum_[i] + gk15_panel(g, nodes_[i], s) - target; };
    return bracketed_root(residual, nodes_[i], nodes_[i + 1], tol);
}

}  // namespace esstime
