#include "esstime/disturbance.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace esstime {

Disturbance Disturbance::uniform(double lo, double hi) {
    if (!(lo >= 0.0) || !(lo < hi))
        throw std::invalid_argument("Disturbance::uniform: requires 0 <= lo < hi");
    Disturbance d;
    d.kind_ = Kind::Uniform;
    const double h = 1.0 / (hi - lo);
    d.xs_ = {lo, hi};
    d.ds_ = {h, h};
    d.finalize();
    return d;
}

Disturbance Disturbance::piecewise_linear(std::vector<std::pair<double, double>> knots) {
    if (knots.size() < 2)
        throw std::invalid_argument("Disturbance: at least two knots required");
    std::sort(knots.begin(), knots.end());
    Disturbance d;
    d.kind_ = Kind::PiecewiseLinear;
    for (const auto& [x, v] : knots) {
        if (x < 0.0) throw std::invalid_argument("Disturbance: knot times must be >= 0");
        if (v < 0.0) throw std::invalid_argument("Disturbance: densities must be >= 0");
        if (!d.xs_.empty() && x == d.xs_.back())
            throw std::invalid_argument("Disturbance: duplicate knot time");
        d.xs_.push_back(x);
        d.ds_.push_back(v);
    }
    d.finalize();
    return d;
}

void Disturbance::finalize() {
    const std::size_t n = xs_.size();
    Fs_.assign(n, 0.0);
    for (std::size_t i = 1; i < n; ++i)
        Fs_[i] = Fs_[i - 1] + 0.5 * (ds_[i - 1] + ds_[i]) * (xs_[i] - xs_[i - 1]);
    norm_ = Fs_.back();
    if (!(norm_ > 0.0))
        throw std::invalid_argument("Disturbance: density integrates to zero");
    for (auto& v : ds_) v /= norm_;
    for (auto& v : Fs_) v /= norm_;
    Fs_.back() = 1.0;

    // Essential support bounds: trim segments carrying no mass.
    std::size_t first = 0;
    while (first + 1 < n && Fs_[first + 1] == 0.0) ++first;
    std::size_t last = n - 1;
    while (last > 0 && Fs_[last - 1] == 1.0) --last;
    t_low_ = xs_[first];
    t_high_ = xs_[last];
    if (!(t_low_ < t_high_))
        throw std::invalid_argument("Disturbance: degenerate essential support");
}

double Disturbance::density(double x) const {
    if (x < xs_.front() || x > xs_.back()) return 0.0;
    const auto it = std::upper_bound(xs_.begin(), xs_.end(), x);
    if (it == xs_.begin()) return ds_.front();
    if (it == xs_.end()) return ds_.back();
    const std::size_t i = static_cast<std::size_t>(it - xs_.begin());
    const double t = (x - xs_[i - 1]) / (xs_[i] - xs_[i - 1]);
    return ds_[i - 1] + t * (ds_[i] - ds_[i - 1]);
}

double Disturbance::cdf(double x) const {
    if (x <= xs_.front()) return 0.0;
    if (x >= xs_.back()) return 1.0;
    const auto it = std::upper_bound(xs_.begin(), xs_.end(), x);
    const std::size_t i = static_cast<std::size_t>(it - xs_.begin());
    const double x0 = xs_[i - 1], x1 = xs_[i];
    const double d0 = ds_[i - 1], d1 = ds_[i];
    const double u = x - x0, h = x1 - x0;
    return Fs_[i - 1] + d0 * u + 0.5 * (d1 - d0) * u * u / h;
}

double Disturbance::quantile(double q) const {
    if (!(q >= 0.0 && q <= 1.0))
        throw std::invalid_argument("Disturbance::quantile: q must be in [0,1]");
    if (q <= 0.0) return t_low_;
    if (q >= 1.0) return t_high_;
    const auto it = std::lower_bound(Fs_.begin(), Fs_.end(), q);
    std::size_t i = static_cast<std::size_t>(it - Fs_.begin());
    if (Fs_[i] == q) return std::min(xs_[i], t_high_);
    // q lies strictly inside segment (i-1, i); invert the quadratic there.
    const double x0 = xs_[i - 1], x1 = xs_[i];
    const double d0 = ds_[i - 1], d1 = ds_[i];
    const double h = x1 - x0;
    const double rem = q - Fs_[i - 1];
    const double slope = (d1 - d0) / h;
    double u;
    if (std::abs(slope) * h < 1e-14 * std::max(d0, d1)) {
        u = rem / d0;
    } else {
        // 0.5*slope*u^2 + d0*u - rem = 0, the root in [0,h].
        const double disc = d0 * d0 + 2.0 * slope * rem;
        u = (std::sqrt(std::max(disc, 0.0)) - d0) / slope;
        if (!(u >= 0.0 && u <= h)) u = std::clamp(u, 0.0, h);
    }
    return x0 + u;
}

Disturbance Disturbance::rescale(double new_low, double new_high) const {
    if (!(new_low < new_high))
        throw std::invalid_argument("Disturbance::rescale: requires new_low < new_high");
    if (kind_ == Kind::Uniform) return uniform(new_low, new_high);
    const double lo = xs_.front(), hi = xs_.back();
    const double scale = (new_high - new_low) / (hi - lo);
    std::vector<std::pair<double, double>> knots;
    knots.reserve(xs_.size());
    for (std::size_t i = 0; i < xs_.size(); ++i)
        knots.emplace_back(new_low + (xs_[i] - lo) * scale, ds_[i]);
    return piecewise_linear(std::move(knots));
}

std::vector<SupportGap> Disturbance::support_gaps() const {
    std::vector<SupportGap> gaps;
    double gap_start = -1.0;
    for (std::size_t i = 1; i < xs_.size(); ++i) {
        const bool empty = ds_[i - 1] == 0.0 && ds_[i] == 0.0;
        if (empty && xs_[i - 1] >= t_low_ && xs_[i] <= t_high_) {
            if (gap_start < 0.0) gap_start = xs_[i - 1];
        } else if (gap_start >= 0.0) {
            gaps.push_back({gap_start, xs_[i - 1]});
            gap_start = -1.0;
        }
    }
    if (gap_start >= 0.0 && gap_start > t_low_)
        gaps.push_back({gap_start, t_high_});
    return gaps;
}

double integrate_density_product(const Disturbance& d,
                                 const std::function<double(double)>& weight,
                                 double lo, double hi, const Tolerances& tol) {
    if (lo > hi)
        throw std::invalid_argument("integrate_density_product: requires lo <= hi");
    const auto& xs = d.knot_x();
    lo = std::max(lo, xs.front());
    hi = std::min(hi, xs.back());
    if (lo >= hi) return 0.0;
    std::vector<double> cuts{lo};
    for (double x : xs)
        if (x > lo && x < hi) cuts.push_back(x);
    cuts.push_back(hi);
    auto g = [&](double x) { return weight(x) * d.density(x); };
    double sum = 0.0;
    Tolerances panel_tol = tol;
    panel_tol.abs_tol = tol.abs_tol / static_cast<double>(cuts.size());
    for (std::size_t i = 1; i < cuts.size(); ++i)
        sum += integrate(g, cuts[i - 1], cuts[i], panel_tol);
    return sum;
}

}  // namespace esstime
