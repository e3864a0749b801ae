#include "esstime/strategy.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace esstime {

MixedStrategy::MixedStrategy(double atom_at_zero,
                             std::vector<std::pair<double, double>> ac_knots)
    : gamma0_(atom_at_zero) {
    if (!(gamma0_ >= 0.0 && gamma0_ <= 1.0))
        throw std::invalid_argument("MixedStrategy: atom_at_zero must be in [0,1]");
    if (ac_knots.empty()) {
        if (gamma0_ != 1.0)
            throw std::invalid_argument("MixedStrategy: ac_knots required unless atom_at_zero == 1");
        return;
    }
    if (ac_knots.size() < 2)
        throw std::invalid_argument("MixedStrategy: at least two ac knots required");
    for (const auto& [x, F] : ac_knots) {
        if (x < 0.0) throw std::invalid_argument("MixedStrategy: knot times must be >= 0");
        if (!xs_.empty()) {
            if (x < xs_.back()) throw std::invalid_argument("MixedStrategy: knots must be ordered");
            if (F < Fs_.back()) throw std::invalid_argument("MixedStrategy: F_nu must be nondecreasing");
            if (x == xs_.back()) {
                if (F != Fs_.back())
                    throw std::invalid_argument("MixedStrategy: F_nu must be continuous");
                continue;
            }
        }
        xs_.push_back(x);
        Fs_.push_back(F);
    }
    if (Fs_.front() != 0.0 || Fs_.back() != 1.0)
        throw std::invalid_argument("MixedStrategy: F_nu endpoints must be exactly 0 and 1");
}

MixedStrategy MixedStrategy::late_arrival_family(int n, double t_high) {
    if (n < 1) throw std::invalid_argument("late_arrival_family: n >= 1 required");
    if (!(t_high > 0.0)) throw std::invalid_argument("late_arrival_family: t_high > 0 required");
    const double lo = t_high * (1.0 - 1.0 / static_cast<double>(n));
    return MixedStrategy(0.0, {{lo, 0.0}, {t_high, 1.0}});
}

double MixedStrategy::F_nu(double x) const {
    if (xs_.empty()) return x >= 0.0 ? 1.0 : 0.0;
    if (x <= xs_.front()) return x < xs_.front() ? 0.0 : Fs_.front();
    if (x >= xs_.back()) return 1.0;
    const auto it = std::upper_bound(xs_.begin(), xs_.end(), x);
    const std::size_t i = static_cast<std::size_t>(it - xs_.begin());
    const double t = (x - xs_[i - 1]) / (xs_[i] - xs_[i - 1]);
    return Fs_[i - 1] + t * (Fs_[i] - Fs_[i - 1]);
}

double MixedStrategy::F_mu(double x) const {
    if (x < 0.0) return 0.0;
    return gamma0_ + (1.0 - gamma0_) * F_nu(x);
}

double MixedStrategy::quantile_nu(double q) const {
    if (!(q >= 0.0 && q <= 1.0))
        throw std::invalid_argument("MixedStrategy::quantile_nu: q must be in [0,1]");
    if (xs_.empty()) return 0.0;
    if (q <= 0.0) return xs_.front();
    const auto it = std::lower_bound(Fs_.begin(), Fs_.end(), q);
    const std::size_t i = static_cast<std::size_t>(it - Fs_.begin());
    if (Fs_[i] == q || i == 0) return xs_[i];
    const double t = (q - Fs_[i - 1]) / (Fs_[i] - Fs_[i - 1]);
    return xs_[i - 1] + t * (xs_[i] - xs_[i - 1]);
}

std::vector<double> MixedStrategy::sample(std::size_t n, std::uint64_t seed) const {
    if (n < 1) throw std::invalid_argument("MixedStrategy::sample: n >= 1 required");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::vector<double> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (unif(rng) < gamma0_) {
            out.push_back(0.0);
        } else {
            out.push_back(quantile_nu(unif(rng)));
        }
    }
    return out;
}

SupportSummary MixedStrategy::support() const {
    SupportSummary s{};
    if (xs_.empty()) {
        s.min_support = 0.0;
        s.max_support = 0.0;
        return s;
    }
    // Trim zero-slope spans at the ends of the AC part.
    std::size_t first = 0;
    while (first + 1 < xs_.size() && Fs_[first + 1] == 0.0) ++first;
    std::size_t last = xs_.size() - 1;
    while (last > 0 && Fs_[last - 1] == 1.0) --last;
    s.min_support = gamma0_ > 0.0 ? 0.0 : xs_[first];
    s.max_support = xs_[last];
    if (gamma0_ > 0.0 && xs_[first] > 0.0)
        s.gaps.push_back({0.0, xs_[first]});
    double gap_start = -1.0;
    for (std::size_t i = first + 1; i <= last; ++i) {
        const bool flat = Fs_[i] == Fs_[i - 1];
        if (flat) {
            if (gap_start < 0.0) gap_start = xs_[i - 1];
        } else if (gap_start >= 0.0) {
            s.gaps.push_back({gap_start, xs_[i - 1]});
            gap_start = -1.0;
        }
    }
    return s;
}

bool MixedStrategy::on_support(double x, double eps) const {
    if (x < -eps) return false;
    if (std::abs(x) <= eps && gamma0_ > 0.0) return true;
    if (xs_.empty()) return std::abs(x) <= eps;
    const SupportSummary s = support();
    if (x < s.min_support - eps || x > s.max_support + eps) return false;
    for (const auto& g : s.gaps)
        if (x > g.lo + eps && x < g.hi - eps) return false;
    return true;
}

}  // namespace esstime
