#include "esstime/fitness.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace esstime {

double psi(double y, double x, const MixedStrategy& s, const CompetitionParams& params) {
    if (y < 0.0) throw std::invalid_argument("psi: y >= 0 required");
    const double a = params.a, p = params.p;
    const double Fy = s.F_mu(y);
    if (y <= x) return p * std::exp(-a * Fy);
    const double Fx = s.F_mu(x);
    return std::exp(-a * p * Fx - a * Fy + a * Fx);
}

FitnessEvaluator::FitnessEvaluator(const MixedStrategy& s, const CompetitionParams& params,
                                   const Disturbance& d, const Tolerances& tol)
    : s_(s), d_(d), a_(params.a), p_(params.p) {
    tol.validate();
    const auto& fx = d.knot_x();
    std::set<double> cutset(fx.begin(), fx.end());
    for (double x : s.knot_x())
        if (x > fx.front() && x < fx.back()) cutset.insert(x);
    cuts_.assign(cutset.begin(), cutset.end());

    // Cap panel width so a single K15 panel resolves the exponential factor.
    const double span = cuts_.back() - cuts_.front();
    const double max_w = span / 512.0;
    std::vector<double> refined;
    refined.push_back(cuts_.front());
    for (std::size_t i = 1; i < cuts_.size(); ++i) {
        const double w = cuts_[i] - cuts_[i - 1];
        const int parts = std::max(1, static_cast<int>(std::ceil(w / max_w)));
        for (int k = 1; k <= parts; ++k)
            refined.push_back(cuts_[i - 1] + w * k / parts);
    }
    cuts_ = std::move(refined);

    auto g = [this](double x) {
        return (std::exp(a_ * (1.0 - p_) * s_.F_mu(x)) - p_) * d_.density(x);
    };
    cum_.assign(cuts_.size(), 0.0);
    for (std::size_t i = 1; i < cuts_.size(); ++i)
        cum_[i] = cum_[i - 1] + gk15_panel(g, cuts_[i - 1], cuts_[i]);
}

double FitnessEvaluator::inner(double y) const {
    if (y <= cuts_.front()) return 0.0;
    if (y >= cuts_.back()) return cum_.back();
    const auto it = std::upper_bound(cuts_.begin(), cuts_.end(), y);
    const std::size_t i = static_cast<std::size_t>(it - cuts_.begin()) - 1;
    auto g = [this](double x) {
        return (std::exp(a_ * (1.0 - p_) * s_.F_mu(x)) - p_) * d_.density(x);
    };
    return cum_[i] + gk15_panel(g, cuts_[i], y);
}

double FitnessEvaluator::phi(double y) const {
    if (y < 0.0) throw std::invalid_argument("phi: y >= 0 required");
    if (a_ == 0.0) return 1.0 - (1.0 - p_) * d_.tail(y);
    return std::exp(-a_ * s_.F_mu(y)) * (inner(y) + p_);
}

double phi(double y, const MixedStrategy& s, const CompetitionParams& params,
           const Disturbance& d, const Tolerances& tol) {
    return FitnessEvaluator(s, params, d, tol).phi(y);
}

double average_fitness(const MixedStrategy& s, const CompetitionParams& params,
                       const Disturbance& d, const Tolerances& tol) {
    const FitnessEvaluator ev(s, params, d, tol);
    const double gamma0 = s.atom_at_zero();
    double result = gamma0 * ev.phi(0.0);
    if (gamma0 >= 1.0) return result;

    const auto& xs = s.knot_x();
    const auto& Fs = s.knot_F();
    auto f = [&](double y) { return ev.phi(y); };
    Tolerances seg_tol = tol;
    seg_tol.abs_tol = tol.abs_tol / static_cast<double>(std::max<std::size_t>(xs.size(), 1));
    for (std::size_t i = 1; i < xs.size(); ++i) {
        const double mass = Fs[i] - Fs[i - 1];
        if (mass == 0.0) continue;
        const double w = xs[i] - xs[i - 1];
        // Split at density knots inside the segment; phi is smooth per panel.
        std::vector<double> cuts{xs[i - 1]};
        for (double x : d.knot_x())
            if (x > xs[i - 1] && x < xs[i]) cuts.push_back(x);
        cuts.push_back(xs[i]);
        double seg = 0.0;
        for (std::size_t k = 1; k < cuts.size(); ++k)
            seg += integrate(f, cuts[k - 1], cuts[k], seg_tol);
        result += (1.0 - gamma0) * (mass / w) * seg;
    }
    return result;
}

double max_average_fitness(double a) {
    if (!(a > 0.0)) throw std::invalid_argument("max_average_fitness: a > 0 required");
    if (a < 1e-5) return 1.0 - 0.5 * a + a * a / 6.0;
    return (1.0 - std::exp(-a)) / a;
}

FitnessProfile ess_certificate(const MixedStrategy& s, const CompetitionParams& params,
                               const Disturbance& d, std::size_t probe_count,
                               double tol_certify, std::optional<double> lambda_ref,
                               const Tolerances& tol) {
    if (probe_count < 10)
        throw std::invalid_argument("ess_certificate: probe_count >= 10 required");
    const FitnessEvaluator ev(s, params, d, tol);
    const double t_high = d.t_high();
    const double margin = 0.1 * std::max(t_high, 1e-6);

    std::set<double> ys;
    for (std::size_t k = 0; k < probe_count; ++k)
        ys.insert((t_high + margin) * static_cast<double>(k) /
                  static_cast<double>(probe_count - 1));
    for (double x : s.knot_x()) ys.insert(x);
    for (double x : d.knot_x()) ys.insert(x);
    ys.insert(0.0);

    FitnessProfile prof{};
    prof.lambda_hat = -1.0;
    for (double y : ys) {
        const double v = ev.phi(y);
        prof.probes.push_back({y, v, s.on_support(y)});
        prof.lambda_hat = std::max(prof.lambda_hat, v);
    }
    const double lambda = lambda_ref.value_or(prof.lambda_hat);
    prof.support_deviation = 0.0;
    prof.off_support_excess = -1.0;
    for (const auto& pr : prof.probes) {
        if (pr.on_support)
            prof.support_deviation = std::max(prof.support_deviation,
                                              std::abs(pr.phi - lambda));
        else
            prof.off_support_excess = std::max(prof.off_support_excess, pr.phi - lambda);
    }
    prof.certified = prof.support_deviation <= tol_certify &&
                     prof.off_support_excess <= tol_certify;
    return prof;
}

}  // namespace esstime
