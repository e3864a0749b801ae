#include "esstime/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

namespace esstime {

void McConfig::validate() const {
    if (population < 100) throw std::invalid_argument("population must be at least 100");
    if (replications < 1) throw std::invalid_argument("need at least one replication");
}

namespace {

McEstimate summarize(const std::vector<double>& samples) {
    const double n = static_cast<double>(samples.size());
    double mean = 0.0;
    for (double s : samples) mean += s;
    mean /= n;
    if (samples.size() < 2) return {mean, std::numeric_limits<double>::infinity()};
    double var = 0.0;
    for (double s : samples) var += (s - mean) * (s - mean);
    var /= (n - 1.0);
    // 99% normal interval over replication means.
    return {mean, 2.576 * std::sqrt(var / n)};
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t rep) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (rep + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace

McEstimate mc_phi(double y, const MixedStrategy& s, const CompetitionParams& params,
                  const Disturbance& d, const McConfig& cfg) {
    params.validate();
    cfg.validate();
    if (y < 0.0) throw std::invalid_argument("arrival time must be nonnegative");
    const double a = params.a;
    const double p = params.p;
    const auto n = cfg.population;

    std::vector<double> samples;
    samples.reserve(cfg.replications);
    for (std::size_t rep = 0; rep < cfg.replications; ++rep) {
        std::mt19937_64 rng(mix_seed(cfg.seed, rep));
        std::uniform_real_distribution<double> unif(0.0, 1.0);
        std::bernoulli_distribution survive(p);

        const double X = d.quantile(unif(rng));
        auto arrivals = s.sample(n, mix_seed(cfg.seed ^ 0x5bf0a8b1ULL, rep));

        // Competitors alive when the focal individual arrives at y.
        std::size_t alive = 0;
        for (double t : arrivals) {
            const bool before = cfg.atom_self_competition ? (t <= y) : (t < y);
            if (!before) continue;
            if (y > X && t <= X && !survive(rng)) continue;  // killed before y
            ++alive;
        }
        const double frac = static_cast<double>(alive) / static_cast<double>(n);
        // The focal is exposed to the disturbance iff it arrives before it.
        const double own = (y <= X) ? (survive(rng) ? 1.0 : 0.0) : 1.0;
        samples.push_back(own * std::exp(-a * frac));
    }
    return summarize(samples);
}

McEstimate mc_average_fitness(const MixedStrategy& s, const CompetitionParams& params,
                              const Disturbance& d, const McConfig& cfg) {
    params.validate();
    cfg.validate();
    const double a = params.a;
    const double p = params.p;
    const auto n = cfg.population;
    const double dn = static_cast<double>(n);

    std::vector<double> samples;
    samples.reserve(cfg.replications);
    for (std::size_t rep = 0; rep < cfg.replications; ++rep) {
        std::mt19937_64 rng(mix_seed(cfg.seed, rep));
        std::uniform_real_distribution<double> unif(0.0, 1.0);
        std::bernoulli_distribution survive(p);

        const double X = d.quantile(unif(rng));
        auto arrivals = s.sample(n, mix_seed(cfg.seed ^ 0x5bf0a8b1ULL, rep));
        std::sort(arrivals.begin(), arrivals.end());

        // Everyone arriving before the disturbance is exposed to it; the dead
        // stop counting as competition for later arrivals.
        std::vector<char> alive(n, 1);
        std::size_t dead = 0;
        std::size_t exposed = 0;
        while (exposed < n && arrivals[exposed] <= X) {
            if (!survive(rng)) {
                alive[exposed] = 0;
                ++dead;
            }
            ++exposed;
        }

        double total = 0.0;
        std::size_t run_start = 0, run_end = 0;
        for (std::size_t j = 0; j < n; ++j) {
            const double t = arrivals[j];
            if (j >= run_end) {
                run_start = j;
                run_end = j + 1;
                while (run_end < n && arrivals[run_end] == t) ++run_end;
            }
            // Everyone sharing the arrival time counts (self excluded), or
            // only strictly earlier arrivals, by convention.
            std::size_t comp = cfg.atom_self_competition ? run_end - 1 : run_start;
            double own = 1.0;
            if (t > X) {
                comp -= std::min(comp, dead);
            } else {
                own = alive[j] ? 1.0 : 0.0;
            }
            total += own * std::exp(-a * static_cast<double>(comp) / dn);
        }
        samples.push_back(total / dn);
    }
    return summarize(samples);
}

BestResponseResult best_response_iterate(const CompetitionParams& params,
                                         const Disturbance& d, std::size_t grid,
                                         std::size_t iterations, double damping) {
    params.validate();
    if (grid < 50) throw std::invalid_argument("grid must be at least 50");
    if (damping <= 0.0 || damping > 1.0) throw std::invalid_argument("damping must lie in (0,1]");
    const double a = params.a;
    const double p = params.p;
    const double hi = d.t_high();
    const double h = hi / static_cast<double>(grid);

    // Weights on arrival times g_i = i*h, i = 0..grid; start from everyone at 0.
    const std::size_t m = grid + 1;
    std::vector<double> w(m, 0.0);
    w[0] = 1.0;
    std::vector<double> cdf_d(m + 1);
    for (std::size_t i = 0; i <= grid; ++i) cdf_d[i] = d.cdf(static_cast<double>(i) * h);
    cdf_d[m] = 1.0;

    std::vector<double> phi(m), F(m), prev_cum(m, 1.0);
    std::vector<BestResponseHistory> history;
    double last_residual = 0.0;

    for (std::size_t it = 0; it < iterations; ++it) {
        // Right-continuous competition profile of the current population.
        double acc = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            acc += w[i];
            F[i] = acc;
        }
        // phi(y) = e^{-aF(y)} [ int_0^y (e^{a(1-p)F} - p) f + p ], with F constant
        // between grid points so the integral telescopes over disturbance mass.
        double inner = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            phi[i] = std::exp(-a * F[i]) * (inner + p);
            inner += (std::exp(a * (1.0 - p) * F[i]) - p) * (cdf_d[i + 1] - cdf_d[i]);
        }

        std::size_t best = 0;
        double best_phi = phi[0], avg = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            avg += w[i] * phi[i];
            if (phi[i] > best_phi) {
                best_phi = phi[i];
                best = i;
            }
        }
        const double residual = best_phi - avg;

        const double eta = std::min(damping, 1.0 / static_cast<double>(it + 1));
        double ks = 0.0, cum = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            w[i] *= (1.0 - eta);
            if (i == best) w[i] += eta;
            cum += w[i];
            ks = std::max(ks, std::abs(cum - prev_cum[i]));
            prev_cum[i] = cum;
        }
        last_residual = residual;
        history.push_back({static_cast<int>(it), ks, residual});
    }

    // Smooth the point masses above zero into a piecewise-linear CDF, one
    // cell of width h per grid point.
    const double atom = w[0];
    if (atom >= 1.0 - 1e-12)
        return {MixedStrategy(1.0, {}), last_residual, std::move(history)};
    const double ac_total = 1.0 - atom;
    std::vector<std::pair<double, double>> knots;
    knots.emplace_back(0.5 * h, 0.0);
    double cum = 0.0;
    for (std::size_t i = 1; i < m; ++i) {
        cum += w[i] / ac_total;
        knots.emplace_back((static_cast<double>(i) + 0.5) * h, std::min(cum, 1.0));
    }
    knots.back().second = 1.0;
    return {MixedStrategy(atom, std::move(knots)), last_residual, std::move(history)};
}

}  // namespace esstime
