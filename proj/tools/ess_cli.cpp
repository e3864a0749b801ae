// Command-line front end: ESS solves, parameter sweeps, fitness profiles,
// disturbance-regime comparisons, and Monte Carlo cross-checks, all emitted
// as plot-ready CSV/JSON.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <limits>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "esstime/climate.hpp"
#include "esstime/ess.hpp"
#include "esstime/fitness.hpp"
#include "esstime/io.hpp"
#include "esstime/montecarlo.hpp"
#include "esstime/strategy.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace esstime;

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitNumeric = 3;
constexpr int kExitCertification = 4;

// start:stop:count or a comma-separated list.
std::vector<double> parse_grid_spec(const std::string& spec) {
    std::vector<double> out;
    if (spec.find(':') != std::string::npos) {
        double lo, hi;
        int count;
        char c1, c2;
        std::istringstream in(spec);
        if (!(in >> lo >> c1 >> hi >> c2 >> count) || c1 != ':' || c2 != ':' || count < 1)
            throw std::invalid_argument("grid spec must be START:STOP:COUNT or v1,v2,...");
        for (int i = 0; i < count; ++i)
            out.push_back(count == 1 ? lo : lo + (hi - lo) * i / (count - 1));
        return out;
    }
    std::istringstream in(spec);
    std::string tok;
    while (std::getline(in, tok, ',')) out.push_back(std::stod(tok));
    if (out.empty()) throw std::invalid_argument("empty grid spec");
    return out;
}

json residuals_to_json(const EssResiduals& r) {
    return {{"gamma", r.gamma},
            {"x_c", r.x_c},
            {"endpoint", r.endpoint},
            {"max_inversion", r.max_inversion}};
}

void write_summary(const fs::path& dir, const EssSolution& sol) {
    json j{{"a", sol.params.a},
           {"p", sol.params.p},
           {"a_M", sol.a_M ? json(*sol.a_M) : json(nullptr)},
           {"regime", to_string(sol.regime)},
           {"gamma", sol.gamma},
           {"x_c", sol.x_c},
           {"lambda", sol.lambda},
           {"residuals", residuals_to_json(sol.residuals)}};
    write_text_file((dir / "summary.json").string(), j.dump(2) + "\n");
}

void write_ess_csv(const fs::path& dir, const EssSolution& sol) {
    const auto& xs = sol.strategy.knot_x();
    const auto& Fs = sol.strategy.knot_F();
    std::ostringstream out;
    out << "x,F_nu,F_mu,g\n";
    for (std::size_t i = 0; i < xs.size(); ++i) {
        // Density of the continuous part: right slope, left slope at the end.
        double g = 0.0;
        if (i + 1 < xs.size() && xs[i + 1] > xs[i])
            g = (1.0 - sol.strategy.atom_at_zero()) * (Fs[i + 1] - Fs[i]) / (xs[i + 1] - xs[i]);
        else if (i > 0 && xs[i] > xs[i - 1])
            g = (1.0 - sol.strategy.atom_at_zero()) * (Fs[i] - Fs[i - 1]) / (xs[i] - xs[i - 1]);
        out << csv_num(xs[i]) << ',' << csv_num(Fs[i]) << ','
            << csv_num(sol.strategy.F_mu(xs[i])) << ',' << csv_num(g) << '\n';
    }
    write_text_file((dir / "ess.csv").string(), out.str());
}

struct CommonArgs {
    double a = 0.0;
    double p = 0.0;
    std::string disturbance = "uniform:0,1";
    std::size_t grid = 2001;
    std::string out_dir = ".";
    std::string config_path;  // consumed by the pre-scan in main()
    Tolerances tol;
};

void add_common(CLI::App* cmd, CommonArgs& c, const json& cfg, bool with_ap = true) {
    if (cfg.contains("a")) c.a = cfg["a"].get<double>();
    if (cfg.contains("p")) c.p = cfg["p"].get<double>();
    if (cfg.contains("grid")) c.grid = cfg["grid"].get<std::size_t>();
    if (cfg.contains("disturbance"))
        c.disturbance = "json:" + cfg["disturbance"].dump();
    if (cfg.contains("tolerances")) {
        const auto& t = cfg["tolerances"];
        if (t.contains("abs")) c.tol.abs_tol = t["abs"].get<double>();
        if (t.contains("rel")) c.tol.rel_tol = t["rel"].get<double>();
    }
    if (with_ap) {
        cmd->add_option("--a", c.a, "competition strength a");
        cmd->add_option("--p", c.p, "disturbance survival probability p");
    }
    cmd->add_option("--config", c.config_path, "scenario file with flag defaults");
    cmd->add_option("--disturbance", c.disturbance,
                    "uniform:LOW,HIGH or piecewise:@file.json");
    cmd->add_option("--grid", c.grid, "solver grid points");
    cmd->add_option("--out-dir", c.out_dir, "output directory");
    cmd->add_option("--abs-tol", c.tol.abs_tol, "absolute tolerance");
    cmd->add_option("--rel-tol", c.tol.rel_tol, "relative tolerance");
}

Disturbance resolve_disturbance(const std::string& spec) {
    if (spec.rfind("json:", 0) == 0) return disturbance_from_json(json::parse(spec.substr(5)));
    return parse_disturbance_spec(spec);
}

fs::path ensure_out_dir(const std::string& dir) {
    fs::path p(dir);
    fs::create_directories(p);
    return p;
}

int run_ess(const CommonArgs& c) {
    const auto dir = ensure_out_dir(c.out_dir);
    const Disturbance d = resolve_disturbance(c.disturbance);
    const EssSolution sol = solve_ess({c.a, c.p}, d, c.grid, c.tol);
    write_ess_csv(dir, sol);
    write_summary(dir, sol);
    return 0;
}

int run_sweep(const CommonArgs& c, const std::string& a_spec, const std::string& p_spec,
              bool check_monotonicity) {
    const auto dir = ensure_out_dir(c.out_dir);
    const Disturbance d = resolve_disturbance(c.disturbance);
    const auto as = parse_grid_spec(a_spec);
    const auto ps = parse_grid_spec(p_spec);

    struct Row {
        double a, p, a_M, gamma, x_c, lambda;
        Regime regime;
    };
    std::vector<Row> rows;
    for (double a : as)
        for (double p : ps) {
            CompetitionParams params{a, p};
            const auto aM = compute_a_M(p, c.tol);
            Row r;
            r.a = a;
            r.p = p;
            r.a_M = aM ? *aM : std::numeric_limits<double>::infinity();
            r.gamma = compute_gamma(params, c.tol);
            r.x_c = compute_x_c(params, d, c.tol);
            r.lambda = compute_lambda(params, c.tol);
            r.regime = classify_regime(params, c.tol);
            rows.push_back(r);
        }
    std::sort(rows.begin(), rows.end(), [](const Row& l, const Row& r) {
        return l.a != r.a ? l.a < r.a : l.p < r.p;
    });

    std::ostringstream out;
    out << "a,p,a_M,gamma,x_c,lambda,regime\n";
    for (const auto& r : rows)
        out << csv_num(r.a) << ',' << csv_num(r.p) << ',' << csv_num(r.a_M) << ','
            << csv_num(r.gamma) << ',' << csv_num(r.x_c) << ',' << csv_num(r.lambda) << ','
            << to_string(r.regime) << '\n';
    write_text_file((dir / "sweep.csv").string(), out.str());

    if (check_monotonicity) {
        // Along increasing a at fixed p: lambda falls, gamma rises.
        constexpr double tol = 1e-9;
        for (double p : ps) {
            const Row* prev = nullptr;
            for (const auto& r : rows) {
                if (r.p != p) continue;
                if (prev) {
                    if (r.lambda > prev->lambda + tol || r.gamma < prev->gamma - tol) {
                        std::cerr << "monotonicity violated at a=" << r.a << " p=" << p << "\n";
                        return kExitNumeric;
                    }
                }
                prev = &r;
            }
        }
    }
    return 0;
}

int run_fitness(const CommonArgs& c, bool from_ess, const std::string& strategy_file,
                bool max_average, bool strict, std::size_t probes) {
    if (max_average) {
        std::cout << csv_num(max_average_fitness(c.a)) << "\n";
        return 0;
    }
    const auto dir = ensure_out_dir(c.out_dir);
    const Disturbance d = resolve_disturbance(c.disturbance);
    const CompetitionParams params{c.a, c.p};
    std::optional<MixedStrategy> s;
    std::optional<double> lambda_ref;
    if (from_ess) {
        auto sol = solve_ess(params, d, c.grid, c.tol);
        lambda_ref = sol.lambda;
        s = std::move(sol.strategy);
    } else if (!strategy_file.empty()) {
        s = strategy_from_json(load_json_file(strategy_file));
    } else {
        std::cerr << "fitness needs --from-ess or --strategy FILE\n";
        return kExitUsage;
    }
    const auto profile = ess_certificate(*s, params, d, probes, 1e-6, lambda_ref, c.tol);

    std::ostringstream out;
    out << "y,phi,on_support\n";
    for (const auto& pr : profile.probes)
        out << csv_num(pr.y) << ',' << csv_num(pr.phi) << ',' << (pr.on_support ? 1 : 0) << '\n';
    write_text_file((dir / "profile.csv").string(), out.str());

    json cert{{"lambda_hat", profile.lambda_hat},
              {"support_deviation", profile.support_deviation},
              {"off_support_excess", profile.off_support_excess},
              {"certified", profile.certified}};
    write_text_file((dir / "certificate.json").string(), cert.dump(2) + "\n");
    if (strict && !profile.certified) return kExitCertification;
    return 0;
}

int run_climate(const CommonArgs& c, const std::string& d1_spec, const std::string& d2_spec,
                bool want_dp, double dp_h) {
    const auto dir = ensure_out_dir(c.out_dir);
    const Disturbance d1 = resolve_disturbance(d1_spec);
    const Disturbance d2 = resolve_disturbance(d2_spec);
    const CompetitionParams params{c.a, c.p};
    auto sol = solve_ess(params, d1, c.grid, c.tol);

    const auto cmp = compare_profiles(sol.strategy, params, d1, d2);
    std::ostringstream out;
    out << "y,phi_1,phi_2,diff\n";
    for (std::size_t i = 0; i < cmp.y.size(); ++i)
        out << csv_num(cmp.y[i]) << ',' << csv_num(cmp.phi_1[i]) << ',' << csv_num(cmp.phi_2[i])
            << ',' << csv_num(cmp.phi_1[i] - cmp.phi_2[i]) << '\n';
    write_text_file((dir / "compare.csv").string(), out.str());

    const double l1 = average_fitness(sol.strategy, params, d1, c.tol);
    const double l2 = average_fitness(sol.strategy, params, d2, c.tol);
    json delta{{"lambda_bar_1", l1}, {"lambda_bar_2", l2}, {"delta", l2 - l1}};
    write_text_file((dir / "delta.json").string(), delta.dump(2) + "\n");

    if (want_dp) {
        const double dp = dp_average_fitness(sol.strategy, c.a, c.p, d1, dp_h, c.tol);
        json j{{"p", c.p}, {"h", dp_h}, {"dp", dp}};
        write_text_file((dir / "dp.json").string(), j.dump(2) + "\n");
    }
    return 0;
}

int run_simulate(const CommonArgs& c, std::uint64_t seed, const std::string& strategy_file,
                 std::size_t population, std::size_t replications, std::size_t probes,
                 bool best_response, std::size_t br_grid, std::size_t br_iterations) {
    const auto dir = ensure_out_dir(c.out_dir);
    const Disturbance d = resolve_disturbance(c.disturbance);
    const CompetitionParams params{c.a, c.p};
    std::optional<MixedStrategy> s;
    if (!strategy_file.empty())
        s = strategy_from_json(load_json_file(strategy_file));
    else
        s = std::move(solve_ess(params, d, c.grid, c.tol).strategy);

    McConfig cfg;
    cfg.population = population;
    cfg.replications = replications;
    cfg.seed = seed;

    std::ostringstream out;
    out << "y,mean,ci\n";
    for (std::size_t i = 0; i < probes; ++i) {
        const double y = d.t_high() * i / (probes > 1 ? probes - 1 : 1);
        const auto est = mc_phi(y, *s, params, d, cfg);
        out << csv_num(y) << ',' << csv_num(est.mean) << ',' << csv_num(est.ci_half_width) << '\n';
    }
    write_text_file((dir / "mc.csv").string(), out.str());

    const auto avg = mc_average_fitness(*s, params, d, cfg);
    json j{{"average_fitness", avg.mean}, {"ci", avg.ci_half_width}};
    write_text_file((dir / "mc_summary.json").string(), j.dump(2) + "\n");

    if (best_response) {
        const auto br = best_response_iterate(params, d, br_grid, br_iterations);
        std::ostringstream bout;
        bout << "x,F\n";
        bout << "0," << csv_num(br.strategy.atom_at_zero()) << '\n';
        for (double x : br.strategy.knot_x())
            bout << csv_num(x) << ',' << csv_num(br.strategy.F_mu(x)) << '\n';
        write_text_file((dir / "br.csv").string(), bout.str());

        std::ostringstream hist;
        hist << "iteration,ks_to_previous,residual\n";
        for (const auto& h : br.history)
            hist << h.iteration << ',' << csv_num(h.ks_to_previous) << ','
                 << csv_num(h.residual) << '\n';
        write_text_file((dir / "br_history.csv").string(), hist.str());
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    // A config file supplies defaults; explicit flags override them.
    json cfg = json::object();
    for (int i = 1; i + 1 < argc; ++i)
        if (std::string(argv[i]) == "--config") {
            try {
                cfg = load_json_file(argv[i + 1]);
            } catch (const std::exception& e) {
                std::cerr << "error: " << e.what() << "\n";
                return kExitUsage;
            }
        }

    CLI::App app{"Evolutionarily stable arrival-time solver"};
    app.require_subcommand(1);
    std::string config_path;
    app.add_option("--config", config_path, "scenario file with flag defaults");

    CommonArgs ess_args, sweep_args, fit_args, climate_args, sim_args;

    auto* cmd_ess = app.add_subcommand("ess", "solve the ESS and export its CDF");
    add_common(cmd_ess, ess_args, cfg);

    auto* cmd_sweep = app.add_subcommand("sweep", "tabulate the phase diagram over a grid");
    add_common(cmd_sweep, sweep_args, cfg, /*with_ap=*/false);
    std::string a_spec = "1", p_spec = "0.2";
    bool check_mono = false;
    if (cfg.contains("a")) a_spec = csv_num(cfg["a"].get<double>());
    if (cfg.contains("p")) p_spec = csv_num(cfg["p"].get<double>());
    cmd_sweep->add_option("--a", a_spec, "a values: START:STOP:COUNT or list");
    cmd_sweep->add_option("--p", p_spec, "p values: START:STOP:COUNT or list");
    cmd_sweep->add_flag("--check-monotonicity", check_mono,
                        "fail when lambda/gamma break monotonicity in a");

    auto* cmd_fit = app.add_subcommand("fitness", "expected-fitness profile and certificate");
    add_common(cmd_fit, fit_args, cfg);
    bool from_ess = false, max_average = false, strict = false;
    std::string strategy_file;
    std::size_t fit_probes = 2001;
    cmd_fit->add_flag("--from-ess", from_ess, "profile the solved ESS");
    cmd_fit->add_option("--strategy", strategy_file, "strategy JSON file");
    cmd_fit->add_flag("--max-average", max_average, "print (1-e^{-a})/a and exit");
    cmd_fit->add_flag("--strict", strict, "exit 4 when not certified");
    cmd_fit->add_option("--probes", fit_probes, "profile probe count");

    auto* cmd_climate = app.add_subcommand("climate", "compare two disturbance regimes");
    add_common(cmd_climate, climate_args, cfg);
    std::string d1_spec = "uniform:0,1", d2_spec = "uniform:0,1";
    bool want_dp = false;
    double dp_h = 1e-4;
    cmd_climate->add_option("--d1", d1_spec, "reference disturbance");
    cmd_climate->add_option("--d2", d2_spec, "changed disturbance");
    cmd_climate->add_flag("--dp", want_dp, "finite-difference d(lambda_bar)/dp");
    cmd_climate->add_option("--dp-h", dp_h, "finite-difference step");

    auto* cmd_sim = app.add_subcommand("simulate", "Monte Carlo cross-check");
    add_common(cmd_sim, sim_args, cfg);
    std::uint64_t seed = 0;
    std::size_t population = 100000, replications = 200, sim_probes = 11;
    std::size_t br_grid = 200, br_iterations = 500;
    bool best_response = false;
    std::string sim_strategy_file;
    auto* seed_opt = cmd_sim->add_option("--seed", seed, "RNG seed");
    if (cfg.contains("seed"))
        seed = cfg["seed"].get<std::uint64_t>();
    else
        seed_opt->required();
    cmd_sim->add_option("--strategy", sim_strategy_file, "strategy JSON file (default: ESS)");
    cmd_sim->add_option("--population", population, "individuals per replication");
    cmd_sim->add_option("--replications", replications, "replication count");
    cmd_sim->add_option("--probes", sim_probes, "phi probe count");
    cmd_sim->add_flag("--best-response", best_response, "run the fictitious-play iterate");
    cmd_sim->add_option("--br-grid", br_grid, "best-response arrival grid");
    cmd_sim->add_option("--br-iterations", br_iterations, "best-response iterations");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (cmd_ess->parsed()) return run_ess(ess_args);
        if (cmd_sweep->parsed()) return run_sweep(sweep_args, a_spec, p_spec, check_mono);
        if (cmd_fit->parsed())
            return run_fitness(fit_args, from_ess, strategy_file, max_average, strict, fit_probes);
        if (cmd_climate->parsed()) return run_climate(climate_args, d1_spec, d2_spec, want_dp, dp_h);
        if (cmd_sim->parsed())
            return run_simulate(sim_args, seed, sim_strategy_file, population, replications,
                                sim_probes, best_response, br_grid, br_iterations);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumeric;
    }
    return kExitUsage;
}
