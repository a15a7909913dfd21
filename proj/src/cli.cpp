#include "levy_elliptic/cli.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "levy_elliptic/config.hpp"
#include "levy_elliptic/csv.hpp"
#include "levy_elliptic/diagnostics.hpp"
#include "levy_elliptic/error.hpp"
#include "levy_elliptic/integrability.hpp"
#include "levy_elliptic/kernels.hpp"
#include "levy_elliptic/noise_field.hpp"
#include "levy_elliptic/report_io.hpp"
#include "levy_elliptic/solver.hpp"

namespace levy_elliptic {

namespace {

namespace fs = std::filesystem;

struct Invocation {
    std::string config_path;
    std::vector<std::string> sets;
    std::optional<std::uint64_t> seed;
    std::optional<int> workers;
    bool override_existence = false;
    std::string target;
};

struct Context {
    RunConfig cfg;
    int workers = 1;
    fs::path out;
    std::ostream& os;
};

std::uint64_t require_seed(const RunConfig& cfg, const std::string& what) {
    if (!cfg.seed) throw ConfigError("--seed: required for " + what);
    return *cfg.seed;
}

std::shared_ptr<const EigenSystem> make_system(const RunConfig& cfg, std::size_t default_k) {
    EigenCutoff cutoff = cfg.cutoff();
    if (!cfg.K && !cfg.lambda_max) cutoff = EigenCutoff::by_count(default_k);
    return std::make_shared<const EigenSystem>(cfg.box, cutoff);
}

nlohmann::json box_json(const HyperBox& box) {
    nlohmann::json j = nlohmann::json::array();
    for (int i = 0; i < box.dim(); ++i) j.push_back({box.lower(i), box.upper(i)});
    return j;
}

void write_json(const fs::path& path, const nlohmann::json& j) {
    auto os = open_output(path);
    os << j.dump(2) << '\n';
    if (!os) throw Error("write failed for " + path.string());
}

int finish_reports(Context& ctx, const std::vector<TestReport>& reports) {
    emit_report(reports, ctx.out);
    for (const auto& r : reports) {
        ctx.os << r.name << ": statistic=" << fmt17(r.statistic) << " threshold=" << fmt17(r.threshold) << ' ';
        if (r.outcome != Outcome::decided) {
            ctx.os << to_string(r.outcome) << '\n';
        } else {
            ctx.os << (r.pass ? "PASS" : "FAIL") << '\n';
        }
    }
    return all_pass(reports) ? kExitPass : kExitFail;
}

int cmd_check(Context& ctx) {
    const auto& cfg = ctx.cfg;
    const int d = cfg.box.dim();
    auto system = make_system(cfg, 1000);
    const FunctionDescriptor f = parse_function(cfg.f, cfg.box, cfg.gamma, system);
    nlohmann::json j;
    j["existence"] = to_json(existence_verdict(d, cfg.gamma, cfg.triplet, cfg.mode));
    const OperatorMode other = cfg.mode == OperatorMode::spectral ? OperatorMode::laplacian_green_bound : OperatorMode::spectral;
    j["existence_" + to_string(other)] = to_json(existence_verdict(d, cfg.gamma, cfg.triplet, other));
    j["integrability"] = to_json(rr_integrability(f, cfg.triplet, cfg.box));
    j["f"] = describe(f);
    fs::create_directories(ctx.out);
    write_json(ctx.out / "check.json", j);
    ctx.os << j.dump(2) << '\n';
    return kExitPass;
}

int cmd_sample_noise(Context& ctx) {
    const auto& cfg = ctx.cfg;
    const std::uint64_t seed = require_seed(cfg, "sample-noise");
    const auto realization = sample_noise(cfg.box, cfg.triplet, cfg.eps, cfg.policy, seed);
    fs::create_directories(ctx.out);
    {
        auto os = open_output(ctx.out / "atoms.csv");
        write_atoms_csv(os, realization.atoms());
    }
    nlohmann::json m;
    m["seed"] = seed;
    m["box"] = box_json(cfg.box);
    m["triplet"] = summarize(cfg.triplet);
    m["eps"] = cfg.eps;
    m["policy"] = to_string(cfg.policy);
    m["atoms"] = realization.atoms().size();
    m["tail_mass"] = tail_mass(cfg.triplet.measure, cfg.eps);
    m["small_jump_variance"] = realization.small_jump_variance();
    write_json(ctx.out / "manifest.json", m);
    ctx.os << "sampled " << realization.atoms().size() << " atoms above eps=" << fmt17(cfg.eps) << '\n';
    return kExitPass;
}

int cmd_solve(Context& ctx) {
    const auto& cfg = ctx.cfg;
    const std::uint64_t seed = require_seed(cfg, "solve");
    std::size_t points = 1;
    for (int i = 0; i < cfg.box.dim(); ++i) points *= static_cast<std::size_t>(cfg.grid) + 1;
    if (points > 20'000'000) throw ConfigError("--set grid: grid has more than 2e7 points");
    auto system = make_system(cfg, 1000);
    const auto realization = sample_noise(cfg.box, cfg.triplet, cfg.eps, cfg.policy, seed);
    SolveOptions so;
    so.override_existence = cfg.override_existence;
    so.workers = ctx.workers;
    const SpectralField field = solve_mild(realization, cfg.gamma, system, so);
    const auto grid = uniform_grid(cfg.box, cfg.grid);
    const auto values = eval_field_grid(field, grid, ctx.workers);
    fs::create_directories(ctx.out);
    {
        auto os = open_output(ctx.out / "coeffs.csv");
        write_coeffs_csv(os, field);
    }
    {
        auto os = open_output(ctx.out / "field.csv");
        write_grid_csv(os, grid, values);
    }
    nlohmann::json m;
    m["seed"] = seed;
    m["box"] = box_json(cfg.box);
    m["triplet"] = summarize(cfg.triplet);
    m["gamma"] = cfg.gamma;
    m["eps"] = cfg.eps;
    m["policy"] = to_string(cfg.policy);
    m["modes"] = field.size();
    m["lambda_max"] = system->max_lambda();
    m["atoms"] = realization.atoms().size();
    m["provenance"] = to_string(field.provenance);
    write_json(ctx.out / "manifest.json", m);
    ctx.os << "solved " << field.size() << " modes; field on " << values.size() << " grid points\n";
    return kExitPass;
}

int cmd_verify(Context& ctx, const std::string& target) {
    const auto& cfg = ctx.cfg;
    std::vector<TestReport> reports;
    if (target == "cf") {
        const std::uint64_t seed = require_seed(cfg, "verify cf");
        auto system = make_system(cfg, 2000);
        const FunctionDescriptor f = parse_function(cfg.f, cfg.box, cfg.gamma, system);
        CfOptions o;
        o.eps = cfg.eps;
        o.policy = cfg.policy;
        o.K = cfg.K.value_or(2000);
        o.route = cfg.psi_route;
        o.workers = ctx.workers;
        reports.push_back(empirical_cf_test(cfg.triplet, f, cfg.box, cfg.u_grid, cfg.M, seed, o));
    } else if (target == "isometry") {
        const std::uint64_t seed = require_seed(cfg, "verify isometry");
        auto system = make_system(cfg, 1000);
        const FunctionDescriptor f = parse_function(cfg.f, cfg.box, cfg.gamma, system);
        if (!(cfg.eps > 0.0)) throw ConfigError("--set eps: isometry band needs eps > 0");
        reports.push_back(isometry_test(cfg.triplet.measure, cfg.eps, f, cfg.box, cfg.M, seed, ctx.workers));
    } else if (target == "weak") {
        const std::uint64_t seed = require_seed(cfg, "verify weak");
        auto system = make_system(cfg, 1000);
        const FunctionDescriptor phi = parse_function(cfg.phi, cfg.box, cfg.gamma, system);
        const auto outcomes = kernels::map_replicates<TestReport>(cfg.realizations, ctx.workers, [&](std::size_t i) {
            const auto realization =
                sample_noise(cfg.box, cfg.triplet, cfg.eps, cfg.policy, derive_key(seed, StreamTag::replicate, i));
            auto r = weak_identity_test(realization, phi, cfg.gamma, system, cfg.override_existence);
            r.name += "[" + std::to_string(i) + "]";
            return r;
        });
        reports.assign(outcomes.begin(), outcomes.end());
    } else if (target == "spectral-bound") {
        const auto x = cfg.x_sample.empty() ? default_sample_points(cfg.box, 16) : cfg.x_sample;
        reports.push_back(spectral_bound_check(cfg.box, cfg.t_list, x));
    } else {
        throw ConfigError("verify: unknown target '" + target + "' (cf, isometry, weak, spectral-bound)");
    }
    return finish_reports(ctx, reports);
}

int cmd_sweep(Context& ctx, const std::string& target) {
    const auto& cfg = ctx.cfg;
    SweepOptions o;
    o.eps = cfg.eps;
    o.policy = cfg.policy;
    o.workers = ctx.workers;
    o.override_existence = cfg.override_existence;
    if (target == "sobolev") {
        SobolevSweep sweep;
        if (cfg.surrogate) {
            sweep = sobolev_surrogate(cfg.box, cfg.gamma, cfg.r_list, cfg.blocks);
        } else {
            const std::uint64_t seed = require_seed(cfg, "sweep sobolev");
            sweep = sobolev_sweep(cfg.box, cfg.gamma, cfg.triplet, cfg.r_list, cfg.K_list, cfg.replicates, seed, o);
        }
        write_sweep_csvs(sweep, ctx.out);
        return finish_reports(ctx, sweep.reports);
    }
    if (target == "continuity") {
        const std::uint64_t seed = require_seed(cfg, "sweep continuity");
        const auto probe = continuity_probe(cfg.box, cfg.gamma, cfg.triplet, cfg.grid_levels, cfg.replicates, seed, o);
        write_continuity_csv(probe, ctx.out);
        return finish_reports(ctx, {probe.report});
    }
    throw ConfigError("sweep: unknown target '" + target + "' (sobolev, continuity)");
}

int cmd_green_oracle(Context& ctx) {
    const auto& cfg = ctx.cfg;
    if (cfg.box.dim() != 1) throw ConfigError("--set d: green-oracle runs on an interval (d = 1)");
    if (cfg.gamma != 1.0 && cfg.gamma != 2.0) throw ConfigError("--set gamma: green-oracle has closed forms for gamma 1 and 2");
    auto system = make_system(cfg, 5000);
    const double a = cfg.box.lower(0);
    const double b = cfg.box.upper(0);
    constexpr int n = 20;
    fs::create_directories(ctx.out);
    auto os = open_output(ctx.out / "green_oracle.csv");
    os << "x,y,spectral,closed_form,abs_error\n";
    double worst = 0.0;
    double tail = 0.0;
    for (int i = 1; i <= n; ++i) {
        for (int j = 1; j <= n; ++j) {
            if (i == j) continue;
            const double x = a + (b - a) * i / (n + 1);
            const double y = a + (b - a) * j / (n + 1);
            const std::array<double, 1> px{x}, py{y};
            const auto g = green_gamma_eval(cfg.box, cfg.gamma, px, py, *system);
            const double exact = cfg.gamma == 1.0 ? green_interval_closed_form(a, b, x, y) : green2_interval_closed_form(a, b, x, y);
            const double err = std::abs(g.value - exact);
            worst = std::max(worst, err);
            tail = g.tail_estimate;
            os << fmt17(x) << ',' << fmt17(y) << ',' << fmt17(g.value) << ',' << fmt17(exact) << ',' << fmt17(err) << '\n';
        }
    }
    TestReport r;
    r.name = "green_oracle";
    r.statistic = worst;
    r.threshold = 1e-3;
    r.decide();
    r.details["direction"] = to_string(r.direction);
    r.details["gamma"] = cfg.gamma;
    r.details["K"] = static_cast<std::int64_t>(system->size());
    r.details["tail_estimate"] = tail;
    return finish_reports(ctx, {r});
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError(path + ":1: cannot open config file");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Elliptic SPDEs driven by Levy white noise on boxes", "levy-elliptic"};
    app.require_subcommand(1);
    app.fallthrough();
    Invocation inv;
    app.add_option("--config", inv.config_path, "JSON run configuration");
    app.add_option("--set", inv.sets, "override one configuration key (key=value)")->take_all()->allow_extra_args(false);
    app.add_option("--seed", inv.seed, "master seed");
    app.add_option("--workers", inv.workers, "worker threads (default: LEVY_ELLIPTIC_WORKERS, then 1)");
    app.add_flag("--override", inv.override_existence, "solve outside the existence regime");

    auto* check = app.add_subcommand("check", "existence verdicts and integrability of f");
    auto* sample = app.add_subcommand("sample-noise", "sample jump atoms");
    auto* solve = app.add_subcommand("solve", "sample noise and solve for the mild solution");
    auto* verify = app.add_subcommand("verify", "verification tests");
    verify->add_option("target", inv.target, "cf | isometry | weak | spectral-bound")
        ->required()
        ->check(CLI::IsMember({"cf", "isometry", "weak", "spectral-bound"}));
    auto* sweep = app.add_subcommand("sweep", "regularity sweeps");
    sweep->add_option("target", inv.target, "sobolev | continuity")->required()->check(CLI::IsMember({"sobolev", "continuity"}));
    auto* green = app.add_subcommand("green-oracle", "spectral Green function against closed forms");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitPass;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kExitConfig;
    }

    try {
        const std::string text = inv.config_path.empty() ? std::string() : read_file(inv.config_path);
        RunConfig cfg = load_config(text, inv.config_path.empty() ? "<none>" : inv.config_path, inv.sets);
        if (inv.seed) cfg.seed = inv.seed;
        if (inv.override_existence) cfg.override_existence = true;
        const int requested = inv.workers.value_or(cfg.workers);
        if (requested < 0) throw ConfigError("--workers: must be non-negative");
        Context ctx{cfg, kernels::resolve_workers(requested), fs::path(cfg.out), out};

        if (check->parsed()) return cmd_check(ctx);
        if (sample->parsed()) return cmd_sample_noise(ctx);
        if (solve->parsed()) return cmd_solve(ctx);
        if (verify->parsed()) return cmd_verify(ctx, inv.target);
        if (sweep->parsed()) return cmd_sweep(ctx, inv.target);
        if (green->parsed()) return cmd_green_oracle(ctx);
        err << "error: no subcommand\n";
        return kExitConfig;
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const RefusedError& e) {
        err << "refused: " << e.what() << '\n';
        return kExitConfig;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::filesystem::filesystem_error& e) {
        err << "error: " << e.what() << '\n';
        return kExitConfig;
    }
}

}  // namespace levy_elliptic
