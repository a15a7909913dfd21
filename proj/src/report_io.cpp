#include "levy_elliptic/report_io.hpp"

#include <cmath>
#include <fstream>

#include "levy_elliptic/csv.hpp"
#include "levy_elliptic/error.hpp"

namespace levy_elliptic {

namespace {

// JSON has no infinities; they are spelled out as strings.
nlohmann::json number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    return v;
}

std::string pass_label(const TestReport& r) {
    switch (r.outcome) {
    case Outcome::inconclusive:
        return "inconclusive";
    case Outcome::skipped:
        return "skipped";
    case Outcome::decided:
        break;
    }
    return r.pass ? "true" : "false";
}

void ensure_dir(const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw Error("cannot create output directory " + dir.string() + ": " + ec.message());
}

void finish(std::ofstream& os, const std::filesystem::path& path) {
    os.flush();
    if (!os) throw Error("write failed for " + path.string());
}

}  // namespace

std::ofstream open_output(const std::filesystem::path& path) {
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw Error("cannot open " + path.string() + " for writing");
    return os;
}

nlohmann::json to_json(const TestReport& report) {
    nlohmann::json details = nlohmann::json::object();
    for (const auto& [key, value] : report.details) {
        std::visit(
            [&](const auto& v) {
                using T = std::decay_t<decltype(v)>;
                if constexpr (std::is_same_v<T, double>) {
                    details[key] = number(v);
                } else if constexpr (std::is_same_v<T, std::vector<double>>) {
                    nlohmann::json arr = nlohmann::json::array();
                    for (double x : v) arr.push_back(number(x));
                    details[key] = std::move(arr);
                } else {
                    details[key] = v;
                }
            },
            value);
    }
    nlohmann::json j;
    j["name"] = report.name;
    j["statistic"] = number(report.statistic);
    j["threshold"] = number(report.threshold);
    j["pass"] = report.pass;
    j["outcome"] = to_string(report.outcome);
    j["direction"] = to_string(report.direction);
    j["replicates"] = report.replicates;
    j["seed"] = report.seed;
    j["details"] = std::move(details);
    return j;
}

nlohmann::json to_json(const ExistenceVerdict& v) {
    nlohmann::json j;
    j["d"] = v.d;
    j["gamma"] = number(v.gamma);
    j["mode"] = to_string(v.mode);
    j["triplet"] = v.triplet_summary;
    j["exists"] = v.exists;
    j["p_required"] = {{"lo", number(v.p_lo)}, {"hi", number(v.p_hi)}, {"open", v.p_lo != v.p_hi}};
    j["r_max"] = number(v.r_max);
    j["continuous"] = v.continuous;
    j["reason"] = v.reason;
    return j;
}

nlohmann::json to_json(const IntegrabilityReport& r) {
    nlohmann::json j;
    j["drift_integral"] = number(r.drift_integral);
    j["gauss_integral"] = number(r.gauss_integral);
    j["jump_integral"] = number(r.jump_integral);
    j["verdict"] = r.verdict;
    j["converged"] = r.converged;
    return j;
}

void emit_report(std::span<const TestReport> reports, const std::filesystem::path& dir) {
    ensure_dir(dir);
    const auto jsonl = dir / "reports.jsonl";
    auto js = open_output(jsonl);
    for (const auto& r : reports) js << to_json(r).dump() << '\n';
    finish(js, jsonl);

    const auto csv = dir / "summary.csv";
    auto cs = open_output(csv);
    cs << "name,statistic,threshold,pass\n";
    for (const auto& r : reports) {
        cs << r.name << ',' << fmt17(r.statistic) << ',' << fmt17(r.threshold) << ',' << pass_label(r) << '\n';
    }
    finish(cs, csv);
}

void write_sweep_csvs(const SobolevSweep& sweep, const std::filesystem::path& dir) {
    ensure_dir(dir);
    for (std::size_t i = 0; i < sweep.r_list.size(); ++i) {
        char name[96];
        std::snprintf(name, sizeof name, "sobolev_r%g.csv", sweep.r_list[i]);
        const auto path = dir / name;
        auto os = open_output(path);
        os << "K,norm\n";
        for (std::size_t j = 0; j < sweep.K_list.size(); ++j) {
            os << sweep.K_list[j] << ',' << fmt17(sweep.trajectories[i][j]) << '\n';
        }
        finish(os, path);
    }
}

void write_continuity_csv(const ContinuityProbe& probe, const std::filesystem::path& dir) {
    ensure_dir(dir);
    const auto path = dir / "continuity_levels.csv";
    auto os = open_output(path);
    os << "level,modes,median_increment,median_sup\n";
    for (const auto& l : probe.levels) {
        os << l.level << ',' << l.modes << ',' << fmt17(l.median_increment) << ',' << fmt17(l.median_sup) << '\n';
    }
    finish(os, path);
}

}  // namespace levy_elliptic
