#pragma once

#include <filesystem>
#include <span>

#include "json.hpp"

#include "levy_elliptic/diagnostics.hpp"
#include "levy_elliptic/integrability.hpp"

namespace levy_elliptic {

nlohmann::json to_json(const TestReport& report);
nlohmann::json to_json(const ExistenceVerdict& verdict);
nlohmann::json to_json(const IntegrabilityReport& report);

/// Writes `reports.jsonl` (one object per line) and `summary.csv`
/// (name, statistic, threshold, pass) into dir, creating it if needed.
void emit_report(std::span<const TestReport> reports, const std::filesystem::path& dir);

/// One CSV per r, `sobolev_r<r>.csv` with (K, norm) rows.
void write_sweep_csvs(const SobolevSweep& sweep, const std::filesystem::path& dir);

/// `continuity_levels.csv` with (level, modes, median_increment, median_sup).
void write_continuity_csv(const ContinuityProbe& probe, const std::filesystem::path& dir);

/// Opens a file for writing; throws Error naming the path on failure.
std::ofstream open_output(const std::filesystem::path& path);

}  // namespace levy_elliptic
