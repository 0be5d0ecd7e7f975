#pragma once

#include <string>
#include <vector>

#include "wfrec/config.hpp"
#include "wfrec/drift_scan.hpp"
#include "wfrec/estimators.hpp"

namespace wfrec {

// "wfrec <major>.<minor>.<patch>", embedded in every persisted report.
std::string version_string();

// One verification report as a JSON document (sorted keys, shortest
// round-trip numbers: byte-stable for identical inputs). Estimate fields are
// flattened to the stable top-level names quantity, bound_value, mean,
// std_error, n, censored_fraction, ci99_halfwidth, verdict, claim, notes;
// the resolved config, master seed, and version ride along.
std::string report_json(const VerificationReport& report, const RunConfig& cfg);

// Same reports as CSV: fixed header, one row per report, strings quoted.
std::string reports_csv(const std::vector<VerificationReport>& reports);

// Both plans (recurrence + both endpoints) with their admissible intervals.
std::string plan_json(const RunConfig& cfg);

// Summary of drift scans: per scan label, holds, margins, max relative error.
std::string scan_summary_json(const std::vector<DriftScanReport>& scans,
                              const RunConfig& cfg);

// Writes content to path, creating parent directories; throws IoError.
void write_file(const std::string& path, const std::string& content);

}  // namespace wfrec
