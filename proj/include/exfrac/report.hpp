#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "exfrac/estimator.hpp"
#include "exfrac/forensics.hpp"
#include "exfrac/manifest.hpp"

namespace exfrac {

// Machine-readable output of an estimation run. Serializes with stable key
// order; re-running with identical inputs yields an identical document
// except for the timing block.
struct RunReport {
    EstimationParams params;
    ClipEstimate clip;
    std::vector<std::string> warnings;  // one entry per skipped frame
    double total_ms = 0.0;
};

std::string run_report_to_json(const RunReport& report);
RunReport run_report_from_json(const std::string& text);

std::string verdict_to_json(const TamperVerdict& verdict, double alpha_ref, double alpha_glob,
                            double rel_tol);

// Sweep evaluation: one EvalReport per grid cell, in sweep order.
std::string eval_grid_to_json(const std::vector<EvalReport>& cells);
std::string eval_grid_to_csv(const std::vector<EvalReport>& cells);

void write_text_file(const std::filesystem::path& path, const std::string& text);
std::string read_text_file(const std::filesystem::path& path);

}  // namespace exfrac
