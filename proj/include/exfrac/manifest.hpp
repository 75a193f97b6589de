#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "exfrac/estimator.hpp"

namespace exfrac {

// One frame pair of a manifest clip; paths already resolved against the
// manifest's directory.
struct ManifestFramePair {
    std::filesystem::path flow_path;
    std::filesystem::path blur_path;
};

// One JSON Lines row: {clip_id, subset, alpha_gt, frames:[{flow_path, blur_path}]}.
struct ManifestClip {
    std::string clip_id;
    std::string subset;
    double alpha_gt = 0.0;
    std::vector<ManifestFramePair> frames;
};

std::vector<ManifestClip> load_manifest(const std::filesystem::path& path);

// Per-clip outcome of an evaluation run.
struct ClipResult {
    std::string clip_id;
    std::string subset;
    double alpha_gt = 0.0;
    double alpha_est = 0.0;
    int n_frames_used = 0;
    int n_frames_total = 0;
    bool ok = false;
    std::string error;  // set when the row failed and was excluded
};

struct SubsetMae {
    std::string subset;
    double mae = 0.0;
    int n_clips = 0;
};

// Evaluation of a whole manifest at one parameter setting.
struct EvalReport {
    EstimationParams params;
    std::vector<ClipResult> clips;     // manifest order
    std::vector<SubsetMae> subsets;    // sorted by subset name
    double average_mae = 0.0;          // mean of subset MAEs
    int n_failed_rows = 0;
};

// Runs the estimator over every clip. Rows whose files are missing or whose
// estimation fails are recorded and excluded from the MAE.
EvalReport evaluate_manifest(const std::vector<ManifestClip>& clips,
                             const EstimationParams& params, int threads = 1);

// Parameter grid parsed from a sweep string like "D=10,20,30;phi=3,5,7".
struct SweepSpec {
    std::vector<int> patch_sizes;
    std::vector<double> max_angles_deg;

    // Throws ParamError with a parse diagnostic on malformed input.
    static SweepSpec parse(const std::string& text);
};

}  // namespace exfrac
