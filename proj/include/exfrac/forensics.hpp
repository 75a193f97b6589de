#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "exfrac/estimator.hpp"

namespace exfrac {

enum class Verdict {
    consistent,
    deletion,
    interpolation,
    indeterminate,
};

std::string to_string(Verdict v);

// Five-number summary of the per-frame estimates backing a verdict.
struct EvidenceSummary {
    int n_frames = 0;
    double alpha_min = 0.0;
    double alpha_q25 = 0.0;
    double alpha_median = 0.0;
    double alpha_q75 = 0.0;
    double alpha_max = 0.0;
};

// Consistency classification of an estimated clip against reference camera
// metadata. k_hat carries the deletion factor or the interpolation
// multiplier when one matched.
struct TamperVerdict {
    Verdict verdict = Verdict::indeterminate;
    std::optional<int> k_hat;
    double relative_deviation = 0.0;  // |alpha_est / alpha_ref - 1|
    EvidenceSummary evidence;
};

// Decision rule, with r = alpha_glob / alpha_ref:
//   |r - 1| <= rel_tol                      -> consistent
//   r < 1: k = round(1/r); deletion iff k >= 2 and alpha_glob is within
//          rel_tol (relative) of alpha_ref / k; otherwise indeterminate
//   r > 1: interpolation; the multiplier round(r) is attached when r is
//          within rel_tol * round(r) of it and round(r) >= 2
// Throws ParamError unless 0 < alpha_ref <= 1 and 0 < rel_tol < 1.
TamperVerdict detect_tamper(const ClipEstimate& clip, double alpha_ref, double rel_tol = 0.25);

// Inclusive frame-index range whose rolling median deviates from the clip
// median.
struct Segment {
    int first_frame = 0;
    int last_frame = 0;
};

// Rolling median of alpha_patch over an odd window; emits maximal ranges
// deviating from the clip median by more than rel_tol relatively. Output is
// disjoint, sorted and within frame bounds. Throws ParamError when the
// window is even, below 3, or exceeds the frame count.
std::vector<Segment> localize_inconsistency(std::span<const FrameEstimate> frames, int window,
                                            double rel_tol);

}  // namespace exfrac
