#pragma once

#include <optional>
#include <span>
#include <vector>

#include "exfrac/field.hpp"
#include "exfrac/patch.hpp"
#include "exfrac/validity.hpp"

namespace exfrac {

// Per-frame exposure fraction estimate taken from the best patch.
struct FrameEstimate {
    int frame_index = 0;
    double alpha_patch = 0.0;
    PatchLocation patch;
    int n_valid = 0;  // positions that entered the vector means
};

// Clip-level result: the median of per-frame estimates plus provenance.
struct ClipEstimate {
    double alpha_glob = 0.0;
    std::vector<FrameEstimate> frames;  // frames that produced an estimate, by index
    int n_frames_used = 0;
    int n_frames_total = 0;
};

// Camera timing behind an exposure fraction: alpha = exposure / interval
// = shutter_angle / 360.
struct CameraTiming {
    double exposure_s = 0.0;
    double frame_interval_s = 0.0;

    static CameraTiming from_alpha(double alpha, double framerate_hz);

    double framerate_hz() const { return 1.0 / frame_interval_s; }
    double alpha() const { return exposure_s / frame_interval_s; }
    double shutter_angle_deg() const { return alpha() * 360.0; }

    // Throws ParamError unless 0 < alpha <= 1 with positive timings.
    void validate() const;
};

// Estimates one frame: validity mask -> best patch -> ratio of norms of the
// mean blur and mean flow over the valid positions inside the patch. Each
// blur vector is sign-aligned to its flow vector before summation (kernels
// carry no sign, opposing ones would cancel). Returns nullopt iff the frame
// has no valid position.
std::optional<FrameEstimate> estimate_frame(const Vec2Field& flow, const Vec2Field& blur,
                                            const EstimationParams& params);

// Median of per-frame estimates over all frames that produced one. Frames
// yielding none are skipped and only counted in n_frames_total. With
// threads > 1 frames are estimated in parallel; the reduction is ordered by
// frame index, so the result is independent of the thread count. Throws
// EstimationFailedError when no frame produces an estimate.
ClipEstimate estimate_clip(std::span<const FieldPair> pairs, const EstimationParams& params,
                           int threads = 1);

// Even count averages the two middle values. Throws ParamError when empty.
double median(std::vector<double> values);

// (1/N) sum |truth - estimate_i|. Throws ParamError on an empty list or
// non-finite input.
double mean_absolute_error(std::span<const double> estimates, double ground_truth);

}  // namespace exfrac
