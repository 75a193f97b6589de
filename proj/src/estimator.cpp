#include "exfrac/estimator.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>
#include <sstream>
#include <thread>

namespace exfrac {

CameraTiming CameraTiming::from_alpha(double alpha, double framerate_hz) {
    if (!(framerate_hz > 0.0)) throw ParamError("framerate must be positive");
    CameraTiming t;
    t.frame_interval_s = 1.0 / framerate_hz;
    t.exposure_s = alpha * t.frame_interval_s;
    t.validate();
    return t;
}

void CameraTiming::validate() const {
    if (!(exposure_s > 0.0) || !(frame_interval_s > 0.0)) {
        throw ParamError("camera timing requires positive exposure and frame interval");
    }
    if (!(alpha() <= 1.0)) {
        std::ostringstream msg;
        msg << "exposure fraction " << alpha() << " exceeds 1 (exposure longer than the frame)";
        throw ParamError(msg.str());
    }
}

std::optional<FrameEstimate> estimate_frame(const Vec2Field& flow, const Vec2Field& blur,
                                            const EstimationParams& params) {
    params.validate();
    if (params.patch_size > flow.width || params.patch_size > flow.height) {
        std::ostringstream msg;
        msg << "patch size " << params.patch_size << " exceeds field dimensions " << flow.width
            << "x" << flow.height;
        throw ParamError(msg.str());
    }

    const ValidityMask mask = compute_validity(flow, blur, params);
    const std::optional<PatchLocation> patch = best_patch(mask, params.patch_size);
    if (!patch) return std::nullopt;

    Vec2 flow_sum{0.0, 0.0};
    Vec2 blur_sum{0.0, 0.0};
    int n_valid = 0;
    for (int y = patch->y0; y < patch->y0 + params.patch_size; ++y) {
        for (int x = patch->x0; x < patch->x0 + params.patch_size; ++x) {
            if (!mask.at(x, y)) continue;
            const Vec2 f = flow.at(x, y);
            Vec2 k = blur.at(x, y);
            // Kernels are direction-ambiguous; align each to its flow vector
            // so opposite signs cannot cancel in the mean.
            if (dot(f, k) < 0.0) k = -k;
            flow_sum = flow_sum + f;
            blur_sum = blur_sum + k;
            ++n_valid;
        }
    }

    FrameEstimate estimate;
    estimate.frame_index = 0;
    // Ratio of norms of the means; the 1/N factors cancel.
    estimate.alpha_patch = norm(blur_sum) / norm(flow_sum);
    estimate.patch = *patch;
    estimate.n_valid = n_valid;
    return estimate;
}

namespace {

void check_pair_shapes(std::span<const FieldPair> pairs) {
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        if (!pairs[i].flow.same_shape(pairs[i].blur)) {
            std::ostringstream msg;
            msg << "frame " << i << ": flow is " << pairs[i].flow.width << "x"
                << pairs[i].flow.height << " but blur is " << pairs[i].blur.width << "x"
                << pairs[i].blur.height;
            throw ShapeError(msg.str());
        }
    }
}

}  // namespace

ClipEstimate estimate_clip(std::span<const FieldPair> pairs, const EstimationParams& params,
                           int threads) {
    if (pairs.empty()) throw ParamError("clip estimation needs at least one frame pair");
    if (threads < 1) throw ParamError("thread count must be >= 1");
    params.validate();
    check_pair_shapes(pairs);

    const std::size_t n = pairs.size();
    std::vector<std::optional<FrameEstimate>> results(n);

    const int workers = static_cast<int>(
        std::min<std::size_t>(static_cast<std::size_t>(threads), n));
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) {
            results[i] = estimate_frame(pairs[i].flow, pairs[i].blur, params);
        }
    } else {
        std::atomic<std::size_t> next{0};
        std::exception_ptr first_error;
        std::mutex error_mutex;
        auto work = [&] {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= n) return;
                try {
                    results[i] = estimate_frame(pairs[i].flow, pairs[i].blur, params);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!first_error) first_error = std::current_exception();
                    return;
                }
            }
        };
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(workers));
        for (int t = 0; t < workers; ++t) pool.emplace_back(work);
        for (auto& t : pool) t.join();
        if (first_error) std::rethrow_exception(first_error);
    }

    ClipEstimate clip;
    clip.n_frames_total = static_cast<int>(n);
    std::vector<double> alphas;
    std::vector<std::string> diagnostics;
    for (std::size_t i = 0; i < n; ++i) {
        if (results[i]) {
            results[i]->frame_index = static_cast<int>(i);
            alphas.push_back(results[i]->alpha_patch);
            clip.frames.push_back(*results[i]);
        } else {
            diagnostics.push_back("frame " + std::to_string(i) + ": no valid positions");
        }
    }
    clip.n_frames_used = static_cast<int>(clip.frames.size());
    if (clip.frames.empty()) {
        throw EstimationFailedError(
            "no frame produced an estimate (" + std::to_string(n) + " frames, all invalid)",
            std::move(diagnostics));
    }
    clip.alpha_glob = median(std::move(alphas));
    return clip;
}

double median(std::vector<double> values) {
    if (values.empty()) throw ParamError("median of an empty list");
    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();
    if (n % 2 == 1) return values[n / 2];
    return 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

double mean_absolute_error(std::span<const double> estimates, double ground_truth) {
    if (estimates.empty()) throw ParamError("MAE of an empty list");
    if (!std::isfinite(ground_truth)) throw ParamError("MAE needs a finite ground truth");
    double sum = 0.0;
    for (double e : estimates) {
        if (!std::isfinite(e)) throw ParamError("MAE needs finite estimates");
        sum += std::abs(ground_truth - e);
    }
    return sum / static_cast<double>(estimates.size());
}

}  // namespace exfrac
