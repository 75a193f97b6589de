#include "exfrac/forensics.hpp"

#include <algorithm>
#include <cmath>

namespace exfrac {

std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::consistent: return "consistent";
        case Verdict::deletion: return "deletion";
        case Verdict::interpolation: return "interpolation";
        case Verdict::indeterminate: return "indeterminate";
    }
    return "indeterminate";
}

namespace {

EvidenceSummary summarize(const std::vector<FrameEstimate>& frames) {
    EvidenceSummary summary;
    summary.n_frames = static_cast<int>(frames.size());
    if (frames.empty()) return summary;

    std::vector<double> alphas;
    alphas.reserve(frames.size());
    for (const FrameEstimate& f : frames) alphas.push_back(f.alpha_patch);
    std::sort(alphas.begin(), alphas.end());

    const auto quantile = [&](double q) {
        const double pos = q * static_cast<double>(alphas.size() - 1);
        const std::size_t lo = static_cast<std::size_t>(std::floor(pos));
        const std::size_t hi = std::min(lo + 1, alphas.size() - 1);
        const double t = pos - static_cast<double>(lo);
        return (1.0 - t) * alphas[lo] + t * alphas[hi];
    };
    summary.alpha_min = alphas.front();
    summary.alpha_q25 = quantile(0.25);
    summary.alpha_median = quantile(0.5);
    summary.alpha_q75 = quantile(0.75);
    summary.alpha_max = alphas.back();
    return summary;
}

}  // namespace

TamperVerdict detect_tamper(const ClipEstimate& clip, double alpha_ref, double rel_tol) {
    if (!(alpha_ref > 0.0) || !(alpha_ref <= 1.0)) {
        throw ParamError("reference alpha must lie in (0, 1]");
    }
    if (!(rel_tol > 0.0) || !(rel_tol < 1.0)) {
        throw ParamError("relative tolerance must lie in (0, 1)");
    }

    TamperVerdict result;
    result.evidence = summarize(clip.frames);

    const double ratio = clip.alpha_glob / alpha_ref;
    result.relative_deviation = std::abs(ratio - 1.0);

    if (result.relative_deviation <= rel_tol) {
        result.verdict = Verdict::consistent;
        return result;
    }

    if (ratio < 1.0) {
        // A deletion by factor k shrinks the apparent alpha to alpha_ref / k.
        const int k = static_cast<int>(std::lround(1.0 / ratio));
        if (k >= 2) {
            const double expected = alpha_ref / k;
            if (std::abs(clip.alpha_glob - expected) / expected <= rel_tol) {
                result.verdict = Verdict::deletion;
                result.k_hat = k;
                return result;
            }
        }
        result.verdict = Verdict::indeterminate;
        return result;
    }

    // ratio > 1 + rel_tol: more blur than the metadata allows for.
    result.verdict = Verdict::interpolation;
    const int m = static_cast<int>(std::lround(ratio));
    if (m >= 2 && std::abs(ratio - m) <= rel_tol * m) {
        result.k_hat = m;
    }
    return result;
}

std::vector<Segment> localize_inconsistency(std::span<const FrameEstimate> frames, int window,
                                            double rel_tol) {
    if (window < 3 || window % 2 == 0) {
        throw ParamError("window must be an odd integer >= 3, got " + std::to_string(window));
    }
    if (!(rel_tol > 0.0)) throw ParamError("relative tolerance must be positive");
    if (static_cast<int>(frames.size()) < window) {
        throw ParamError("clip has " + std::to_string(frames.size()) +
                         " estimates, fewer than the window of " + std::to_string(window));
    }

    std::vector<const FrameEstimate*> ordered;
    ordered.reserve(frames.size());
    for (const FrameEstimate& f : frames) ordered.push_back(&f);
    std::sort(ordered.begin(), ordered.end(),
              [](const FrameEstimate* a, const FrameEstimate* b) {
                  return a->frame_index < b->frame_index;
              });

    std::vector<double> alphas;
    alphas.reserve(ordered.size());
    for (const FrameEstimate* f : ordered) alphas.push_back(f->alpha_patch);
    const double clip_median = median(alphas);

    const int n = static_cast<int>(ordered.size());
    const int half = window / 2;
    std::vector<Segment> segments;
    bool in_run = false;
    int run_start = 0;
    int run_end = 0;
    for (int center = half; center < n - half; ++center) {
        std::vector<double> window_values(alphas.begin() + (center - half),
                                          alphas.begin() + (center + half + 1));
        const double rolling = median(std::move(window_values));
        const bool deviant = std::abs(rolling - clip_median) > rel_tol * std::abs(clip_median);
        if (deviant) {
            if (!in_run) {
                in_run = true;
                run_start = center;
            }
            run_end = center;
        } else if (in_run) {
            segments.push_back({ordered[run_start]->frame_index, ordered[run_end]->frame_index});
            in_run = false;
        }
    }
    if (in_run) {
        segments.push_back({ordered[run_start]->frame_index, ordered[run_end]->frame_index});
    }
    return segments;
}

}  // namespace exfrac
