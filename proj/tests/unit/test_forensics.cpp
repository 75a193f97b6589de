#include <cmath>

#include "doctest.h"
#include "exfrac/forensics.hpp"
#include "exfrac/synth.hpp"
#include "support/test_rng.hpp"

using namespace exfrac;
using testsupport::TestRng;

namespace {

ClipEstimate clip_with_alphas(const std::vector<double>& alphas) {
    ClipEstimate clip;
    for (std::size_t i = 0; i < alphas.size(); ++i) {
        FrameEstimate f;
        f.frame_index = static_cast<int>(i);
        f.alpha_patch = alphas[i];
        f.n_valid = 1;
        clip.frames.push_back(f);
    }
    clip.n_frames_used = static_cast<int>(alphas.size());
    clip.n_frames_total = clip.n_frames_used;
    clip.alpha_glob = median(alphas);
    return clip;
}

const EstimationParams kParams{30, 5.0, 1.0};

}  // namespace

TEST_SUITE("forensics") {

TEST_CASE("a third of the reference alpha reads as deletion by three") {
    const ClipEstimate clip = clip_with_alphas({0.074, 0.075, 0.076});
    const TamperVerdict verdict = detect_tamper(clip, 0.240);
    CHECK(verdict.verdict == Verdict::deletion);
    REQUIRE(verdict.k_hat.has_value());
    CHECK(*verdict.k_hat == 3);
}

TEST_CASE("well above the reference alpha reads as interpolation") {
    const ClipEstimate clip = clip_with_alphas({0.41, 0.412, 0.414});
    const TamperVerdict verdict = detect_tamper(clip, 0.240);
    CHECK(verdict.verdict == Verdict::interpolation);
    REQUIRE(verdict.k_hat.has_value());
    CHECK(*verdict.k_hat == 2);
}

TEST_CASE("matching estimate is consistent with zero deviation") {
    const ClipEstimate clip = clip_with_alphas({0.24, 0.24, 0.24});
    const TamperVerdict verdict = detect_tamper(clip, 0.240);
    CHECK(verdict.verdict == Verdict::consistent);
    CHECK(verdict.relative_deviation == 0.0);
}

TEST_CASE("an exact match is consistent for every tolerance") {
    const ClipEstimate clip = clip_with_alphas({0.3, 0.3, 0.3});
    for (double tol : {0.01, 0.05, 0.25, 0.75}) {
        CHECK(detect_tamper(clip, 0.3, tol).verdict == Verdict::consistent);
    }
}

TEST_CASE("a shortfall with no integer factor is indeterminate") {
    // ratio 0.7: round(1/0.7) = 1, not a deletion factor
    const ClipEstimate clip = clip_with_alphas({0.175, 0.175, 0.175});
    CHECK(detect_tamper(clip, 0.25).verdict == Verdict::indeterminate);
}

TEST_CASE("an excess without an integer multiple is still interpolation") {
    // ratio 1.45 > 1 + rel_tol but round(1.45) = 1: multiplier stays absent
    const ClipEstimate clip = clip_with_alphas({0.29, 0.29, 0.29});
    const TamperVerdict verdict = detect_tamper(clip, 0.2);
    CHECK(verdict.verdict == Verdict::interpolation);
    CHECK_FALSE(verdict.k_hat.has_value());
}

TEST_CASE("evidence summarizes the per-frame estimates") {
    const ClipEstimate clip = clip_with_alphas({0.1, 0.2, 0.3, 0.4, 0.5});
    const TamperVerdict verdict = detect_tamper(clip, 0.3);
    CHECK(verdict.evidence.n_frames == 5);
    CHECK(verdict.evidence.alpha_min == 0.1);
    CHECK(verdict.evidence.alpha_max == 0.5);
    CHECK(verdict.evidence.alpha_median == doctest::Approx(0.3).epsilon(1e-12));
}

TEST_CASE("detect rejects invalid references and tolerances") {
    const ClipEstimate clip = clip_with_alphas({0.2});
    CHECK_THROWS_AS(detect_tamper(clip, 0.0), ParamError);
    CHECK_THROWS_AS(detect_tamper(clip, 1.5), ParamError);
    CHECK_THROWS_AS(detect_tamper(clip, 0.2, 0.0), ParamError);
    CHECK_THROWS_AS(detect_tamper(clip, 0.2, 1.0), ParamError);
}

TEST_CASE("deletion and interpolation close the loop on exact oracle clips") {
    for (int factor : {2, 3, 4}) {
        // deletion: alpha 0.36, flow norm 10
        SynthConfig config;
        config.width = 64;
        config.height = 64;
        config.velocity = {10, 0};
        config.alpha = 0.36;
        config.n_frames = 13;
        SynthClip clip;
        clip.apparent_alpha = config.alpha;
        clip.frames.resize(config.n_frames, Frame(1, 1));
        clip.fields = ground_truth_pairs(config);

        const SynthClip sub = subsample_clip(clip, factor);
        const ClipEstimate sub_estimate = estimate_clip(sub.fields, kParams);
        const TamperVerdict sub_verdict = detect_tamper(sub_estimate, config.alpha);
        CHECK(sub_verdict.verdict == Verdict::deletion);
        REQUIRE(sub_verdict.k_hat.has_value());
        CHECK(*sub_verdict.k_hat == factor);

        // interpolation: alpha 0.2 keeps factor * alpha <= 1 physical
        config.alpha = 0.2;
        clip.apparent_alpha = config.alpha;
        clip.fields = ground_truth_pairs(config);
        const SynthClip inter = interpolate_clip(clip, factor);
        const ClipEstimate inter_estimate = estimate_clip(inter.fields, kParams);
        const TamperVerdict inter_verdict = detect_tamper(inter_estimate, config.alpha);
        CHECK(inter_verdict.verdict == Verdict::interpolation);
        REQUIRE(inter_verdict.k_hat.has_value());
        CHECK(*inter_verdict.k_hat == factor);
    }
}

TEST_CASE("uniform per-frame estimates localize nothing") {
    const ClipEstimate clip = clip_with_alphas(std::vector<double>(20, 0.25));
    CHECK(localize_inconsistency(clip.frames, 5, 0.25).empty());
}

TEST_CASE("a spliced subsampled section is localized within half a window") {
    std::vector<double> alphas(60, 0.25);
    for (int i = 20; i <= 40; ++i) alphas[i] = 0.125;
    const ClipEstimate clip = clip_with_alphas(alphas);
    const int window = 5;
    const auto segments = localize_inconsistency(clip.frames, window, 0.25);
    REQUIRE(segments.size() == 1);
    CHECK(std::abs(segments[0].first_frame - 20) <= window / 2);
    CHECK(std::abs(segments[0].last_frame - 40) <= window / 2);
}

TEST_CASE("a fully tampered clip matches its own median, so nothing is flagged") {
    const ClipEstimate clip = clip_with_alphas(std::vector<double>(20, 0.125));
    CHECK(localize_inconsistency(clip.frames, 5, 0.25).empty());
    // only the metadata check catches it
    CHECK(detect_tamper(clip, 0.25).verdict == Verdict::deletion);
}

TEST_CASE("segments are sorted, disjoint, and inside the clip") {
    TestRng rng(51);
    for (int trial = 0; trial < 30; ++trial) {
        std::vector<double> alphas(40);
        for (double& a : alphas) a = rng.unit() < 0.3 ? 0.1 : 0.25;
        const ClipEstimate clip = clip_with_alphas(alphas);
        const auto segments = localize_inconsistency(clip.frames, 5, 0.2);
        int previous_end = -1;
        for (const Segment& s : segments) {
            CHECK(s.first_frame > previous_end);
            CHECK(s.first_frame <= s.last_frame);
            CHECK(s.last_frame < 40);
            previous_end = s.last_frame;
        }
    }
}

TEST_CASE("localization window validation") {
    const ClipEstimate clip = clip_with_alphas(std::vector<double>(10, 0.25));
    CHECK_THROWS_AS(localize_inconsistency(clip.frames, 4, 0.25), ParamError);
    CHECK_THROWS_AS(localize_inconsistency(clip.frames, 1, 0.25), ParamError);
    CHECK_THROWS_AS(localize_inconsistency(clip.frames, 11, 0.25), ParamError);
    CHECK_THROWS_AS(localize_inconsistency(clip.frames, 5, 0.0), ParamError);
}

}  // TEST_SUITE
