#pragma once

#include <cstdint>
#include <vector>

#include "exfrac/field.hpp"

namespace exfrac {

// Recipe for a synthetic uniform-translation clip with known exposure
// fraction. The scene is a textured plane translating at `velocity`
// px/frame; each frame integrates the motion over the first `alpha` of the
// frame interval.
struct SynthConfig {
    int width = 320;
    int height = 240;
    Vec2 velocity = {10.0, 0.0};
    double alpha = 0.24;
    int n_frames = 30;
    std::uint64_t seed = 0;
    int supersamples = 64;     // temporal samples approximating the exposure integral
    double noise_sigma = 0.0;  // additive Gaussian intensity noise, std dev

    // Throws ConfigError on out-of-range members or when the backing texture
    // would exceed the dimension cap.
    void validate() const;
};

// Exact per-pixel ground truth of one frame pair: constant flow (vx, vy)
// and constant blur (alpha*vx, alpha*vy).
struct GroundTruth {
    Vec2Field flow;
    Vec2Field blur;
};

// A rendered clip together with its exact fields. fields[i] pairs the flow
// from frame i to i+1 with the blur of frame i, so a clip of n frames
// carries n-1 pairs. apparent_alpha starts at config.alpha and is rescaled
// by the tamper operations.
struct SynthClip {
    std::vector<Frame> frames;
    std::vector<FieldPair> fields;
    double apparent_alpha = 0.0;
};

// Deterministic band-limited texture: white noise from a splitmix64-seeded
// xoshiro256** generator, box-blurred twice with radius 2, then min-max
// renormalized to [0, 1]. Identical bytes for identical (seed, w, h).
Frame generate_texture(std::uint64_t seed, int width, int height);

// The exact constant fields of one frame pair for this recipe.
GroundTruth ground_truth_fields(const SynthConfig& config);

// n_frames - 1 copies of the exact pair, ready for estimation.
std::vector<FieldPair> ground_truth_pairs(const SynthConfig& config);

// Renders frames by averaging `supersamples` bilinear taps of the moving
// texture along the exposure path (offsets (i + (j+0.5)/S * alpha) *
// velocity), adds optional Gaussian noise, and attaches the exact fields.
SynthClip render_clip(const SynthConfig& config);

// Rounds every component to the nearest integer, ties away from zero.
// Emulates a blur estimator with a discrete output space.
Vec2Field quantize_blur(const Vec2Field& field);

// Adds i.i.d. Gaussian noise of std sigma_px to each component,
// deterministic per seed. sigma_px = 0 returns the input unchanged.
Vec2Field perturb_field(const Vec2Field& field, double sigma_px, std::uint64_t seed);

// Keeps frames 0, k, 2k, ...; the flow of each surviving pair is scaled by
// k while blur is untouched, so the apparent exposure fraction drops to
// alpha/k. k = 1 is the identity. Throws ParamError when fewer than two
// frames survive.
SynthClip subsample_clip(const SynthClip& clip, int k);

// Blur-preserving m-fold interpolation: every pair becomes m pairs with
// flow/m and the original blur, raising the apparent exposure fraction to
// m*alpha. Intermediate frames are emulated by repeating the source frame.
// m = 1 is the identity.
SynthClip interpolate_clip(const SynthClip& clip, int m);

}  // namespace exfrac
