#pragma once

#include <cstdint>
#include <vector>

#include "exfrac/field.hpp"

namespace exfrac {

// Tuning knobs of the estimation pipeline.
//   patch_size    - side D of the square patch the estimate is taken from
//   max_angle_deg - maximum angle between flow and blur directions, degrees
//   min_magnitude - magnitude floor below which a vector is untrustworthy
struct EstimationParams {
    int patch_size = 30;
    double max_angle_deg = 5.0;
    double min_magnitude = 1.0;

    // Throws ParamError when D < 1 or the angle is outside (0, 90).
    void validate() const;

    double cos_max_angle() const;
};

// Per-pixel boolean marking positions where flow and blur agree well enough
// to contribute to the estimate.
struct ValidityMask {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> bits;  // row-major, 0 or 1

    ValidityMask() = default;
    ValidityMask(int w, int h) : width(w), height(h), bits(static_cast<std::size_t>(w) * h, 0) {}

    bool at(int x, int y) const { return bits[static_cast<std::size_t>(y) * width + x] != 0; }
    void set(int x, int y, bool v) {
        bits[static_cast<std::size_t>(y) * width + x] = v ? 1 : 0;
    }
    std::size_t pixel_count() const { return static_cast<std::size_t>(width) * height; }
};

// A position survives when all three hold:
//  (a) flow and blur are collinear within max_angle_deg; the dot product is
//      taken in absolute value because blur kernels carry no sign
//  (b) the blur is not longer than the flow (equality kept)
//  (c) both magnitudes exceed min_magnitude (strict)
// (c) is checked first so the cosine is never formed from zero-norm vectors.
bool pixel_valid(Vec2 flow, Vec2 blur, const EstimationParams& params);

// Applies pixel_valid at every position. Throws ShapeError on dimension
// mismatch.
ValidityMask compute_validity(const Vec2Field& flow, const Vec2Field& blur,
                              const EstimationParams& params);

}  // namespace exfrac
