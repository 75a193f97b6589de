#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "exfrac/errors.hpp"

namespace exfrac {

// 2-vector in pixel units. Used both for optical flow displacements and for
// linear blur kernels interpreted as displacement vectors.
struct Vec2 {
    double x = 0.0;
    double y = 0.0;
};

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator-(Vec2 a) { return {-a.x, -a.y}; }
inline Vec2 operator*(double s, Vec2 v) { return {s * v.x, s * v.y}; }
inline Vec2 operator*(Vec2 v, double s) { return s * v; }
inline bool operator==(Vec2 a, Vec2 b) { return a.x == b.x && a.y == b.y; }

inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double norm(Vec2 v) { return std::sqrt(v.x * v.x + v.y * v.y); }
inline bool is_finite(Vec2 v) { return std::isfinite(v.x) && std::isfinite(v.y); }

// Rotate v by `radians` counter-clockwise.
inline Vec2 rotate(Vec2 v, double radians) {
    const double c = std::cos(radians);
    const double s = std::sin(radians);
    return {c * v.x - s * v.y, s * v.x + c * v.y};
}

// Dense per-pixel 2-vector field, row-major. Holds either an optical flow
// field or a linear blur kernel map; both share the same container.
struct Vec2Field {
    int width = 0;
    int height = 0;
    std::vector<Vec2> data;

    Vec2Field() = default;
    Vec2Field(int w, int h) : width(w), height(h), data(static_cast<std::size_t>(w) * h) {}

    static Vec2Field constant(int w, int h, Vec2 value) {
        Vec2Field f(w, h);
        for (auto& v : f.data) v = value;
        return f;
    }

    Vec2& at(int x, int y) { return data[static_cast<std::size_t>(y) * width + x]; }
    const Vec2& at(int x, int y) const { return data[static_cast<std::size_t>(y) * width + x]; }

    std::size_t pixel_count() const { return static_cast<std::size_t>(width) * height; }
    bool same_shape(const Vec2Field& other) const {
        return width == other.width && height == other.height;
    }
};

// Throws DataError if the field violates its invariants (size mismatch or a
// non-finite component).
void validate_field(const Vec2Field& field);

// Grayscale image with intensities in [0, 1], row-major.
struct Frame {
    int width = 0;
    int height = 0;
    std::vector<double> pixels;

    Frame() = default;
    Frame(int w, int h) : width(w), height(h), pixels(static_cast<std::size_t>(w) * h, 0.0) {}

    double& at(int x, int y) { return pixels[static_cast<std::size_t>(y) * width + x]; }
    double at(int x, int y) const { return pixels[static_cast<std::size_t>(y) * width + x]; }

    std::size_t pixel_count() const { return static_cast<std::size_t>(width) * height; }
};

// A consecutive-frame observation: the flow towards the next frame paired
// with the blur accumulated during this frame's exposure.
struct FieldPair {
    Vec2Field flow;
    Vec2Field blur;
};

}  // namespace exfrac
