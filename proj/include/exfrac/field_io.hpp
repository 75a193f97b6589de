#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "exfrac/field.hpp"

namespace exfrac {

// Guard against allocating from a hostile header. Dimensions outside
// [1, max_dimension] are rejected as a format error.
struct IoLimits {
    int max_dimension = 16384;
};

// Middlebury-style .flo container: magic "PIEH" (float 202021.25 LE),
// int32 LE width, int32 LE height, then width*height interleaved (u, v)
// float32 LE pairs. The same container stores flow fields and blur maps.
Vec2Field read_vector_field(std::span<const std::uint8_t> bytes, const IoLimits& limits = {});
std::vector<std::uint8_t> write_vector_field(const Vec2Field& field);

Vec2Field read_vector_field_file(const std::filesystem::path& path, const IoLimits& limits = {});
void write_vector_field_file(const std::filesystem::path& path, const Vec2Field& field);

// Binary PGM ("P5"), maxval 255. Intensities map linearly to [0, 1];
// writing quantizes once with round-half-up.
Frame read_frame(std::span<const std::uint8_t> bytes, const IoLimits& limits = {});
std::vector<std::uint8_t> write_frame(const Frame& frame);

Frame read_frame_file(const std::filesystem::path& path, const IoLimits& limits = {});
void write_frame_file(const std::filesystem::path& path, const Frame& frame);

}  // namespace exfrac
