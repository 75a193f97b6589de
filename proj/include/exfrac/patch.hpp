#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "exfrac/validity.hpp"

namespace exfrac {

// Integer prefix sums of a validity mask with a zero border row/column, so
// any rectangle count is four lookups.
struct SummedAreaTable {
    int width = 0;   // mask width
    int height = 0;  // mask height
    std::vector<std::uint32_t> sums;  // (width + 1) * (height + 1), row-major

    std::uint32_t at(int x, int y) const {
        return sums[static_cast<std::size_t>(y) * (width + 1) + x];
    }

    // Count of set bits in the half-open rectangle [x0, x1) x [y0, y1).
    std::uint32_t rect_count(int x0, int y0, int x1, int y1) const {
        return at(x1, y1) - at(x0, y1) - at(x1, y0) + at(x0, y0);
    }

    std::uint32_t total() const { return at(width, height); }
};

// Top-left corner of the chosen window plus the number of valid positions
// inside it.
struct PatchLocation {
    int x0 = 0;
    int y0 = 0;
    int valid_count = 0;
};

// Work counters for the linear-time guarantee; filled when a stats pointer
// is passed.
struct SearchStats {
    std::uint64_t cells_built = 0;      // SAT cells written
    std::uint64_t windows_scanned = 0;  // candidate windows evaluated
};

SummedAreaTable build_sat(const ValidityMask& mask, SearchStats* stats = nullptr);

// Finds the patch_size x patch_size window containing the most valid
// positions. Ties break towards the smallest y0, then smallest x0. Returns
// nullopt iff the best window holds zero valid positions. Throws ParamError
// when patch_size < 1 or exceeds either mask dimension.
std::optional<PatchLocation> best_patch(const ValidityMask& mask, int patch_size,
                                        SearchStats* stats = nullptr);

}  // namespace exfrac
