#include "exfrac/patch.hpp"

#include <sstream>

namespace exfrac {

SummedAreaTable build_sat(const ValidityMask& mask, SearchStats* stats) {
    SummedAreaTable sat;
    sat.width = mask.width;
    sat.height = mask.height;
    const std::size_t stride = static_cast<std::size_t>(mask.width) + 1;
    sat.sums.assign(stride * (static_cast<std::size_t>(mask.height) + 1), 0);

    for (int y = 0; y < mask.height; ++y) {
        std::uint32_t row_sum = 0;
        const std::size_t mask_row = static_cast<std::size_t>(y) * mask.width;
        const std::size_t out_row = static_cast<std::size_t>(y + 1) * stride;
        for (int x = 0; x < mask.width; ++x) {
            row_sum += mask.bits[mask_row + x];
            sat.sums[out_row + x + 1] = sat.sums[out_row - stride + x + 1] + row_sum;
        }
    }
    if (stats) stats->cells_built += sat.sums.size();
    return sat;
}

std::optional<PatchLocation> best_patch(const ValidityMask& mask, int patch_size,
                                        SearchStats* stats) {
    if (patch_size < 1) {
        throw ParamError("patch size must be >= 1, got " + std::to_string(patch_size));
    }
    if (patch_size > mask.width || patch_size > mask.height) {
        std::ostringstream msg;
        msg << "patch size " << patch_size << " exceeds mask dimensions " << mask.width << "x"
            << mask.height;
        throw ParamError(msg.str());
    }

    const SummedAreaTable sat = build_sat(mask, stats);
    PatchLocation best;
    std::uint32_t best_count = 0;
    // Row-major scan; strict improvement keeps the first corner on ties.
    for (int y0 = 0; y0 + patch_size <= mask.height; ++y0) {
        for (int x0 = 0; x0 + patch_size <= mask.width; ++x0) {
            const std::uint32_t count =
                sat.rect_count(x0, y0, x0 + patch_size, y0 + patch_size);
            if (stats) ++stats->windows_scanned;
            if (count > best_count) {
                best_count = count;
                best.x0 = x0;
                best.y0 = y0;
            }
        }
    }
    if (best_count == 0) return std::nullopt;
    best.valid_count = static_cast<int>(best_count);
    return best;
}

}  // namespace exfrac
