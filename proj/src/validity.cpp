#include "exfrac/validity.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace exfrac {

void EstimationParams::validate() const {
    if (patch_size < 1) {
        throw ParamError("patch size must be >= 1, got " + std::to_string(patch_size));
    }
    if (!(max_angle_deg > 0.0) || !(max_angle_deg < 90.0)) {
        std::ostringstream msg;
        msg << "max angle must lie in (0, 90) degrees, got " << max_angle_deg;
        throw ParamError(msg.str());
    }
    if (!(min_magnitude >= 0.0) || !std::isfinite(min_magnitude)) {
        throw ParamError("minimum magnitude must be finite and >= 0");
    }
}

double EstimationParams::cos_max_angle() const {
    return std::cos(max_angle_deg * std::numbers::pi / 180.0);
}

namespace {

inline bool valid_with_cosine(Vec2 flow, Vec2 blur, double min_magnitude, double cos_phi) {
    const double flow_norm = norm(flow);
    const double blur_norm = norm(blur);
    // Magnitude floor first: keeps the cosine away from 0/0.
    if (!(blur_norm > min_magnitude) || !(flow_norm > min_magnitude)) return false;
    // A pixel cannot blur for longer than the frame interval.
    if (blur_norm > flow_norm) return false;
    // Collinearity modulo pi: the kernel has no sign, so |dot|.
    const double cosine = std::abs(dot(flow, blur)) / (flow_norm * blur_norm);
    return cosine >= cos_phi;
}

}  // namespace

bool pixel_valid(Vec2 flow, Vec2 blur, const EstimationParams& params) {
    params.validate();
    return valid_with_cosine(flow, blur, params.min_magnitude, params.cos_max_angle());
}

ValidityMask compute_validity(const Vec2Field& flow, const Vec2Field& blur,
                              const EstimationParams& params) {
    params.validate();
    if (!flow.same_shape(blur)) {
        std::ostringstream msg;
        msg << "flow is " << flow.width << "x" << flow.height << " but blur is " << blur.width
            << "x" << blur.height;
        throw ShapeError(msg.str());
    }
    const double cos_phi = params.cos_max_angle();
    ValidityMask mask(flow.width, flow.height);
    for (std::size_t i = 0; i < flow.data.size(); ++i) {
        mask.bits[i] =
            valid_with_cosine(flow.data[i], blur.data[i], params.min_magnitude, cos_phi) ? 1 : 0;
    }
    return mask;
}

}  // namespace exfrac
