#include "exfrac/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <sstream>

namespace exfrac {

namespace {

constexpr int kMaxCanvasDimension = 16384;
constexpr int kTextureMargin = 3;  // bilinear guard band around the sampled area

// SplitMix64 (Steele, Lea, Flood 2014); whitens seeds and keys sub-streams.
struct SplitMix64 {
    std::uint64_t state;

    explicit SplitMix64(std::uint64_t seed) : state(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }
};

// xoshiro256** 1.0 (Blackman, Vigna 2018), state filled by SplitMix64.
class Xoshiro256StarStar {
public:
    explicit Xoshiro256StarStar(std::uint64_t seed) {
        SplitMix64 mix(seed);
        for (auto& word : state_) word = mix.next();
    }

    std::uint64_t next() {
        const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    // Uniform in [0, 1), 53 significant bits.
    double next_unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    // Box-Muller, one value per call; the paired value is cached.
    double next_gaussian() {
        if (has_cached_) {
            has_cached_ = false;
            return cached_;
        }
        const double u1 = 1.0 - next_unit();  // (0, 1], keeps the log finite
        const double u2 = next_unit();
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = 2.0 * std::numbers::pi * u2;
        cached_ = radius * std::sin(angle);
        has_cached_ = true;
        return radius * std::cos(angle);
    }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

    std::uint64_t state_[4];
    bool has_cached_ = false;
    double cached_ = 0.0;
};

// Sub-stream key: one generator per (seed, stream) pair so parallel and
// serial renders agree.
std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t stream) {
    SplitMix64 mix(seed ^ (0xA0761D6478BD642FULL * (stream + 1)));
    return mix.next();
}

// Separable 5-tap box average with edge clamp.
Frame box_blur_radius2(const Frame& in) {
    const int w = in.width;
    const int h = in.height;
    Frame horizontal(w, h);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            double sum = 0.0;
            for (int k = -2; k <= 2; ++k) {
                sum += in.at(std::clamp(x + k, 0, w - 1), y);
            }
            horizontal.at(x, y) = sum / 5.0;
        }
    }
    Frame out(w, h);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            double sum = 0.0;
            for (int k = -2; k <= 2; ++k) {
                sum += horizontal.at(x, std::clamp(y + k, 0, h - 1));
            }
            out.at(x, y) = sum / 5.0;
        }
    }
    return out;
}

double bilinear_sample(const Frame& tex, double fx, double fy) {
    const int x0 = static_cast<int>(std::floor(fx));
    const int y0 = static_cast<int>(std::floor(fy));
    const int x1 = std::min(x0 + 1, tex.width - 1);
    const int y1 = std::min(y0 + 1, tex.height - 1);
    const double tx = fx - x0;
    const double ty = fy - y0;
    const double top = (1.0 - tx) * tex.at(x0, y0) + tx * tex.at(x1, y0);
    const double bottom = (1.0 - tx) * tex.at(x0, y1) + tx * tex.at(x1, y1);
    return (1.0 - ty) * top + ty * bottom;
}

}  // namespace

void SynthConfig::validate() const {
    std::ostringstream msg;
    if (width < 1 || height < 1) {
        msg << "frame dimensions must be positive, got " << width << "x" << height;
        throw ConfigError(msg.str());
    }
    if (!(alpha > 0.0) || !(alpha <= 1.0)) {
        msg << "alpha must lie in (0, 1], got " << alpha;
        throw ConfigError(msg.str());
    }
    if (n_frames < 2) {
        msg << "a clip needs at least 2 frames, got " << n_frames;
        throw ConfigError(msg.str());
    }
    if (supersamples < 1) {
        msg << "supersamples must be >= 1, got " << supersamples;
        throw ConfigError(msg.str());
    }
    if (!(noise_sigma >= 0.0)) {
        msg << "noise sigma must be >= 0, got " << noise_sigma;
        throw ConfigError(msg.str());
    }
    if (!is_finite(velocity)) throw ConfigError("velocity must be finite");

    // The texture must cover every sample of every frame.
    const double span_x = std::abs((n_frames - 1 + alpha) * velocity.x);
    const double span_y = std::abs((n_frames - 1 + alpha) * velocity.y);
    const double tex_w = width + std::ceil(span_x) + 2 * kTextureMargin;
    const double tex_h = height + std::ceil(span_y) + 2 * kTextureMargin;
    if (tex_w > kMaxCanvasDimension || tex_h > kMaxCanvasDimension) {
        msg << "texture canvas " << tex_w << "x" << tex_h << " exceeds the cap of "
            << kMaxCanvasDimension << "; reduce n_frames or velocity";
        throw ConfigError(msg.str());
    }
}

Frame generate_texture(std::uint64_t seed, int width, int height) {
    Frame noise(width, height);
    Xoshiro256StarStar rng(stream_seed(seed, 0));
    for (double& px : noise.pixels) px = rng.next_unit();

    Frame blurred = box_blur_radius2(box_blur_radius2(noise));

    const auto [lo_it, hi_it] = std::minmax_element(blurred.pixels.begin(), blurred.pixels.end());
    const double lo = *lo_it;
    const double hi = *hi_it;
    if (hi > lo) {
        for (double& px : blurred.pixels) px = (px - lo) / (hi - lo);
    } else {
        std::fill(blurred.pixels.begin(), blurred.pixels.end(), 0.5);
    }
    return blurred;
}

GroundTruth ground_truth_fields(const SynthConfig& config) {
    config.validate();
    GroundTruth gt;
    gt.flow = Vec2Field::constant(config.width, config.height, config.velocity);
    gt.blur = Vec2Field::constant(config.width, config.height,
                                  {config.alpha * config.velocity.x,
                                   config.alpha * config.velocity.y});
    return gt;
}

std::vector<FieldPair> ground_truth_pairs(const SynthConfig& config) {
    const GroundTruth gt = ground_truth_fields(config);
    std::vector<FieldPair> pairs(static_cast<std::size_t>(config.n_frames) - 1);
    for (auto& pair : pairs) {
        pair.flow = gt.flow;
        pair.blur = gt.blur;
    }
    return pairs;
}

SynthClip render_clip(const SynthConfig& config) {
    config.validate();

    // Offsets reach (n_frames - 1 + alpha) * velocity; anchor the crop so
    // every sample lands inside the texture whatever the velocity signs.
    const double reach_x = (config.n_frames - 1 + config.alpha) * config.velocity.x;
    const double reach_y = (config.n_frames - 1 + config.alpha) * config.velocity.y;
    const int tex_w =
        config.width + static_cast<int>(std::ceil(std::abs(reach_x))) + 2 * kTextureMargin;
    const int tex_h =
        config.height + static_cast<int>(std::ceil(std::abs(reach_y))) + 2 * kTextureMargin;
    const double base_x = kTextureMargin - std::min(0.0, reach_x);
    const double base_y = kTextureMargin - std::min(0.0, reach_y);

    const Frame texture = generate_texture(config.seed, tex_w, tex_h);

    SynthClip clip;
    clip.apparent_alpha = config.alpha;
    clip.frames.reserve(static_cast<std::size_t>(config.n_frames));

    const int s = config.supersamples;
    for (int i = 0; i < config.n_frames; ++i) {
        Frame frame(config.width, config.height);
        for (int y = 0; y < config.height; ++y) {
            for (int x = 0; x < config.width; ++x) {
                double acc = 0.0;
                for (int j = 0; j < s; ++j) {
                    const double t = i + (j + 0.5) / s * config.alpha;
                    acc += bilinear_sample(texture, base_x + x + t * config.velocity.x,
                                           base_y + y + t * config.velocity.y);
                }
                frame.at(x, y) = acc / s;
            }
        }
        if (config.noise_sigma > 0.0) {
            Xoshiro256StarStar rng(
                stream_seed(config.seed, 1 + static_cast<std::uint64_t>(i)));
            for (double& px : frame.pixels) {
                px = std::clamp(px + config.noise_sigma * rng.next_gaussian(), 0.0, 1.0);
            }
        }
        clip.frames.push_back(std::move(frame));
    }

    clip.fields = ground_truth_pairs(config);
    return clip;
}

Vec2Field quantize_blur(const Vec2Field& field) {
    Vec2Field out = field;
    for (Vec2& v : out.data) {
        v.x = std::round(v.x);  // ties away from zero
        v.y = std::round(v.y);
    }
    return out;
}

Vec2Field perturb_field(const Vec2Field& field, double sigma_px, std::uint64_t seed) {
    if (!(sigma_px >= 0.0)) throw ParamError("perturbation sigma must be >= 0");
    if (sigma_px == 0.0) return field;
    Vec2Field out = field;
    Xoshiro256StarStar rng(stream_seed(seed, 0));
    for (Vec2& v : out.data) {
        v.x += sigma_px * rng.next_gaussian();
        v.y += sigma_px * rng.next_gaussian();
    }
    return out;
}

SynthClip subsample_clip(const SynthClip& clip, int k) {
    if (k < 1) throw ParamError("subsampling factor must be >= 1, got " + std::to_string(k));
    if (k == 1) return clip;

    const int n_frames = static_cast<int>(clip.frames.size());
    const int n_kept = (n_frames - 1) / k + 1;
    if (n_kept < 2) {
        throw ParamError("subsampling by " + std::to_string(k) + " leaves fewer than 2 frames");
    }

    SynthClip out;
    out.apparent_alpha = clip.apparent_alpha / k;
    out.frames.reserve(static_cast<std::size_t>(n_kept));
    for (int j = 0; j < n_kept; ++j) {
        out.frames.push_back(clip.frames[static_cast<std::size_t>(j) * k]);
    }
    // Pair j spans kept frames j*k .. (j+1)*k: flow grows k-fold, blur does not.
    out.fields.reserve(static_cast<std::size_t>(n_kept) - 1);
    for (int j = 0; j + 1 < n_kept; ++j) {
        const FieldPair& src = clip.fields[static_cast<std::size_t>(j) * k];
        FieldPair pair;
        pair.flow = src.flow;
        for (Vec2& v : pair.flow.data) v = static_cast<double>(k) * v;
        pair.blur = src.blur;
        out.fields.push_back(std::move(pair));
    }
    return out;
}

SynthClip interpolate_clip(const SynthClip& clip, int m) {
    if (m < 1) throw ParamError("interpolation factor must be >= 1, got " + std::to_string(m));
    if (m == 1) return clip;

    SynthClip out;
    out.apparent_alpha = clip.apparent_alpha * m;
    // Emulated intermediates repeat the source frame: as blurry as the
    // source, one m-th of the motion.
    const std::size_t n_frames = clip.frames.size();
    out.frames.reserve((n_frames - 1) * m + 1);
    for (std::size_t i = 0; i + 1 < n_frames; ++i) {
        for (int r = 0; r < m; ++r) out.frames.push_back(clip.frames[i]);
    }
    out.frames.push_back(clip.frames.back());

    out.fields.reserve(clip.fields.size() * m);
    for (const FieldPair& src : clip.fields) {
        FieldPair scaled;
        scaled.flow = src.flow;
        for (Vec2& v : scaled.flow.data) v = (1.0 / m) * v;
        scaled.blur = src.blur;
        for (int r = 0; r < m; ++r) out.fields.push_back(scaled);
    }
    return out;
}

}  // namespace exfrac
