#include "exfrac/field_io.hpp"

#include <bit>
#include <cctype>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>

namespace exfrac {

namespace {

constexpr std::uint8_t kFloMagic[4] = {'P', 'I', 'E', 'H'};  // float 202021.25 LE

std::uint32_t read_u32le(const std::uint8_t* p) {
    return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
           (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

void append_u32le(std::vector<std::uint8_t>& out, std::uint32_t v) {
    out.push_back(static_cast<std::uint8_t>(v & 0xff));
    out.push_back(static_cast<std::uint8_t>((v >> 8) & 0xff));
    out.push_back(static_cast<std::uint8_t>((v >> 16) & 0xff));
    out.push_back(static_cast<std::uint8_t>((v >> 24) & 0xff));
}

float read_f32le(const std::uint8_t* p) { return std::bit_cast<float>(read_u32le(p)); }

void append_f32le(std::vector<std::uint8_t>& out, float v) {
    append_u32le(out, std::bit_cast<std::uint32_t>(v));
}

void check_dimensions(std::int32_t w, std::int32_t h, const IoLimits& limits,
                      const char* what) {
    if (w < 1 || h < 1 || w > limits.max_dimension || h > limits.max_dimension) {
        std::ostringstream msg;
        msg << what << ": dimensions " << w << "x" << h << " outside [1, "
            << limits.max_dimension << "]";
        throw FormatError(msg.str());
    }
}

std::vector<std::uint8_t> read_binary_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path.string());
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                    std::istreambuf_iterator<char>());
    if (in.bad()) throw Error("read failed for " + path.string());
    return bytes;
}

void write_binary_file(const std::filesystem::path& path,
                       std::span<const std::uint8_t> bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open " + path.string() + " for writing");
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    if (!out) throw Error("write failed for " + path.string());
}

}  // namespace

void validate_field(const Vec2Field& field) {
    if (field.width < 1 || field.height < 1) throw DataError("field has empty dimensions");
    if (field.data.size() != field.pixel_count()) {
        throw DataError("field data length does not match width*height");
    }
    for (std::size_t i = 0; i < field.data.size(); ++i) {
        if (!is_finite(field.data[i])) {
            std::ostringstream msg;
            msg << "non-finite component at pixel (" << (i % field.width) << ", "
                << (i / field.width) << ")";
            throw DataError(msg.str());
        }
    }
}

Vec2Field read_vector_field(std::span<const std::uint8_t> bytes, const IoLimits& limits) {
    constexpr std::size_t kHeader = 12;
    if (bytes.size() < 4 || std::memcmp(bytes.data(), kFloMagic, 4) != 0) {
        throw FormatError("bad vector-field magic (expected \"PIEH\")");
    }
    if (bytes.size() < kHeader) {
        std::ostringstream msg;
        msg << "truncated vector-field header: expected at least " << kHeader << " bytes, got "
            << bytes.size();
        throw TruncationError(msg.str());
    }
    const auto w = static_cast<std::int32_t>(read_u32le(bytes.data() + 4));
    const auto h = static_cast<std::int32_t>(read_u32le(bytes.data() + 8));
    check_dimensions(w, h, limits, "vector field");

    const std::size_t expected = kHeader + static_cast<std::size_t>(w) * h * 8;
    if (bytes.size() < expected) {
        std::ostringstream msg;
        msg << "truncated vector-field payload: expected " << expected << " bytes, got "
            << bytes.size();
        throw TruncationError(msg.str());
    }
    if (bytes.size() > expected) {
        std::ostringstream msg;
        msg << "trailing data after vector-field payload: expected " << expected
            << " bytes, got " << bytes.size();
        throw FormatError(msg.str());
    }

    Vec2Field field(w, h);
    const std::uint8_t* p = bytes.data() + kHeader;
    for (std::size_t i = 0; i < field.data.size(); ++i, p += 8) {
        const float u = read_f32le(p);
        const float v = read_f32le(p + 4);
        if (!std::isfinite(u) || !std::isfinite(v)) {
            std::ostringstream msg;
            msg << "non-finite component at pixel (" << (i % static_cast<std::size_t>(w))
                << ", " << (i / static_cast<std::size_t>(w)) << ")";
            throw DataError(msg.str());
        }
        field.data[i] = {static_cast<double>(u), static_cast<double>(v)};
    }
    return field;
}

std::vector<std::uint8_t> write_vector_field(const Vec2Field& field) {
    validate_field(field);
    std::vector<std::uint8_t> out;
    out.reserve(12 + field.pixel_count() * 8);
    out.insert(out.end(), kFloMagic, kFloMagic + 4);
    append_u32le(out, static_cast<std::uint32_t>(field.width));
    append_u32le(out, static_cast<std::uint32_t>(field.height));
    for (const Vec2& v : field.data) {
        append_f32le(out, static_cast<float>(v.x));
        append_f32le(out, static_cast<float>(v.y));
    }
    return out;
}

Vec2Field read_vector_field_file(const std::filesystem::path& path, const IoLimits& limits) {
    return read_vector_field(read_binary_file(path), limits);
}

void write_vector_field_file(const std::filesystem::path& path, const Vec2Field& field) {
    write_binary_file(path, write_vector_field(field));
}

namespace {

// Reads one whitespace-delimited PNM header token, skipping '#' comments.
bool next_pnm_token(std::span<const std::uint8_t> bytes, std::size_t& pos, std::string& token) {
    token.clear();
    while (pos < bytes.size()) {
        const char c = static_cast<char>(bytes[pos]);
        if (c == '#') {
            while (pos < bytes.size() && static_cast<char>(bytes[pos]) != '\n') ++pos;
        } else if (std::isspace(static_cast<unsigned char>(c))) {
            ++pos;
        } else {
            break;
        }
    }
    while (pos < bytes.size()) {
        const char c = static_cast<char>(bytes[pos]);
        if (std::isspace(static_cast<unsigned char>(c)) || c == '#') break;
        token.push_back(c);
        ++pos;
    }
    return !token.empty();
}

std::int64_t parse_pnm_int(const std::string& token) {
    for (char c : token) {
        if (c < '0' || c > '9') throw FormatError("non-numeric PGM header token \"" + token + "\"");
    }
    if (token.size() > 9) throw FormatError("PGM header value out of range");
    return std::stoll(token);
}

}  // namespace

Frame read_frame(std::span<const std::uint8_t> bytes, const IoLimits& limits) {
    if (bytes.size() < 2 || bytes[0] != 'P' || bytes[1] != '5') {
        throw FormatError("bad frame magic (expected binary PGM \"P5\")");
    }
    std::size_t pos = 2;
    std::string tok;
    if (!next_pnm_token(bytes, pos, tok)) throw TruncationError("PGM header ends before width");
    const std::int64_t w = parse_pnm_int(tok);
    if (!next_pnm_token(bytes, pos, tok)) throw TruncationError("PGM header ends before height");
    const std::int64_t h = parse_pnm_int(tok);
    if (!next_pnm_token(bytes, pos, tok)) throw TruncationError("PGM header ends before maxval");
    const std::int64_t maxval = parse_pnm_int(tok);
    check_dimensions(static_cast<std::int32_t>(w), static_cast<std::int32_t>(h), limits, "frame");
    if (maxval != 255) {
        throw FormatError("unsupported PGM maxval " + std::to_string(maxval) + " (expected 255)");
    }
    if (pos >= bytes.size() ||
        !std::isspace(static_cast<unsigned char>(static_cast<char>(bytes[pos])))) {
        throw FormatError("missing whitespace between PGM header and raster");
    }
    ++pos;

    const std::size_t expected = static_cast<std::size_t>(w) * static_cast<std::size_t>(h);
    const std::size_t available = bytes.size() - pos;
    if (available < expected) {
        std::ostringstream msg;
        msg << "truncated PGM raster: expected " << expected << " bytes, got " << available;
        throw TruncationError(msg.str());
    }
    if (available > expected) {
        std::ostringstream msg;
        msg << "trailing data after PGM raster: expected " << expected << " bytes, got "
            << available;
        throw FormatError(msg.str());
    }

    Frame frame(static_cast<int>(w), static_cast<int>(h));
    for (std::size_t i = 0; i < expected; ++i) {
        frame.pixels[i] = static_cast<double>(bytes[pos + i]) / 255.0;
    }
    return frame;
}

std::vector<std::uint8_t> write_frame(const Frame& frame) {
    if (frame.width < 1 || frame.height < 1 ||
        frame.pixels.size() != frame.pixel_count()) {
        throw DataError("frame dimensions and pixel count do not match");
    }
    std::string header = "P5\n" + std::to_string(frame.width) + " " +
                         std::to_string(frame.height) + "\n255\n";
    std::vector<std::uint8_t> out(header.begin(), header.end());
    out.reserve(out.size() + frame.pixels.size());
    for (double v : frame.pixels) {
        if (!(v >= 0.0 && v <= 1.0)) throw DataError("frame intensity outside [0, 1]");
        // round-half-up quantization, applied exactly once at write time
        out.push_back(static_cast<std::uint8_t>(std::floor(v * 255.0 + 0.5)));
    }
    return out;
}

Frame read_frame_file(const std::filesystem::path& path, const IoLimits& limits) {
    return read_frame(read_binary_file(path), limits);
}

void write_frame_file(const std::filesystem::path& path, const Frame& frame) {
    write_binary_file(path, write_frame(frame));
}

}  // namespace exfrac
