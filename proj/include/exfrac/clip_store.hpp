#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "exfrac/synth.hpp"

namespace exfrac {

// Tamper operation recorded in a clip's metadata.
struct TamperRecord {
    std::string mode;  // "delete" or "interpolate"
    int factor = 1;
};

// Sidecar metadata written next to a stored clip (meta.json).
struct ClipMeta {
    std::string clip_id;
    SynthConfig config;
    bool quantized_blur = false;
    double apparent_alpha = 0.0;
    std::optional<TamperRecord> tamper;
};

// On-disk clip layout under one directory:
//   frames/NNNN.pgm   rendered frames
//   flow/NNNN.flo     flow of pair NNNN
//   blur/NNNN.flo     blur of pair NNNN
//   meta.json         recipe echo + apparent alpha + tamper record
//   manifest.jsonl    single-clip manifest consumable by the evaluator
void write_clip_dir(const std::filesystem::path& dir, const SynthClip& clip,
                    const ClipMeta& meta);

SynthClip read_clip_dir(const std::filesystem::path& dir, ClipMeta* meta_out = nullptr);

}  // namespace exfrac
