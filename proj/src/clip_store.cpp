#include "exfrac/clip_store.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "exfrac/field_io.hpp"
#include "exfrac/version.hpp"
#include "json.hpp"

namespace exfrac {

namespace {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

std::string index_name(int i, const char* extension) {
    std::ostringstream name;
    name << std::setw(4) << std::setfill('0') << i << extension;
    return name.str();
}

ordered_json meta_to_json(const ClipMeta& meta, std::size_t n_frames, std::size_t n_pairs) {
    ordered_json j;
    j["schema_version"] = kReportSchemaVersion;
    j["clip_id"] = meta.clip_id;
    j["width"] = meta.config.width;
    j["height"] = meta.config.height;
    j["velocity"] = {meta.config.velocity.x, meta.config.velocity.y};
    j["alpha"] = meta.config.alpha;
    j["blur"] = {meta.config.alpha * meta.config.velocity.x,
                 meta.config.alpha * meta.config.velocity.y};
    j["n_frames"] = n_frames;
    j["n_pairs"] = n_pairs;
    j["seed"] = meta.config.seed;
    j["supersamples"] = meta.config.supersamples;
    j["noise_sigma"] = meta.config.noise_sigma;
    j["quantized_blur"] = meta.quantized_blur;
    j["apparent_alpha"] = meta.apparent_alpha;
    if (meta.tamper) {
        j["tamper"] = {{"mode", meta.tamper->mode}, {"factor", meta.tamper->factor}};
    } else {
        j["tamper"] = nullptr;
    }
    return j;
}

ClipMeta meta_from_json(const ordered_json& j) {
    ClipMeta meta;
    meta.clip_id = j.at("clip_id").get<std::string>();
    meta.config.width = j.at("width").get<int>();
    meta.config.height = j.at("height").get<int>();
    meta.config.velocity = {j.at("velocity").at(0).get<double>(),
                            j.at("velocity").at(1).get<double>()};
    meta.config.alpha = j.at("alpha").get<double>();
    meta.config.n_frames = j.at("n_frames").get<int>();
    meta.config.seed = j.at("seed").get<std::uint64_t>();
    meta.config.supersamples = j.at("supersamples").get<int>();
    meta.config.noise_sigma = j.at("noise_sigma").get<double>();
    meta.quantized_blur = j.at("quantized_blur").get<bool>();
    meta.apparent_alpha = j.at("apparent_alpha").get<double>();
    if (!j.at("tamper").is_null()) {
        TamperRecord record;
        record.mode = j.at("tamper").at("mode").get<std::string>();
        record.factor = j.at("tamper").at("factor").get<int>();
        meta.tamper = record;
    }
    return meta;
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open " + path.string() + " for writing");
    out << text;
    if (!out) throw Error("write failed for " + path.string());
}

std::vector<fs::path> sorted_files(const fs::path& dir, const std::string& extension) {
    std::vector<fs::path> files;
    if (!fs::is_directory(dir)) return files;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (entry.is_regular_file() && entry.path().extension() == extension) {
            files.push_back(entry.path());
        }
    }
    std::sort(files.begin(), files.end());
    return files;
}

}  // namespace

void write_clip_dir(const fs::path& dir, const SynthClip& clip, const ClipMeta& meta) {
    fs::create_directories(dir / "frames");
    fs::create_directories(dir / "flow");
    fs::create_directories(dir / "blur");

    for (std::size_t i = 0; i < clip.frames.size(); ++i) {
        write_frame_file(dir / "frames" / index_name(static_cast<int>(i), ".pgm"),
                         clip.frames[i]);
    }
    for (std::size_t i = 0; i < clip.fields.size(); ++i) {
        const std::string name = index_name(static_cast<int>(i), ".flo");
        write_vector_field_file(dir / "flow" / name, clip.fields[i].flow);
        write_vector_field_file(dir / "blur" / name, clip.fields[i].blur);
    }

    write_text(dir / "meta.json",
               meta_to_json(meta, clip.frames.size(), clip.fields.size()).dump(2) + "\n");

    ordered_json row;
    row["clip_id"] = meta.clip_id;
    row["subset"] = "synthetic";
    row["alpha_gt"] = meta.apparent_alpha;
    row["frames"] = ordered_json::array();
    for (std::size_t i = 0; i < clip.fields.size(); ++i) {
        const std::string name = index_name(static_cast<int>(i), ".flo");
        row["frames"].push_back(
            {{"flow_path", "flow/" + name}, {"blur_path", "blur/" + name}});
    }
    write_text(dir / "manifest.jsonl", row.dump() + "\n");
}

SynthClip read_clip_dir(const fs::path& dir, ClipMeta* meta_out) {
    const fs::path meta_path = dir / "meta.json";
    std::ifstream in(meta_path);
    if (!in) throw Error("cannot open " + meta_path.string());
    ordered_json meta_json;
    try {
        in >> meta_json;
    } catch (const nlohmann::json::exception& e) {
        throw FormatError("malformed meta.json in " + dir.string() + ": " + e.what());
    }
    ClipMeta meta = meta_from_json(meta_json);

    SynthClip clip;
    clip.apparent_alpha = meta.apparent_alpha;
    for (const fs::path& path : sorted_files(dir / "frames", ".pgm")) {
        clip.frames.push_back(read_frame_file(path));
    }
    const std::vector<fs::path> flow_files = sorted_files(dir / "flow", ".flo");
    const std::vector<fs::path> blur_files = sorted_files(dir / "blur", ".flo");
    if (flow_files.size() != blur_files.size()) {
        std::ostringstream msg;
        msg << "clip dir " << dir.string() << " has " << flow_files.size() << " flow but "
            << blur_files.size() << " blur fields";
        throw FormatError(msg.str());
    }
    if (flow_files.empty()) {
        throw FormatError("clip dir " + dir.string() + " holds no field pairs");
    }
    for (std::size_t i = 0; i < flow_files.size(); ++i) {
        FieldPair pair;
        pair.flow = read_vector_field_file(flow_files[i]);
        pair.blur = read_vector_field_file(blur_files[i]);
        clip.fields.push_back(std::move(pair));
    }

    if (meta_out) *meta_out = std::move(meta);
    return clip;
}

}  // namespace exfrac
