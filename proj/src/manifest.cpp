#include "exfrac/manifest.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "exfrac/field_io.hpp"
#include "json.hpp"

namespace exfrac {

namespace {

using nlohmann::json;

ManifestClip parse_manifest_row(const json& row, const std::filesystem::path& base_dir,
                                int line_number) {
    try {
        ManifestClip clip;
        clip.clip_id = row.at("clip_id").get<std::string>();
        clip.subset = row.at("subset").get<std::string>();
        clip.alpha_gt = row.at("alpha_gt").get<double>();
        for (const json& frame : row.at("frames")) {
            ManifestFramePair pair;
            pair.flow_path = base_dir / frame.at("flow_path").get<std::string>();
            pair.blur_path = base_dir / frame.at("blur_path").get<std::string>();
            clip.frames.push_back(std::move(pair));
        }
        return clip;
    } catch (const json::exception& e) {
        std::ostringstream msg;
        msg << "manifest line " << line_number << ": " << e.what();
        throw FormatError(msg.str());
    }
}

}  // namespace

std::vector<ManifestClip> load_manifest(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open manifest " + path.string());
    const std::filesystem::path base_dir = path.parent_path();

    std::vector<ManifestClip> clips;
    std::string line;
    int line_number = 0;
    while (std::getline(in, line)) {
        ++line_number;
        if (line.find_first_not_of(" \t\r\n") == std::string::npos) continue;
        json row;
        try {
            row = json::parse(line);
        } catch (const json::exception& e) {
            std::ostringstream msg;
            msg << "manifest line " << line_number << " is not valid JSON: " << e.what();
            throw FormatError(msg.str());
        }
        clips.push_back(parse_manifest_row(row, base_dir, line_number));
    }
    if (clips.empty()) throw FormatError("manifest " + path.string() + " holds no clips");
    return clips;
}

EvalReport evaluate_manifest(const std::vector<ManifestClip>& clips,
                             const EstimationParams& params, int threads) {
    params.validate();
    EvalReport report;
    report.params = params;

    for (const ManifestClip& manifest_clip : clips) {
        ClipResult result;
        result.clip_id = manifest_clip.clip_id;
        result.subset = manifest_clip.subset;
        result.alpha_gt = manifest_clip.alpha_gt;
        try {
            std::vector<FieldPair> pairs;
            pairs.reserve(manifest_clip.frames.size());
            for (const ManifestFramePair& frame : manifest_clip.frames) {
                FieldPair pair;
                pair.flow = read_vector_field_file(frame.flow_path);
                pair.blur = read_vector_field_file(frame.blur_path);
                pairs.push_back(std::move(pair));
            }
            const ClipEstimate estimate = estimate_clip(pairs, params, threads);
            result.alpha_est = estimate.alpha_glob;
            result.n_frames_used = estimate.n_frames_used;
            result.n_frames_total = estimate.n_frames_total;
            result.ok = true;
        } catch (const Error& e) {
            result.ok = false;
            result.error = e.what();
            ++report.n_failed_rows;
        }
        report.clips.push_back(std::move(result));
    }

    std::map<std::string, std::vector<const ClipResult*>> by_subset;
    for (const ClipResult& result : report.clips) {
        if (result.ok) by_subset[result.subset].push_back(&result);
    }
    double mae_sum = 0.0;
    for (const auto& [subset, rows] : by_subset) {
        double abs_sum = 0.0;
        for (const ClipResult* row : rows) {
            abs_sum += std::abs(row->alpha_gt - row->alpha_est);
        }
        SubsetMae entry;
        entry.subset = subset;
        entry.n_clips = static_cast<int>(rows.size());
        entry.mae = abs_sum / static_cast<double>(rows.size());
        mae_sum += entry.mae;
        report.subsets.push_back(std::move(entry));
    }
    report.average_mae = report.subsets.empty()
                             ? 0.0
                             : mae_sum / static_cast<double>(report.subsets.size());
    return report;
}

namespace {

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> parts;
    std::string current;
    for (char c : text) {
        if (c == sep) {
            parts.push_back(current);
            current.clear();
        } else {
            current.push_back(c);
        }
    }
    parts.push_back(current);
    return parts;
}

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t");
    return s.substr(begin, end - begin + 1);
}

}  // namespace

SweepSpec SweepSpec::parse(const std::string& text) {
    SweepSpec spec;
    for (const std::string& group : split(text, ';')) {
        const auto eq = group.find('=');
        if (eq == std::string::npos) {
            throw ParamError("sweep group \"" + group + "\" is missing '=' (expected "
                             "\"D=10,20,30;phi=3,5,7\")");
        }
        const std::string key = trim(group.substr(0, eq));
        const std::string values = group.substr(eq + 1);
        for (const std::string& raw : split(values, ',')) {
            const std::string value = trim(raw);
            std::size_t consumed = 0;
            double parsed = 0.0;
            try {
                parsed = std::stod(value, &consumed);
            } catch (const std::exception&) {
                consumed = std::string::npos;
            }
            if (consumed != value.size() || value.empty()) {
                throw ParamError("sweep value \"" + raw + "\" in group \"" + key +
                                 "\" is not a number");
            }
            if (key == "D") {
                if (parsed < 1.0 || parsed != std::floor(parsed)) {
                    throw ParamError("patch size \"" + value + "\" must be a positive integer");
                }
                spec.patch_sizes.push_back(static_cast<int>(parsed));
            } else if (key == "phi") {
                spec.max_angles_deg.push_back(parsed);
            } else {
                throw ParamError("unknown sweep key \"" + key + "\" (expected D or phi)");
            }
        }
    }
    if (spec.patch_sizes.empty() || spec.max_angles_deg.empty()) {
        throw ParamError("sweep must set both D and phi, e.g. \"D=10,20,30;phi=3,5,7\"");
    }
    return spec;
}

}  // namespace exfrac
