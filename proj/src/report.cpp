#include "exfrac/report.hpp"

#include <fstream>
#include <sstream>

#include "exfrac/version.hpp"
#include "json.hpp"

namespace exfrac {

namespace {

using ordered_json = nlohmann::ordered_json;

ordered_json params_to_json(const EstimationParams& params) {
    ordered_json j;
    j["patch_size"] = params.patch_size;
    j["max_angle_deg"] = params.max_angle_deg;
    j["min_magnitude"] = params.min_magnitude;
    return j;
}

EstimationParams params_from_json(const ordered_json& j) {
    EstimationParams params;
    params.patch_size = j.at("patch_size").get<int>();
    params.max_angle_deg = j.at("max_angle_deg").get<double>();
    params.min_magnitude = j.at("min_magnitude").get<double>();
    return params;
}

ordered_json tool_block() {
    return ordered_json{{"name", kToolName}, {"version", kVersion}};
}

}  // namespace

std::string run_report_to_json(const RunReport& report) {
    ordered_json j;
    j["schema_version"] = kReportSchemaVersion;
    j["tool"] = tool_block();
    j["params"] = params_to_json(report.params);
    j["n_frames_total"] = report.clip.n_frames_total;
    j["n_frames_used"] = report.clip.n_frames_used;
    j["alpha_glob"] = report.clip.alpha_glob;
    j["frames"] = ordered_json::array();
    for (const FrameEstimate& f : report.clip.frames) {
        ordered_json frame;
        frame["frame_index"] = f.frame_index;
        frame["alpha_patch"] = f.alpha_patch;
        frame["patch"] = {{"x0", f.patch.x0}, {"y0", f.patch.y0},
                          {"valid_count", f.patch.valid_count}};
        frame["n_valid"] = f.n_valid;
        j["frames"].push_back(std::move(frame));
    }
    j["warnings"] = report.warnings;
    j["timing"] = ordered_json{{"total_ms", report.total_ms}};
    return j.dump(2) + "\n";
}

RunReport run_report_from_json(const std::string& text) {
    ordered_json j;
    try {
        j = ordered_json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(std::string("malformed run report: ") + e.what());
    }
    try {
        RunReport report;
        report.params = params_from_json(j.at("params"));
        report.clip.n_frames_total = j.at("n_frames_total").get<int>();
        report.clip.n_frames_used = j.at("n_frames_used").get<int>();
        report.clip.alpha_glob = j.at("alpha_glob").get<double>();
        for (const ordered_json& frame : j.at("frames")) {
            FrameEstimate f;
            f.frame_index = frame.at("frame_index").get<int>();
            f.alpha_patch = frame.at("alpha_patch").get<double>();
            f.patch.x0 = frame.at("patch").at("x0").get<int>();
            f.patch.y0 = frame.at("patch").at("y0").get<int>();
            f.patch.valid_count = frame.at("patch").at("valid_count").get<int>();
            f.n_valid = frame.at("n_valid").get<int>();
            report.clip.frames.push_back(f);
        }
        if (j.contains("warnings")) {
            report.warnings = j.at("warnings").get<std::vector<std::string>>();
        }
        if (j.contains("timing") && j.at("timing").contains("total_ms")) {
            report.total_ms = j.at("timing").at("total_ms").get<double>();
        }
        return report;
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(std::string("run report is missing fields: ") + e.what());
    }
}

std::string verdict_to_json(const TamperVerdict& verdict, double alpha_ref, double alpha_glob,
                            double rel_tol) {
    ordered_json j;
    j["schema_version"] = kReportSchemaVersion;
    j["tool"] = tool_block();
    j["verdict"] = to_string(verdict.verdict);
    if (verdict.k_hat) {
        j["k_hat"] = *verdict.k_hat;
    } else {
        j["k_hat"] = nullptr;
    }
    j["alpha_ref"] = alpha_ref;
    j["alpha_glob"] = alpha_glob;
    j["rel_tol"] = rel_tol;
    j["relative_deviation"] = verdict.relative_deviation;
    j["evidence"] = ordered_json{{"n_frames", verdict.evidence.n_frames},
                                 {"alpha_min", verdict.evidence.alpha_min},
                                 {"alpha_q25", verdict.evidence.alpha_q25},
                                 {"alpha_median", verdict.evidence.alpha_median},
                                 {"alpha_q75", verdict.evidence.alpha_q75},
                                 {"alpha_max", verdict.evidence.alpha_max}};
    return j.dump(2) + "\n";
}

std::string eval_grid_to_json(const std::vector<EvalReport>& cells) {
    ordered_json j;
    j["schema_version"] = kReportSchemaVersion;
    j["tool"] = tool_block();
    j["cells"] = ordered_json::array();
    for (const EvalReport& cell : cells) {
        ordered_json c;
        c["patch_size"] = cell.params.patch_size;
        c["max_angle_deg"] = cell.params.max_angle_deg;
        c["subsets"] = ordered_json::array();
        for (const SubsetMae& subset : cell.subsets) {
            c["subsets"].push_back({{"subset", subset.subset},
                                    {"mae", subset.mae},
                                    {"n_clips", subset.n_clips}});
        }
        c["average_mae"] = cell.average_mae;
        c["n_failed_rows"] = cell.n_failed_rows;
        c["clips"] = ordered_json::array();
        for (const ClipResult& clip : cell.clips) {
            ordered_json row;
            row["clip_id"] = clip.clip_id;
            row["subset"] = clip.subset;
            row["alpha_gt"] = clip.alpha_gt;
            if (clip.ok) {
                row["alpha_est"] = clip.alpha_est;
                row["n_frames_used"] = clip.n_frames_used;
                row["n_frames_total"] = clip.n_frames_total;
            } else {
                row["error"] = clip.error;
            }
            c["clips"].push_back(std::move(row));
        }
        j["cells"].push_back(std::move(c));
    }
    return j.dump(2) + "\n";
}

std::string eval_grid_to_csv(const std::vector<EvalReport>& cells) {
    std::ostringstream out;
    out << "patch_size,max_angle_deg,subset,mae,n_clips\n";
    for (const EvalReport& cell : cells) {
        for (const SubsetMae& subset : cell.subsets) {
            out << cell.params.patch_size << "," << cell.params.max_angle_deg << ","
                << subset.subset << "," << subset.mae << "," << subset.n_clips << "\n";
        }
        out << cell.params.patch_size << "," << cell.params.max_angle_deg << ",average,"
            << cell.average_mae << "," << (cell.clips.size() - cell.n_failed_rows) << "\n";
    }
    return out.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open " + path.string() + " for writing");
    out << text;
    if (!out) throw Error("write failed for " + path.string());
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    if (in.bad()) throw Error("read failed for " + path.string());
    return buffer.str();
}

}  // namespace exfrac
