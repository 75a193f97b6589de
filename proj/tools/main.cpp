// exfrac: estimates a clip's exposure fraction (shutter angle) from dense
// optical-flow and linear-blur fields, generates synthetic ground-truth
// clips, simulates frame-deletion/interpolation tampering, and classifies
// clips against reference camera metadata.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "exfrac/clip_store.hpp"
#include "exfrac/estimator.hpp"
#include "exfrac/field_io.hpp"
#include "exfrac/forensics.hpp"
#include "exfrac/manifest.hpp"
#include "exfrac/report.hpp"
#include "exfrac/synth.hpp"
#include "exfrac/version.hpp"

namespace fs = std::filesystem;
using namespace exfrac;

namespace {

// Exit codes shared with scripted pipelines.
constexpr int kExitOk = 0;
constexpr int kExitError = 1;           // I/O, format or parameter error
constexpr int kExitEstimationFailed = 2;
constexpr int kExitDeletion = 3;
constexpr int kExitInterpolation = 4;
constexpr int kExitIndeterminate = 5;

struct EstimateOptions {
    std::string manifest_path;
    std::string flow_dir;
    std::string blur_dir;
    std::string out_path;
    EstimationParams params;
    int threads = 1;
};

std::vector<fs::path> list_flo_sorted(const fs::path& dir) {
    if (!fs::is_directory(dir)) throw Error("not a directory: " + dir.string());
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (entry.is_regular_file() && entry.path().extension() == ".flo") {
            files.push_back(entry.path());
        }
    }
    std::sort(files.begin(), files.end());
    return files;
}

// Pairs flow/blur files by sorted filename; unmatched stems are listed.
std::vector<std::pair<fs::path, fs::path>> pair_field_dirs(const fs::path& flow_dir,
                                                           const fs::path& blur_dir) {
    const std::vector<fs::path> flow_files = list_flo_sorted(flow_dir);
    const std::vector<fs::path> blur_files = list_flo_sorted(blur_dir);
    if (flow_files.size() != blur_files.size()) {
        std::set<std::string> flow_names;
        std::set<std::string> blur_names;
        for (const auto& p : flow_files) flow_names.insert(p.filename().string());
        for (const auto& p : blur_files) blur_names.insert(p.filename().string());
        std::string orphans;
        for (const auto& name : flow_names) {
            if (!blur_names.count(name)) orphans += "\n  flow without blur: " + name;
        }
        for (const auto& name : blur_names) {
            if (!flow_names.count(name)) orphans += "\n  blur without flow: " + name;
        }
        throw Error("unpaired field files (" + std::to_string(flow_files.size()) + " flow vs " +
                    std::to_string(blur_files.size()) + " blur):" + orphans);
    }
    std::vector<std::pair<fs::path, fs::path>> pairs;
    pairs.reserve(flow_files.size());
    for (std::size_t i = 0; i < flow_files.size(); ++i) {
        pairs.emplace_back(flow_files[i], blur_files[i]);
    }
    return pairs;
}

int run_estimate(const EstimateOptions& opt) {
    opt.params.validate();

    std::vector<FieldPair> pairs;
    if (!opt.manifest_path.empty()) {
        const std::vector<ManifestClip> clips = load_manifest(opt.manifest_path);
        if (clips.size() != 1) {
            throw ParamError("estimate expects a single-clip manifest (got " +
                             std::to_string(clips.size()) + " clips); use eval for batches");
        }
        for (const ManifestFramePair& frame : clips.front().frames) {
            FieldPair pair;
            pair.flow = read_vector_field_file(frame.flow_path);
            pair.blur = read_vector_field_file(frame.blur_path);
            pairs.push_back(std::move(pair));
        }
    } else {
        for (const auto& [flow_path, blur_path] : pair_field_dirs(opt.flow_dir, opt.blur_dir)) {
            FieldPair pair;
            pair.flow = read_vector_field_file(flow_path);
            pair.blur = read_vector_field_file(blur_path);
            pairs.push_back(std::move(pair));
        }
    }
    if (pairs.empty()) throw Error("no frame pairs found");

    const auto start = std::chrono::steady_clock::now();
    RunReport report;
    report.params = opt.params;
    report.clip = estimate_clip(pairs, opt.params, opt.threads);
    report.total_ms = std::chrono::duration<double, std::milli>(
                          std::chrono::steady_clock::now() - start)
                          .count();

    std::vector<bool> produced(pairs.size(), false);
    for (const FrameEstimate& f : report.clip.frames) produced[f.frame_index] = true;
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        if (!produced[i]) {
            report.warnings.push_back("frame " + std::to_string(i) +
                                      " skipped: no valid positions");
        }
    }

    const std::string json = run_report_to_json(report);
    if (opt.out_path.empty()) {
        std::cout << json;
    } else {
        write_text_file(opt.out_path, json);
    }
    return kExitOk;
}

Vec2 parse_velocity(const std::string& text) {
    const auto comma = text.find(',');
    if (comma == std::string::npos) {
        throw ParamError("velocity must be \"VX,VY\", got \"" + text + "\"");
    }
    try {
        std::size_t used_x = 0;
        std::size_t used_y = 0;
        const std::string xs = text.substr(0, comma);
        const std::string ys = text.substr(comma + 1);
        const double vx = std::stod(xs, &used_x);
        const double vy = std::stod(ys, &used_y);
        if (used_x != xs.size() || used_y != ys.size()) throw std::invalid_argument(text);
        return {vx, vy};
    } catch (const std::exception&) {
        throw ParamError("velocity must be \"VX,VY\", got \"" + text + "\"");
    }
}

std::pair<int, int> parse_size(const std::string& text) {
    const auto x = text.find('x');
    if (x == std::string::npos) {
        throw ParamError("size must be \"WxH\", got \"" + text + "\"");
    }
    try {
        const int w = std::stoi(text.substr(0, x));
        const int h = std::stoi(text.substr(x + 1));
        return {w, h};
    } catch (const std::exception&) {
        throw ParamError("size must be \"WxH\", got \"" + text + "\"");
    }
}

struct SynthOptions {
    double alpha = 0.24;
    std::string velocity = "10,0";
    int n_frames = 30;
    std::string size = "320x240";
    std::uint64_t seed = 0;
    int supersamples = 64;
    double noise_sigma = 0.0;
    bool quantize = false;
    std::string out_dir;
};

int run_synth(const SynthOptions& opt) {
    SynthConfig config;
    config.alpha = opt.alpha;
    config.velocity = parse_velocity(opt.velocity);
    config.n_frames = opt.n_frames;
    std::tie(config.width, config.height) = parse_size(opt.size);
    config.seed = opt.seed;
    config.supersamples = opt.supersamples;
    config.noise_sigma = opt.noise_sigma;

    SynthClip clip = render_clip(config);
    if (opt.quantize) {
        for (FieldPair& pair : clip.fields) pair.blur = quantize_blur(pair.blur);
    }

    ClipMeta meta;
    meta.clip_id = "synth_seed" + std::to_string(config.seed);
    meta.config = config;
    meta.quantized_blur = opt.quantize;
    meta.apparent_alpha = clip.apparent_alpha;
    write_clip_dir(opt.out_dir, clip, meta);
    std::cout << "wrote clip " << meta.clip_id << " (" << clip.frames.size() << " frames, "
              << clip.fields.size() << " field pairs) to " << opt.out_dir << "\n";
    return kExitOk;
}

struct TamperOptions {
    std::string mode;
    int factor = 1;
    std::string in_dir;
    std::string out_dir;
};

int run_tamper(const TamperOptions& opt) {
    ClipMeta meta;
    const SynthClip clip = read_clip_dir(opt.in_dir, &meta);

    SynthClip tampered;
    if (opt.mode == "delete") {
        tampered = subsample_clip(clip, opt.factor);
    } else if (opt.mode == "interpolate") {
        tampered = interpolate_clip(clip, opt.factor);
    } else {
        throw ParamError("mode must be delete or interpolate, got \"" + opt.mode + "\"");
    }

    meta.apparent_alpha = tampered.apparent_alpha;
    meta.tamper = TamperRecord{opt.mode, opt.factor};
    write_clip_dir(opt.out_dir, tampered, meta);
    std::cout << "wrote " << opt.mode << " x" << opt.factor << " clip ("
              << tampered.frames.size() << " frames) to " << opt.out_dir
              << ", apparent alpha " << tampered.apparent_alpha << "\n";
    return kExitOk;
}

struct DetectOptions {
    std::string report_path;
    double alpha_ref = 0.0;
    double rel_tol = 0.25;
    std::string out_path;
};

int run_detect(const DetectOptions& opt) {
    const RunReport report = run_report_from_json(read_text_file(opt.report_path));
    const TamperVerdict verdict = detect_tamper(report.clip, opt.alpha_ref, opt.rel_tol);

    const std::string json =
        verdict_to_json(verdict, opt.alpha_ref, report.clip.alpha_glob, opt.rel_tol);
    std::cout << json;
    if (!opt.out_path.empty()) write_text_file(opt.out_path, json);

    switch (verdict.verdict) {
        case Verdict::consistent: return kExitOk;
        case Verdict::deletion: return kExitDeletion;
        case Verdict::interpolation: return kExitInterpolation;
        case Verdict::indeterminate: return kExitIndeterminate;
    }
    return kExitIndeterminate;
}

struct EvalOptions {
    std::string manifest_path;
    std::string sweep = "D=30;phi=5";
    std::string out_path;
    int threads = 1;
};

int run_eval(const EvalOptions& opt) {
    const SweepSpec sweep = SweepSpec::parse(opt.sweep);
    const std::vector<ManifestClip> clips = load_manifest(opt.manifest_path);

    std::vector<EvalReport> cells;
    for (int patch_size : sweep.patch_sizes) {
        for (double angle : sweep.max_angles_deg) {
            EstimationParams params;
            params.patch_size = patch_size;
            params.max_angle_deg = angle;
            cells.push_back(evaluate_manifest(clips, params, opt.threads));
        }
    }

    const std::string json = eval_grid_to_json(cells);
    if (opt.out_path.empty()) {
        std::cout << json;
    } else {
        write_text_file(opt.out_path, json);
        fs::path csv_path(opt.out_path);
        csv_path.replace_extension(".csv");
        write_text_file(csv_path, eval_grid_to_csv(cells));
    }

    bool any_ok = false;
    for (const EvalReport& cell : cells) {
        for (const ClipResult& clip : cell.clips) any_ok = any_ok || clip.ok;
    }
    if (!any_ok) {
        std::cerr << "error: every manifest row failed\n";
        return kExitError;
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exposure-fraction estimation and video-tamper forensics"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(kToolName) + " " + kVersion);

    EstimateOptions est;
    CLI::App* estimate = app.add_subcommand(
        "estimate", "estimate the exposure fraction of one clip from field files");
    estimate->add_option("--manifest", est.manifest_path, "single-clip JSONL manifest");
    estimate->add_option("--flow-dir", est.flow_dir, "directory of flow .flo files");
    estimate->add_option("--blur-dir", est.blur_dir, "directory of blur .flo files");
    estimate->add_option("-D,--patch-size", est.params.patch_size, "patch side in px")
        ->capture_default_str();
    estimate->add_option("--max-angle", est.params.max_angle_deg,
                         "max flow/blur angle in degrees")
        ->capture_default_str();
    estimate->add_option("--min-magnitude", est.params.min_magnitude,
                         "minimum vector magnitude in px")
        ->capture_default_str();
    estimate->add_option("--threads", est.threads, "worker threads")->capture_default_str();
    estimate->add_option("-o,--out", est.out_path, "report path (stdout when omitted)");

    SynthOptions synth;
    CLI::App* synth_cmd = app.add_subcommand(
        "synth", "render a synthetic uniform-motion clip with exact ground truth");
    synth_cmd->add_option("--alpha", synth.alpha, "exposure fraction in (0, 1]")->required();
    synth_cmd->add_option("--velocity", synth.velocity, "velocity \"VX,VY\" in px/frame")
        ->capture_default_str();
    synth_cmd->add_option("--frames", synth.n_frames, "frame count")->capture_default_str();
    synth_cmd->add_option("--size", synth.size, "frame size \"WxH\"")->capture_default_str();
    synth_cmd->add_option("--seed", synth.seed, "texture/noise seed")->capture_default_str();
    synth_cmd->add_option("--supersamples", synth.supersamples,
                          "temporal samples per exposure")
        ->capture_default_str();
    synth_cmd->add_option("--noise-sigma", synth.noise_sigma, "frame noise std dev")
        ->capture_default_str();
    synth_cmd->add_flag("--quantize-blur", synth.quantize,
                        "round blur fields to integer components");
    synth_cmd->add_option("-o,--out", synth.out_dir, "output clip directory")->required();

    TamperOptions tamper;
    CLI::App* tamper_cmd =
        app.add_subcommand("tamper", "simulate frame deletion or interpolation on a clip");
    tamper_cmd->add_option("--mode", tamper.mode, "delete or interpolate")->required();
    tamper_cmd->add_option("--factor", tamper.factor, "subsampling factor / multiplier")
        ->required();
    tamper_cmd->add_option("--in", tamper.in_dir, "input clip directory")->required();
    tamper_cmd->add_option("--out", tamper.out_dir, "output clip directory")->required();

    DetectOptions detect;
    CLI::App* detect_cmd = app.add_subcommand(
        "detect", "classify an estimation report against reference camera metadata");
    detect_cmd->add_option("--report", detect.report_path, "run report path")->required();
    detect_cmd->add_option("--alpha-ref", detect.alpha_ref, "reference exposure fraction")
        ->required();
    detect_cmd->add_option("--rel-tol", detect.rel_tol, "relative tolerance")
        ->capture_default_str();
    detect_cmd->add_option("-o,--out", detect.out_path, "verdict path (stdout always)");

    EvalOptions eval;
    CLI::App* eval_cmd =
        app.add_subcommand("eval", "sweep parameters over a manifest and report MAE");
    eval_cmd->add_option("--manifest", eval.manifest_path, "JSONL manifest")->required();
    eval_cmd->add_option("--sweep", eval.sweep, "grid, e.g. \"D=10,20,30;phi=3,5,7\"")
        ->capture_default_str();
    eval_cmd->add_option("--threads", eval.threads, "worker threads")->capture_default_str();
    eval_cmd->add_option("-o,--out", eval.out_path, "JSON report path; CSV written alongside");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitError;
    }

    try {
        if (estimate->parsed()) {
            const bool manifest_mode = !est.manifest_path.empty();
            const bool dir_mode = !est.flow_dir.empty() && !est.blur_dir.empty();
            if (manifest_mode == dir_mode) {
                throw ParamError("pass either --manifest or both --flow-dir and --blur-dir");
            }
            return run_estimate(est);
        }
        if (synth_cmd->parsed()) return run_synth(synth);
        if (tamper_cmd->parsed()) return run_tamper(tamper);
        if (detect_cmd->parsed()) return run_detect(detect);
        if (eval_cmd->parsed()) return run_eval(eval);
    } catch (const EstimationFailedError& e) {
        std::cerr << "error: " << e.what() << "\n";
        for (const std::string& line : e.diagnostics()) std::cerr << "  " << line << "\n";
        return kExitEstimationFailed;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitError;
    }
    return kExitError;
}
