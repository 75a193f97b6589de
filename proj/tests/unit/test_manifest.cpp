#include <cstdio>
#include <fstream>

#include "doctest.h"
#include "exfrac/clip_store.hpp"
#include "exfrac/field_io.hpp"
#include "exfrac/manifest.hpp"
#include "exfrac/report.hpp"
#include "support/temp_dir.hpp"

using namespace exfrac;

namespace {

// Writes a tiny exact clip directory and returns the relative manifest row.
std::string make_clip_row(const std::filesystem::path& base, const std::string& id,
                          double alpha, Vec2 velocity) {
    SynthConfig config;
    config.width = 40;
    config.height = 40;
    config.velocity = velocity;
    config.alpha = alpha;
    config.n_frames = 4;
    config.supersamples = 2;
    const SynthClip clip = render_clip(config);

    ClipMeta meta;
    meta.clip_id = id;
    meta.config = config;
    meta.apparent_alpha = alpha;
    write_clip_dir(base / id, clip, meta);

    std::string frames;
    for (std::size_t i = 0; i < clip.fields.size(); ++i) {
        char name[16];
        std::snprintf(name, sizeof(name), "%04zu.flo", i);
        if (!frames.empty()) frames += ",";
        frames += "{\"flow_path\":\"" + id + "/flow/" + name + "\",\"blur_path\":\"" + id +
                  "/blur/" + name + "\"}";
    }
    return "{\"clip_id\":\"" + id + "\",\"subset\":\"synthetic\",\"alpha_gt\":" +
           std::to_string(alpha) + ",\"frames\":[" + frames + "]}";
}

}  // namespace

TEST_SUITE("manifest") {

TEST_CASE("exact clips evaluate to zero MAE") {
    testsupport::TempDir tmp("manifest");
    std::ofstream manifest(tmp.path() / "manifest.jsonl");
    manifest << make_clip_row(tmp.path(), "a", 0.25, {10, 0}) << "\n";
    manifest << make_clip_row(tmp.path(), "b", 0.5, {10, 0}) << "\n";
    manifest << make_clip_row(tmp.path(), "c", 0.25, {6, 8}) << "\n";
    manifest.close();

    const auto clips = load_manifest(tmp.path() / "manifest.jsonl");
    REQUIRE(clips.size() == 3);
    CHECK(clips[0].clip_id == "a");
    CHECK(clips[0].frames.size() == 3);

    const EvalReport report = evaluate_manifest(clips, EstimationParams{30, 5.0, 1.0});
    CHECK(report.n_failed_rows == 0);
    REQUIRE(report.subsets.size() == 1);
    CHECK(report.subsets[0].subset == "synthetic");
    CHECK(report.subsets[0].n_clips == 3);
    CHECK(report.subsets[0].mae == 0.0);
    CHECK(report.average_mae == 0.0);
}

TEST_CASE("a missing file fails only its own row") {
    testsupport::TempDir tmp("manifest_missing");
    std::ofstream manifest(tmp.path() / "manifest.jsonl");
    manifest << make_clip_row(tmp.path(), "good", 0.25, {10, 0}) << "\n";
    manifest << "{\"clip_id\":\"bad\",\"subset\":\"synthetic\",\"alpha_gt\":0.25,"
                "\"frames\":[{\"flow_path\":\"absent.flo\",\"blur_path\":\"absent.flo\"}]}\n";
    manifest.close();

    const auto clips = load_manifest(tmp.path() / "manifest.jsonl");
    const EvalReport report = evaluate_manifest(clips, EstimationParams{30, 5.0, 1.0});
    CHECK(report.n_failed_rows == 1);
    REQUIRE(report.clips.size() == 2);
    CHECK(report.clips[0].ok);
    CHECK_FALSE(report.clips[1].ok);
    CHECK_FALSE(report.clips[1].error.empty());
    REQUIRE(report.subsets.size() == 1);
    CHECK(report.subsets[0].n_clips == 1);
}

TEST_CASE("an estimation failure is recorded as a failed row") {
    testsupport::TempDir tmp("manifest_estfail");
    const Vec2Field flow = Vec2Field::constant(40, 40, {10, 0});
    const Vec2Field dead = Vec2Field::constant(40, 40, {0, 0});
    write_vector_field_file(tmp.path() / "flow.flo", flow);
    write_vector_field_file(tmp.path() / "blur.flo", dead);
    std::ofstream manifest(tmp.path() / "manifest.jsonl");
    manifest << "{\"clip_id\":\"dead\",\"subset\":\"synthetic\",\"alpha_gt\":0.25,"
                "\"frames\":[{\"flow_path\":\"flow.flo\",\"blur_path\":\"blur.flo\"}]}\n";
    manifest.close();

    const auto clips = load_manifest(tmp.path() / "manifest.jsonl");
    const EvalReport report = evaluate_manifest(clips, EstimationParams{30, 5.0, 1.0});
    CHECK(report.n_failed_rows == 1);
    CHECK(report.subsets.empty());
}

TEST_CASE("manifest loader diagnostics") {
    testsupport::TempDir tmp("manifest_load");
    CHECK_THROWS_AS(load_manifest(tmp.path() / "missing.jsonl"), Error);

    {
        std::ofstream out(tmp.path() / "bad.jsonl");
        out << "{not json}\n";
    }
    try {
        load_manifest(tmp.path() / "bad.jsonl");
        FAIL("expected FormatError");
    } catch (const FormatError& e) {
        CHECK(std::string(e.what()).find("line 1") != std::string::npos);
    }

    {
        std::ofstream out(tmp.path() / "short.jsonl");
        out << "{\"clip_id\":\"x\"}\n";
    }
    CHECK_THROWS_AS(load_manifest(tmp.path() / "short.jsonl"), FormatError);

    {
        std::ofstream out(tmp.path() / "empty.jsonl");
        out << "\n\n";
    }
    CHECK_THROWS_AS(load_manifest(tmp.path() / "empty.jsonl"), FormatError);
}

TEST_CASE("sweep strings parse into the parameter grid") {
    const SweepSpec spec = SweepSpec::parse("D=10,20,30;phi=3,5,7");
    CHECK(spec.patch_sizes == std::vector<int>{10, 20, 30});
    CHECK(spec.max_angles_deg == std::vector<double>{3.0, 5.0, 7.0});

    const SweepSpec single = SweepSpec::parse("D=30;phi=5");
    CHECK(single.patch_sizes.size() == 1);
}

TEST_CASE("malformed sweep strings carry a diagnostic") {
    CHECK_THROWS_AS(SweepSpec::parse("D=10"), ParamError);
    CHECK_THROWS_AS(SweepSpec::parse("D=10;phi="), ParamError);
    CHECK_THROWS_AS(SweepSpec::parse("D=a;phi=5"), ParamError);
    CHECK_THROWS_AS(SweepSpec::parse("Q=3;phi=5"), ParamError);
    CHECK_THROWS_AS(SweepSpec::parse("D=2.5;phi=5"), ParamError);
    CHECK_THROWS_AS(SweepSpec::parse(""), ParamError);
    try {
        SweepSpec::parse("D=10;phi=x");
        FAIL("expected ParamError");
    } catch (const ParamError& e) {
        CHECK(std::string(e.what()).find("phi") != std::string::npos);
    }
}

TEST_CASE("clip directories round-trip through the store") {
    testsupport::TempDir tmp("store");
    SynthConfig config;
    config.width = 40;
    config.height = 40;
    config.velocity = {10, 0};
    config.alpha = 0.25;
    config.n_frames = 4;
    config.supersamples = 2;
    const SynthClip clip = render_clip(config);

    ClipMeta meta;
    meta.clip_id = "roundtrip";
    meta.config = config;
    meta.apparent_alpha = 0.25;
    write_clip_dir(tmp.path() / "clip", clip, meta);

    ClipMeta back_meta;
    const SynthClip back = read_clip_dir(tmp.path() / "clip", &back_meta);
    CHECK(back.frames.size() == clip.frames.size());
    CHECK(back.fields.size() == clip.fields.size());
    CHECK(back.apparent_alpha == 0.25);
    CHECK(back_meta.clip_id == "roundtrip");
    CHECK(back_meta.config.n_frames == 4);
    CHECK_FALSE(back_meta.tamper.has_value());
    CHECK(back.fields[0].flow.at(3, 3) == Vec2{10.0, 0.0});

    // the emitted manifest is itself consumable
    const auto clips = load_manifest(tmp.path() / "clip" / "manifest.jsonl");
    REQUIRE(clips.size() == 1);
    const EvalReport report = evaluate_manifest(clips, EstimationParams{30, 5.0, 1.0});
    CHECK(report.subsets.at(0).mae == 0.0);
}

TEST_CASE("run reports survive a serialization round trip") {
    RunReport report;
    report.params = EstimationParams{30, 5.0, 1.0};
    FrameEstimate f;
    f.frame_index = 2;
    f.alpha_patch = 0.25;
    f.patch = {3, 4, 900};
    f.n_valid = 900;
    report.clip.frames.push_back(f);
    report.clip.alpha_glob = 0.25;
    report.clip.n_frames_used = 1;
    report.clip.n_frames_total = 2;
    report.warnings.push_back("frame 0 skipped: no valid positions");
    report.total_ms = 12.5;

    const RunReport back = run_report_from_json(run_report_to_json(report));
    CHECK(back.params.patch_size == 30);
    CHECK(back.clip.alpha_glob == 0.25);
    REQUIRE(back.clip.frames.size() == 1);
    CHECK(back.clip.frames[0].frame_index == 2);
    CHECK(back.clip.frames[0].patch.y0 == 4);
    CHECK(back.warnings.size() == 1);

    CHECK_THROWS_AS(run_report_from_json("{"), FormatError);
    CHECK_THROWS_AS(run_report_from_json("{}"), FormatError);
}

}  // TEST_SUITE
