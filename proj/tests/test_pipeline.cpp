#include <doctest.h>

#include <algorithm>
#include <fstream>

#include "freespace/io.hpp"
#include "freespace/maskgen.hpp"
#include "freespace/pipeline.hpp"
#include "freespace/synthetic.hpp"
#include "test_util.hpp"

using namespace freespace;
namespace fs = std::filesystem;

namespace {

// Writes n small synthetic scenes as <dir>/images/scene_i.png and
// <dir>/gt/scene_i.png.
void write_scenes(const fs::path& dir, int n, std::uint64_t seed = 500)
{
    fs::create_directories(dir / "images");
    fs::create_directories(dir / "gt");
    synthetic::SceneOptions opts;
    opts.width = 128;
    opts.height = 64;
    for (int i = 0; i < n; i++)
    {
        const auto scene = synthetic::make_scene(opts, seed + static_cast<std::uint64_t>(i));
        const std::string name = "scene_" + std::to_string(i) + ".png";
        write_image(dir / "images" / name, scene.image);
        write_mask(dir / "gt" / name, scene.ground_truth);
    }
}

PipelineConfig config_for(const testutil::TempDir& dir, const std::string& out = "out")
{
    PipelineConfig cfg;
    cfg.images = dir / "images";
    cfg.output = dir / out;
    cfg.ground_truth = dir / "gt";
    return cfg;
}

} // namespace

TEST_CASE("config: keys, comments and errors")
{
    testutil::TempDir dir("cfg");
    std::ofstream(dir / "run.cfg") << "# comment\nk = 6\nbatch_size=12  # trailing\n\nmethod = raw_overlap\nseed = 9\nfeatures = fallback\n";
    PipelineConfig cfg;
    load_config_file(cfg, dir / "run.cfg");
    CHECK(cfg.prior.k == 6);
    CHECK(cfg.prior.batch_size == 12);
    CHECK(cfg.prior.seed == 9);
    CHECK(cfg.method == Method::kRawOverlap);
    CHECK(cfg.features.empty());

    CHECK_THROWS_AS(set_config_value(cfg, "clusters", "3"), std::invalid_argument);
    CHECK_THROWS_AS(set_config_value(cfg, "k", "three"), std::invalid_argument);
    CHECK_THROWS_AS(set_config_value(cfg, "k", "3x"), std::invalid_argument);
    CHECK_THROWS_AS(set_config_value(cfg, "method", "magic"), std::invalid_argument);
    std::ofstream(dir / "bad.cfg") << "k 4\n";
    CHECK_THROWS_AS(load_config_file(cfg, dir / "bad.cfg"), std::invalid_argument);
    CHECK_THROWS_AS(load_config_file(cfg, dir / "missing.cfg"), std::runtime_error);

    const auto j = config_to_json(cfg);
    CHECK(j.at("k") == 6);
    CHECK(j.at("method") == "raw_overlap");
}

TEST_CASE("generate: masks cover the road and reruns are byte-identical")
{
    testutil::TempDir dir("gen");
    write_scenes(dir.path(), 4);
    PipelineConfig cfg = config_for(dir);
    const GenerateReport report = run_generate(cfg);
    CHECK(report.failures.empty());
    REQUIRE(report.manifest.at("images").size() == 4);
    CHECK(report.manifest.at("config").at("k") == 4);

    std::uint64_t road = 0, covered = 0;
    for (const fs::path& gt_file : list_png_files(dir / "gt"))
    {
        const BinaryMask gt = load_mask(gt_file);
        const BinaryMask pred = load_mask(cfg.output / gt_file.filename());
        for (std::size_t p = 0; p < gt.pixel_count(); p++)
        {
            if (gt.labels()[p] != MaskLabel::kFree)
                continue;
            road++;
            covered += pred.labels()[p] == MaskLabel::kFree;
        }
    }
    CHECK(static_cast<double>(covered) >= 0.9 * static_cast<double>(road));

    PipelineConfig again = config_for(dir, "out2");
    again.workers = 3;
    run_generate(again);
    for (const fs::path& f : list_png_files(cfg.output))
        CHECK(read_file_bytes(f) == read_file_bytes(again.output / f.filename()));
}

TEST_CASE("generate: every method produces full-size masks")
{
    std::vector<PipelineInput> inputs;
    synthetic::SceneOptions opts;
    opts.width = 96;
    opts.height = 48;
    for (int i = 0; i < 3; i++)
        inputs.push_back({"img" + std::to_string(i), synthetic::make_scene(opts, 40 + static_cast<std::uint64_t>(i)).image, std::nullopt});
    for (Method m : {Method::kSuperpixel, Method::kRaw, Method::kRawOverlap})
    {
        PipelineConfig cfg;
        cfg.method = m;
        const auto out = generate_masks(inputs, cfg);
        REQUIRE(out.size() == 3);
        for (const auto& o : out)
        {
            CHECK(o.mask.width() == 96);
            CHECK(o.mask.height() == 48);
            CHECK(o.mask.count(MaskLabel::kFree) > 0);
            CHECK(o.segment_count > 0);
        }
        CHECK(method_from_string(to_string(m)) == m);
    }
}

TEST_CASE("generate: input failures")
{
    testutil::TempDir dir("genfail");
    fs::create_directories(dir / "images");
    PipelineConfig cfg = config_for(dir);
    CHECK_THROWS_AS(run_generate(cfg), IoError);
    CHECK_FALSE(fs::exists(cfg.output / "manifest.json"));

    cfg.images = dir / "nowhere";
    CHECK_THROWS_AS(run_generate(cfg), IoError);

    // One of two images lacks its feature file.
    testutil::TempDir dir2("genpartial");
    write_scenes(dir2.path(), 2);
    fs::create_directories(dir2 / "features");
    write_feature_map(dir2 / "features" / "scene_0.fmp1", FeatureMap(3, 8, 16, std::vector<float>(3 * 8 * 16, 1.0f)));
    PipelineConfig partial = config_for(dir2);
    partial.features = dir2 / "features";
    partial.prior.k = 2;
    const GenerateReport report = run_generate(partial);
    REQUIRE(report.failures.size() == 1);
    CHECK(report.failures[0].find("scene_1.png") == 0);
    CHECK(fs::exists(partial.output / "scene_0.png"));
    CHECK_FALSE(fs::exists(partial.output / "scene_1.png"));
    CHECK(report.manifest.at("failures").size() == 1);
}

TEST_CASE("evaluate")
{
    testutil::TempDir dir("eval");
    write_scenes(dir.path(), 3);

    const auto same = run_evaluate(dir / "gt", dir / "gt");
    CHECK(same.at("dataset").at("iou") == 1.0);
    CHECK(same.at("per_image").size() == 3);

    // Bottom-half baseline against the synthetic ground truth, checked
    // against counts taken straight from the ground-truth files.
    fs::create_directories(dir / "half");
    std::uint64_t tp = 0, fp = 0, fn = 0;
    for (const fs::path& f : list_png_files(dir / "gt"))
    {
        const BinaryMask gt = load_mask(f);
        write_mask(dir / "half" / f.filename(), bottom_half_mask(gt.width(), gt.height()));
        for (int y = 0; y < gt.height(); y++)
            for (int x = 0; x < gt.width(); x++)
            {
                const bool g = gt.at(x, y) == MaskLabel::kFree, p = y >= (gt.height() + 1) / 2;
                tp += g && p;
                fp += p && !g;
                fn += g && !p;
            }
    }
    const auto half = run_evaluate(dir / "half", dir / "gt");
    CHECK(half.at("dataset").at("iou").get<double>() == doctest::Approx(double(tp) / double(tp + fp + fn)));

    write_mask(dir / "half" / "extra.png", BinaryMask(4, 4));
    CHECK_THROWS_AS(run_evaluate(dir / "half", dir / "gt"), IoError);
    CHECK_THROWS_AS(run_evaluate(dir / "gt", dir / "gt", "coco"), std::invalid_argument);
}

TEST_CASE("evaluate: cityscapes label ids")
{
    testutil::TempDir dir("evalcs");
    fs::create_directories(dir / "pred");
    fs::create_directories(dir / "gt");
    CHECK(pairing_key("aachen_000000_000019_leftImg8bit.png") == "aachen_000000_000019");
    CHECK(pairing_key("aachen_000000_000019_gtFine_labelIds.png") == "aachen_000000_000019");
    write_mask(dir / "pred" / "a_000000_000001_leftImg8bit.png", BinaryMask(3, 1, MaskLabel::kFree));
    write_gray8(dir / "gt" / "a_000000_000001_gtFine_labelIds.png", {3, 1, {7, 26, 0}});
    write_gray8(dir / "gt" / "a_000000_000001_gtFine_color.png", {3, 1, {1, 2, 3}});
    const auto m = run_evaluate(dir / "pred", dir / "gt", "cityscapes");
    CHECK(m.at("dataset").at("tp") == 1);
    CHECK(m.at("dataset").at("fp") == 1);
    CHECK(m.at("dataset").at("iou") == 0.5);
}

TEST_CASE("sweep")
{
    testutil::TempDir dir("sweep");
    write_scenes(dir.path(), 3);
    PipelineConfig cfg = config_for(dir);

    const auto rows = run_sweep(cfg, "clusters", {"2", "4", "8"});
    REQUIRE(rows.size() == 3);
    CHECK(fs::exists(cfg.output / "clusters_8" / "manifest.json"));

    // A single-value sweep equals a direct run with that value.
    PipelineConfig direct = config_for(dir, "direct");
    direct.prior.k = 4;
    run_generate(direct);
    const auto m = run_evaluate(direct.output, dir / "gt");
    CHECK(rows[1].dataset.tp == m.at("dataset").at("tp").get<std::uint64_t>());
    CHECK(rows[1].dataset.iou == m.at("dataset").at("iou").get<double>());

    const std::string csv = sweep_to_csv("clusters", rows);
    CHECK(csv.rfind("clusters,iou,precision,recall,tp,fp,fn\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 4);
    CHECK(sweep_to_json("clusters", rows).at("values").size() == 3);

    CHECK_THROWS_AS(run_sweep(cfg, "sigma", {"1"}), std::invalid_argument);
}
