#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <sys/wait.h>

#include <json.hpp>

#include "freespace/io.hpp"
#include "freespace/synthetic.hpp"
#include "test_util.hpp"

using namespace freespace;
namespace fs = std::filesystem;

namespace {

int run_cli(const std::string& args)
{
    const std::string cmd = std::string(FREESPACE_CLI_PATH) + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

void write_scenes(const fs::path& dir, int n)
{
    fs::create_directories(dir / "images");
    fs::create_directories(dir / "gt");
    synthetic::SceneOptions opts;
    opts.width = 96;
    opts.height = 48;
    for (int i = 0; i < n; i++)
    {
        const auto scene = synthetic::make_scene(opts, 70 + static_cast<std::uint64_t>(i));
        write_image(dir / "images" / ("s" + std::to_string(i) + ".png"), scene.image);
        write_mask(dir / "gt" / ("s" + std::to_string(i) + ".png"), scene.ground_truth);
    }
}

} // namespace

TEST_CASE("cli: usage errors exit 1")
{
    CHECK(run_cli("") == 1);
    CHECK(run_cli("frobnicate") == 1);
    CHECK(run_cli("generate --set nonsense_key=1") == 1);
    CHECK(run_cli("generate --set k=1 --set images=a --set output=b") == 1);
    CHECK(run_cli("--help") == 0);
}

TEST_CASE("cli: superpixels, features, generate, evaluate, overlay")
{
    testutil::TempDir dir("cli");
    const fs::path d = dir.path();
    write_scenes(d, 3);

    CHECK(run_cli("superpixels " + (d / "images/s0.png").string() + " " + (d / "labels.png").string() + " --overlay " +
                  (d / "bounds.png").string()) == 0);
    CHECK(fs::exists(d / "labels.png"));
    CHECK(load_image(d / "bounds.png").width() == 96);

    CHECK(run_cli("features-fallback " + (d / "images").string() + " " + (d / "feats").string() + " --stride 8") == 0);
    const FeatureMap f = load_feature_map(d / "feats/s1.fmp1");
    CHECK(f.height() == 6);
    CHECK(f.width() == 12);

    const std::string common = " --set images=" + (d / "images").string() + " --set features=" + (d / "feats").string();
    CHECK(run_cli("generate" + common + " --set output=" + (d / "pred").string()) == 0);
    CHECK(fs::exists(d / "pred/manifest.json"));
    CHECK(load_mask(d / "pred/s2.png").width() == 96);

    std::ofstream(d / "run.cfg") << "images = " << (d / "images").string() << "\noutput = " << (d / "pred_cfg").string() << "\n";
    CHECK(run_cli("generate -c " + (d / "run.cfg").string() + " --set features=" + (d / "feats").string()) == 0);
    CHECK(read_file_bytes(d / "pred/s0.png") == read_file_bytes(d / "pred_cfg/s0.png"));

    CHECK(run_cli("evaluate " + (d / "pred").string() + " " + (d / "gt").string() + " -o " + (d / "metrics.json").string()) == 0);
    std::ifstream metrics(d / "metrics.json");
    const auto j = nlohmann::json::parse(metrics);
    CHECK(j.at("per_image").size() == 3);
    CHECK(j.at("dataset").at("iou").get<double>() > 0.5);

    CHECK(run_cli("overlay " + (d / "images/s0.png").string() + " " + (d / "pred/s0.png").string() + " " + (d / "ov.png").string()) == 0);
    CHECK(load_image(d / "ov.png").height() == 48);

    // Missing feature file for one image: partial failure.
    fs::remove(d / "feats/s1.fmp1");
    CHECK(run_cli("generate" + common + " --set output=" + (d / "pred_partial").string()) == 2);
    CHECK(fs::exists(d / "pred_partial/s0.png"));

    // Empty image directory.
    fs::create_directories(d / "empty");
    CHECK(run_cli("generate --set images=" + (d / "empty").string() + " --set output=" + (d / "x").string()) == 2);
    CHECK_FALSE(fs::exists(d / "x/manifest.json"));

    fs::create_directories(d / "gt_extra");
    fs::copy(d / "gt", d / "gt_extra");
    write_mask(d / "gt_extra/zz.png", BinaryMask(2, 2));
    CHECK(run_cli("evaluate " + (d / "pred").string() + " " + (d / "gt_extra").string()) == 2);
}

TEST_CASE("cli: sweep")
{
    testutil::TempDir dir("clisweep");
    const fs::path d = dir.path();
    write_scenes(d, 2);
    const std::string common = " --set images=" + (d / "images").string() + " --set ground_truth=" + (d / "gt").string() +
                               " --set output=" + (d / "sweep").string();
    CHECK(run_cli("sweep" + common + " --axis batch_size --values 1 2") == 0);
    std::ifstream csv(d / "sweep/sweep_batch_size.csv");
    std::string line;
    int lines = 0;
    while (std::getline(csv, line))
        lines++;
    CHECK(lines == 3);
    CHECK(fs::exists(d / "sweep/sweep_batch_size.json"));
    CHECK(run_cli("sweep" + common + " --axis sigma --values 1") == 1);
}
