#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "freespace/fallback_features.hpp"
#include "freespace/io.hpp"
#include "freespace/maskgen.hpp"
#include "freespace/pipeline.hpp"
#include "freespace/superpix.hpp"

namespace fs = std::filesystem;
using namespace freespace;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitPartial = 2;
constexpr int kExitInternal = 3;

// Flags given on the command line as key=value override the config file.
struct ConfigArgs
{
    std::string config_file;
    std::vector<std::string> overrides;
};

void add_config_options(CLI::App* cmd, ConfigArgs& args)
{
    cmd->add_option("-c,--config", args.config_file, "key = value config file");
    cmd->add_option("-s,--set", args.overrides, "override a config key, e.g. --set k=4")->take_all();
}

PipelineConfig resolve_config(const ConfigArgs& args)
{
    PipelineConfig cfg;
    if (!args.config_file.empty())
        load_config_file(cfg, args.config_file);
    for (const std::string& kv : args.overrides)
    {
        const auto eq = kv.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("--set expects key=value, got '" + kv + "'");
        set_config_value(cfg, kv.substr(0, eq), kv.substr(eq + 1));
    }
    cfg.validate();
    return cfg;
}

void write_text(const fs::path& path, const std::string& text)
{
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("cannot write " + path.string());
    out << text;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Free-space mask generation from unannotated driving images"};
    app.require_subcommand(1);

    // superpixels
    std::string sp_image, sp_labels, sp_overlay;
    FHParams fh;
    auto* sp_cmd = app.add_subcommand("superpixels", "Segment one image; write a 16-bit label PNG");
    sp_cmd->add_option("image", sp_image, "input PNG")->required();
    sp_cmd->add_option("labels", sp_labels, "output 16-bit label PNG")->required();
    sp_cmd->add_option("--overlay", sp_overlay, "also write a boundary overlay PNG");
    sp_cmd->add_option("--scale", fh.scale, "merge threshold")->capture_default_str();
    sp_cmd->add_option("--smoothing-sigma", fh.smoothing_sigma, "Gaussian pre-smoothing")->capture_default_str();
    sp_cmd->add_option("--min-size", fh.min_size, "minimum segment size")->capture_default_str();

    // features-fallback
    std::string ff_images, ff_out;
    int ff_stride = 8;
    auto* ff_cmd = app.add_subcommand("features-fallback", "Write hand-crafted FMP1 feature maps for a directory of PNGs");
    ff_cmd->add_option("images", ff_images, "image directory")->required();
    ff_cmd->add_option("output", ff_out, "output directory for <stem>.fmp1")->required();
    ff_cmd->add_option("--stride", ff_stride, "cell size in pixels")->capture_default_str();

    // generate
    ConfigArgs gen_args;
    auto* gen_cmd = app.add_subcommand("generate", "Generate free-space masks and a manifest");
    add_config_options(gen_cmd, gen_args);

    // evaluate
    std::string ev_pred, ev_gt, ev_out, ev_format = "mask";
    auto* ev_cmd = app.add_subcommand("evaluate", "Score predicted masks against ground truth");
    ev_cmd->add_option("pred", ev_pred, "prediction mask directory")->required();
    ev_cmd->add_option("gt", ev_gt, "ground-truth directory")->required();
    ev_cmd->add_option("-o,--output", ev_out, "metrics JSON path (default: stdout)");
    ev_cmd->add_option("--gt-format", ev_format, "mask | cityscapes")->check(CLI::IsMember({"mask", "cityscapes"}))->capture_default_str();

    // sweep
    ConfigArgs sw_args;
    std::string sw_axis;
    std::vector<std::string> sw_values;
    auto* sw_cmd = app.add_subcommand("sweep", "Parameter sensitivity: generate + evaluate per value");
    add_config_options(sw_cmd, sw_args);
    sw_cmd->add_option("--axis", sw_axis, "clusters | batch_size | scale")->required();
    sw_cmd->add_option("--values", sw_values, "values to try")->required();

    // overlay
    std::string ov_image, ov_mask, ov_out;
    auto* ov_cmd = app.add_subcommand("overlay", "Blend a mask's free-space region in red over its image");
    ov_cmd->add_option("image", ov_image)->required();
    ov_cmd->add_option("mask", ov_mask)->required();
    ov_cmd->add_option("output", ov_out)->required();

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError& e)
    {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try
    {
        if (*sp_cmd)
        {
            const ImageRGB image = load_image(sp_image);
            const SuperpixelMap sp = segment(image, fh);
            if (sp.segment_count() > 65535)
                throw std::runtime_error("too many segments for a 16-bit label PNG: " + std::to_string(sp.segment_count()));
            std::vector<std::uint16_t> labels(sp.labels().begin(), sp.labels().end());
            write_gray16(sp_labels, sp.width(), sp.height(), labels);
            if (!sp_overlay.empty())
                write_image(sp_overlay, boundary_overlay(image, sp));
            std::cout << sp.segment_count() << " segments\n";
            return kExitOk;
        }
        if (*ff_cmd)
        {
            fs::create_directories(ff_out);
            int failures = 0;
            for (const fs::path& file : list_png_files(ff_images))
            {
                try
                {
                    const FeatureMap fmap = handcrafted_feature_map(load_image(file), ff_stride, file.stem().string());
                    write_feature_map(fs::path(ff_out) / (file.stem().string() + ".fmp1"), fmap);
                }
                catch (const IoError& e)
                {
                    std::cerr << file.filename().string() << ": " << e.what() << "\n";
                    failures++;
                }
            }
            return failures ? kExitPartial : kExitOk;
        }
        if (*gen_cmd)
        {
            PipelineConfig cfg;
            try
            {
                cfg = resolve_config(gen_args);
            }
            catch (const std::exception& e)
            {
                std::cerr << "config: " << e.what() << "\n";
                return kExitUsage;
            }
            if (cfg.images.empty() || cfg.output.empty())
            {
                std::cerr << "generate needs images and output\n";
                return kExitUsage;
            }
            const GenerateReport report = run_generate(cfg);
            for (const std::string& f : report.failures)
                std::cerr << f << "\n";
            std::cout << report.manifest["images"].size() << " masks written to " << cfg.output.string() << "\n";
            return report.failures.empty() ? kExitOk : kExitPartial;
        }
        if (*ev_cmd)
        {
            const nlohmann::json metrics = run_evaluate(ev_pred, ev_gt, ev_format);
            if (ev_out.empty())
                std::cout << metrics.dump(2) << "\n";
            else
                write_text(ev_out, metrics.dump(2) + "\n");
            std::cerr << "dataset iou " << metrics["dataset"]["iou"].get<double>() << "\n";
            return kExitOk;
        }
        if (*sw_cmd)
        {
            PipelineConfig cfg;
            try
            {
                cfg = resolve_config(sw_args);
                if (sw_axis != "clusters" && sw_axis != "batch_size" && sw_axis != "scale")
                    throw std::invalid_argument("unknown sweep axis '" + sw_axis + "' (expected clusters | batch_size | scale)");
                if (cfg.images.empty() || cfg.output.empty() || cfg.ground_truth.empty())
                    throw std::invalid_argument("sweep needs images, output and ground_truth");
            }
            catch (const std::exception& e)
            {
                std::cerr << "sweep: " << e.what() << "\n";
                return kExitUsage;
            }
            const auto rows = run_sweep(cfg, sw_axis, sw_values);
            fs::create_directories(cfg.output);
            const std::string csv = sweep_to_csv(sw_axis, rows);
            write_text(cfg.output / ("sweep_" + sw_axis + ".csv"), csv);
            write_text(cfg.output / ("sweep_" + sw_axis + ".json"), sweep_to_json(sw_axis, rows).dump(2) + "\n");
            std::cout << csv;
            return kExitOk;
        }
        if (*ov_cmd)
        {
            write_image(ov_out, overlay_mask(load_image(ov_image), load_mask(ov_mask)));
            return kExitOk;
        }
    }
    catch (const IoError& e)
    {
        std::cerr << "error: " << e.what() << "\n";
        return kExitPartial;
    }
    catch (const std::invalid_argument& e)
    {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    catch (const std::exception& e)
    {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInternal;
    }
    return kExitUsage;
}
