#include "freespace/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <fstream>
#include <sstream>
#include <thread>

#include "freespace/align.hpp"
#include "freespace/fallback_features.hpp"
#include "freespace/io.hpp"
#include "freespace/maskgen.hpp"
#include "freespace/rng.hpp"

namespace freespace {

namespace fs = std::filesystem;
using nlohmann::json;

const char* to_string(Method m)
{
    switch (m)
    {
    case Method::kSuperpixel: return "superpixel";
    case Method::kRaw: return "raw";
    case Method::kRawOverlap: return "raw_overlap";
    }
    return "superpixel";
}

Method method_from_string(const std::string& s)
{
    if (s == "superpixel")
        return Method::kSuperpixel;
    if (s == "raw")
        return Method::kRaw;
    if (s == "raw_overlap")
        return Method::kRawOverlap;
    throw std::invalid_argument("unknown method '" + s + "' (expected superpixel | raw | raw_overlap)");
}

void PipelineConfig::validate() const
{
    prior.validate();
    fh.validate();
    if (stride < 1)
        throw std::invalid_argument("stride must be >= 1");
    if (workers < 1)
        throw std::invalid_argument("workers must be >= 1");
    if (!(overlap_tau >= 0.0 && overlap_tau <= 1.0))
        throw std::invalid_argument("overlap_tau must be in [0, 1]");
    if (gt_format != "mask" && gt_format != "cityscapes")
        throw std::invalid_argument("gt_format must be mask or cityscapes");
}

namespace {

template <typename T>
T parse_number(const std::string& key, const std::string& value)
{
    std::istringstream in(value);
    T out{};
    in >> out;
    if (in.fail() || !(in >> std::ws).eof())
        throw std::invalid_argument("config key '" + key + "': cannot parse '" + value + "'");
    return out;
}

std::string trim(const std::string& s)
{
    const auto begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos)
        return {};
    const auto end = s.find_last_not_of(" \t\r\n");
    return s.substr(begin, end - begin + 1);
}

// Runs fn(i) for i in [0, n) on `workers` threads; rethrows the first failure.
template <typename Fn>
void parallel_for(std::size_t n, int workers, Fn&& fn)
{
    if (workers <= 1 || n <= 1)
    {
        for (std::size_t i = 0; i < n; i++)
            fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(n);
    std::vector<std::thread> pool;
    const auto count = std::min<std::size_t>(static_cast<std::size_t>(workers), n);
    for (std::size_t t = 0; t < count; t++)
    {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < n; i = next++)
            {
                try
                {
                    fn(i);
                }
                catch (...)
                {
                    errors[i] = std::current_exception();
                }
            }
        });
    }
    for (auto& th : pool)
        th.join();
    for (auto& e : errors)
    {
        if (e)
            std::rethrow_exception(e);
    }
}

} // namespace

void set_config_value(PipelineConfig& cfg, const std::string& key, const std::string& value)
{
    if (key == "images")
        cfg.images = value;
    else if (key == "features")
        cfg.features = value == "fallback" ? fs::path() : fs::path(value);
    else if (key == "output")
        cfg.output = value;
    else if (key == "ground_truth")
        cfg.ground_truth = value;
    else if (key == "gt_format")
        cfg.gt_format = value;
    else if (key == "stride")
        cfg.stride = parse_number<int>(key, value);
    else if (key == "k")
        cfg.prior.k = parse_number<int>(key, value);
    else if (key == "batch_size")
        cfg.prior.batch_size = parse_number<int>(key, value);
    else if (key == "samples_per_superpixel")
        cfg.prior.samples_per_superpixel = parse_number<int>(key, value);
    else if (key == "centroid_weight")
        cfg.prior.centroid_weight = parse_number<double>(key, value);
    else if (key == "max_iters")
        cfg.prior.max_iters = parse_number<int>(key, value);
    else if (key == "seed")
        cfg.prior.seed = parse_number<std::uint64_t>(key, value);
    else if (key == "mu_row")
        cfg.prior.mu.row = parse_number<double>(key, value);
    else if (key == "mu_col")
        cfg.prior.mu.col = parse_number<double>(key, value);
    else if (key == "sigma_row")
        cfg.prior.sigma.row = parse_number<double>(key, value);
    else if (key == "sigma_col")
        cfg.prior.sigma.col = parse_number<double>(key, value);
    else if (key == "scale")
        cfg.fh.scale = parse_number<double>(key, value);
    else if (key == "smoothing_sigma")
        cfg.fh.smoothing_sigma = parse_number<double>(key, value);
    else if (key == "min_size")
        cfg.fh.min_size = parse_number<int>(key, value);
    else if (key == "method")
        cfg.method = method_from_string(value);
    else if (key == "overlap_tau")
        cfg.overlap_tau = parse_number<double>(key, value);
    else if (key == "workers")
        cfg.workers = parse_number<int>(key, value);
    else
        throw std::invalid_argument("unknown config key '" + key + "'");
}

void load_config_file(PipelineConfig& cfg, const fs::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot read config file: " + path.string());
    std::string line;
    int lineno = 0;
    while (std::getline(in, line))
    {
        lineno++;
        if (const auto hash = line.find('#'); hash != std::string::npos)
            line.erase(hash);
        line = trim(line);
        if (line.empty())
            continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument(path.string() + ":" + std::to_string(lineno) + ": expected key = value");
        set_config_value(cfg, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
}

json config_to_json(const PipelineConfig& cfg)
{
    return {
        {"images", cfg.images.string()},
        {"features", cfg.features.empty() ? std::string("fallback") : cfg.features.string()},
        {"output", cfg.output.string()},
        {"stride", cfg.stride},
        {"method", to_string(cfg.method)},
        {"overlap_tau", cfg.overlap_tau},
        {"k", cfg.prior.k},
        {"batch_size", cfg.prior.batch_size},
        {"samples_per_superpixel", cfg.prior.samples_per_superpixel},
        {"centroid_weight", cfg.prior.centroid_weight},
        {"max_iters", cfg.prior.max_iters},
        {"seed", cfg.prior.seed},
        {"mu", {cfg.prior.mu.row, cfg.prior.mu.col}},
        {"sigma", {cfg.prior.sigma.row, cfg.prior.sigma.col}},
        {"scale", cfg.fh.scale},
        {"smoothing_sigma", cfg.fh.smoothing_sigma},
        {"min_size", cfg.fh.min_size},
    };
}

json cluster_result_to_json(const ClusterResult& r)
{
    return {{"centers", r.centers}, {"membership", r.membership}, {"iterations_run", r.iterations_run}, {"converged", r.converged}};
}

json score_to_json(const Score& s)
{
    return {{"iou", s.iou}, {"precision", s.precision}, {"recall", s.recall}, {"tp", s.tp}, {"fp", s.fp}, {"fn", s.fn}};
}

std::vector<PipelineOutput> generate_masks(const std::vector<PipelineInput>& inputs, const PipelineConfig& cfg)
{
    cfg.validate();
    const std::size_t n = inputs.size();
    std::vector<FeatureMap> fmaps(n);
    std::vector<SuperpixelMap> superpixels(n);
    std::vector<std::vector<SuperpixelFeature>> features(n);

    parallel_for(n, cfg.workers, [&](std::size_t i) {
        const PipelineInput& in = inputs[i];
        fmaps[i] = in.features ? *in.features : handcrafted_feature_map(in.image, cfg.stride);
        fmaps[i].set_source_image_id(in.id);
        if (cfg.method != Method::kRaw)
            superpixels[i] = segment(in.image, cfg.fh);
        if (cfg.method == Method::kSuperpixel)
        {
            Rng rng(image_stream_seed(cfg.prior.seed, in.id));
            features[i] = align_superpixels(fmaps[i], superpixels[i], cfg.prior, rng);
        }
        else
        {
            features[i] = pixel_features_raw(fmaps[i], cfg.prior);
        }
    });

    const std::vector<ImageClusterResult> clusters = cluster_batch(features, cfg.prior);

    std::vector<PipelineOutput> out(n);
    parallel_for(n, cfg.workers, [&](std::size_t i) {
        const ImageRGB& image = inputs[i].image;
        PipelineOutput& o = out[i];
        o.id = inputs[i].id;
        o.batch_index = clusters[i].batch_index;
        o.iterations_run = clusters[i].iterations_run;
        o.converged = clusters[i].converged;
        switch (cfg.method)
        {
        case Method::kSuperpixel:
            o.mask = mask_from_membership(superpixels[i], clusters[i].membership);
            o.segment_count = superpixels[i].segment_count();
            break;
        case Method::kRaw:
            o.mask = mask_from_cell_membership(image.width(), image.height(), fmaps[i].width(), fmaps[i].height(), clusters[i].membership);
            o.segment_count = features[i].size();
            break;
        case Method::kRawOverlap: {
            const BinaryMask saliency =
                mask_from_cell_membership(image.width(), image.height(), fmaps[i].width(), fmaps[i].height(), clusters[i].membership);
            o.mask = overlap_select(superpixels[i], saliency, cfg.overlap_tau);
            o.segment_count = superpixels[i].segment_count();
            break;
        }
        }
    });
    return out;
}

std::vector<fs::path> list_png_files(const fs::path& dir)
{
    std::error_code ec;
    if (!fs::is_directory(dir, ec))
        throw IoError(IoErrorKind::kMissingFile, "not a directory: " + dir.string());
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir))
    {
        if (entry.is_regular_file() && entry.path().extension() == ".png")
            files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    return files;
}

GenerateReport run_generate(const PipelineConfig& cfg)
{
    cfg.validate();
    const std::vector<fs::path> files = list_png_files(cfg.images);
    if (files.empty())
        throw IoError(IoErrorKind::kMissingFile, "no PNG images in " + cfg.images.string());

    GenerateReport report;
    std::vector<PipelineInput> inputs;
    for (const fs::path& file : files)
    {
        try
        {
            PipelineInput in{file.stem().string(), load_image(file), std::nullopt};
            if (!cfg.features.empty())
            {
                FeatureMap fmap = load_feature_map(cfg.features / (in.id + ".fmp1"));
                in.features = std::move(fmap);
            }
            inputs.push_back(std::move(in));
        }
        catch (const IoError& e)
        {
            report.failures.push_back(file.filename().string() + ": " + e.what());
        }
    }

    json images = json::array();
    if (!inputs.empty())
    {
        const std::vector<PipelineOutput> outputs = generate_masks(inputs, cfg);
        fs::create_directories(cfg.output);
        for (const PipelineOutput& o : outputs)
        {
            const std::string name = o.id + ".png";
            write_mask(cfg.output / name, o.mask);
            images.push_back({{"id", o.id},
                              {"mask", name},
                              {"segments", o.segment_count},
                              {"batch", o.batch_index},
                              {"iterations", o.iterations_run},
                              {"converged", o.converged}});
        }
    }
    else
    {
        fs::create_directories(cfg.output);
    }

    report.manifest = {{"config", config_to_json(cfg)}, {"seed", cfg.prior.seed}, {"images", images}, {"failures", report.failures}};
    std::ofstream(cfg.output / "manifest.json") << report.manifest.dump(2) << "\n";
    return report;
}

std::string pairing_key(const fs::path& file)
{
    std::string stem = file.stem().string();
    for (const std::string suffix : {"_leftImg8bit", "_gtFine_labelIds"})
    {
        if (stem.size() > suffix.size() && stem.compare(stem.size() - suffix.size(), suffix.size(), suffix) == 0)
            return stem.substr(0, stem.size() - suffix.size());
    }
    return stem;
}

json run_evaluate(const fs::path& pred_dir, const fs::path& gt_dir, const std::string& gt_format)
{
    if (gt_format != "mask" && gt_format != "cityscapes")
        throw std::invalid_argument("gt_format must be mask or cityscapes");
    std::map<std::string, fs::path> preds, gts;
    for (const fs::path& p : list_png_files(pred_dir))
        preds[pairing_key(p)] = p;
    for (const fs::path& p : list_png_files(gt_dir))
    {
        if (gt_format == "cityscapes" && p.stem().string().find("_gtFine_") != std::string::npos &&
            p.stem().string().find("_gtFine_labelIds") == std::string::npos)
            continue;
        gts[pairing_key(p)] = p;
    }

    std::vector<std::string> pred_only, gt_only;
    for (const auto& [key, path] : preds)
        if (!gts.count(key))
            pred_only.push_back(path.filename().string());
    for (const auto& [key, path] : gts)
        if (!preds.count(key))
            gt_only.push_back(path.filename().string());
    if (!pred_only.empty() || !gt_only.empty())
    {
        std::string msg = "unpaired files;";
        if (!pred_only.empty())
            msg += " no ground truth for: " + json(pred_only).dump() + ";";
        if (!gt_only.empty())
            msg += " no prediction for: " + json(gt_only).dump() + ";";
        throw IoError(IoErrorKind::kMissingFile, msg);
    }
    if (preds.empty())
        throw IoError(IoErrorKind::kMissingFile, "no masks to evaluate in " + pred_dir.string());

    std::vector<Score> scores;
    json per_image = json::array();
    for (const auto& [key, pred_path] : preds)
    {
        const BinaryMask pred = load_mask(pred_path);
        const BinaryMask gt = gt_format == "cityscapes" ? mask_from_cityscapes_label_ids(load_gray8(gts.at(key))) : load_mask(gts.at(key));
        const Score s = score(pred, gt);
        json entry = score_to_json(s);
        entry["image"] = key;
        per_image.push_back(std::move(entry));
        scores.push_back(s);
    }
    return {{"per_image", per_image}, {"dataset", score_to_json(aggregate_scores(scores))}};
}

std::vector<SweepRow> run_sweep(const PipelineConfig& cfg, const std::string& axis, const std::vector<std::string>& values)
{
    if (axis != "clusters" && axis != "batch_size" && axis != "scale")
        throw std::invalid_argument("unknown sweep axis '" + axis + "' (expected clusters | batch_size | scale)");
    if (values.empty())
        throw std::invalid_argument("sweep needs at least one value");
    if (cfg.ground_truth.empty())
        throw std::invalid_argument("sweep needs ground_truth");

    std::vector<SweepRow> rows;
    for (const std::string& value : values)
    {
        PipelineConfig run = cfg;
        set_config_value(run, axis == "clusters" ? "k" : axis, value);
        run.output = cfg.output / (axis + "_" + value);
        run_generate(run);
        const json metrics = run_evaluate(run.output, cfg.ground_truth, cfg.gt_format);
        const json& d = metrics.at("dataset");
        rows.push_back({value, score_from_counts(d.at("tp"), d.at("fp"), d.at("fn"))});
    }
    return rows;
}

std::string sweep_to_csv(const std::string& axis, const std::vector<SweepRow>& rows)
{
    std::ostringstream out;
    out << axis << ",iou,precision,recall,tp,fp,fn\n";
    out.precision(6);
    for (const SweepRow& r : rows)
        out << r.value << "," << std::fixed << r.dataset.iou << "," << r.dataset.precision << "," << r.dataset.recall << ","
            << r.dataset.tp << "," << r.dataset.fp << "," << r.dataset.fn << "\n";
    return out.str();
}

json sweep_to_json(const std::string& axis, const std::vector<SweepRow>& rows)
{
    json values = json::array(), iou = json::array(), points = json::array();
    for (const SweepRow& r : rows)
    {
        values.push_back(r.value);
        iou.push_back(r.dataset.iou);
        json p = score_to_json(r.dataset);
        p["value"] = r.value;
        points.push_back(std::move(p));
    }
    return {{"axis", axis}, {"values", values}, {"iou", iou}, {"points", points}};
}

} // namespace freespace
