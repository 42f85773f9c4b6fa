#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "freespace/cluster.hpp"
#include "freespace/core.hpp"
#include "freespace/eval.hpp"
#include "freespace/superpix.hpp"

namespace freespace {

enum class Method
{
    kSuperpixel, // superpixel alignment + location-prior clustering
    kRaw,        // every feature cell clustered directly
    kRawOverlap, // raw-cell clusters used as saliency, selected by superpixel overlap
};

const char* to_string(Method m);
Method method_from_string(const std::string& s);

/// Everything a mask-generation run depends on. Serialized verbatim into the
/// manifest so runs can be reproduced.
struct PipelineConfig
{
    std::filesystem::path images;
    std::filesystem::path features; // directory of <stem>.fmp1; empty = fallback extractor
    std::filesystem::path output;
    std::filesystem::path ground_truth; // used by sweep only
    std::string gt_format = "mask";     // mask | cityscapes
    int stride = 8;                     // fallback extractor cell size
    PriorConfig prior;
    FHParams fh;
    Method method = Method::kSuperpixel;
    double overlap_tau = 0.5;
    int workers = 1;

    void validate() const;
};

/// Sets one documented key. Throws std::invalid_argument on an unknown key or
/// malformed value.
void set_config_value(PipelineConfig& cfg, const std::string& key, const std::string& value);

/// Flat `key = value` file; `#` starts a comment. Throws std::runtime_error if
/// unreadable, std::invalid_argument on bad content.
void load_config_file(PipelineConfig& cfg, const std::filesystem::path& path);

nlohmann::json config_to_json(const PipelineConfig& cfg);
nlohmann::json cluster_result_to_json(const ClusterResult& r);
nlohmann::json score_to_json(const Score& s);

/// One image entering the in-memory pipeline.
struct PipelineInput
{
    std::string id;
    ImageRGB image;
    std::optional<FeatureMap> features; // absent: fallback extractor
};

struct PipelineOutput
{
    std::string id;
    BinaryMask mask;
    std::size_t segment_count = 0;
    std::size_t batch_index = 0;
    int iterations_run = 0;
    bool converged = false;
};

/// Superpixels, alignment, batch clustering and mask rendering for images
/// already in memory, batched in the given order.
std::vector<PipelineOutput> generate_masks(const std::vector<PipelineInput>& inputs, const PipelineConfig& cfg);

/// Sorted *.png files of a directory.
std::vector<std::filesystem::path> list_png_files(const std::filesystem::path& dir);

struct GenerateReport
{
    nlohmann::json manifest;
    std::vector<std::string> failures; // "<file>: <reason>"
};

/// Disk-level generate: reads cfg.images, writes <output>/<stem>.png masks and
/// <output>/manifest.json. Per-image input failures are reported and skipped.
/// Throws IoError if the image directory has no PNG files.
GenerateReport run_generate(const PipelineConfig& cfg);

/// Stem used to pair prediction and ground-truth files; drops the Cityscapes
/// suffixes _leftImg8bit and _gtFine_labelIds.
std::string pairing_key(const std::filesystem::path& file);

/// Scores every prediction against its ground truth. Throws
/// IoError listing unpaired files if the sets differ.
nlohmann::json run_evaluate(const std::filesystem::path& pred_dir, const std::filesystem::path& gt_dir, const std::string& gt_format = "mask");

struct SweepRow
{
    std::string value;
    Score dataset;
};

/// Runs generate + evaluate for each value of `axis` (clusters | batch_size |
/// scale) into <output>/<axis>_<value>/ with everything else fixed.
std::vector<SweepRow> run_sweep(const PipelineConfig& cfg, const std::string& axis, const std::vector<std::string>& values);

std::string sweep_to_csv(const std::string& axis, const std::vector<SweepRow>& rows);
nlohmann::json sweep_to_json(const std::string& axis, const std::vector<SweepRow>& rows);

} // namespace freespace
