#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace freespace {

/// Normalized image coordinate, (row, col) = (y / height, x / width).
struct RowCol
{
    double row = 0.0;
    double col = 0.0;
};

/// Interleaved 8-bit RGB image, row-major.
class ImageRGB
{
public:
    ImageRGB() = default;
    ImageRGB(int width, int height);
    ImageRGB(int width, int height, std::vector<std::uint8_t> data);

    int width() const { return width_; }
    int height() const { return height_; }
    std::size_t pixel_count() const { return static_cast<std::size_t>(width_) * height_; }

    const std::vector<std::uint8_t>& data() const { return data_; }
    std::vector<std::uint8_t>& data() { return data_; }

    std::uint8_t at(int x, int y, int c) const { return data_[(static_cast<std::size_t>(y) * width_ + x) * 3 + c]; }
    std::uint8_t& at(int x, int y, int c) { return data_[(static_cast<std::size_t>(y) * width_ + x) * 3 + c]; }

    bool operator==(const ImageRGB&) const = default;

private:
    int width_ = 0;
    int height_ = 0;
    std::vector<std::uint8_t> data_;
};

/// Dense float tensor laid out (channels, height, width).
class FeatureMap
{
public:
    FeatureMap() = default;
    FeatureMap(int channels, int height, int width, std::vector<float> data, std::string source_image_id = {});

    int channels() const { return channels_; }
    int height() const { return height_; }
    int width() const { return width_; }
    const std::string& source_image_id() const { return source_image_id_; }
    void set_source_image_id(std::string id) { source_image_id_ = std::move(id); }

    const std::vector<float>& data() const { return data_; }

    float at(int c, int y, int x) const
    {
        return data_[(static_cast<std::size_t>(c) * height_ + y) * width_ + x];
    }

    bool operator==(const FeatureMap&) const = default;

private:
    int channels_ = 0;
    int height_ = 0;
    int width_ = 0;
    std::vector<float> data_;
    std::string source_image_id_;
};

struct BoundingBox
{
    int x0 = 0;
    int y0 = 0;
    int x1 = 0; // inclusive
    int y1 = 0; // inclusive
};

struct Segment
{
    std::size_t pixel_count = 0;
    RowCol centroid;
    BoundingBox bbox;
};

/// Per-pixel segment labels with dense ids 0..S-1 and per-segment metadata.
///
/// Pixel indices of each segment are kept in a compressed layout so that
/// sampling and per-pixel reductions do not need to rescan the label array.
class SuperpixelMap
{
public:
    SuperpixelMap() = default;

    /// Builds metadata from a label array. Throws std::invalid_argument if the
    /// labels are not a dense 0..S-1 set or the size does not match.
    SuperpixelMap(int width, int height, std::vector<std::int32_t> labels);

    int width() const { return width_; }
    int height() const { return height_; }
    std::size_t segment_count() const { return segments_.size(); }

    const std::vector<std::int32_t>& labels() const { return labels_; }
    std::int32_t label(int x, int y) const { return labels_[static_cast<std::size_t>(y) * width_ + x]; }
    const std::vector<Segment>& segments() const { return segments_; }
    const Segment& segment(std::size_t id) const { return segments_[id]; }

    /// Row-major pixel indices (y * width + x) belonging to segment `id`.
    std::vector<std::uint32_t> segment_pixels(std::size_t id) const
    {
        return {pixels_.begin() + offsets_[id], pixels_.begin() + offsets_[id + 1]};
    }
    const std::uint32_t* segment_pixels_begin(std::size_t id) const { return pixels_.data() + offsets_[id]; }
    const std::uint32_t* segment_pixels_end(std::size_t id) const { return pixels_.data() + offsets_[id + 1]; }

    RowCol normalized_coord(std::uint32_t pixel_index) const
    {
        return {static_cast<double>(pixel_index / width_) / height_,
                static_cast<double>(pixel_index % width_) / width_};
    }

private:
    int width_ = 0;
    int height_ = 0;
    std::vector<std::int32_t> labels_;
    std::vector<Segment> segments_;
    std::vector<std::size_t> offsets_;
    std::vector<std::uint32_t> pixels_;
};

enum class MaskLabel : std::uint8_t
{
    kNotFree = 0,
    kVoid = 128,
    kFree = 255,
};

class BinaryMask
{
public:
    BinaryMask() = default;
    BinaryMask(int width, int height, MaskLabel fill = MaskLabel::kNotFree);
    BinaryMask(int width, int height, std::vector<MaskLabel> labels);

    int width() const { return width_; }
    int height() const { return height_; }
    std::size_t pixel_count() const { return labels_.size(); }

    const std::vector<MaskLabel>& labels() const { return labels_; }
    std::vector<MaskLabel>& labels() { return labels_; }
    MaskLabel at(int x, int y) const { return labels_[static_cast<std::size_t>(y) * width_ + x]; }
    MaskLabel& at(int x, int y) { return labels_[static_cast<std::size_t>(y) * width_ + x]; }

    std::size_t count(MaskLabel l) const;

    bool operator==(const BinaryMask&) const = default;

private:
    int width_ = 0;
    int height_ = 0;
    std::vector<MaskLabel> labels_;
};

/// Location prior and clustering parameters.
struct PriorConfig
{
    RowCol mu{0.75, 0.5};
    RowCol sigma{0.1, 0.1};
    int k = 4;
    int batch_size = 30;
    int samples_per_superpixel = 10;
    double centroid_weight = 1.0;
    int max_iters = 100;
    std::uint64_t seed = 0;

    /// Throws std::invalid_argument naming the first violated constraint.
    void validate() const;
};

} // namespace freespace
