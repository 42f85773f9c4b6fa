#include "freespace/core.hpp"

#include <algorithm>
#include <cmath>

namespace freespace {

ImageRGB::ImageRGB(int width, int height)
    : ImageRGB(width, height, std::vector<std::uint8_t>(static_cast<std::size_t>(std::max(width, 0)) * std::max(height, 0) * 3, 0))
{
}

ImageRGB::ImageRGB(int width, int height, std::vector<std::uint8_t> data)
    : width_(width), height_(height), data_(std::move(data))
{
    if (width < 1 || height < 1)
        throw std::invalid_argument("image dimensions must be positive");
    if (data_.size() != static_cast<std::size_t>(width) * height * 3)
        throw std::invalid_argument("image data length does not match width*height*3");
}

FeatureMap::FeatureMap(int channels, int height, int width, std::vector<float> data, std::string source_image_id)
    : channels_(channels), height_(height), width_(width), data_(std::move(data)), source_image_id_(std::move(source_image_id))
{
    if (channels < 1 || height < 1 || width < 1)
        throw std::invalid_argument("feature map dimensions must be positive");
    if (data_.size() != static_cast<std::size_t>(channels) * height * width)
        throw std::invalid_argument("feature map payload does not match C*H*W");
    for (float v : data_)
    {
        if (!std::isfinite(v))
            throw std::invalid_argument("feature map contains non-finite values");
    }
}

SuperpixelMap::SuperpixelMap(int width, int height, std::vector<std::int32_t> labels)
    : width_(width), height_(height), labels_(std::move(labels))
{
    if (width < 1 || height < 1)
        throw std::invalid_argument("superpixel map dimensions must be positive");
    const std::size_t n = static_cast<std::size_t>(width) * height;
    if (labels_.size() != n)
        throw std::invalid_argument("label array length does not match width*height");

    std::int32_t max_label = -1;
    for (std::int32_t l : labels_)
    {
        if (l < 0)
            throw std::invalid_argument("negative segment label");
        max_label = std::max(max_label, l);
    }
    const std::size_t s = static_cast<std::size_t>(max_label) + 1;

    segments_.assign(s, Segment{});
    for (auto& seg : segments_)
        seg.bbox = {width, height, -1, -1};

    std::vector<double> sum_row(s, 0.0), sum_col(s, 0.0);
    offsets_.assign(s + 1, 0);
    for (int y = 0; y < height; y++)
    {
        for (int x = 0; x < width; x++)
        {
            const auto l = static_cast<std::size_t>(labels_[static_cast<std::size_t>(y) * width + x]);
            Segment& seg = segments_[l];
            seg.pixel_count++;
            sum_row[l] += static_cast<double>(y) / height;
            sum_col[l] += static_cast<double>(x) / width;
            seg.bbox.x0 = std::min(seg.bbox.x0, x);
            seg.bbox.y0 = std::min(seg.bbox.y0, y);
            seg.bbox.x1 = std::max(seg.bbox.x1, x);
            seg.bbox.y1 = std::max(seg.bbox.y1, y);
            offsets_[l + 1]++;
        }
    }
    for (std::size_t i = 0; i < s; i++)
    {
        if (segments_[i].pixel_count == 0)
            throw std::invalid_argument("segment labels are not dense: id " + std::to_string(i) + " is unused");
        const double count = static_cast<double>(segments_[i].pixel_count);
        segments_[i].centroid = {sum_row[i] / count, sum_col[i] / count};
        offsets_[i + 1] += offsets_[i];
    }

    pixels_.resize(n);
    std::vector<std::size_t> cursor(offsets_.begin(), offsets_.end() - 1);
    for (std::size_t p = 0; p < n; p++)
        pixels_[cursor[static_cast<std::size_t>(labels_[p])]++] = static_cast<std::uint32_t>(p);
}

BinaryMask::BinaryMask(int width, int height, MaskLabel fill)
    : BinaryMask(width, height, std::vector<MaskLabel>(static_cast<std::size_t>(std::max(width, 0)) * std::max(height, 0), fill))
{
}

BinaryMask::BinaryMask(int width, int height, std::vector<MaskLabel> labels)
    : width_(width), height_(height), labels_(std::move(labels))
{
    if (width < 1 || height < 1)
        throw std::invalid_argument("mask dimensions must be positive");
    if (labels_.size() != static_cast<std::size_t>(width) * height)
        throw std::invalid_argument("mask label length does not match width*height");
}

std::size_t BinaryMask::count(MaskLabel l) const
{
    return static_cast<std::size_t>(std::count(labels_.begin(), labels_.end(), l));
}

void PriorConfig::validate() const
{
    if (k < 2)
        throw std::invalid_argument("k must be >= 2");
    if (!(sigma.row > 0.0) || !(sigma.col > 0.0))
        throw std::invalid_argument("prior sigma components must be > 0");
    if (samples_per_superpixel < 1)
        throw std::invalid_argument("samples_per_superpixel must be >= 1");
    if (batch_size < 1)
        throw std::invalid_argument("batch_size must be >= 1");
    if (max_iters < 1)
        throw std::invalid_argument("max_iters must be >= 1");
    if (!std::isfinite(centroid_weight))
        throw std::invalid_argument("centroid_weight must be finite");
}

} // namespace freespace
