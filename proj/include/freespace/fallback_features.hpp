#pragma once

#include <string>

#include "freespace/core.hpp"

namespace freespace {

inline constexpr int kFallbackChannels = 7;

/// Hand-crafted stand-in for a CNN feature extractor. For each stride x stride
/// cell (edge cells may be smaller) the channels are
///   0-2  mean R, G, B
///   3-5  population std-dev of R, G, B
///   6    mean gradient magnitude, central differences on luma
///        (0.299 R + 0.587 G + 0.114 B), one-sided at the image border
/// in 0..255 units. Output shape is (7, ceil(H / stride), ceil(W / stride)).
FeatureMap handcrafted_feature_map(const ImageRGB& image, int stride, std::string image_id = {});

/// Luma gradient magnitude at one pixel, as used by channel 6.
double luma_gradient_magnitude(const ImageRGB& image, int x, int y);

} // namespace freespace
