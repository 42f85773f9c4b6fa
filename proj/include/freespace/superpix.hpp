#pragma once

#include "freespace/core.hpp"

namespace freespace {

/// Felzenszwalb-Huttenlocher parameters.
struct FHParams
{
    double scale = 300.0;         // k in the threshold scale / |C|
    double smoothing_sigma = 0.8; // Gaussian pre-smoothing, pixels; 0 disables
    int min_size = 100;           // segments below this are merged away

    void validate() const;
};

/// Graph-based segmentation over an 8-connected grid with Euclidean RGB edge
/// weights on the smoothed image. Labels are assigned in row-major order of
/// first appearance, so the output is fully determined by (image, params).
SuperpixelMap segment(const ImageRGB& image, const FHParams& params);

/// FREE on the segment with the most pixels (lowest id on ties).
BinaryMask largest_superpixel_mask(const SuperpixelMap& sp);

/// Image with segment boundaries painted in `color`.
ImageRGB boundary_overlay(const ImageRGB& image, const SuperpixelMap& sp, std::array<std::uint8_t, 3> color = {255, 255, 0});

} // namespace freespace
