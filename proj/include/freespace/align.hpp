#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "freespace/core.hpp"
#include "freespace/rng.hpp"

namespace freespace {

/// Pooled appearance vector of one superpixel with its spatial prior weight.
struct SuperpixelFeature
{
    std::int32_t segment_id = 0;
    std::string image_id;
    std::vector<double> vector; // C pooled channels, then centroid_weight * (row, col)
    double prior_weight = 1.0;  // in (0, 1]
};

/// Feature-map coordinate (y_f, x_f) of an image pixel, align-corners-false,
/// clamped into [0, Hf-1] x [0, Wf-1].
struct CellCoord
{
    double y = 0.0;
    double x = 0.0;
};
CellCoord pixel_to_cell(int x, int y, int image_width, int image_height, int fmap_width, int fmap_height);

/// Bilinear interpolation of all channels at fractional cell coordinates.
/// Throws std::out_of_range outside [0, Hf-1] x [0, Wf-1].
std::vector<double> bilinear_sample(const FeatureMap& fmap, double y, double x);

/// Average of Gaussians exp(-sum_d (p_d - mu_d)^2 / (2 sigma_d^2)) over the
/// segment's pixels, in normalized (row, col) coordinates.
double prior_weight(const SuperpixelMap& sp, std::size_t segment_id, RowCol mu, RowCol sigma);

/// Gaussian prior at a single normalized point.
double prior_weight_at(RowCol p, RowCol mu, RowCol sigma);

/// Superpixel alignment: per segment, `samples_per_superpixel` pixels drawn
/// uniformly with replacement, bilinearly sampled and average-pooled, followed
/// by the scaled centroid. Output is in segment-id order; the image id is taken
/// from the feature map.
std::vector<SuperpixelFeature> align_superpixels(const FeatureMap& fmap, const SuperpixelMap& sp, const PriorConfig& cfg, Rng& rng);

/// Every feature-map cell as its own pseudo-superpixel, positioned at the
/// normalized cell center ((n + 0.5) / Hf, (m + 0.5) / Wf). Segment ids are
/// row-major cell indices.
std::vector<SuperpixelFeature> pixel_features_raw(const FeatureMap& fmap, const PriorConfig& cfg);

/// "SPF1" dump: magic, u32 count, u32 dim, count*dim f32, count f32 prior weights (all LE).
std::vector<std::uint8_t> encode_spf1(const std::vector<SuperpixelFeature>& features);

} // namespace freespace
