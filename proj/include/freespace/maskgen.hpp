#pragma once

#include <cstdint>
#include <vector>

#include "freespace/core.hpp"
#include "freespace/io.hpp"

namespace freespace {

/// FREE where the pixel's segment is in cluster 0, NOT_FREE elsewhere.
BinaryMask mask_from_membership(const SuperpixelMap& sp, const std::vector<int>& membership);

/// Segment-level selection by overlap with a saliency mask: a segment is FREE
/// iff |segment and saliency FREE| / |segment| >= tau.
BinaryMask overlap_select(const SuperpixelMap& sp, const BinaryMask& saliency, double tau = 0.5);

/// Upsamples a per-cell membership grid (Hf x Wf, row-major) to image size;
/// each pixel takes the cell that pixel_to_cell rounds to.
BinaryMask mask_from_cell_membership(int width, int height, int fmap_width, int fmap_height, const std::vector<int>& membership);

/// FREE on rows >= ceil(height / 2).
BinaryMask bottom_half_mask(int width, int height);

/// Red alpha blend (factor 0.5) of the FREE region over the image, rounded to nearest.
ImageRGB overlay_mask(const ImageRGB& image, const BinaryMask& mask);

/// Cityscapes labelIds image to a road mask: road (7) is FREE, labels ignored
/// in the official evaluation are VOID, everything else NOT_FREE.
BinaryMask mask_from_cityscapes_label_ids(const GrayImage8& label_ids);

} // namespace freespace
