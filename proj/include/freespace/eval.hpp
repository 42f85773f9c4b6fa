#pragma once

#include <cstdint>
#include <span>

#include "freespace/core.hpp"

namespace freespace {

/// Road-class confusion counts and derived ratios, computed over pixels whose
/// ground truth is not VOID. A VOID prediction counts as NOT_FREE.
///
/// Zero denominators resolve to 1.0: iou when neither mask has a FREE pixel,
/// precision with no predicted FREE, recall with no ground-truth FREE.
struct Score
{
    std::uint64_t tp = 0;
    std::uint64_t fp = 0;
    std::uint64_t fn = 0;
    double iou = 1.0;
    double precision = 1.0;
    double recall = 1.0;
};

Score score_from_counts(std::uint64_t tp, std::uint64_t fp, std::uint64_t fn);

/// Throws std::invalid_argument on a dimension mismatch.
Score score(const BinaryMask& pred, const BinaryMask& gt);

/// Dataset score from summed counts. Throws on an empty list.
Score aggregate_scores(std::span<const Score> per_image);

} // namespace freespace
