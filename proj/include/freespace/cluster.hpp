#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "freespace/align.hpp"
#include "freespace/core.hpp"

namespace freespace {

/// Output of location-prior k-means. Cluster 0 is the free-space cluster.
struct ClusterResult
{
    std::vector<std::vector<double>> centers; // k x D
    std::vector<int> membership;              // one per input feature
    int iterations_run = 0;
    bool converged = false;
};

/// State after one center update + assignment round, for diagnostics.
struct IterationState
{
    int iteration = 0; // 1-based
    const std::vector<std::vector<double>>& centers;
    const std::vector<int>& membership;
    std::size_t changed = 0;
};
using IterationObserver = std::function<void(const IterationState&)>;

/// Lower median: element (n - 1) / 2 of the sorted values.
double median(std::span<const double> values);

/// Initial memberships: features with prior weight strictly above the median
/// go to cluster 0; the rest draw uniformly from 1..k-1. The draw for a feature
/// is keyed by (seed, image_id, segment_id) rather than by position, so
/// reordering the input reorders the initialization with it.
std::vector<int> initial_membership(std::span<const SuperpixelFeature> features, int k, std::uint64_t seed);

/// Location-prior k-means. Cluster 0's center is the prior-weighted mean of its
/// members, every other center the (1 - w)-weighted mean; assignment is plain
/// nearest-center (lowest index on ties). Stops when no membership changes or
/// after cfg.max_iters rounds.
///
/// A cluster that loses all members is reseeded at the feature farthest from
/// its assigned center. A non-zero cluster whose members all have w = 1 falls
/// back to the unweighted mean.
ClusterResult location_prior_kmeans(std::span<const SuperpixelFeature> features, const PriorConfig& cfg,
                                    const IterationObserver& observer = {});

/// Same iteration from an explicit initial membership.
ClusterResult location_prior_kmeans(std::span<const SuperpixelFeature> features, const PriorConfig& cfg,
                                    std::vector<int> membership, const IterationObserver& observer = {});

/// Consecutive groups of `batch_size` indices over `count` items, in order;
/// the last group may be short.
std::vector<std::vector<std::size_t>> make_batches(std::size_t count, int batch_size);

/// Per-image slice of a batch clustering.
struct ImageClusterResult
{
    std::size_t batch_index = 0;
    std::vector<int> membership; // per superpixel of this image
    int iterations_run = 0;
    bool converged = false;
};

/// Clusters the concatenated features of one batch of images and splits the
/// memberships back per image.
std::vector<ImageClusterResult> cluster_one_batch(const std::vector<std::vector<SuperpixelFeature>>& per_image, const PriorConfig& cfg,
                                                  std::size_t batch_index = 0);

/// Groups images into batches of cfg.batch_size in input order and clusters
/// each batch. Result is indexed like the input.
std::vector<ImageClusterResult> cluster_batch(const std::vector<std::vector<SuperpixelFeature>>& per_image, const PriorConfig& cfg);

} // namespace freespace
