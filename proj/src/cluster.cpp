#include "freespace/cluster.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

#include "freespace/rng.hpp"

namespace freespace {

double median(std::span<const double> values)
{
    if (values.empty())
        throw std::invalid_argument("median of empty list");
    std::vector<double> copy(values.begin(), values.end());
    auto mid = copy.begin() + static_cast<std::ptrdiff_t>((copy.size() - 1) / 2);
    std::nth_element(copy.begin(), mid, copy.end());
    return *mid;
}

std::vector<int> initial_membership(std::span<const SuperpixelFeature> features, int k, std::uint64_t seed)
{
    std::vector<double> weights(features.size());
    std::transform(features.begin(), features.end(), weights.begin(), [](const SuperpixelFeature& f) { return f.prior_weight; });
    const double med = median(weights);

    std::vector<int> membership(features.size());
    for (std::size_t i = 0; i < features.size(); i++)
    {
        if (features[i].prior_weight > med)
        {
            membership[i] = 0;
            continue;
        }
        const std::uint64_t key = image_stream_seed(seed, features[i].image_id) ^ mix64(static_cast<std::uint64_t>(features[i].segment_id));
        Rng rng(mix64(key));
        membership[i] = static_cast<int>(rng.uniform_int(1, k - 1));
    }
    return membership;
}

namespace {

double squared_distance(const std::vector<double>& a, const std::vector<double>& b)
{
    double acc = 0.0;
    for (std::size_t d = 0; d < a.size(); d++)
    {
        const double diff = a[d] - b[d];
        acc += diff * diff;
    }
    return acc;
}

void check_inputs(std::span<const SuperpixelFeature> features, const PriorConfig& cfg)
{
    cfg.validate();
    if (features.size() < static_cast<std::size_t>(cfg.k))
        throw std::invalid_argument("location_prior_kmeans: " + std::to_string(features.size()) + " features for " +
                                    std::to_string(cfg.k) + " clusters");
    const std::size_t dim = features.front().vector.size();
    if (dim == 0)
        throw std::invalid_argument("location_prior_kmeans: zero-dimensional features");
    for (const auto& f : features)
    {
        if (f.vector.size() != dim)
            throw std::invalid_argument("location_prior_kmeans: feature dimension mismatch");
    }
}

std::vector<std::vector<double>> update_centers(std::span<const SuperpixelFeature> features, const std::vector<int>& membership, int k)
{
    const std::size_t dim = features.front().vector.size();
    std::vector<std::vector<double>> weighted(k, std::vector<double>(dim, 0.0));
    std::vector<std::vector<double>> plain(k, std::vector<double>(dim, 0.0));
    std::vector<double> weight_sum(k, 0.0);
    std::vector<std::size_t> members(k, 0);

    for (std::size_t i = 0; i < features.size(); i++)
    {
        const int q = membership[i];
        const double w = q == 0 ? features[i].prior_weight : 1.0 - features[i].prior_weight;
        const auto& v = features[i].vector;
        for (std::size_t d = 0; d < dim; d++)
        {
            weighted[q][d] += w * v[d];
            plain[q][d] += v[d];
        }
        weight_sum[q] += w;
        members[q]++;
    }

    std::vector<std::vector<double>> centers(k);
    std::vector<bool> defined(k, false);
    for (int q = 0; q < k; q++)
    {
        if (members[q] == 0)
            continue;
        centers[q] = std::move(weighted[q]);
        double denom = weight_sum[q];
        if (!(denom > 0.0))
        {
            centers[q] = std::move(plain[q]);
            denom = static_cast<double>(members[q]);
        }
        for (double& c : centers[q])
            c /= denom;
        defined[q] = true;
    }

    // Empty clusters are reseeded one at a time at the feature farthest from
    // its nearest defined center.
    for (int q = 0; q < k; q++)
    {
        if (defined[q])
            continue;
        std::size_t far = 0;
        double far_dist = -1.0;
        for (std::size_t i = 0; i < features.size(); i++)
        {
            double nearest = std::numeric_limits<double>::infinity();
            for (int r = 0; r < k; r++)
            {
                if (defined[r])
                    nearest = std::min(nearest, squared_distance(features[i].vector, centers[r]));
            }
            if (nearest > far_dist)
            {
                far_dist = nearest;
                far = i;
            }
        }
        centers[q] = features[far].vector;
        defined[q] = true;
    }
    return centers;
}

} // namespace

ClusterResult location_prior_kmeans(std::span<const SuperpixelFeature> features, const PriorConfig& cfg, const IterationObserver& observer)
{
    check_inputs(features, cfg);
    return location_prior_kmeans(features, cfg, initial_membership(features, cfg.k, cfg.seed), observer);
}

ClusterResult location_prior_kmeans(std::span<const SuperpixelFeature> features, const PriorConfig& cfg, std::vector<int> membership,
                                    const IterationObserver& observer)
{
    check_inputs(features, cfg);
    if (membership.size() != features.size())
        throw std::invalid_argument("location_prior_kmeans: initial membership size mismatch");
    for (int m : membership)
    {
        if (m < 0 || m >= cfg.k)
            throw std::invalid_argument("location_prior_kmeans: initial membership out of range");
    }

    ClusterResult result;
    for (int iter = 1; iter <= cfg.max_iters; iter++)
    {
        result.centers = update_centers(features, membership, cfg.k);
        std::size_t changed = 0;
        for (std::size_t i = 0; i < features.size(); i++)
        {
            int best = 0;
            double best_dist = squared_distance(features[i].vector, result.centers[0]);
            for (int q = 1; q < cfg.k; q++)
            {
                const double d = squared_distance(features[i].vector, result.centers[q]);
                if (d < best_dist)
                {
                    best_dist = d;
                    best = q;
                }
            }
            if (best != membership[i])
            {
                membership[i] = best;
                changed++;
            }
        }
        result.iterations_run = iter;
        if (observer)
            observer(IterationState{iter, result.centers, membership, changed});
        if (changed == 0)
        {
            result.converged = true;
            break;
        }
    }
    result.membership = std::move(membership);
    return result;
}

std::vector<std::vector<std::size_t>> make_batches(std::size_t count, int batch_size)
{
    if (batch_size < 1)
        throw std::invalid_argument("batch_size must be >= 1");
    std::vector<std::vector<std::size_t>> batches;
    for (std::size_t start = 0; start < count; start += static_cast<std::size_t>(batch_size))
    {
        std::vector<std::size_t> batch;
        for (std::size_t i = start; i < std::min(count, start + static_cast<std::size_t>(batch_size)); i++)
            batch.push_back(i);
        batches.push_back(std::move(batch));
    }
    return batches;
}

std::vector<ImageClusterResult> cluster_one_batch(const std::vector<std::vector<SuperpixelFeature>>& per_image, const PriorConfig& cfg,
                                                  std::size_t batch_index)
{
    if (per_image.empty())
        throw std::invalid_argument("cluster_one_batch: empty batch");
    std::vector<SuperpixelFeature> all;
    for (const auto& image : per_image)
        all.insert(all.end(), image.begin(), image.end());

    const ClusterResult joint = location_prior_kmeans(all, cfg);

    std::vector<ImageClusterResult> out;
    out.reserve(per_image.size());
    std::size_t offset = 0;
    for (const auto& image : per_image)
    {
        ImageClusterResult r;
        r.batch_index = batch_index;
        r.membership.assign(joint.membership.begin() + static_cast<std::ptrdiff_t>(offset),
                            joint.membership.begin() + static_cast<std::ptrdiff_t>(offset + image.size()));
        r.iterations_run = joint.iterations_run;
        r.converged = joint.converged;
        offset += image.size();
        out.push_back(std::move(r));
    }
    return out;
}

std::vector<ImageClusterResult> cluster_batch(const std::vector<std::vector<SuperpixelFeature>>& per_image, const PriorConfig& cfg)
{
    if (per_image.empty())
        throw std::invalid_argument("cluster_batch: no images");
    std::vector<ImageClusterResult> out;
    out.reserve(per_image.size());
    const auto batches = make_batches(per_image.size(), cfg.batch_size);
    for (std::size_t b = 0; b < batches.size(); b++)
    {
        std::vector<std::vector<SuperpixelFeature>> members;
        for (std::size_t i : batches[b])
            members.push_back(per_image[i]);
        for (auto& r : cluster_one_batch(members, cfg, b))
            out.push_back(std::move(r));
    }
    return out;
}

} // namespace freespace
