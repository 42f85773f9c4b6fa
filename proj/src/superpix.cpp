#include "freespace/superpix.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace freespace {

void FHParams::validate() const
{
    if (!(scale > 0.0))
        throw std::invalid_argument("FH scale must be > 0");
    if (min_size < 1)
        throw std::invalid_argument("FH min_size must be >= 1");
    if (!(smoothing_sigma >= 0.0))
        throw std::invalid_argument("FH smoothing_sigma must be >= 0");
}

namespace {

struct Edge
{
    float weight;
    std::uint32_t a;
    std::uint32_t b;
};

class DisjointSet
{
public:
    explicit DisjointSet(std::size_t n) : parent_(n), rank_(n, 0), size_(n, 1)
    {
        std::iota(parent_.begin(), parent_.end(), 0u);
    }

    std::uint32_t find(std::uint32_t x)
    {
        std::uint32_t root = x;
        while (parent_[root] != root)
            root = parent_[root];
        while (parent_[x] != root)
        {
            const std::uint32_t next = parent_[x];
            parent_[x] = root;
            x = next;
        }
        return root;
    }

    /// Joins two roots; returns the surviving root.
    std::uint32_t join(std::uint32_t a, std::uint32_t b)
    {
        if (rank_[a] < rank_[b])
            std::swap(a, b);
        parent_[b] = a;
        size_[a] += size_[b];
        if (rank_[a] == rank_[b])
            rank_[a]++;
        return a;
    }

    std::uint32_t size(std::uint32_t root) const { return size_[root]; }

private:
    std::vector<std::uint32_t> parent_;
    std::vector<std::uint8_t> rank_;
    std::vector<std::uint32_t> size_;
};

// Separable Gaussian, clamped borders; one float plane per channel.
std::vector<float> smooth_channels(const ImageRGB& image, double sigma)
{
    const int w = image.width();
    const int h = image.height();
    const std::size_t n = image.pixel_count();
    std::vector<float> planes(n * 3);
    for (std::size_t p = 0; p < n; p++)
        for (int c = 0; c < 3; c++)
            planes[c * n + p] = image.data()[p * 3 + c];
    if (sigma <= 0.0)
        return planes;

    const int radius = static_cast<int>(std::ceil(sigma * 4.0));
    std::vector<float> kernel(static_cast<std::size_t>(radius) + 1);
    double sum = 0.0;
    for (int i = 0; i <= radius; i++)
    {
        kernel[i] = static_cast<float>(std::exp(-0.5 * (i / sigma) * (i / sigma)));
        sum += (i == 0 ? 1.0 : 2.0) * kernel[i];
    }
    for (float& k : kernel)
        k = static_cast<float>(k / sum);

    std::vector<float> tmp(n);
    for (int c = 0; c < 3; c++)
    {
        float* plane = planes.data() + c * n;
        for (int y = 0; y < h; y++)
        {
            const float* row = plane + static_cast<std::size_t>(y) * w;
            for (int x = 0; x < w; x++)
            {
                float acc = kernel[0] * row[x];
                for (int i = 1; i <= radius; i++)
                    acc += kernel[i] * (row[std::max(x - i, 0)] + row[std::min(x + i, w - 1)]);
                tmp[static_cast<std::size_t>(y) * w + x] = acc;
            }
        }
        for (int y = 0; y < h; y++)
        {
            for (int x = 0; x < w; x++)
            {
                float acc = kernel[0] * tmp[static_cast<std::size_t>(y) * w + x];
                for (int i = 1; i <= radius; i++)
                    acc += kernel[i] * (tmp[static_cast<std::size_t>(std::max(y - i, 0)) * w + x] +
                                        tmp[static_cast<std::size_t>(std::min(y + i, h - 1)) * w + x]);
                plane[static_cast<std::size_t>(y) * w + x] = acc;
            }
        }
    }
    return planes;
}

} // namespace

SuperpixelMap segment(const ImageRGB& image, const FHParams& params)
{
    params.validate();
    const int w = image.width();
    const int h = image.height();
    const std::size_t n = image.pixel_count();
    const std::vector<float> planes = smooth_channels(image, params.smoothing_sigma);

    auto diff = [&](std::size_t p, std::size_t q) {
        float acc = 0.0f;
        for (int c = 0; c < 3; c++)
        {
            const float d = planes[c * n + p] - planes[c * n + q];
            acc += d * d;
        }
        return std::sqrt(acc);
    };

    std::vector<Edge> edges;
    edges.reserve(n * 4);
    for (int y = 0; y < h; y++)
    {
        for (int x = 0; x < w; x++)
        {
            const auto p = static_cast<std::uint32_t>(y * w + x);
            auto add = [&](int nx, int ny) {
                const auto q = static_cast<std::uint32_t>(ny * w + nx);
                edges.push_back({diff(p, q), p, q});
            };
            if (x + 1 < w)
                add(x + 1, y);
            if (y + 1 < h)
                add(x, y + 1);
            if (x + 1 < w && y + 1 < h)
                add(x + 1, y + 1);
            if (x + 1 < w && y > 0)
                add(x + 1, y - 1);
        }
    }
    // (weight, a, b) is a total order over distinct edges, so the result does
    // not depend on the sort implementation.
    std::sort(edges.begin(), edges.end(), [](const Edge& l, const Edge& r) {
        if (l.weight != r.weight)
            return l.weight < r.weight;
        if (l.a != r.a)
            return l.a < r.a;
        return l.b < r.b;
    });

    DisjointSet sets(n);
    std::vector<float> threshold(n, static_cast<float>(params.scale));
    for (const Edge& e : edges)
    {
        std::uint32_t a = sets.find(e.a);
        std::uint32_t b = sets.find(e.b);
        if (a == b)
            continue;
        if (e.weight <= threshold[a] && e.weight <= threshold[b])
        {
            const std::uint32_t root = sets.join(a, b);
            threshold[root] = e.weight + static_cast<float>(params.scale / sets.size(root));
        }
    }

    // Small components join the neighbor across their cheapest boundary edge.
    const auto min_size = static_cast<std::uint32_t>(params.min_size);
    for (const Edge& e : edges)
    {
        std::uint32_t a = sets.find(e.a);
        std::uint32_t b = sets.find(e.b);
        if (a != b && (sets.size(a) < min_size || sets.size(b) < min_size))
            sets.join(a, b);
    }

    std::vector<std::int32_t> dense(n, -1);
    std::vector<std::int32_t> labels(n);
    std::int32_t next = 0;
    for (std::size_t p = 0; p < n; p++)
    {
        const std::uint32_t root = sets.find(static_cast<std::uint32_t>(p));
        if (dense[root] < 0)
            dense[root] = next++;
        labels[p] = dense[root];
    }
    return SuperpixelMap(w, h, std::move(labels));
}

BinaryMask largest_superpixel_mask(const SuperpixelMap& sp)
{
    std::size_t best = 0;
    for (std::size_t i = 1; i < sp.segment_count(); i++)
    {
        if (sp.segment(i).pixel_count > sp.segment(best).pixel_count)
            best = i;
    }
    BinaryMask mask(sp.width(), sp.height());
    for (std::size_t p = 0; p < mask.pixel_count(); p++)
    {
        if (static_cast<std::size_t>(sp.labels()[p]) == best)
            mask.labels()[p] = MaskLabel::kFree;
    }
    return mask;
}

ImageRGB boundary_overlay(const ImageRGB& image, const SuperpixelMap& sp, std::array<std::uint8_t, 3> color)
{
    if (image.width() != sp.width() || image.height() != sp.height())
        throw std::invalid_argument("overlay: image and superpixel map dimensions differ");
    ImageRGB out = image;
    for (int y = 0; y < sp.height(); y++)
    {
        for (int x = 0; x < sp.width(); x++)
        {
            const std::int32_t l = sp.label(x, y);
            const bool edge = (x + 1 < sp.width() && sp.label(x + 1, y) != l) ||
                              (y + 1 < sp.height() && sp.label(x, y + 1) != l);
            if (edge)
                for (int c = 0; c < 3; c++)
                    out.at(x, y, c) = color[c];
        }
    }
    return out;
}

} // namespace freespace
