#pragma once

// Brute-force reference computations used as independent oracles. Nothing here
// calls into the library's implementation of the quantity being checked.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <vector>

#include "freespace/core.hpp"
#include "freespace/eval.hpp"

namespace oracle {

using namespace freespace;

/// Dense interpolation: sums every cell of the map with its tent weight.
inline std::vector<double> dense_bilinear(const FeatureMap& f, double y, double x)
{
    std::vector<double> out(static_cast<std::size_t>(f.channels()), 0.0);
    for (int c = 0; c < f.channels(); c++)
    {
        for (int n = 0; n < f.height(); n++)
        {
            for (int m = 0; m < f.width(); m++)
            {
                const double wx = std::max(0.0, 1.0 - std::abs(x - m));
                const double wy = std::max(0.0, 1.0 - std::abs(y - n));
                out[c] += f.at(c, n, m) * wx * wy;
            }
        }
    }
    return out;
}

/// Prior weight from a scan of the whole label array.
inline double prior_weight_scan(const SuperpixelMap& sp, std::int32_t id, RowCol mu, RowCol sigma)
{
    double sum = 0.0;
    std::size_t count = 0;
    for (int y = 0; y < sp.height(); y++)
    {
        for (int x = 0; x < sp.width(); x++)
        {
            if (sp.labels()[static_cast<std::size_t>(y) * sp.width() + x] != id)
                continue;
            const double dr = static_cast<double>(y) / sp.height() - mu.row;
            const double dc = static_cast<double>(x) / sp.width() - mu.col;
            sum += std::exp(-dr * dr / (2 * sigma.row * sigma.row) - dc * dc / (2 * sigma.col * sigma.col));
            count++;
        }
    }
    return sum / static_cast<double>(count);
}

inline double sorted_lower_median(std::vector<double> v)
{
    std::sort(v.begin(), v.end());
    return v[(v.size() - 1) / 2];
}

/// Textbook Lloyd iterations from a given membership; unweighted means, lowest
/// index wins ties. Returns final centers.
inline std::vector<std::vector<double>> lloyd(const std::vector<std::vector<double>>& points, std::vector<int> membership, int k,
                                              int max_iters, std::vector<int>* final_membership = nullptr)
{
    const std::size_t dim = points.front().size();
    std::vector<std::vector<double>> centers(k, std::vector<double>(dim, 0.0));
    for (int it = 0; it < max_iters; it++)
    {
        std::vector<std::vector<double>> sum(k, std::vector<double>(dim, 0.0));
        std::vector<int> count(k, 0);
        for (std::size_t i = 0; i < points.size(); i++)
        {
            count[membership[i]]++;
            for (std::size_t d = 0; d < dim; d++)
                sum[membership[i]][d] += points[i][d];
        }
        for (int q = 0; q < k; q++)
            for (std::size_t d = 0; d < dim; d++)
                centers[q][d] = count[q] ? sum[q][d] / count[q] : 0.0;
        bool changed = false;
        for (std::size_t i = 0; i < points.size(); i++)
        {
            int best = 0;
            double best_d = INFINITY;
            for (int q = 0; q < k; q++)
            {
                double d2 = 0.0;
                for (std::size_t d = 0; d < dim; d++)
                    d2 += (points[i][d] - centers[q][d]) * (points[i][d] - centers[q][d]);
                if (d2 < best_d)
                {
                    best_d = d2;
                    best = q;
                }
            }
            changed |= best != membership[i];
            membership[i] = best;
        }
        if (!changed)
            break;
    }
    if (final_membership)
        *final_membership = membership;
    return centers;
}

/// Triple counter over a pixel scan.
struct Counts
{
    std::uint64_t tp = 0, fp = 0, fn = 0;
};

inline Counts count_pixels(const BinaryMask& pred, const BinaryMask& gt)
{
    Counts c;
    for (int y = 0; y < gt.height(); y++)
    {
        for (int x = 0; x < gt.width(); x++)
        {
            if (gt.at(x, y) == MaskLabel::kVoid)
                continue;
            const bool p = pred.at(x, y) == MaskLabel::kFree;
            const bool g = gt.at(x, y) == MaskLabel::kFree;
            if (p && g)
                c.tp++;
            else if (p)
                c.fp++;
            else if (g)
                c.fn++;
        }
    }
    return c;
}

/// Connected components over 8-neighbors whose raw RGB distance is <= threshold.
inline int count_components(const ImageRGB& image, double threshold)
{
    const int w = image.width(), h = image.height();
    std::vector<int> comp(static_cast<std::size_t>(w) * h, -1);
    int next = 0;
    for (int sy = 0; sy < h; sy++)
    {
        for (int sx = 0; sx < w; sx++)
        {
            if (comp[static_cast<std::size_t>(sy) * w + sx] >= 0)
                continue;
            std::deque<std::pair<int, int>> queue{{sx, sy}};
            comp[static_cast<std::size_t>(sy) * w + sx] = next;
            while (!queue.empty())
            {
                auto [x, y] = queue.front();
                queue.pop_front();
                for (int dy = -1; dy <= 1; dy++)
                {
                    for (int dx = -1; dx <= 1; dx++)
                    {
                        const int nx = x + dx, ny = y + dy;
                        if ((dx == 0 && dy == 0) || nx < 0 || ny < 0 || nx >= w || ny >= h)
                            continue;
                        if (comp[static_cast<std::size_t>(ny) * w + nx] >= 0)
                            continue;
                        double d2 = 0.0;
                        for (int c = 0; c < 3; c++)
                            d2 += std::pow(static_cast<double>(image.at(x, y, c)) - image.at(nx, ny, c), 2);
                        if (std::sqrt(d2) <= threshold)
                        {
                            comp[static_cast<std::size_t>(ny) * w + nx] = next;
                            queue.emplace_back(nx, ny);
                        }
                    }
                }
            }
            next++;
        }
    }
    return next;
}

} // namespace oracle
