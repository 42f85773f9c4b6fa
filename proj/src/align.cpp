#include "freespace/align.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <limits>
#include <stdexcept>

namespace freespace {

CellCoord pixel_to_cell(int x, int y, int image_width, int image_height, int fmap_width, int fmap_height)
{
    const double yf = (y + 0.5) / image_height * fmap_height - 0.5;
    const double xf = (x + 0.5) / image_width * fmap_width - 0.5;
    return {std::clamp(yf, 0.0, static_cast<double>(fmap_height - 1)),
            std::clamp(xf, 0.0, static_cast<double>(fmap_width - 1))};
}

std::vector<double> bilinear_sample(const FeatureMap& fmap, double y, double x)
{
    if (!(y >= 0.0 && y <= fmap.height() - 1) || !(x >= 0.0 && x <= fmap.width() - 1))
        throw std::out_of_range("bilinear_sample: coordinate outside feature map");

    const int y0 = static_cast<int>(std::floor(y));
    const int x0 = static_cast<int>(std::floor(x));
    const int y1 = std::min(y0 + 1, fmap.height() - 1);
    const int x1 = std::min(x0 + 1, fmap.width() - 1);
    const double ly = y - y0;
    const double lx = x - x0;
    const double w00 = (1.0 - ly) * (1.0 - lx);
    const double w01 = (1.0 - ly) * lx;
    const double w10 = ly * (1.0 - lx);
    const double w11 = ly * lx;

    std::vector<double> out(static_cast<std::size_t>(fmap.channels()));
    for (int c = 0; c < fmap.channels(); c++)
    {
        out[c] = w00 * fmap.at(c, y0, x0) + w01 * fmap.at(c, y0, x1) + w10 * fmap.at(c, y1, x0) + w11 * fmap.at(c, y1, x1);
    }
    return out;
}

double prior_weight_at(RowCol p, RowCol mu, RowCol sigma)
{
    const double dr = p.row - mu.row;
    const double dc = p.col - mu.col;
    return std::exp(-(dr * dr / (2.0 * sigma.row * sigma.row) + dc * dc / (2.0 * sigma.col * sigma.col)));
}

namespace {

// exp() underflows to zero far from the prior for small sigmas; weights stay
// strictly positive.
double clamp_weight(double w)
{
    return std::clamp(w, std::numeric_limits<double>::min(), 1.0);
}

} // namespace

double prior_weight(const SuperpixelMap& sp, std::size_t segment_id, RowCol mu, RowCol sigma)
{
    const std::uint32_t* begin = sp.segment_pixels_begin(segment_id);
    const std::uint32_t* end = sp.segment_pixels_end(segment_id);
    double sum = 0.0;
    for (const std::uint32_t* p = begin; p != end; ++p)
        sum += prior_weight_at(sp.normalized_coord(*p), mu, sigma);
    return clamp_weight(sum / static_cast<double>(end - begin));
}

std::vector<SuperpixelFeature> align_superpixels(const FeatureMap& fmap, const SuperpixelMap& sp, const PriorConfig& cfg, Rng& rng)
{
    cfg.validate();
    const auto channels = static_cast<std::size_t>(fmap.channels());
    std::vector<SuperpixelFeature> out;
    out.reserve(sp.segment_count());

    for (std::size_t s = 0; s < sp.segment_count(); s++)
    {
        const std::uint32_t* pixels = sp.segment_pixels_begin(s);
        const auto n = static_cast<std::uint64_t>(sp.segment_pixels_end(s) - pixels);
        if (n == 0)
            throw std::logic_error("align_superpixels: empty segment");

        SuperpixelFeature f;
        f.segment_id = static_cast<std::int32_t>(s);
        f.image_id = fmap.source_image_id();
        f.vector.assign(channels + 2, 0.0);
        for (int i = 0; i < cfg.samples_per_superpixel; i++)
        {
            const std::uint32_t p = pixels[rng.uniform_index(n)];
            const CellCoord cell = pixel_to_cell(static_cast<int>(p % sp.width()), static_cast<int>(p / sp.width()), sp.width(),
                                                 sp.height(), fmap.width(), fmap.height());
            const std::vector<double> sample = bilinear_sample(fmap, cell.y, cell.x);
            for (std::size_t c = 0; c < channels; c++)
                f.vector[c] += sample[c];
        }
        for (std::size_t c = 0; c < channels; c++)
            f.vector[c] /= cfg.samples_per_superpixel;
        f.vector[channels] = cfg.centroid_weight * sp.segment(s).centroid.row;
        f.vector[channels + 1] = cfg.centroid_weight * sp.segment(s).centroid.col;
        f.prior_weight = prior_weight(sp, s, cfg.mu, cfg.sigma);
        out.push_back(std::move(f));
    }
    return out;
}

std::vector<SuperpixelFeature> pixel_features_raw(const FeatureMap& fmap, const PriorConfig& cfg)
{
    cfg.validate();
    const auto channels = static_cast<std::size_t>(fmap.channels());
    std::vector<SuperpixelFeature> out;
    out.reserve(static_cast<std::size_t>(fmap.height()) * fmap.width());
    for (int n = 0; n < fmap.height(); n++)
    {
        for (int m = 0; m < fmap.width(); m++)
        {
            const RowCol center{(n + 0.5) / fmap.height(), (m + 0.5) / fmap.width()};
            SuperpixelFeature f;
            f.segment_id = n * fmap.width() + m;
            f.image_id = fmap.source_image_id();
            f.vector.resize(channels + 2);
            for (std::size_t c = 0; c < channels; c++)
                f.vector[c] = fmap.at(static_cast<int>(c), n, m);
            f.vector[channels] = cfg.centroid_weight * center.row;
            f.vector[channels + 1] = cfg.centroid_weight * center.col;
            f.prior_weight = clamp_weight(prior_weight_at(center, cfg.mu, cfg.sigma));
            out.push_back(std::move(f));
        }
    }
    return out;
}

std::vector<std::uint8_t> encode_spf1(const std::vector<SuperpixelFeature>& features)
{
    const std::size_t dim = features.empty() ? 0 : features.front().vector.size();
    std::vector<std::uint8_t> out(12 + features.size() * (dim + 1) * 4);
    std::uint8_t* cursor = out.data();
    auto put = [&](std::uint32_t v) {
        for (int i = 0; i < 4; i++)
            *cursor++ = static_cast<std::uint8_t>(v >> (8 * i));
    };
    std::memcpy(cursor, "SPF1", 4);
    cursor += 4;
    put(static_cast<std::uint32_t>(features.size()));
    put(static_cast<std::uint32_t>(dim));
    for (const auto& f : features)
    {
        if (f.vector.size() != dim)
            throw std::invalid_argument("encode_spf1: inconsistent feature dimension");
        for (double v : f.vector)
            put(std::bit_cast<std::uint32_t>(static_cast<float>(v)));
    }
    for (const auto& f : features)
        put(std::bit_cast<std::uint32_t>(static_cast<float>(f.prior_weight)));
    return out;
}

} // namespace freespace
