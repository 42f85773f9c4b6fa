#include "freespace/fallback_features.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace freespace {

namespace {

double luma(const ImageRGB& image, int x, int y)
{
    return 0.299 * image.at(x, y, 0) + 0.587 * image.at(x, y, 1) + 0.114 * image.at(x, y, 2);
}

} // namespace

double luma_gradient_magnitude(const ImageRGB& image, int x, int y)
{
    const int xl = std::max(x - 1, 0);
    const int xr = std::min(x + 1, image.width() - 1);
    const int yu = std::max(y - 1, 0);
    const int yd = std::min(y + 1, image.height() - 1);
    const double gx = xr == xl ? 0.0 : (luma(image, xr, y) - luma(image, xl, y)) / (xr - xl);
    const double gy = yd == yu ? 0.0 : (luma(image, x, yd) - luma(image, x, yu)) / (yd - yu);
    return std::sqrt(gx * gx + gy * gy);
}

FeatureMap handcrafted_feature_map(const ImageRGB& image, int stride, std::string image_id)
{
    if (stride < 1)
        throw std::invalid_argument("stride must be >= 1");
    const int hf = (image.height() + stride - 1) / stride;
    const int wf = (image.width() + stride - 1) / stride;
    const std::size_t plane = static_cast<std::size_t>(hf) * wf;
    std::vector<float> data(plane * kFallbackChannels);

    for (int n = 0; n < hf; n++)
    {
        for (int m = 0; m < wf; m++)
        {
            const int y_end = std::min((n + 1) * stride, image.height());
            const int x_end = std::min((m + 1) * stride, image.width());
            double sum[3] = {0, 0, 0};
            double sum_sq[3] = {0, 0, 0};
            double grad = 0.0;
            for (int y = n * stride; y < y_end; y++)
            {
                for (int x = m * stride; x < x_end; x++)
                {
                    for (int c = 0; c < 3; c++)
                    {
                        const double v = image.at(x, y, c);
                        sum[c] += v;
                        sum_sq[c] += v * v;
                    }
                    grad += luma_gradient_magnitude(image, x, y);
                }
            }
            const double count = static_cast<double>((y_end - n * stride) * (x_end - m * stride));
            const std::size_t cell = static_cast<std::size_t>(n) * wf + m;
            for (int c = 0; c < 3; c++)
            {
                const double mean = sum[c] / count;
                const double var = std::max(sum_sq[c] / count - mean * mean, 0.0);
                data[c * plane + cell] = static_cast<float>(mean);
                data[(3 + c) * plane + cell] = static_cast<float>(std::sqrt(var));
            }
            data[6 * plane + cell] = static_cast<float>(grad / count);
        }
    }
    return FeatureMap(kFallbackChannels, hf, wf, std::move(data), std::move(image_id));
}

} // namespace freespace
