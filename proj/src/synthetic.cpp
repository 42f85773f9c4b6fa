#include "freespace/synthetic.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "freespace/rng.hpp"

namespace freespace::synthetic {

namespace {

using Color = std::array<double, 3>;

double uniform(Rng& rng, double lo, double hi) { return lo + (hi - lo) * rng.uniform01(); }

void put_noisy(ImageRGB& image, int x, int y, const Color& base, double amplitude, Rng& rng)
{
    for (int c = 0; c < 3; c++)
    {
        const double v = base[c] + uniform(rng, -amplitude, amplitude);
        image.at(x, y, c) = static_cast<std::uint8_t>(std::clamp(std::lround(v), 0L, 255L));
    }
}

struct Box
{
    int x0, y0, x1, y1; // half-open
    Color color;
    double amplitude;

    bool contains(int x, int y) const { return x >= x0 && x < x1 && y >= y0 && y < y1; }
};

} // namespace

Scene make_scene(const SceneOptions& options, std::uint64_t seed)
{
    const int w = options.width;
    const int h = options.height;
    Rng rng(mix64(seed));

    const double horizon = uniform(rng, 0.45, 0.52) * h;
    const double top_left = uniform(rng, 0.40, 0.46) * w;
    const double top_right = uniform(rng, 0.54, 0.60) * w;
    const double bottom_left = uniform(rng, -0.15, 0.10) * w;
    const double bottom_right = uniform(rng, 0.90, 1.15) * w;

    Rng palette_rng(mix64(options.palette_seed.value_or(seed) ^ 0x70616c65747465ULL));
    Rng& prng = options.palette_seed ? palette_rng : rng;
    const double gray = uniform(prng, 90, 140);
    const Color road{gray + uniform(prng, -6, 6), gray + uniform(prng, -6, 6), gray + uniform(prng, -6, 6)};
    const Color sky{uniform(prng, 150, 210), uniform(prng, 170, 220), uniform(prng, 200, 250)};
    const Color side{uniform(prng, 40, 110), uniform(prng, 90, 160), uniform(prng, 30, 80)};

    std::vector<Box> boxes;
    if (options.occlude_prior)
    {
        const int bw = static_cast<int>(options.occluder_width * w);
        const int bh = static_cast<int>(options.occluder_height * h);
        const int cx = w / 2;
        const int cy = static_cast<int>(0.75 * h);
        boxes.push_back({cx - bw / 2, cy - bh / 2, cx + bw / 2, std::min(cy + bh / 2, h),
                         Color{uniform(rng, 150, 230), uniform(rng, 20, 60), uniform(rng, 20, 60)}, 30.0});
    }
    for (int i = 0; i < options.distractors; i++)
    {
        // Boxes stay clear of the prior center so that the unoccluded scenes
        // satisfy the location-prior assumption.
        for (int attempt = 0; attempt < 50; attempt++)
        {
            const int bw = static_cast<int>(uniform(rng, 0.08, 0.20) * w);
            const int bh = static_cast<int>(uniform(rng, 0.10, 0.25) * h);
            const int y1 = static_cast<int>(uniform(rng, horizon + 0.08 * h, static_cast<double>(h)));
            const int x0 = static_cast<int>(uniform(rng, 0.0, static_cast<double>(w - bw)));
            const Box box{x0, std::max(y1 - bh, 0), x0 + bw, y1,
                          Color{uniform(rng, 0, 255), uniform(rng, 0, 255), uniform(rng, 0, 255)}, uniform(rng, 20, 40)};
            const bool hits_prior = box.x1 > 0.33 * w && box.x0 < 0.67 * w && box.y1 > 0.58 * h && box.y0 < 0.92 * h;
            if (!hits_prior)
            {
                boxes.push_back(box);
                break;
            }
        }
    }

    Scene scene{ImageRGB(w, h), BinaryMask(w, h)};
    for (int y = 0; y < h; y++)
    {
        const double t = std::clamp((y - horizon) / (h - 1 - horizon), 0.0, 1.0);
        const double left = top_left + (bottom_left - top_left) * t;
        const double right = top_right + (bottom_right - top_right) * t;
        for (int x = 0; x < w; x++)
        {
            const Box* hit = nullptr;
            for (const Box& b : boxes)
            {
                if (b.contains(x, y))
                    hit = &b;
            }
            if (hit)
            {
                put_noisy(scene.image, x, y, hit->color, hit->amplitude, rng);
            }
            else if (y < horizon)
            {
                const Color c{sky[0] - 30.0 * y / h, sky[1] - 20.0 * y / h, sky[2]};
                put_noisy(scene.image, x, y, c, 25.0, rng);
            }
            else if (x >= left && x <= right)
            {
                put_noisy(scene.image, x, y, road, 3.0, rng);
                scene.ground_truth.at(x, y) = MaskLabel::kFree;
            }
            else
            {
                put_noisy(scene.image, x, y, side, 40.0, rng);
            }
        }
    }
    return scene;
}

ImageRGB random_texture(int width, int height, std::uint64_t seed)
{
    Rng rng(mix64(seed));
    ImageRGB image(width, height);
    const Color base{uniform(rng, 0, 255), uniform(rng, 0, 255), uniform(rng, 0, 255)};
    std::vector<Box> boxes;
    const int count = static_cast<int>(rng.uniform_int(0, 8));
    for (int i = 0; i < count; i++)
    {
        const int x0 = static_cast<int>(rng.uniform_int(0, width - 1));
        const int y0 = static_cast<int>(rng.uniform_int(0, height - 1));
        boxes.push_back({x0, y0, x0 + static_cast<int>(rng.uniform_int(1, width)), y0 + static_cast<int>(rng.uniform_int(1, height)),
                         Color{uniform(rng, 0, 255), uniform(rng, 0, 255), uniform(rng, 0, 255)}, uniform(rng, 0, 60)});
    }
    const double base_amplitude = uniform(rng, 0, 80);
    for (int y = 0; y < height; y++)
    {
        for (int x = 0; x < width; x++)
        {
            const Box* hit = nullptr;
            for (const Box& b : boxes)
            {
                if (b.contains(x, y))
                    hit = &b;
            }
            put_noisy(image, x, y, hit ? hit->color : base, hit ? hit->amplitude : base_amplitude, rng);
        }
    }
    return image;
}

} // namespace freespace::synthetic
