#pragma once

#include <cstdint>
#include <optional>

#include "freespace/core.hpp"

namespace freespace::synthetic {

struct SceneOptions
{
    int width = 256;
    int height = 128;
    int distractors = 3;
    /// Place a large textured obstacle over the location prior.
    bool occlude_prior = false;
    /// Occluder extent as fractions of (width, height).
    double occluder_width = 0.25;
    double occluder_height = 0.30;
    /// When set, road, sky and roadside colors come from this seed instead of
    /// the scene seed, so several scenes can share one appearance.
    std::optional<std::uint64_t> palette_seed;
};

struct Scene
{
    ImageRGB image;
    BinaryMask ground_truth; // FREE on visible road, NOT_FREE elsewhere, no VOID
};

/// Driving-like scene: textured sky and roadside, a smooth gray trapezoidal
/// road from the horizon to the bottom edge, and textured saturated boxes as
/// distractors. Fully determined by (options, seed).
Scene make_scene(const SceneOptions& options, std::uint64_t seed);

/// Image of random rectangles filled with per-pixel noise of random strength.
ImageRGB random_texture(int width, int height, std::uint64_t seed);

} // namespace freespace::synthetic
