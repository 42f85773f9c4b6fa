#include "freespace/maskgen.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

#include "freespace/align.hpp"

namespace freespace {

BinaryMask mask_from_membership(const SuperpixelMap& sp, const std::vector<int>& membership)
{
    if (membership.size() != sp.segment_count())
        throw std::invalid_argument("mask_from_membership: " + std::to_string(membership.size()) + " memberships for " +
                                    std::to_string(sp.segment_count()) + " segments");
    BinaryMask mask(sp.width(), sp.height());
    for (std::size_t p = 0; p < mask.pixel_count(); p++)
    {
        if (membership[static_cast<std::size_t>(sp.labels()[p])] == 0)
            mask.labels()[p] = MaskLabel::kFree;
    }
    return mask;
}

BinaryMask overlap_select(const SuperpixelMap& sp, const BinaryMask& saliency, double tau)
{
    if (sp.width() != saliency.width() || sp.height() != saliency.height())
        throw std::invalid_argument("overlap_select: dimension mismatch");
    std::vector<std::size_t> overlap(sp.segment_count(), 0);
    for (std::size_t p = 0; p < saliency.pixel_count(); p++)
    {
        if (saliency.labels()[p] == MaskLabel::kFree)
            overlap[static_cast<std::size_t>(sp.labels()[p])]++;
    }
    // Integer comparison overlap >= tau * size, exact at the threshold.
    std::vector<bool> selected(sp.segment_count());
    for (std::size_t s = 0; s < sp.segment_count(); s++)
        selected[s] = static_cast<double>(overlap[s]) >= tau * static_cast<double>(sp.segment(s).pixel_count);

    BinaryMask mask(sp.width(), sp.height());
    for (std::size_t p = 0; p < mask.pixel_count(); p++)
    {
        if (selected[static_cast<std::size_t>(sp.labels()[p])])
            mask.labels()[p] = MaskLabel::kFree;
    }
    return mask;
}

BinaryMask mask_from_cell_membership(int width, int height, int fmap_width, int fmap_height, const std::vector<int>& membership)
{
    if (membership.size() != static_cast<std::size_t>(fmap_width) * fmap_height)
        throw std::invalid_argument("mask_from_cell_membership: membership does not cover the cell grid");
    BinaryMask mask(width, height);
    for (int y = 0; y < height; y++)
    {
        for (int x = 0; x < width; x++)
        {
            const CellCoord cell = pixel_to_cell(x, y, width, height, fmap_width, fmap_height);
            const auto n = static_cast<std::size_t>(std::lround(cell.y));
            const auto m = static_cast<std::size_t>(std::lround(cell.x));
            if (membership[n * static_cast<std::size_t>(fmap_width) + m] == 0)
                mask.at(x, y) = MaskLabel::kFree;
        }
    }
    return mask;
}

BinaryMask bottom_half_mask(int width, int height)
{
    BinaryMask mask(width, height);
    for (int y = (height + 1) / 2; y < height; y++)
        for (int x = 0; x < width; x++)
            mask.at(x, y) = MaskLabel::kFree;
    return mask;
}

ImageRGB overlay_mask(const ImageRGB& image, const BinaryMask& mask)
{
    if (image.width() != mask.width() || image.height() != mask.height())
        throw std::invalid_argument("overlay: image and mask dimensions differ");
    static constexpr std::array<int, 3> kRed = {255, 0, 0};
    ImageRGB out = image;
    for (int y = 0; y < image.height(); y++)
    {
        for (int x = 0; x < image.width(); x++)
        {
            if (mask.at(x, y) != MaskLabel::kFree)
                continue;
            for (int c = 0; c < 3; c++)
                out.at(x, y, c) = static_cast<std::uint8_t>((image.at(x, y, c) + kRed[c] + 1) / 2);
        }
    }
    return out;
}

BinaryMask mask_from_cityscapes_label_ids(const GrayImage8& label_ids)
{
    constexpr std::uint8_t kRoad = 7;
    constexpr std::uint8_t kLastLabelId = 33;
    constexpr std::array<std::uint8_t, 15> kIgnored = {0, 1, 2, 3, 4, 5, 6, 9, 10, 14, 15, 16, 18, 29, 30};

    std::array<MaskLabel, 256> lut;
    lut.fill(MaskLabel::kVoid);
    for (int id = 0; id <= kLastLabelId; id++)
        lut[id] = MaskLabel::kNotFree;
    for (std::uint8_t id : kIgnored)
        lut[id] = MaskLabel::kVoid;
    lut[kRoad] = MaskLabel::kFree;

    std::vector<MaskLabel> labels(label_ids.data.size());
    for (std::size_t i = 0; i < labels.size(); i++)
        labels[i] = lut[label_ids.data[i]];
    return BinaryMask(label_ids.width, label_ids.height, std::move(labels));
}

} // namespace freespace
