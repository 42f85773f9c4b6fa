#include "freespace/eval.hpp"

#include <stdexcept>

namespace freespace {

namespace {

double ratio_or_one(std::uint64_t num, std::uint64_t den)
{
    return den == 0 ? 1.0 : static_cast<double>(num) / static_cast<double>(den);
}

} // namespace

Score score_from_counts(std::uint64_t tp, std::uint64_t fp, std::uint64_t fn)
{
    Score s;
    s.tp = tp;
    s.fp = fp;
    s.fn = fn;
    s.iou = ratio_or_one(tp, tp + fp + fn);
    s.precision = ratio_or_one(tp, tp + fp);
    s.recall = ratio_or_one(tp, tp + fn);
    return s;
}

Score score(const BinaryMask& pred, const BinaryMask& gt)
{
    if (pred.width() != gt.width() || pred.height() != gt.height())
        throw std::invalid_argument("score: prediction is " + std::to_string(pred.width()) + "x" + std::to_string(pred.height()) +
                                    ", ground truth is " + std::to_string(gt.width()) + "x" + std::to_string(gt.height()));
    std::uint64_t tp = 0, fp = 0, fn = 0;
    for (std::size_t i = 0; i < gt.pixel_count(); i++)
    {
        const MaskLabel g = gt.labels()[i];
        if (g == MaskLabel::kVoid)
            continue;
        const bool p_free = pred.labels()[i] == MaskLabel::kFree;
        const bool g_free = g == MaskLabel::kFree;
        tp += p_free && g_free;
        fp += p_free && !g_free;
        fn += !p_free && g_free;
    }
    return score_from_counts(tp, fp, fn);
}

Score aggregate_scores(std::span<const Score> per_image)
{
    if (per_image.empty())
        throw std::invalid_argument("aggregate_scores: no images");
    std::uint64_t tp = 0, fp = 0, fn = 0;
    for (const Score& s : per_image)
    {
        tp += s.tp;
        fp += s.fp;
        fn += s.fn;
    }
    return score_from_counts(tp, fp, fn);
}

} // namespace freespace
