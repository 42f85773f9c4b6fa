#include <bit>
#include <cmath>
#include <cstring>

#include "freespace/io.hpp"

namespace freespace {

namespace {

constexpr char kMagic[4] = {'F', 'M', 'P', '1'};
constexpr std::size_t kHeaderBytes = 16;

std::uint32_t read_u32le(const std::uint8_t* p)
{
    return static_cast<std::uint32_t>(p[0]) | static_cast<std::uint32_t>(p[1]) << 8 |
           static_cast<std::uint32_t>(p[2]) << 16 | static_cast<std::uint32_t>(p[3]) << 24;
}

void put_u32le(std::uint8_t* p, std::uint32_t v)
{
    p[0] = static_cast<std::uint8_t>(v);
    p[1] = static_cast<std::uint8_t>(v >> 8);
    p[2] = static_cast<std::uint8_t>(v >> 16);
    p[3] = static_cast<std::uint8_t>(v >> 24);
}

} // namespace

FeatureMap decode_feature_map(const std::vector<std::uint8_t>& bytes)
{
    if (bytes.size() < 4 || std::memcmp(bytes.data(), kMagic, 4) != 0)
        throw IoError(IoErrorKind::kBadMagic, "FMP1: bad magic");
    if (bytes.size() < kHeaderBytes)
        throw IoError(IoErrorKind::kShapeMismatch, "FMP1: truncated header");

    const std::uint32_t c = read_u32le(bytes.data() + 4);
    const std::uint32_t h = read_u32le(bytes.data() + 8);
    const std::uint32_t w = read_u32le(bytes.data() + 12);
    if (c == 0 || h == 0 || w == 0)
        throw IoError(IoErrorKind::kShapeMismatch, "FMP1: zero-sized dimension");
    const std::uint64_t count = static_cast<std::uint64_t>(c) * h * w;
    if (count > (bytes.size() - kHeaderBytes) / 4 || (bytes.size() - kHeaderBytes) != count * 4)
        throw IoError(IoErrorKind::kShapeMismatch, "FMP1: header declares " + std::to_string(c) + "x" + std::to_string(h) + "x" +
                                                        std::to_string(w) + " but payload has " +
                                                        std::to_string(bytes.size() - kHeaderBytes) + " bytes");

    std::vector<float> data(count);
    const std::uint8_t* p = bytes.data() + kHeaderBytes;
    for (std::size_t i = 0; i < count; i++, p += 4)
    {
        data[i] = std::bit_cast<float>(read_u32le(p));
        if (!std::isfinite(data[i]))
            throw IoError(IoErrorKind::kNonFinite, "FMP1: non-finite value at element " + std::to_string(i));
    }
    return FeatureMap(static_cast<int>(c), static_cast<int>(h), static_cast<int>(w), std::move(data));
}

std::vector<std::uint8_t> encode_feature_map(const FeatureMap& fmap)
{
    std::vector<std::uint8_t> out(kHeaderBytes + fmap.data().size() * 4);
    std::memcpy(out.data(), kMagic, 4);
    put_u32le(out.data() + 4, static_cast<std::uint32_t>(fmap.channels()));
    put_u32le(out.data() + 8, static_cast<std::uint32_t>(fmap.height()));
    put_u32le(out.data() + 12, static_cast<std::uint32_t>(fmap.width()));
    std::uint8_t* p = out.data() + kHeaderBytes;
    for (float v : fmap.data())
    {
        put_u32le(p, std::bit_cast<std::uint32_t>(v));
        p += 4;
    }
    return out;
}

FeatureMap load_feature_map(const std::filesystem::path& path)
{
    FeatureMap fmap = decode_feature_map(read_file_bytes(path));
    fmap.set_source_image_id(path.stem().string());
    return fmap;
}

void write_feature_map(const std::filesystem::path& path, const FeatureMap& fmap)
{
    write_file_bytes(path, encode_feature_map(fmap));
}

} // namespace freespace
