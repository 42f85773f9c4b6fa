#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "freespace/core.hpp"

namespace freespace {

enum class IoErrorKind
{
    kMissingFile,
    kUnsupportedFormat, // valid PNG but bit depth / color type we do not read
    kCorruptStream,
    kWriteFailed,
    kBadMagic,
    kShapeMismatch,
    kNonFinite,
};

const char* to_string(IoErrorKind kind);

class IoError : public std::runtime_error
{
public:
    IoError(IoErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind)
    {
    }

    IoErrorKind kind() const { return kind_; }

private:
    IoErrorKind kind_;
};

/// 8-bit single-channel raster, used for masks and label-id images.
struct GrayImage8
{
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> data;
};

// PNG. Only 8-bit samples are accepted on read; gray, gray+alpha, RGB, RGBA
// and palette images are expanded to RGB (alpha dropped).
ImageRGB load_image(const std::filesystem::path& path);
void write_image(const std::filesystem::path& path, const ImageRGB& image);

GrayImage8 load_gray8(const std::filesystem::path& path);
void write_gray8(const std::filesystem::path& path, const GrayImage8& image);
void write_gray16(const std::filesystem::path& path, int width, int height, const std::vector<std::uint16_t>& data);

/// Masks: FREE=255, NOT_FREE=0, VOID=128. Any other gray value is a corrupt mask.
BinaryMask load_mask(const std::filesystem::path& path);
void write_mask(const std::filesystem::path& path, const BinaryMask& mask);

// FMP1: "FMP1", u32 C, u32 H, u32 W (little endian), then C*H*W f32 LE in C-order.
FeatureMap load_feature_map(const std::filesystem::path& path);
FeatureMap decode_feature_map(const std::vector<std::uint8_t>& bytes);
std::vector<std::uint8_t> encode_feature_map(const FeatureMap& fmap);
void write_feature_map(const std::filesystem::path& path, const FeatureMap& fmap);

std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path);
void write_file_bytes(const std::filesystem::path& path, const std::vector<std::uint8_t>& bytes);

} // namespace freespace
