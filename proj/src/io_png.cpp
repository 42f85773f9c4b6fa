#include <png.h>

#include <csetjmp>
#include <cstring>
#include <fstream>

#include "freespace/io.hpp"

namespace freespace {

const char* to_string(IoErrorKind kind)
{
    switch (kind)
    {
    case IoErrorKind::kMissingFile: return "missing file";
    case IoErrorKind::kUnsupportedFormat: return "unsupported format";
    case IoErrorKind::kCorruptStream: return "corrupt stream";
    case IoErrorKind::kWriteFailed: return "write failed";
    case IoErrorKind::kBadMagic: return "bad magic";
    case IoErrorKind::kShapeMismatch: return "shape mismatch";
    case IoErrorKind::kNonFinite: return "non-finite value";
    }
    return "unknown";
}

std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path)
{
    std::error_code ec;
    if (!std::filesystem::is_regular_file(path, ec))
        throw IoError(IoErrorKind::kMissingFile, "no such file: " + path.string());
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError(IoErrorKind::kMissingFile, "cannot open: " + path.string());
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file_bytes(const std::filesystem::path& path, const std::vector<std::uint8_t>& bytes)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw IoError(IoErrorKind::kWriteFailed, "cannot open for writing: " + path.string());
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out)
        throw IoError(IoErrorKind::kWriteFailed, "write failed: " + path.string());
}

namespace {

struct ReadCursor
{
    const std::vector<std::uint8_t>* bytes;
    std::size_t pos;
};

struct ErrorSlot
{
    std::jmp_buf jmp;
    char message[256];
};

void on_png_error(png_structp png, png_const_charp msg)
{
    auto* slot = static_cast<ErrorSlot*>(png_get_error_ptr(png));
    std::strncpy(slot->message, msg, sizeof(slot->message) - 1);
    slot->message[sizeof(slot->message) - 1] = '\0';
    std::longjmp(slot->jmp, 1);
}

void on_png_warning(png_structp, png_const_charp) {}

void read_from_buffer(png_structp png, png_bytep out, png_size_t length)
{
    auto* cur = static_cast<ReadCursor*>(png_get_io_ptr(png));
    if (cur->pos + length > cur->bytes->size())
        png_error(png, "unexpected end of stream");
    std::memcpy(out, cur->bytes->data() + cur->pos, length);
    cur->pos += length;
}

void write_to_buffer(png_structp png, png_bytep data, png_size_t length)
{
    auto* out = static_cast<std::vector<std::uint8_t>*>(png_get_io_ptr(png));
    out->insert(out->end(), data, data + length);
}

void flush_noop(png_structp) {}

struct DecodedPng
{
    int width = 0;
    int height = 0;
    int channels = 0; // 1 or 3 after transforms
    std::vector<std::uint8_t> data;
};

// Decodes to 8-bit gray (want_gray) or 8-bit RGB. Kept free of C++ objects with
// non-trivial destructors between setjmp and longjmp.
DecodedPng decode_png(const std::vector<std::uint8_t>& bytes, const std::string& name, bool want_gray)
{
    if (bytes.size() < 8 || png_sig_cmp(bytes.data(), 0, 8) != 0)
        throw IoError(IoErrorKind::kCorruptStream, "not a PNG stream: " + name);

    ErrorSlot slot{};
    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, &slot, on_png_error, on_png_warning);
    if (!png)
        throw std::bad_alloc();
    png_infop info = png_create_info_struct(png);
    if (!info)
    {
        png_destroy_read_struct(&png, nullptr, nullptr);
        throw std::bad_alloc();
    }

    ReadCursor cursor{&bytes, 0};
    DecodedPng out;
    std::vector<png_bytep> rows;
    bool unsupported = false;

    if (setjmp(slot.jmp))
    {
        png_destroy_read_struct(&png, &info, nullptr);
        throw IoError(IoErrorKind::kCorruptStream, "corrupt PNG " + name + ": " + slot.message);
    }

    png_set_read_fn(png, &cursor, read_from_buffer);
    png_read_info(png, info);

    const png_uint_32 width = png_get_image_width(png, info);
    const png_uint_32 height = png_get_image_height(png, info);
    const int bit_depth = png_get_bit_depth(png, info);
    const int color_type = png_get_color_type(png, info);

    if (bit_depth > 8)
    {
        unsupported = true;
    }
    else
    {
        if (color_type == PNG_COLOR_TYPE_PALETTE)
            png_set_palette_to_rgb(png);
        if (color_type == PNG_COLOR_TYPE_GRAY && bit_depth < 8)
            png_set_expand_gray_1_2_4_to_8(png);
        if (png_get_valid(png, info, PNG_INFO_tRNS))
            png_set_tRNS_to_alpha(png);
        png_set_strip_alpha(png);
        const bool is_gray = color_type == PNG_COLOR_TYPE_GRAY || color_type == PNG_COLOR_TYPE_GRAY_ALPHA;
        if (want_gray && !is_gray)
            png_set_rgb_to_gray_fixed(png, 1, -1, -1);
        if (!want_gray && is_gray)
            png_set_gray_to_rgb(png);
        png_read_update_info(png, info);

        out.width = static_cast<int>(width);
        out.height = static_cast<int>(height);
        out.channels = want_gray ? 1 : 3;
        const std::size_t rowbytes = png_get_rowbytes(png, info);
        out.data.resize(rowbytes * height);
        rows.resize(height);
        for (png_uint_32 y = 0; y < height; y++)
            rows[y] = out.data.data() + rowbytes * y;
        png_read_image(png, rows.data());
        png_read_end(png, nullptr);
    }
    png_destroy_read_struct(&png, &info, nullptr);

    if (unsupported)
        throw IoError(IoErrorKind::kUnsupportedFormat, "unsupported PNG bit depth " + std::to_string(bit_depth) + ": " + name);
    return out;
}

std::vector<std::uint8_t> encode_png(int width, int height, int color_type, int bit_depth, const std::uint8_t* data, std::size_t rowbytes)
{
    std::vector<std::uint8_t> out;
    ErrorSlot slot{};
    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, &slot, on_png_error, on_png_warning);
    if (!png)
        throw std::bad_alloc();
    png_infop info = png_create_info_struct(png);
    if (!info)
    {
        png_destroy_write_struct(&png, nullptr);
        throw std::bad_alloc();
    }
    std::vector<png_const_bytep> rows(static_cast<std::size_t>(height));
    for (int y = 0; y < height; y++)
        rows[static_cast<std::size_t>(y)] = data + rowbytes * static_cast<std::size_t>(y);

    if (setjmp(slot.jmp))
    {
        png_destroy_write_struct(&png, &info);
        throw IoError(IoErrorKind::kWriteFailed, std::string("PNG encode failed: ") + slot.message);
    }
    png_set_write_fn(png, &out, write_to_buffer, flush_noop);
    png_set_IHDR(png, info, static_cast<png_uint_32>(width), static_cast<png_uint_32>(height), bit_depth, color_type,
                 PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    if (bit_depth == 16)
        png_set_swap(png);
    png_write_rows(png, const_cast<png_bytepp>(rows.data()), static_cast<png_uint_32>(height));
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
    return out;
}

} // namespace

ImageRGB load_image(const std::filesystem::path& path)
{
    DecodedPng png = decode_png(read_file_bytes(path), path.string(), false);
    if (png.width < 1 || png.height < 1)
        throw IoError(IoErrorKind::kCorruptStream, "empty PNG: " + path.string());
    return ImageRGB(png.width, png.height, std::move(png.data));
}

void write_image(const std::filesystem::path& path, const ImageRGB& image)
{
    write_file_bytes(path, encode_png(image.width(), image.height(), PNG_COLOR_TYPE_RGB, 8, image.data().data(),
                                      static_cast<std::size_t>(image.width()) * 3));
}

GrayImage8 load_gray8(const std::filesystem::path& path)
{
    DecodedPng png = decode_png(read_file_bytes(path), path.string(), true);
    return {png.width, png.height, std::move(png.data)};
}

void write_gray8(const std::filesystem::path& path, const GrayImage8& image)
{
    write_file_bytes(path, encode_png(image.width, image.height, PNG_COLOR_TYPE_GRAY, 8, image.data.data(),
                                      static_cast<std::size_t>(image.width)));
}

void write_gray16(const std::filesystem::path& path, int width, int height, const std::vector<std::uint16_t>& data)
{
    if (data.size() != static_cast<std::size_t>(width) * height)
        throw std::invalid_argument("gray16 data length does not match dimensions");
    write_file_bytes(path, encode_png(width, height, PNG_COLOR_TYPE_GRAY, 16, reinterpret_cast<const std::uint8_t*>(data.data()),
                                      static_cast<std::size_t>(width) * 2));
}

BinaryMask load_mask(const std::filesystem::path& path)
{
    GrayImage8 gray = load_gray8(path);
    std::vector<MaskLabel> labels(gray.data.size());
    for (std::size_t i = 0; i < gray.data.size(); i++)
    {
        switch (gray.data[i])
        {
        case 0: labels[i] = MaskLabel::kNotFree; break;
        case 128: labels[i] = MaskLabel::kVoid; break;
        case 255: labels[i] = MaskLabel::kFree; break;
        default:
            throw IoError(IoErrorKind::kCorruptStream,
                          "mask value " + std::to_string(gray.data[i]) + " is not one of 0/128/255: " + path.string());
        }
    }
    return BinaryMask(gray.width, gray.height, std::move(labels));
}

void write_mask(const std::filesystem::path& path, const BinaryMask& mask)
{
    GrayImage8 gray{mask.width(), mask.height(), std::vector<std::uint8_t>(mask.pixel_count())};
    for (std::size_t i = 0; i < gray.data.size(); i++)
        gray.data[i] = static_cast<std::uint8_t>(mask.labels()[i]);
    write_gray8(path, gray);
}

} // namespace freespace
