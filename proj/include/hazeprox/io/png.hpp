#pragma once

// 8/16-bit PNG input and output through libpng. Codes are mapped to [0,1] by
// dividing by the maximum code value; no gamma conversion is applied.

#include "hazeprox/core/error.hpp"
#include "hazeprox/core/image.hpp"

#include <png.h>

#include <algorithm>
#include <cmath>
#include <csetjmp>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <memory>
#include <vector>

namespace hazeprox::io {

struct PngImage {
    RgbImage image;
    int bit_depth = 8;
};

namespace detail {

struct FileCloser {
    void operator()(std::FILE* f) const noexcept { std::fclose(f); }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

// Storage touched after setjmp lives here so that it is never a
// register-cached local when libpng longjmps back.
struct PngBuffers {
    std::vector<png_byte> pixels;
    std::vector<png_bytep> rows;
    png_uint_32 width = 0;
    png_uint_32 height = 0;
    int bit_depth = 8;
};

inline bool read_png_impl(std::FILE* file, PngBuffers& buf) {
    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (png == nullptr)
        return false;
    png_infop info = png_create_info_struct(png);
    if (info == nullptr) {
        png_destroy_read_struct(&png, nullptr, nullptr);
        return false;
    }
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, &info, nullptr);
        return false;
    }
    png_init_io(png, file);
    png_read_info(png, info);
    const int color = png_get_color_type(png, info);
    const int depth = png_get_bit_depth(png, info);
    if (color == PNG_COLOR_TYPE_PALETTE)
        png_set_palette_to_rgb(png);
    if (color == PNG_COLOR_TYPE_GRAY && depth < 8)
        png_set_expand_gray_1_2_4_to_8(png);
    if (color == PNG_COLOR_TYPE_GRAY || color == PNG_COLOR_TYPE_GRAY_ALPHA)
        png_set_gray_to_rgb(png);
    if (color & PNG_COLOR_MASK_ALPHA)
        png_set_strip_alpha(png);
    png_read_update_info(png, info);

    buf.width = png_get_image_width(png, info);
    buf.height = png_get_image_height(png, info);
    buf.bit_depth = png_get_bit_depth(png, info);
    const std::size_t rowbytes = png_get_rowbytes(png, info);
    buf.pixels.resize(rowbytes * buf.height);
    buf.rows.resize(buf.height);
    for (png_uint_32 y = 0; y < buf.height; ++y)
        buf.rows[y] = buf.pixels.data() + y * rowbytes;
    png_read_image(png, buf.rows.data());
    png_read_end(png, nullptr);
    png_destroy_read_struct(&png, &info, nullptr);
    return true;
}

inline bool write_png_impl(std::FILE* file, PngBuffers& buf) {
    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (png == nullptr)
        return false;
    png_infop info = png_create_info_struct(png);
    if (info == nullptr) {
        png_destroy_write_struct(&png, nullptr);
        return false;
    }
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        return false;
    }
    png_init_io(png, file);
    png_set_IHDR(png, info, buf.width, buf.height, buf.bit_depth, PNG_COLOR_TYPE_RGB, PNG_INTERLACE_NONE,
                 PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    png_write_image(png, buf.rows.data());
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
    return true;
}

} // namespace detail

inline PngImage read_png(const std::filesystem::path& path) {
    detail::FilePtr file(std::fopen(path.string().c_str(), "rb"));
    if (!file)
        throw IoError("cannot open " + path.string());
    png_byte sig[8];
    if (std::fread(sig, 1, 8, file.get()) != 8 || png_sig_cmp(sig, 0, 8) != 0)
        throw IoError(path.string() + ": not a PNG file");
    std::rewind(file.get());
    detail::PngBuffers buf;
    if (!detail::read_png_impl(file.get(), buf))
        throw IoError(path.string() + ": corrupt PNG");

    PngImage out{RgbImage(buf.width, buf.height), buf.bit_depth};
    const double max_code = buf.bit_depth == 16 ? 65535.0 : 255.0;
    for (png_uint_32 y = 0; y < buf.height; ++y) {
        const png_bytep row = buf.rows[y];
        for (png_uint_32 x = 0; x < buf.width; ++x) {
            for (std::size_t c = 0; c < 3; ++c) {
                const std::size_t k = x * 3 + c;
                const double code =
                    buf.bit_depth == 16 ? static_cast<double>((row[2 * k] << 8) | row[2 * k + 1]) : row[k];
                out.image(x, y, c) = code / max_code;
            }
        }
    }
    return out;
}

/// Encodes clamp(v) * max_code rounded to nearest.
inline void write_png(const std::filesystem::path& path, const RgbImage& image, int bit_depth = 8) {
    if (bit_depth != 8 && bit_depth != 16)
        throw InvalidArgument("bit_depth", "must be 8 or 16");
    if (image.empty())
        throw InvalidArgument("image", "cannot write an empty PNG");
    detail::PngBuffers buf;
    buf.width = static_cast<png_uint_32>(image.width());
    buf.height = static_cast<png_uint_32>(image.height());
    buf.bit_depth = bit_depth;
    const std::size_t bytes_per_sample = bit_depth == 16 ? 2 : 1;
    const std::size_t rowbytes = image.width() * 3 * bytes_per_sample;
    buf.pixels.resize(rowbytes * image.height());
    buf.rows.resize(image.height());
    const double max_code = bit_depth == 16 ? 65535.0 : 255.0;
    for (std::size_t y = 0; y < image.height(); ++y) {
        png_bytep row = buf.pixels.data() + y * rowbytes;
        buf.rows[y] = row;
        for (std::size_t x = 0; x < image.width(); ++x) {
            for (std::size_t c = 0; c < 3; ++c) {
                const auto code =
                    static_cast<std::uint32_t>(std::lround(std::clamp(image(x, y, c), 0.0, 1.0) * max_code));
                const std::size_t k = x * 3 + c;
                if (bit_depth == 16) {
                    row[2 * k] = static_cast<png_byte>(code >> 8);
                    row[2 * k + 1] = static_cast<png_byte>(code & 0xff);
                } else {
                    row[k] = static_cast<png_byte>(code);
                }
            }
        }
    }
    detail::FilePtr file(std::fopen(path.string().c_str(), "wb"));
    if (!file)
        throw IoError("cannot create " + path.string());
    if (!detail::write_png_impl(file.get(), buf))
        throw IoError("failed writing " + path.string());
}

} // namespace hazeprox::io
