#pragma once

// Portable float map. Files are written little-endian (scale -1.0) with rows
// stored bottom-to-top; big-endian files (positive scale) are also read.

#include "hazeprox/core/error.hpp"
#include "hazeprox/core/image.hpp"

#include <bit>
#include <cctype>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace hazeprox::io {

namespace detail {

inline std::uint32_t byteswap32(std::uint32_t v) {
    return (v >> 24) | ((v >> 8) & 0xff00u) | ((v << 8) & 0xff0000u) | (v << 24);
}

inline void put_float_le(std::vector<char>& out, float f) {
    std::uint32_t bits = std::bit_cast<std::uint32_t>(f);
    if constexpr (std::endian::native == std::endian::big)
        bits = byteswap32(bits);
    char bytes[4];
    std::memcpy(bytes, &bits, 4);
    out.insert(out.end(), bytes, bytes + 4);
}

inline float get_float(const char* p, bool little) {
    std::uint32_t bits;
    std::memcpy(&bits, p, 4);
    if ((std::endian::native == std::endian::little) != little)
        bits = byteswap32(bits);
    return std::bit_cast<float>(bits);
}

} // namespace detail

template <std::size_t C>
std::vector<char> encode_pfm(const Image<C>& image) {
    static_assert(C == 1 || C == 3, "PFM stores 1 or 3 channels");
    std::string header = (C == 3 ? "PF\n" : "Pf\n") + std::to_string(image.width()) + " " +
                         std::to_string(image.height()) + "\n-1.0\n";
    std::vector<char> out(header.begin(), header.end());
    out.reserve(out.size() + image.values().size() * 4);
    for (std::size_t row = image.height(); row-- > 0;)
        for (std::size_t x = 0; x < image.width(); ++x)
            for (std::size_t c = 0; c < C; ++c)
                detail::put_float_le(out, static_cast<float>(image(x, row, c)));
    return out;
}

template <std::size_t C>
void write_pfm(const std::filesystem::path& path, const Image<C>& image) {
    const std::vector<char> bytes = encode_pfm(image);
    std::ofstream f(path, std::ios::binary);
    if (!f.write(bytes.data(), static_cast<std::streamsize>(bytes.size())))
        throw IoError("cannot write " + path.string());
}

struct PfmData {
    std::size_t width = 0;
    std::size_t height = 0;
    std::size_t channels = 0;
    std::vector<double> values; // row-major, top row first, interleaved
};

inline PfmData decode_pfm(const std::vector<char>& bytes, const std::string& name = "<pfm>") {
    std::size_t pos = 0;
    auto token = [&]() {
        while (pos < bytes.size() && std::isspace(static_cast<unsigned char>(bytes[pos])))
            ++pos;
        std::string t;
        while (pos < bytes.size() && !std::isspace(static_cast<unsigned char>(bytes[pos])))
            t.push_back(bytes[pos++]);
        return t;
    };
    const std::string magic = token();
    PfmData d;
    if (magic == "PF")
        d.channels = 3;
    else if (magic == "Pf")
        d.channels = 1;
    else
        throw IoError(name + ": not a PFM file");
    double scale = 0.0;
    try {
        d.width = std::stoul(token());
        d.height = std::stoul(token());
        scale = std::stod(token());
    } catch (const std::exception&) {
        throw IoError(name + ": malformed PFM header");
    }
    ++pos; // single whitespace byte after the scale
    if (scale == 0.0 || d.width == 0 || d.height == 0)
        throw IoError(name + ": malformed PFM header");
    const bool little = scale < 0.0;
    const std::size_t count = d.width * d.height * d.channels;
    if (bytes.size() < pos + count * 4)
        throw IoError(name + ": truncated PFM data");
    d.values.resize(count);
    const std::size_t row_len = d.width * d.channels;
    for (std::size_t r = 0; r < d.height; ++r) {
        const std::size_t dst_row = d.height - 1 - r;
        for (std::size_t k = 0; k < row_len; ++k)
            d.values[dst_row * row_len + k] = detail::get_float(bytes.data() + pos + (r * row_len + k) * 4, little);
    }
    return d;
}

inline std::vector<char> read_file_bytes(const std::filesystem::path& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f)
        throw IoError("cannot open " + path.string());
    return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

template <std::size_t C>
Image<C> read_pfm(const std::filesystem::path& path) {
    const PfmData d = decode_pfm(read_file_bytes(path), path.string());
    if (d.channels != C)
        throw IoError(path.string() + ": expected " + std::to_string(C) + " channel(s), got " +
                      std::to_string(d.channels));
    Image<C> img(d.width, d.height);
    std::copy(d.values.begin(), d.values.end(), img.values().begin());
    return img;
}

} // namespace hazeprox::io
