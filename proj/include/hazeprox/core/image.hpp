#pragma once

#include "hazeprox/core/error.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace hazeprox {

/// Dense row-major image with a fixed number of interleaved channels.
///
/// Values are stored as doubles. The [0,1] range is only enforced at module
/// boundaries (see clamp_unit); optimization internals may leave it.
template <std::size_t Channels>
class Image {
    static_assert(Channels > 0);

public:
    static constexpr std::size_t channels = Channels;
    using Pixel = std::array<double, Channels>;

    Image() = default;

    Image(std::size_t width, std::size_t height, double fill = 0.0)
        : width_(width), height_(height), data_(width * height * Channels, fill) {}

    Image(std::size_t width, std::size_t height, const Pixel& fill)
        : width_(width), height_(height), data_(width * height * Channels) {
        for (std::size_t i = 0; i < width * height; ++i)
            std::copy(fill.begin(), fill.end(), data_.begin() + i * Channels);
    }

    std::size_t width() const noexcept { return width_; }
    std::size_t height() const noexcept { return height_; }
    std::size_t pixel_count() const noexcept { return width_ * height_; }
    bool empty() const noexcept { return data_.empty(); }

    double& operator()(std::size_t x, std::size_t y, std::size_t c = 0) noexcept {
        return data_[(y * width_ + x) * Channels + c];
    }
    double operator()(std::size_t x, std::size_t y, std::size_t c = 0) const noexcept {
        return data_[(y * width_ + x) * Channels + c];
    }

    /// Pixel access by linear index i = y * width + x.
    double& at_index(std::size_t i, std::size_t c = 0) noexcept { return data_[i * Channels + c]; }
    double at_index(std::size_t i, std::size_t c = 0) const noexcept { return data_[i * Channels + c]; }

    Pixel pixel(std::size_t i) const noexcept {
        Pixel p;
        std::copy_n(data_.begin() + i * Channels, Channels, p.begin());
        return p;
    }
    void set_pixel(std::size_t i, const Pixel& p) noexcept {
        std::copy(p.begin(), p.end(), data_.begin() + i * Channels);
    }

    std::span<double> values() & noexcept { return data_; }
    std::span<const double> values() const& noexcept { return data_; }
    // A span into a temporary would dangle.
    std::span<const double> values() && = delete;

    template <std::size_t Other>
    bool same_shape(const Image<Other>& other) const noexcept {
        return width_ == other.width() && height_ == other.height();
    }

    bool operator==(const Image&) const = default;

private:
    std::size_t width_ = 0;
    std::size_t height_ = 0;
    std::vector<double> data_;
};

using RgbImage = Image<3>;
using ScalarField = Image<1>;
using Rgb = RgbImage::Pixel;

inline std::string shape_string(std::size_t w, std::size_t h) {
    return std::to_string(w) + "x" + std::to_string(h);
}

/// Throws DimensionError naming `field` unless `image` matches `reference`.
template <std::size_t A, std::size_t B>
void require_same_shape(const char* field, const Image<A>& image, const Image<B>& reference) {
    if (!image.same_shape(reference)) {
        throw DimensionError(field, "expected " + shape_string(reference.width(), reference.height()) + ", got " +
                                        shape_string(image.width(), image.height()));
    }
}

template <std::size_t C>
bool all_finite(const Image<C>& image) {
    return std::ranges::all_of(image.values(), [](double v) { return std::isfinite(v); });
}

template <std::size_t C>
void require_finite(const char* field, const Image<C>& image) {
    if (!all_finite(image))
        throw InvalidArgument(field, "contains non-finite values");
}

template <std::size_t C>
Image<C> clamp_unit(Image<C> image) {
    for (double& v : image.values())
        v = std::clamp(v, 0.0, 1.0);
    return image;
}

/// Channel mean, used wherever a grayscale guide is needed.
inline ScalarField gray(const RgbImage& image) {
    ScalarField out(image.width(), image.height());
    for (std::size_t i = 0; i < image.pixel_count(); ++i)
        out.at_index(i) = (image.at_index(i, 0) + image.at_index(i, 1) + image.at_index(i, 2)) / 3.0;
    return out;
}

template <std::size_t C, typename F>
Image<C> map_values(Image<C> image, F&& f) {
    for (double& v : image.values())
        v = f(v);
    return image;
}

} // namespace hazeprox
