#pragma once

// Procedural depth maps and clean test scenes, for self-contained runs
// without an external dataset.

#include "hazeprox/core/error.hpp"
#include "hazeprox/core/image.hpp"
#include "hazeprox/synth/random.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace hazeprox {

enum class DepthMode { vertical, radial, two_plane };

inline std::optional<DepthMode> parse_depth_mode(std::string_view name) {
    if (name == "vertical") return DepthMode::vertical;
    if (name == "radial") return DepthMode::radial;
    if (name == "two-plane" || name == "two_plane") return DepthMode::two_plane;
    return std::nullopt;
}

inline std::string to_string(DepthMode mode) {
    switch (mode) {
    case DepthMode::vertical: return "vertical";
    case DepthMode::radial: return "radial";
    case DepthMode::two_plane: return "two-plane";
    }
    return "vertical";
}

/// Normalized depth (1 = near, 0 = far).
///   vertical:  far at the top row, near at the bottom row
///   radial:    near at the bottom centre, falling off with distance
///   two_plane: far background (0.2) over the upper half, near ground (1.0) below
inline ScalarField procedural_depth(DepthMode mode, std::size_t width, std::size_t height) {
    if (width == 0 || height == 0)
        throw InvalidArgument("depth size", "must be non-empty");
    ScalarField d(width, height);
    const double wd = static_cast<double>(std::max<std::size_t>(width - 1, 1));
    const double hd = static_cast<double>(std::max<std::size_t>(height - 1, 1));
    for (std::size_t y = 0; y < height; ++y) {
        for (std::size_t x = 0; x < width; ++x) {
            const double u = static_cast<double>(x) / wd;
            const double v = static_cast<double>(y) / hd;
            double value = 0.0;
            switch (mode) {
            case DepthMode::vertical: value = v; break;
            case DepthMode::radial: value = 1.0 - std::hypot(u - 0.5, v - 1.0) / std::hypot(0.5, 1.0); break;
            case DepthMode::two_plane: value = v > 0.5 ? 1.0 : 0.2; break;
            }
            d(x, y) = std::clamp(value, 0.0, 1.0);
        }
    }
    return d;
}

/// Seeded synthetic clean scene: a two-colour vertical gradient background,
/// a dozen flat-shaded discs and rectangles, and a faint sinusoidal texture.
inline RgbImage procedural_scene(std::size_t width, std::size_t height, std::uint64_t seed) {
    Rng rng(seed);
    RgbImage img(width, height);
    Rgb top, bottom;
    for (auto& c : top) c = rng.uniform(0.3, 0.9);
    for (auto& c : bottom) c = rng.uniform(0.05, 0.6);
    const double hd = static_cast<double>(std::max<std::size_t>(height - 1, 1));
    for (std::size_t y = 0; y < height; ++y) {
        const double v = static_cast<double>(y) / hd;
        for (std::size_t x = 0; x < width; ++x)
            for (std::size_t c = 0; c < 3; ++c)
                img(x, y, c) = (1.0 - v) * top[c] + v * bottom[c];
    }

    const int shapes = 12;
    const double w = static_cast<double>(width);
    const double h = static_cast<double>(height);
    for (int s = 0; s < shapes; ++s) {
        const bool disc = rng.bernoulli(0.5);
        const double cx = rng.uniform(0.0, w);
        const double cy = rng.uniform(0.0, h);
        const double rx = rng.uniform(0.04, 0.25) * w;
        const double ry = disc ? rx : rng.uniform(0.04, 0.25) * h;
        Rgb color;
        for (auto& c : color) c = rng.uniform(0.0, 1.0);
        const double shade = rng.uniform(-0.3, 0.3);
        for (std::size_t y = 0; y < height; ++y) {
            for (std::size_t x = 0; x < width; ++x) {
                const double dx = (static_cast<double>(x) - cx) / rx;
                const double dy = (static_cast<double>(y) - cy) / ry;
                const bool inside = disc ? dx * dx + dy * dy <= 1.0 : std::abs(dx) <= 1.0 && std::abs(dy) <= 1.0;
                if (!inside)
                    continue;
                const double k = 1.0 + shade * dy * 0.5;
                for (std::size_t c = 0; c < 3; ++c)
                    img(x, y, c) = color[c] * k;
            }
        }
    }

    const double fx = rng.uniform(0.1, 0.5);
    const double fy = rng.uniform(0.1, 0.5);
    for (std::size_t y = 0; y < height; ++y)
        for (std::size_t x = 0; x < width; ++x)
            for (std::size_t c = 0; c < 3; ++c)
                img(x, y, c) += 0.04 * std::sin(fx * static_cast<double>(x) + static_cast<double>(c)) *
                                std::cos(fy * static_cast<double>(y));
    return clamp_unit(std::move(img));
}

} // namespace hazeprox
