#pragma once

// Residual refinement operators for the transmission and radiance blocks.
// Each operator returns input + strength * (smooth(input) - input); the
// identity kind and strength 0 leave the input untouched bit-for-bit.

#include "hazeprox/core/error.hpp"
#include "hazeprox/core/image.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <string_view>

namespace hazeprox {

enum class RefinementKind { identity, guided_smooth, tv_smooth };

inline std::string to_string(RefinementKind kind) {
    switch (kind) {
    case RefinementKind::identity: return "identity";
    case RefinementKind::guided_smooth: return "guided_smooth";
    case RefinementKind::tv_smooth: return "tv_smooth";
    }
    return "identity";
}

inline std::optional<RefinementKind> parse_refinement_kind(std::string_view name) {
    if (name == "identity" || name == "none") return RefinementKind::identity;
    if (name == "guided_smooth" || name == "guided") return RefinementKind::guided_smooth;
    if (name == "tv_smooth" || name == "tv") return RefinementKind::tv_smooth;
    return std::nullopt;
}

struct RefinementOperator {
    RefinementKind kind = RefinementKind::identity;
    double strength = 1.0;
    int radius = 2; // window half-size in pixels

    bool is_identity() const noexcept { return kind == RefinementKind::identity || strength == 0.0; }
};

inline void validate(const RefinementOperator& op) {
    if (!(op.strength >= 0.0) || !std::isfinite(op.strength))
        throw InvalidArgument("refine_strength", "must be finite and >= 0");
    if (op.kind != RefinementKind::identity && op.radius < 1)
        throw InvalidArgument("refine_radius", "must be >= 1");
}

namespace smoothing {

/// Ridge regularizer of the local linear model in guided_filter.
inline constexpr double kGuidedEps = 1e-4;
/// Fidelity weight of the TV denoiser.
inline constexpr double kTvWeight = 0.1;

/// Guided local-linear fit evaluated at the window centre: for every pixel the
/// model q = a * guide + b is fitted over the clipped (2r+1)^2 window and
/// evaluated at that pixel only, so the output depends on inputs within
/// Chebyshev distance r.
inline ScalarField guided_filter(const ScalarField& input, const ScalarField& guide, int radius) {
    require_same_shape("guide", guide, input);
    const auto w = static_cast<std::ptrdiff_t>(input.width());
    const auto h = static_cast<std::ptrdiff_t>(input.height());
    ScalarField out(input.width(), input.height());
    for (std::ptrdiff_t y = 0; y < h; ++y) {
        for (std::ptrdiff_t x = 0; x < w; ++x) {
            double si = 0.0, sp = 0.0, sii = 0.0, sip = 0.0;
            double n = 0.0;
            for (std::ptrdiff_t yy = std::max<std::ptrdiff_t>(0, y - radius); yy <= std::min(h - 1, y + radius); ++yy) {
                for (std::ptrdiff_t xx = std::max<std::ptrdiff_t>(0, x - radius); xx <= std::min(w - 1, x + radius);
                     ++xx) {
                    const double gi = guide(xx, yy);
                    const double pi = input(xx, yy);
                    si += gi;
                    sp += pi;
                    sii += gi * gi;
                    sip += gi * pi;
                    n += 1.0;
                }
            }
            const double mean_i = si / n;
            const double mean_p = sp / n;
            const double var_i = sii / n - mean_i * mean_i;
            const double cov_ip = sip / n - mean_i * mean_p;
            const double a = cov_ip / (var_i + kGuidedEps);
            const double b = mean_p - a * mean_i;
            out(x, y) = a * guide(x, y) + b;
        }
    }
    return out;
}

/// Chambolle's dual projection for the ROF model, run for `iterations`
/// steps. Each step widens the dependency cone by one pixel (Chebyshev).
inline ScalarField tv_denoise(const ScalarField& input, int iterations, double weight = kTvWeight) {
    const std::size_t w = input.width();
    const std::size_t h = input.height();
    constexpr double tau = 0.125;
    ScalarField px(w, h), py(w, h), div(w, h);

    auto divergence = [&] {
        for (std::size_t y = 0; y < h; ++y) {
            for (std::size_t x = 0; x < w; ++x) {
                double d = 0.0;
                d += (x + 1 < w ? px(x, y) : 0.0) - (x > 0 ? px(x - 1, y) : 0.0);
                d += (y + 1 < h ? py(x, y) : 0.0) - (y > 0 ? py(x, y - 1) : 0.0);
                div(x, y) = d;
            }
        }
    };

    ScalarField v(w, h);
    for (int it = 0; it < iterations; ++it) {
        divergence();
        for (std::size_t i = 0; i < v.pixel_count(); ++i)
            v.at_index(i) = div.at_index(i) - input.at_index(i) / weight;
        for (std::size_t y = 0; y < h; ++y) {
            for (std::size_t x = 0; x < w; ++x) {
                const double gx = x + 1 < w ? v(x + 1, y) - v(x, y) : 0.0;
                const double gy = y + 1 < h ? v(x, y + 1) - v(x, y) : 0.0;
                const double norm = 1.0 + tau * std::sqrt(gx * gx + gy * gy);
                px(x, y) = (px(x, y) + tau * gx) / norm;
                py(x, y) = (py(x, y) + tau * gy) / norm;
            }
        }
    }
    divergence();
    ScalarField out(w, h);
    for (std::size_t i = 0; i < out.pixel_count(); ++i)
        out.at_index(i) = input.at_index(i) - weight * div.at_index(i);
    return out;
}

inline ScalarField smooth(const ScalarField& input, const ScalarField& guide, const RefinementOperator& op) {
    switch (op.kind) {
    case RefinementKind::guided_smooth: return guided_filter(input, guide, op.radius);
    case RefinementKind::tv_smooth: return tv_denoise(input, op.radius);
    case RefinementKind::identity: break;
    }
    return input;
}

inline ScalarField channel(const RgbImage& image, std::size_t c) {
    ScalarField out(image.width(), image.height());
    for (std::size_t i = 0; i < image.pixel_count(); ++i)
        out.at_index(i) = image.at_index(i, c);
    return out;
}

} // namespace smoothing

/// T_bar + strength * (smooth(T_bar; guide = gray(J_prev)) - T_bar).
/// The caller clamps the result to the transmission range.
inline ScalarField refine_transmission(const ScalarField& transmission_bar, const RgbImage& radiance_prev,
                                       const RefinementOperator& op) {
    require_same_shape("J_prev", radiance_prev, transmission_bar);
    validate(op);
    if (op.is_identity())
        return transmission_bar;
    const ScalarField smoothed = smoothing::smooth(transmission_bar, gray(radiance_prev), op);
    ScalarField out = transmission_bar;
    for (std::size_t i = 0; i < out.pixel_count(); ++i)
        out.at_index(i) += op.strength * (smoothed.at_index(i) - transmission_bar.at_index(i));
    return out;
}

/// J_bar + strength * (smooth(J_bar) - J_bar), channel by channel, guided by
/// gray(J_bar). T_k and A_k are part of the operator signature so a learned
/// operator can be dropped in; the classical smoothers ignore them.
inline RgbImage refine_radiance(const RgbImage& radiance_bar, const ScalarField& transmission,
                                const RgbImage& airlight, const RefinementOperator& op) {
    require_same_shape("T_k", transmission, radiance_bar);
    require_same_shape("A_k", airlight, radiance_bar);
    validate(op);
    if (op.is_identity())
        return radiance_bar;
    const ScalarField guide = gray(radiance_bar);
    RgbImage out = radiance_bar;
    for (std::size_t c = 0; c < 3; ++c) {
        const ScalarField ch = smoothing::channel(radiance_bar, c);
        const ScalarField smoothed = smoothing::smooth(ch, guide, op);
        for (std::size_t i = 0; i < out.pixel_count(); ++i)
            out.at_index(i, c) += op.strength * (smoothed.at_index(i) - ch.at_index(i));
    }
    return out;
}

} // namespace hazeprox
