#pragma once

// Online non-uniform haze synthesis.
//
// Random draws come from one generator seeded with SynthesisSpec::seed and
// are consumed in this fixed order:
//   1. augmentation   (luminance factor, then per-pixel noise if noise_std > 0)
//   2. beta_init
//   3. non-uniform branch coin
//   4. low-resolution noise grid (only on the non-uniform branch)
//   5. h_near
//   6. airlight base, then three per-channel jitters

#include "hazeprox/core/error.hpp"
#include "hazeprox/core/image.hpp"
#include "hazeprox/core/scattering.hpp"
#include "hazeprox/synth/filters.hpp"
#include "hazeprox/synth/random.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>

namespace hazeprox {

struct NoiseFieldSpec {
    std::size_t base_resolution = 16; // side of the square low-res grid
    double sigma0 = 1.0;              // blur on the low-res grid
    double sigma1 = 8.0;              // blur after upsampling, full-res pixels
    double rescale_min = 0.0;
    double rescale_max = 0.8;
};

struct AugmentSpec {
    double luminance_jitter = 0.1; // factor drawn from [1 - j, 1 + j]
    double noise_std = 0.01;
    bool enable_compress = true; // 8-bit quantize/dequantize of P
};

struct SynthesisSpec {
    double beta_min = 0.3;
    double beta_max = 1.5;
    double nonuniform_prob = 0.5;
    double near_haze_min = 0.0;
    double near_haze_max = 0.4;
    double airlight_min = 0.6;
    double airlight_max = 0.95;
    double airlight_jitter = 0.05;
    NoiseFieldSpec noise{};
    AugmentSpec augment{};
    std::uint64_t seed = 0;
};

/// Added to beta_init in the near-haze offset denominator.
inline constexpr double kDepthOffsetEps = 1e-6;

inline void validate(const NoiseFieldSpec& n) {
    if (n.base_resolution < 2)
        throw InvalidArgument("noise.base_resolution", "must be >= 2");
    if (n.sigma0 < 0.0 || n.sigma1 < 0.0)
        throw InvalidArgument("noise.sigma", "must be >= 0");
    if (!(n.rescale_min >= 0.0))
        throw InvalidArgument("noise.rescale_min", "must be >= 0");
    if (!(n.rescale_max >= n.rescale_min))
        throw InvalidArgument("noise.rescale_max", "must be >= rescale_min");
}

inline void validate(const AugmentSpec& a) {
    if (!(a.luminance_jitter >= 0.0) || !(a.noise_std >= 0.0))
        throw InvalidArgument("augment", "jitter and noise must be >= 0");
}

inline void validate(const SynthesisSpec& s) {
    if (!(s.beta_min > 0.0))
        throw InvalidArgument("beta_min", "must be > 0");
    if (!(s.beta_max >= s.beta_min))
        throw InvalidArgument("beta_max", "must be >= beta_min");
    if (!(s.nonuniform_prob >= 0.0 && s.nonuniform_prob <= 1.0))
        throw InvalidArgument("nonuniform_prob", "must lie in [0,1]");
    if (!(s.near_haze_min >= 0.0 && s.near_haze_max >= s.near_haze_min && s.near_haze_max < 1.0))
        throw InvalidArgument("near_haze", "range must satisfy 0 <= min <= max < 1");
    if (!(s.airlight_min >= 0.0 && s.airlight_max >= s.airlight_min && s.airlight_max <= 1.0))
        throw InvalidArgument("airlight", "range must satisfy 0 <= min <= max <= 1");
    if (!(s.airlight_jitter >= 0.0))
        throw InvalidArgument("airlight_jitter", "must be >= 0");
    validate(s.noise);
    validate(s.augment);
}

inline void require_min_size(std::size_t width, std::size_t height) {
    if (width < 2 || height < 2)
        throw InvalidArgument("image size", "must be at least 2x2, got " + shape_string(width, height));
}

/// Min-max affine map onto [lo, hi]. A constant field maps to lo.
inline ScalarField rescale_affine(ScalarField field, double lo, double hi) {
    const auto [min_it, max_it] = std::ranges::minmax_element(field.values());
    const double mn = *min_it;
    const double mx = *max_it;
    const double range = mx - mn;
    for (double& v : field.values())
        v = range > 0.0 ? lo + (hi - lo) * ((v - mn) / range) : lo;
    return field;
}

/// Delta beta = S(G_sigma1 * U(G_sigma0 * z0)), z0 ~ N(0,1) on the low-res grid.
inline ScalarField delta_beta_field(const NoiseFieldSpec& spec, std::size_t width, std::size_t height, Rng& rng) {
    validate(spec);
    require_min_size(width, height);
    ScalarField z(spec.base_resolution, spec.base_resolution);
    for (double& v : z.values())
        v = rng.normal();
    ScalarField field = filters::gaussian_blur(z, spec.sigma0);
    field = filters::resize_bilinear(field, width, height);
    field = filters::gaussian_blur(field, spec.sigma1);
    return rescale_affine(std::move(field), spec.rescale_min, spec.rescale_max);
}

struct DensityDraw {
    ScalarField density; // beta(x)
    double beta_init = 0.0;
    bool nonuniform = false;
};

/// Draws beta_init, the branch coin and (on the non-uniform branch) the noise
/// field, in that order.
inline DensityDraw make_density_field(const SynthesisSpec& spec, std::size_t width, std::size_t height, Rng& rng) {
    validate(spec);
    require_min_size(width, height);
    DensityDraw out;
    out.beta_init = rng.uniform(spec.beta_min, spec.beta_max);
    out.nonuniform = rng.bernoulli(spec.nonuniform_prob);
    if (out.nonuniform) {
        out.density = delta_beta_field(spec.noise, width, height, rng);
        for (double& v : out.density.values())
            v += out.beta_init;
    } else {
        out.density = ScalarField(width, height, out.beta_init);
    }
    return out;
}

/// Depth offset d0 with exp(-beta_init d0) = 1 - h_near (up to the eps in the
/// denominator).
inline double near_haze_depth_offset(double beta_init, double h_near) {
    if (!(beta_init > 0.0))
        throw InvalidArgument("beta_init", "must be > 0");
    if (!(h_near >= 0.0 && h_near < 1.0))
        throw InvalidArgument("h_near", "must lie in [0,1)");
    return -std::log1p(-h_near) / (beta_init + kDepthOffsetEps);
}

/// T(x) = exp(-beta(x) ((1 - D(x)) + d0)), D = 1 nearest and D = 0 farthest.
inline ScalarField make_transmission(const ScalarField& density, const ScalarField& depth, double d0) {
    require_same_shape("depth", depth, density);
    if (!(d0 >= 0.0))
        throw InvalidArgument("d0", "must be >= 0");
    ScalarField out(density.width(), density.height());
    for (std::size_t i = 0; i < out.pixel_count(); ++i) {
        const double beta = density.at_index(i);
        const double d = depth.at_index(i);
        if (beta < 0.0)
            throw InvalidArgument("density", "must be >= 0");
        if (!(d >= 0.0 && d <= 1.0))
            throw InvalidArgument("depth", "must be normalized to [0,1]");
        out.at_index(i) = std::exp(-beta * ((1.0 - d) + d0));
    }
    return out;
}

/// Scalar base plus per-channel jitter, clipped to [0,1], as a constant field.
inline RgbImage sample_airlight(const SynthesisSpec& spec, std::size_t width, std::size_t height, Rng& rng) {
    validate(spec);
    const double base = rng.uniform(spec.airlight_min, spec.airlight_max);
    Rgb value;
    for (double& v : value)
        v = std::clamp(base + rng.uniform(-spec.airlight_jitter, spec.airlight_jitter), 0.0, 1.0);
    return RgbImage(width, height, value);
}

struct AugmentDraw {
    RgbImage image;
    double luminance_factor = 1.0;
};

/// Luminance multiply, then additive Gaussian noise, then clamp to [0,1].
inline AugmentDraw augment_radiance(const RgbImage& clean, const AugmentSpec& spec, Rng& rng) {
    validate(spec);
    AugmentDraw out{clean, rng.uniform(1.0 - spec.luminance_jitter, 1.0 + spec.luminance_jitter)};
    for (double& v : out.image.values())
        v *= out.luminance_factor;
    if (spec.noise_std > 0.0) {
        for (double& v : out.image.values())
            v += spec.noise_std * rng.normal();
    }
    out.image = clamp_unit(std::move(out.image));
    return out;
}

/// Round trip through 8-bit codes.
inline RgbImage compress_proxy(RgbImage image) {
    for (double& v : image.values())
        v = std::round(std::clamp(v, 0.0, 1.0) * 255.0) / 255.0;
    return image;
}

struct SynthesisOutput {
    RgbImage hazy;          // P, after the compression proxy when enabled
    RgbImage rendered;      // P before compression
    RgbImage clean;         // augmented radiance actually rendered
    ScalarField transmission;
    RgbImage airlight;
    ScalarField density;
    double d0 = 0.0;
    double beta_init = 0.0;
    double h_near = 0.0;
    bool nonuniform = false;
    double luminance_factor = 1.0;
};

inline SynthesisOutput synthesize(const RgbImage& clean, const ScalarField& depth, const SynthesisSpec& spec) {
    validate(spec);
    require_same_shape("depth", depth, clean);
    require_min_size(clean.width(), clean.height());
    require_finite("J_gt", clean);

    Rng rng(spec.seed);
    SynthesisOutput out;
    AugmentDraw aug = augment_radiance(clean, spec.augment, rng);
    out.clean = std::move(aug.image);
    out.luminance_factor = aug.luminance_factor;

    DensityDraw density = make_density_field(spec, clean.width(), clean.height(), rng);
    out.density = std::move(density.density);
    out.beta_init = density.beta_init;
    out.nonuniform = density.nonuniform;

    out.h_near = rng.uniform(spec.near_haze_min, spec.near_haze_max);
    out.d0 = near_haze_depth_offset(out.beta_init, out.h_near);
    out.transmission = make_transmission(out.density, depth, out.d0);
    out.airlight = sample_airlight(spec, clean.width(), clean.height(), rng);

    out.rendered = render_scattering(out.clean, out.transmission, out.airlight);
    out.hazy = spec.augment.enable_compress ? compress_proxy(out.rendered) : out.rendered;
    return out;
}

} // namespace hazeprox
