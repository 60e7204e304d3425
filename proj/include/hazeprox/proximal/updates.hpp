#pragma once

// Closed-form proximal maps for the three blocks of the scattering data term.
// Every subproblem is a strictly convex quadratic that decouples per pixel,
// so each field update is a map of a per-pixel kernel.

#include "hazeprox/core/image.hpp"
#include "hazeprox/core/scattering.hpp"

namespace hazeprox {

namespace pixel {

/// argmin_A  1/2 |J T + (1 - T) A - P|^2 + lambda/2 |A - A_prev|^2
inline Rgb prox_airlight(const Rgb& observed, const Rgb& radiance, double transmission, const Rgb& airlight_prev,
                         double lambda) {
    const double s = 1.0 - transmission;
    const double denom = s * s + lambda;
    Rgb out;
    for (std::size_t c = 0; c < 3; ++c)
        out[c] = (s * (observed[c] - radiance[c] * transmission) + lambda * airlight_prev[c]) / denom;
    return out;
}

/// argmin_T  1/2 |T J + (1 - T) A - P|^2 + lambda/2 (T - T_prev)^2
inline double prox_transmission(const Rgb& observed, const Rgb& radiance, double transmission_prev,
                                 const Rgb& airlight, double lambda) {
    double num = lambda * transmission_prev;
    double denom = lambda;
    for (std::size_t c = 0; c < 3; ++c) {
        const double contrast = airlight[c] - radiance[c];
        num += contrast * (airlight[c] - observed[c]);
        denom += contrast * contrast;
    }
    return num / denom;
}

/// argmin_J  1/2 |T J + (1 - T) A - P|^2 + lambda/2 |J - J_prev|^2
inline Rgb prox_radiance(const Rgb& observed, const Rgb& radiance_prev, double transmission, const Rgb& airlight,
                         double lambda) {
    const double t = transmission;
    const double denom = t * t + lambda;
    Rgb out;
    for (std::size_t c = 0; c < 3; ++c)
        out[c] = (t * observed[c] + t * t * airlight[c] - t * airlight[c] + lambda * radiance_prev[c]) / denom;
    return out;
}

} // namespace pixel

inline RgbImage prox_airlight(const RgbImage& observed, const RgbImage& radiance_prev,
                              const ScalarField& transmission_prev, const RgbImage& airlight_prev, double lambda) {
    require_positive("lambda_A", lambda);
    require_same_shape("J_prev", radiance_prev, observed);
    require_same_shape("T_prev", transmission_prev, observed);
    require_same_shape("A_prev", airlight_prev, observed);
    RgbImage out(observed.width(), observed.height());
    for (std::size_t i = 0; i < out.pixel_count(); ++i) {
        out.set_pixel(i, pixel::prox_airlight(observed.pixel(i), radiance_prev.pixel(i), transmission_prev.at_index(i),
                                              airlight_prev.pixel(i), lambda));
    }
    return out;
}

/// Raw analytic transmission. Not clamped; callers apply clamp_transmission
/// before propagating the result.
inline ScalarField prox_transmission(const RgbImage& observed, const RgbImage& radiance_prev,
                                     const ScalarField& transmission_prev, const RgbImage& airlight, double lambda) {
    require_positive("lambda_T", lambda);
    require_same_shape("J_prev", radiance_prev, observed);
    require_same_shape("T_prev", transmission_prev, observed);
    require_same_shape("A_k", airlight, observed);
    ScalarField out(observed.width(), observed.height());
    for (std::size_t i = 0; i < out.pixel_count(); ++i) {
        out.at_index(i) = pixel::prox_transmission(observed.pixel(i), radiance_prev.pixel(i),
                                                   transmission_prev.at_index(i), airlight.pixel(i), lambda);
    }
    return out;
}

inline RgbImage prox_radiance(const RgbImage& observed, const RgbImage& radiance_prev, const ScalarField& transmission,
                              const RgbImage& airlight, double lambda) {
    require_positive("lambda_J", lambda);
    require_same_shape("J_prev", radiance_prev, observed);
    require_same_shape("T_k", transmission, observed);
    require_same_shape("A_k", airlight, observed);
    RgbImage out(observed.width(), observed.height());
    for (std::size_t i = 0; i < out.pixel_count(); ++i) {
        out.set_pixel(i, pixel::prox_radiance(observed.pixel(i), radiance_prev.pixel(i), transmission.at_index(i),
                                              airlight.pixel(i), lambda));
    }
    return out;
}

} // namespace hazeprox
