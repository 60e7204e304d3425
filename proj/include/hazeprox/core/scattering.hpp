#pragma once

#include "hazeprox/core/error.hpp"
#include "hazeprox/core/image.hpp"
#include "hazeprox/core/summation.hpp"

#include <algorithm>

namespace hazeprox {

/// Lower bound applied to every propagated transmission map.
inline constexpr double kMinTransmission = 1e-3;

/// Current estimate of radiance, transmission and airlight field.
struct ScatteringState {
    RgbImage radiance;       // J
    ScalarField transmission; // T
    RgbImage airlight;       // A

    std::size_t width() const noexcept { return radiance.width(); }
    std::size_t height() const noexcept { return radiance.height(); }
    bool operator==(const ScatteringState&) const = default;
};

inline void validate(const ScatteringState& state) {
    require_same_shape("transmission", state.transmission, state.radiance);
    require_same_shape("airlight", state.airlight, state.radiance);
}

/// Trust-region strengths of the three proximal blocks. All strictly positive.
struct ProximalWeights {
    double airlight = 0.1;
    double transmission = 0.1;
    double radiance = 0.1;
};

inline void require_positive(const char* name, double value) {
    if (!(value > 0.0) || !std::isfinite(value))
        throw InvalidArgument(name, "must be a finite value > 0, got " + std::to_string(value));
}

inline void validate(const ProximalWeights& w) {
    require_positive("lambda_A", w.airlight);
    require_positive("lambda_T", w.transmission);
    require_positive("lambda_J", w.radiance);
}

inline ScalarField clamp_transmission(ScalarField t, double t_min = kMinTransmission) {
    for (double& v : t.values())
        v = std::clamp(v, t_min, 1.0);
    return t;
}

enum class Clamp { none, unit };

/// P = T J + (1 - T) A per channel. Output is clamped to [0,1] unless
/// `clamp` is Clamp::none.
inline RgbImage render_scattering(const RgbImage& radiance, const ScalarField& transmission,
                                  const RgbImage& airlight, Clamp clamp = Clamp::unit) {
    require_same_shape("T", transmission, radiance);
    require_same_shape("A", airlight, radiance);
    RgbImage out(radiance.width(), radiance.height());
    for (std::size_t i = 0; i < out.pixel_count(); ++i) {
        const double t = transmission.at_index(i);
        for (std::size_t c = 0; c < 3; ++c)
            out.at_index(i, c) = t * radiance.at_index(i, c) + (1.0 - t) * airlight.at_index(i, c);
    }
    return clamp == Clamp::unit ? clamp_unit(std::move(out)) : out;
}

/// Half the squared residual of the scattering model summed over pixels and
/// channels.
inline double data_term(const RgbImage& observed, const ScatteringState& state) {
    require_same_shape("J", state.radiance, observed);
    require_same_shape("T", state.transmission, observed);
    require_same_shape("A", state.airlight, observed);
    const double sum = pairwise_sum_of(observed.pixel_count(), [&](std::size_t i) {
        const double t = state.transmission.at_index(i);
        double r2 = 0.0;
        for (std::size_t c = 0; c < 3; ++c) {
            const double r =
                observed.at_index(i, c) - t * state.radiance.at_index(i, c) - (1.0 - t) * state.airlight.at_index(i, c);
            r2 += r * r;
        }
        return r2;
    });
    return 0.5 * sum;
}

} // namespace hazeprox
