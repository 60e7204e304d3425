#pragma once

// Residual-haze audit: re-estimate the scattering decomposition of an already
// dehazed image and penalize transmission below a relaxed target, weighted by
// a brightness-and-airlight reliability map.

#include "hazeprox/core/error.hpp"
#include "hazeprox/core/image.hpp"
#include "hazeprox/core/summation.hpp"
#include "hazeprox/proximal/engine.hpp"

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

namespace hazeprox {

inline constexpr double kTransmissionTarget = 0.9;
inline constexpr double kPriorEps = 1e-6;
inline constexpr double kCoverageThreshold = 0.1;

/// Per-field min-max normalization onto [0,1]; constant fields map to 0.
inline ScalarField normalize_minmax(ScalarField field) {
    const auto [lo, hi] = std::ranges::minmax_element(field.values());
    const double mn = *lo;
    const double range = *hi - mn;
    for (double& v : field.values())
        v = range > 0.0 ? (v - mn) / range : 0.0;
    return field;
}

/// |grad f| with forward differences and replicate boundary (the last
/// column/row difference is zero).
inline ScalarField gradient_magnitude(const ScalarField& f) {
    ScalarField out(f.width(), f.height());
    for (std::size_t y = 0; y < f.height(); ++y) {
        for (std::size_t x = 0; x < f.width(); ++x) {
            const double dx = x + 1 < f.width() ? f(x + 1, y) - f(x, y) : 0.0;
            const double dy = y + 1 < f.height() ? f(x, y + 1) - f(x, y) : 0.0;
            out(x, y) = std::sqrt(dx * dx + dy * dy);
        }
    }
    return out;
}

struct BawWeights {
    ScalarField dist;
    ScalarField tex;
    ScalarField high;
    ScalarField combined; // max(dist, tex) * dist * high
};

inline BawWeights baw_weights(const RgbImage& radiance, const RgbImage& airlight) {
    require_same_shape("A_hat", airlight, radiance);
    const std::size_t w = radiance.width();
    const std::size_t h = radiance.height();
    ScalarField deviation(w, h), brightest(w, h);
    for (std::size_t i = 0; i < radiance.pixel_count(); ++i) {
        double dev = 0.0;
        double mx = radiance.at_index(i, 0);
        for (std::size_t c = 0; c < 3; ++c) {
            dev += std::abs(radiance.at_index(i, c) - airlight.at_index(i, c));
            mx = std::max(mx, radiance.at_index(i, c));
        }
        deviation.at_index(i) = dev / 3.0;
        brightest.at_index(i) = mx;
    }
    BawWeights out;
    out.dist = normalize_minmax(std::move(deviation));
    out.tex = normalize_minmax(gradient_magnitude(gray(radiance)));
    out.high = normalize_minmax(std::move(brightest));
    for (double& v : out.high.values())
        v = 1.0 - v;
    out.combined = ScalarField(w, h);
    for (std::size_t i = 0; i < radiance.pixel_count(); ++i) {
        const double d = out.dist.at_index(i);
        out.combined.at_index(i) = std::max(d, out.tex.at_index(i)) * d * out.high.at_index(i);
    }
    return out;
}

/// sum(W * max(0, target - T)) / (sum(W) + eps)
inline double residual_haze_prior(const ScalarField& transmission, const ScalarField& weights,
                                  double target = kTransmissionTarget) {
    require_same_shape("weights", weights, transmission);
    if (!(target > 0.0 && target <= 1.0))
        throw InvalidArgument("t_target", "must lie in (0,1]");
    const std::size_t n = transmission.pixel_count();
    const double num = pairwise_sum_of(n, [&](std::size_t i) {
        return weights.at_index(i) * std::max(0.0, target - transmission.at_index(i));
    });
    const double den = pairwise_sum(weights.values());
    return num / (den + kPriorEps);
}

/// Anisotropic TV: sum over pixels and channels of |dx| + |dy|, forward
/// differences, replicate boundary.
inline double airlight_tv(const RgbImage& airlight) {
    const std::size_t w = airlight.width();
    const std::size_t h = airlight.height();
    return pairwise_sum_of(airlight.pixel_count(), [&](std::size_t i) {
        const std::size_t x = i % w;
        const std::size_t y = i / w;
        double s = 0.0;
        for (std::size_t c = 0; c < 3; ++c) {
            if (x + 1 < w) s += std::abs(airlight(x + 1, y, c) - airlight(x, y, c));
            if (y + 1 < h) s += std::abs(airlight(x, y + 1, c) - airlight(x, y, c));
        }
        return s;
    });
}

/// True iff every teacher score strictly exceeds the matching student score
/// (higher is better).
inline bool quality_gate(std::span<const double> teacher, std::span<const double> student) {
    if (teacher.size() != student.size())
        throw InvalidArgument("scores", "teacher and student score counts differ");
    if (teacher.empty())
        throw InvalidArgument("scores", "at least one criterion is required");
    for (std::size_t i = 0; i < teacher.size(); ++i)
        if (!(teacher[i] > student[i]))
            return false;
    return true;
}

struct TransmissionStats {
    double min = 0.0;
    double median = 0.0;
    double mean = 0.0;
};

inline TransmissionStats transmission_stats(const ScalarField& t) {
    if (t.empty())
        throw InvalidArgument("T_hat", "empty field");
    std::vector<double> v(t.values().begin(), t.values().end());
    TransmissionStats s;
    s.mean = pairwise_sum(v) / static_cast<double>(v.size());
    std::ranges::sort(v);
    s.min = v.front();
    const std::size_t n = v.size();
    s.median = n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
    return s;
}

struct AuditReport {
    double residual_haze_score = 0.0;
    TransmissionStats t_hat;
    double weight_coverage = 0.0; // fraction of pixels with combined weight > 0.1
    double airlight_tv = 0.0;
};

struct AuditResult {
    AuditReport report;
    BawWeights weights;
    ScatteringState audited;
};

/// Runs the scattering engine on an already dehazed image and scores how much
/// haze it still finds there.
inline AuditResult audit_dehazed_full(const RgbImage& dehazed, const StageConfig& config) {
    const PsarResult psar = run_psar(dehazed, config);
    AuditResult out;
    out.audited = public_output(psar.state);
    out.weights = baw_weights(dehazed, out.audited.airlight);
    out.report.residual_haze_score = residual_haze_prior(out.audited.transmission, out.weights.combined);
    out.report.t_hat = transmission_stats(out.audited.transmission);
    const auto covered = std::ranges::count_if(out.weights.combined.values(),
                                               [](double v) { return v > kCoverageThreshold; });
    out.report.weight_coverage = static_cast<double>(covered) / static_cast<double>(dehazed.pixel_count());
    out.report.airlight_tv = airlight_tv(out.audited.airlight);
    return out;
}

inline AuditReport audit_dehazed(const RgbImage& dehazed, const StageConfig& config) {
    return audit_dehazed_full(dehazed, config).report;
}

} // namespace hazeprox
