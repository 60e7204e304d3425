#pragma once

#include "hazeprox/core/scattering.hpp"
#include "hazeprox/proximal/updates.hpp"
#include "hazeprox/refinement/refinement.hpp"

#include <optional>
#include <vector>

namespace hazeprox {

/// Initial iterate: J0 = P, A0 = 0.9 everywhere, T0 = 0.5 everywhere.
inline constexpr double kInitialAirlight = 0.9;
inline constexpr double kInitialTransmission = 0.5;

struct StageConfig {
    int num_stages = 4;
    ProximalWeights weights{};
    RefinementOperator refine_transmission{};
    RefinementOperator refine_radiance{};
    bool record_objective = true;
    bool record_states = false;
};

inline void validate(const StageConfig& config) {
    if (config.num_stages < 0)
        throw InvalidArgument("num_stages", "must be >= 0");
    validate(config.weights);
    validate(config.refine_transmission);
    validate(config.refine_radiance);
}

/// Objective values (and optionally states) before the first stage and after
/// every stage.
struct StageTrace {
    std::vector<double> data_term;
    std::vector<ScatteringState> states;
    /// Analytic transmission of each stage before refinement and clamping.
    std::vector<ScalarField> raw_transmission;
};

inline ScatteringState initial_state(const RgbImage& observed) {
    return ScatteringState{
        observed,
        ScalarField(observed.width(), observed.height(), kInitialTransmission),
        RgbImage(observed.width(), observed.height(), Rgb{kInitialAirlight, kInitialAirlight, kInitialAirlight}),
    };
}

/// One stage: airlight, then transmission (+ refinement, clamp), then
/// radiance (+ refinement). The airlight block has no refinement hook.
inline ScatteringState run_stage(const RgbImage& observed, const ScatteringState& state, const StageConfig& config,
                                 ScalarField* raw_transmission = nullptr) {
    validate(state);
    require_same_shape("J", state.radiance, observed);
    const ProximalWeights& w = config.weights;

    RgbImage airlight = prox_airlight(observed, state.radiance, state.transmission, state.airlight, w.airlight);

    ScalarField t_bar = prox_transmission(observed, state.radiance, state.transmission, airlight, w.transmission);
    ScalarField transmission =
        clamp_transmission(refine_transmission(t_bar, state.radiance, config.refine_transmission));
    if (raw_transmission != nullptr)
        *raw_transmission = std::move(t_bar);

    RgbImage j_bar = prox_radiance(observed, state.radiance, transmission, airlight, w.radiance);
    RgbImage radiance = refine_radiance(j_bar, transmission, airlight, config.refine_radiance);

    return ScatteringState{std::move(radiance), std::move(transmission), std::move(airlight)};
}

struct PsarResult {
    ScatteringState state;
    StageTrace trace;
};

/// Stacks `num_stages` stages starting from initial_state(observed). The
/// returned state is the unclamped internal iterate; see public_output for
/// the boundary-clamped form.
inline PsarResult run_psar(const RgbImage& observed, const StageConfig& config) {
    validate(config);
    require_finite("P", observed);
    PsarResult result{initial_state(observed), {}};
    auto record = [&](const ScatteringState& s) {
        if (config.record_objective)
            result.trace.data_term.push_back(data_term(observed, s));
        if (config.record_states)
            result.trace.states.push_back(s);
    };
    record(result.state);
    for (int k = 0; k < config.num_stages; ++k) {
        ScalarField raw;
        result.state = run_stage(observed, result.state, config, config.record_states ? &raw : nullptr);
        if (config.record_states)
            result.trace.raw_transmission.push_back(std::move(raw));
        record(result.state);
    }
    return result;
}

/// Clamps radiance and airlight to [0,1] for output.
inline ScatteringState public_output(ScatteringState state) {
    state.radiance = clamp_unit(std::move(state.radiance));
    state.airlight = clamp_unit(std::move(state.airlight));
    state.transmission = clamp_transmission(std::move(state.transmission));
    return state;
}

} // namespace hazeprox
