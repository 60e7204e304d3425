// hazeprox: batch haze synthesis, dehazing, residual-haze audit and
// round-trip experiments.

#include "hazeprox/cli/commands.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <map>
#include <string>

namespace {

using hazeprox::cli::Command;
using hazeprox::cli::RunConfig;

const std::map<std::string, hazeprox::RefinementKind> kRefinementKinds{
    {"identity", hazeprox::RefinementKind::identity},
    {"guided", hazeprox::RefinementKind::guided_smooth},
    {"guided_smooth", hazeprox::RefinementKind::guided_smooth},
    {"tv", hazeprox::RefinementKind::tv_smooth},
    {"tv_smooth", hazeprox::RefinementKind::tv_smooth},
};

const std::map<std::string, hazeprox::DepthMode> kDepthModes{
    {"vertical", hazeprox::DepthMode::vertical},
    {"radial", hazeprox::DepthMode::radial},
    {"two-plane", hazeprox::DepthMode::two_plane},
};

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Proximal scattering reconstruction: dehazing, haze synthesis and residual-haze audit"};
    app.set_config("--config", "", "key=value configuration file; command-line flags take precedence");
    app.require_subcommand(1);

    RunConfig config;
    auto& stage = config.stage;
    auto& synth = config.synth;
    double refine_strength = 1.0;
    int refine_radius = 2;
    bool no_compress = false;
    std::string gate_baseline;

    app.add_option("--seed", config.seed, "Base seed; per-image seeds are derived from it")->capture_default_str();
    app.add_option("--stages", stage.num_stages, "Number of proximal stages")->capture_default_str()
        ->check(CLI::NonNegativeNumber);
    app.add_option("--lambda-a", stage.weights.airlight, "Airlight trust-region weight")->capture_default_str();
    app.add_option("--lambda-t", stage.weights.transmission, "Transmission trust-region weight")
        ->capture_default_str();
    app.add_option("--lambda-j", stage.weights.radiance, "Radiance trust-region weight")->capture_default_str();
    app.add_option("--refine-t", stage.refine_transmission.kind, "Transmission refinement: identity|guided|tv")
        ->transform(CLI::CheckedTransformer(kRefinementKinds, CLI::ignore_case).description(""))
        ->option_text("KIND");
    app.add_option("--refine-j", stage.refine_radiance.kind, "Radiance refinement: identity|guided|tv")
        ->transform(CLI::CheckedTransformer(kRefinementKinds, CLI::ignore_case).description(""))
        ->option_text("KIND");
    app.add_option("--refine-strength", refine_strength, "Residual scale of both refinements")
        ->capture_default_str();
    app.add_option("--refine-radius", refine_radius, "Window half-size of both refinements")->capture_default_str();
    app.add_flag("--emit-intermediates", config.emit_intermediates, "Also write T, A, traces and weight maps");
    app.add_option("--threads", config.threads, "Worker threads across images (0 = all cores)")
        ->envname("HAZEPROX_THREADS")
        ->capture_default_str();
    app.add_option("--out-dir", config.out_dir, "Output directory")->capture_default_str();
    bool png16 = false;
    app.add_flag("--png16", png16, "Write 16-bit PNGs instead of 8-bit");

    // Synthesis parameters.
    app.add_option("--depth", config.depth_inputs, "Depth maps (PNG or 1-channel PFM), one per input");
    app.add_option("--depth-mode", config.depth_mode, "Procedural depth when no --depth: vertical|radial|two-plane")
        ->transform(CLI::CheckedTransformer(kDepthModes, CLI::ignore_case).description(""))
        ->option_text("MODE");
    app.add_option("--scenes", config.scenes, "Generate N procedural clean scenes instead of reading inputs");
    app.add_option("--scene-size", config.scene_size, "Side length of procedural scenes")->capture_default_str();
    app.add_option("--beta-min", synth.beta_min)->capture_default_str();
    app.add_option("--beta-max", synth.beta_max)->capture_default_str();
    app.add_option("--nonuniform-prob", synth.nonuniform_prob)->capture_default_str();
    app.add_option("--near-haze-min", synth.near_haze_min)->capture_default_str();
    app.add_option("--near-haze-max", synth.near_haze_max)->capture_default_str();
    app.add_option("--airlight-min", synth.airlight_min)->capture_default_str();
    app.add_option("--airlight-max", synth.airlight_max)->capture_default_str();
    app.add_option("--airlight-jitter", synth.airlight_jitter)->capture_default_str();
    app.add_option("--noise-base", synth.noise.base_resolution)->capture_default_str();
    app.add_option("--noise-sigma0", synth.noise.sigma0)->capture_default_str();
    app.add_option("--noise-sigma1", synth.noise.sigma1)->capture_default_str();
    app.add_option("--rescale-min", synth.noise.rescale_min)->capture_default_str();
    app.add_option("--rescale-max", synth.noise.rescale_max)->capture_default_str();
    app.add_option("--luminance-jitter", synth.augment.luminance_jitter)->capture_default_str();
    app.add_option("--noise-std", synth.augment.noise_std)->capture_default_str();
    app.add_flag("--no-compress", no_compress, "Skip the 8-bit compression proxy");

    auto add_command = [&](const char* name, const char* help, Command command, const char* inputs_help) {
        CLI::App* sub = app.add_subcommand(name, help);
        sub->fallthrough();
        sub->add_option("inputs", config.inputs, inputs_help);
        sub->callback([&config, command] { config.command = command; });
        return sub;
    };
    add_command("synthesize", "Render synthetic haze over clean images", Command::synthesize, "Clean PNG images");
    add_command("dehaze", "Run the proximal reconstruction on hazy images", Command::dehaze, "Hazy PNG images");
    CLI::App* audit = add_command("audit", "Residual-haze audit of dehazed images", Command::audit,
                                  "Dehazed PNG images");
    audit->add_option("--gate-baseline", gate_baseline, "Image the inputs must strictly beat on every gate score");
    add_command("roundtrip", "Synthesize, dehaze and score against the clean images", Command::roundtrip,
                "Clean PNG images");

    CLI11_PARSE(app, argc, argv);

    config.stage.refine_transmission.strength = refine_strength;
    config.stage.refine_transmission.radius = refine_radius;
    config.stage.refine_radiance.strength = refine_strength;
    config.stage.refine_radiance.radius = refine_radius;
    config.synth.augment.enable_compress = !no_compress;
    config.png_bit_depth = png16 ? 16 : 8;
    config.synth.seed = config.seed;
    if (!gate_baseline.empty())
        config.gate_baseline = gate_baseline;

    try {
        return hazeprox::cli::run(config);
    } catch (const hazeprox::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
}
