// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
// criterion fails.

#include "hazeprox/cli/commands.hpp"
#include "hazeprox/hazeprox.hpp"

#include "oracles.hpp"
#include "test_support.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#ifndef HAZEPROX_CLI
#error "HAZEPROX_CLI must name the command-line binary"
#endif

using namespace hazeprox;
using namespace testing_support;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
    bool pass = true;
    std::string detail;
};

/// Draws instances until the scan minimizer of every channel lies inside the
/// search interval, so the grid comparison is meaningful.
struct ScanStats {
    double max_scan_err = 0.0;
    double max_stationarity = 0.0;
    int rejected = 0;
};

Outcome criterion1() {
    constexpr int kInstances = 10000;
    constexpr double kLo = -3.0, kHi = 4.0;
    const auto t0 = Clock::now();
    Rng rng(1001);
    ScanStats a, t, j;
    auto scan = [&](const std::function<double(double)>& f, double value, ScanStats& s) {
        const auto r = oracle::dense_scan(f, kLo, kHi);
        if (r.at_boundary)
            return false;
        s.max_scan_err = std::max(s.max_scan_err, std::abs(value - r.argmin));
        return true;
    };
    for (int n = 0; n < kInstances; ++n) {
        oracle::PixelInstance p = oracle::random_instance(rng);
        const Rgb av = pixel::prox_airlight(p.observed, p.radiance, p.transmission, p.airlight, p.lambda);
        const double tv = pixel::prox_transmission(p.observed, p.radiance, p.transmission, p.airlight, p.lambda);
        const Rgb jv = pixel::prox_radiance(p.observed, p.radiance, p.transmission, p.airlight, p.lambda);
        for (std::size_t c = 0; c < 3; ++c) {
            if (!scan([&](double v) { return oracle::airlight_objective(p, c, v); }, av[c], a))
                ++a.rejected;
            if (!scan([&](double v) { return oracle::radiance_objective(p, c, v); }, jv[c], j))
                ++j.rejected;
            a.max_stationarity = std::max(a.max_stationarity, std::abs(oracle::airlight_gradient(p, c, av[c])));
            j.max_stationarity = std::max(j.max_stationarity, std::abs(oracle::radiance_gradient(p, c, jv[c])));
        }
        if (!scan([&](double v) { return oracle::transmission_objective(p, v); }, tv, t))
            ++t.rejected;
        t.max_stationarity = std::max(t.max_stationarity, std::abs(oracle::transmission_gradient(p, tv)));
    }
    const double elapsed = seconds_since(t0);
    Outcome o;
    for (const ScanStats* s : {&a, &t, &j})
        o.pass = o.pass && s->max_scan_err <= 2e-5 && s->max_stationarity <= 1e-8 && s->rejected == 0;
    o.pass = o.pass && elapsed < 30.0;
    char buf[512];
    std::snprintf(buf, sizeof buf,
                  "%d instances per update; max |closed form - scan| A=%.2e T=%.2e J=%.2e (tol 2e-5); "
                  "max stationarity A=%.2e T=%.2e J=%.2e (tol 1e-8); boundary hits %d; %.1fs (limit 30s)",
                  kInstances, a.max_scan_err, t.max_scan_err, j.max_scan_err, a.max_stationarity, t.max_stationarity,
                  j.max_stationarity, a.rejected + t.rejected + j.rejected, elapsed);
    o.detail = buf;
    return o;
}

Outcome criterion2() {
    Rng rng(2002);
    double worst = 0.0;
    for (int n = 0; n < 1000; ++n) {
        const oracle::PixelInstance p = oracle::random_instance(rng);
        const Rgb av = pixel::prox_airlight(p.observed, p.radiance, p.transmission, p.airlight, p.lambda);
        const double tv = pixel::prox_transmission(p.observed, p.radiance, p.transmission, p.airlight, p.lambda);
        const Rgb jv = pixel::prox_radiance(p.observed, p.radiance, p.transmission, p.airlight, p.lambda);
        worst = std::max(worst, std::abs(oracle::central_difference(
                                    [&](double v) { return oracle::transmission_objective(p, v); }, tv, 1e-6)));
        for (std::size_t c = 0; c < 3; ++c) {
            worst = std::max(worst, std::abs(oracle::central_difference(
                                        [&](double v) { return oracle::airlight_objective(p, c, v); }, av[c], 1e-6)));
            worst = std::max(worst, std::abs(oracle::central_difference(
                                        [&](double v) { return oracle::radiance_objective(p, c, v); }, jv[c], 1e-6)));
        }
    }
    char buf[256];
    std::snprintf(buf, sizeof buf, "1000 instances; max |central difference| at minimizer %.2e (tol 1e-4)", worst);
    return {worst <= 1e-4, buf};
}

Outcome criterion3() {
    double worst_increase = -1e300;
    int violations = 0;
    for (std::uint64_t i = 0; i < 50; ++i) {
        SynthesisSpec spec;
        spec.seed = derive_seed(3003, cli::kHazeStream, i);
        const RgbImage clean = procedural_scene(64, 64, derive_seed(3003, cli::kSceneStream, i));
        const SynthesisOutput s = synthesize(clean, procedural_depth(DepthMode::vertical, 64, 64), spec);
        const PsarResult r = run_psar(s.hazy, StageConfig{});
        for (std::size_t k = 1; k < r.trace.data_term.size(); ++k) {
            const double inc = r.trace.data_term[k] - r.trace.data_term[k - 1];
            worst_increase = std::max(worst_increase, inc);
            if (inc > 1e-9)
                ++violations;
        }
        if (r.trace.data_term.size() != 5)
            ++violations;
    }
    char buf[256];
    std::snprintf(buf, sizeof buf,
                  "50 instances 64x64, 4 stages; largest stage-to-stage change %.3e (tol +1e-9); violations %d",
                  worst_increase, violations);
    return {violations == 0, buf};
}

Outcome criterion4() {
    constexpr double kLambda = 1e-12;
    double err_a = 0.0, err_t = 0.0, err_j = 0.0;
    for (std::uint64_t i = 0; i < 20; ++i) {
        const SyntheticScene scene = random_scene(64, 64, 4004 + i); // T in [0.1, 0.9]
        Rng rng(5005 + i);
        const ScatteringState wrong = random_state(64, 64, rng);
        const ScatteringState& g = scene.truth;
        err_a = std::max(err_a, max_abs_diff(prox_airlight(scene.observed, g.radiance, g.transmission, wrong.airlight,
                                                           kLambda),
                                             g.airlight));
        err_t = std::max(err_t, max_abs_diff(prox_transmission(scene.observed, g.radiance, wrong.transmission,
                                                               g.airlight, kLambda),
                                             g.transmission));
        err_j = std::max(err_j, max_abs_diff(prox_radiance(scene.observed, wrong.radiance, g.transmission, g.airlight,
                                                           kLambda),
                                             g.radiance));
    }
    char buf[256];
    std::snprintf(buf, sizeof buf, "20 instances 64x64, lambda=1e-12; max error A=%.2e T=%.2e J=%.2e (tol 1e-6)",
                  err_a, err_t, err_j);
    return {err_a <= 1e-6 && err_t <= 1e-6 && err_j <= 1e-6, buf};
}

Outcome criterion5() {
    double worst_data = 0.0;
    double min_delta = 1e300;
    int nonuniform = 0;
    for (std::uint64_t i = 0; i < 50; ++i) {
        SynthesisSpec spec;
        spec.augment = {0.0, 0.0, false};
        spec.seed = derive_seed(6006, cli::kHazeStream, i);
        const auto mode = static_cast<DepthMode>(i % 3);
        const RgbImage clean = procedural_scene(64, 48, derive_seed(6006, cli::kSceneStream, i));
        const SynthesisOutput s = synthesize(clean, procedural_depth(mode, 64, 48), spec);
        worst_data = std::max(worst_data, data_term(s.hazy, {clean, s.transmission, s.airlight}));
        if (s.nonuniform) {
            ++nonuniform;
            for (double v : s.density.values())
                min_delta = std::min(min_delta, v - s.beta_init);
        }
    }
    SynthesisSpec always;
    always.nonuniform_prob = 1.0;
    for (std::uint64_t i = 0; i < 200; ++i) {
        Rng rng(7007 + i);
        const DensityDraw d = make_density_field(always, 40, 30, rng);
        ++nonuniform;
        for (double v : d.density.values())
            min_delta = std::min(min_delta, v - d.beta_init);
    }
    Rng rng(8008);
    double worst_offset = 0.0;
    for (int n = 0; n < 1000; ++n) {
        const double beta = rng.uniform(always.beta_min, always.beta_max);
        const double h = rng.uniform(0.0, 0.99);
        worst_offset = std::max(worst_offset, std::abs(std::exp(-beta * near_haze_depth_offset(beta, h)) - (1.0 - h)));
    }
    char buf[384];
    std::snprintf(buf, sizeof buf,
                  "max data term %.2e over 50 images (tol 1e-10); min delta beta %.3g over %d nonuniform draws "
                  "(>= 0); max |exp(-beta d0) - (1 - h)| %.2e over 1000 draws (tol 1e-5)",
                  worst_data, min_delta, nonuniform, worst_offset);
    return {worst_data <= 1e-10 && min_delta >= 0.0 && worst_offset <= 1e-5, buf};
}

Outcome criterion6() {
    const auto t0 = Clock::now();
    std::vector<double> hazy, dehazed, mae;
    for (std::uint64_t i = 0; i < 20; ++i) {
        SynthesisSpec spec;
        spec.seed = derive_seed(0, cli::kHazeStream, i);
        const RgbImage clean = procedural_scene(256, 256, derive_seed(0, cli::kSceneStream, i));
        const cli::RoundtripRow row =
            cli::roundtrip_one(clean, procedural_depth(DepthMode::vertical, 256, 256), spec, StageConfig{});
        hazy.push_back(row.psnr_hazy);
        dehazed.push_back(row.psnr_dehazed);
        mae.push_back(row.t_mae);
    }
    const double elapsed = seconds_since(t0);
    const double gain = cli::detail::median(dehazed) - cli::detail::median(hazy);
    const double mean_mae = pairwise_sum(mae) / static_cast<double>(mae.size());
    char buf[384];
    std::snprintf(buf, sizeof buf,
                  "20 scenes 256x256; median PSNR hazy %.3f dB, dehazed %.3f dB, gain %.3f dB (need >= 3); "
                  "mean |T_est - T_gt| %.4f (need <= 0.15); %.1fs single-threaded (limit 120s)",
                  cli::detail::median(hazy), cli::detail::median(dehazed), gain, mean_mae, elapsed);
    return {gain >= 3.0 && mean_mae <= 0.15 && elapsed < 120.0, buf};
}

Outcome criterion7() {
    int ordered = 0;
    double smallest_margin = 1e300;
    for (std::uint64_t i = 0; i < 10; ++i) {
        const RgbImage clean = procedural_scene(64, 64, derive_seed(9009, cli::kSceneStream, i));
        Rng rng(derive_seed(9009, cli::kHazeStream, i));
        const RgbImage airlight = sample_airlight(SynthesisSpec{}, 64, 64, rng);
        const RgbImage hazy = render_scattering(clean, ScalarField(64, 64, 0.3), airlight);
        const double sh = audit_dehazed(hazy, StageConfig{}).residual_haze_score;
        const double sc = audit_dehazed(clean, StageConfig{}).residual_haze_score;
        ordered += sh > sc;
        smallest_margin = std::min(smallest_margin, sh - sc);
    }
    Rng rng(9010);
    double worst_zero = 0.0;
    for (int n = 0; n < 1000; ++n) {
        const ScalarField t = random_field(9, 7, rng, kTransmissionTarget, 1.0);
        const ScalarField w = random_field(9, 7, rng);
        worst_zero = std::max(worst_zero, residual_haze_prior(t, w));
    }
    char buf[256];
    std::snprintf(buf, sizeof buf,
                  "hazy > clean on %d/10 pairs (smallest margin %.4f); max prior with T_hat >= 0.9 is %.1e over "
                  "1000 fields (need 0)",
                  ordered, smallest_margin, worst_zero);
    return {ordered == 10 && worst_zero == 0.0, buf};
}

std::map<std::string, std::string> snapshot(const fs::path& dir) {
    std::map<std::string, std::string> out;
    for (const auto& e : fs::directory_iterator(dir)) {
        std::ifstream f(e.path(), std::ios::binary);
        std::ostringstream s;
        s << f.rdbuf();
        out[e.path().filename().string()] = s.str();
    }
    return out;
}

Outcome criterion8() {
    const fs::path root = fs::temp_directory_path() / "hazeprox_acceptance_determinism";
    fs::remove_all(root);
    fs::create_directories(root / "in");
    std::string inputs;
    for (std::size_t i = 0; i < 8; ++i) {
        const fs::path p = root / "in" / ("img_" + std::to_string(i) + ".png");
        io::write_png(p, procedural_scene(48, 40, 100 + i));
        inputs += " " + p.string();
    }
    int compared = 0, mismatched = 0, failed_runs = 0;
    for (const std::string cmd : {"synthesize", "dehaze", "audit", "roundtrip"}) {
        std::map<std::string, std::string> reference;
        int run = 0;
        for (const char* threads : {"1", "1", "8", "8"}) {
            const fs::path out = root / (cmd + "_" + std::to_string(run++));
            const std::string line = std::string("\"") + HAZEPROX_CLI + "\" " + cmd + inputs +
                                     " --seed 42 --emit-intermediates --threads " + threads + " --out-dir \"" +
                                     out.string() + "\" 2>/dev/null";
            if (std::system(line.c_str()) != 0) {
                ++failed_runs;
                continue;
            }
            const auto files = snapshot(out);
            if (reference.empty()) {
                reference = files;
                continue;
            }
            ++compared;
            mismatched += files != reference;
        }
    }
    fs::remove_all(root);
    char buf[256];
    std::snprintf(buf, sizeof buf,
                  "4 commands x (2 runs --threads 1, 2 runs --threads 8); %d comparisons, %d differing, %d failed runs",
                  compared, mismatched, failed_runs);
    return {compared == 12 && mismatched == 0 && failed_runs == 0, buf};
}

Outcome criterion9() {
    int trues = 0, wrong = 0;
    const std::vector<double> base{0.3, 5.0, -2.0};
    for (int a = -1; a <= 1; ++a)
        for (int b = -1; b <= 1; ++b)
            for (int c = -1; c <= 1; ++c) {
                const std::vector<double> teacher{base[0] + a, base[1] + b, base[2] + c};
                const bool got = quality_gate(teacher, base);
                const bool strict = a > 0 && b > 0 && c > 0;
                trues += got;
                wrong += got != strict;
            }
    // Strictness against itself and rejection of single ties/losses.
    int property_failures = 0;
    Rng rng(9999);
    for (int n = 0; n < 1000; ++n) {
        std::vector<double> s(3), t(3);
        for (std::size_t i = 0; i < 3; ++i) {
            s[i] = rng.uniform(-5.0, 5.0);
            t[i] = s[i] + rng.uniform(0.01, 1.0);
        }
        property_failures += quality_gate(s, s);
        property_failures += !quality_gate(t, s);
        const std::size_t k = static_cast<std::size_t>(n % 3);
        std::vector<double> tie = t, loss = t;
        tie[k] = s[k];
        loss[k] = s[k] - 0.5;
        property_failures += quality_gate(tie, s);
        property_failures += quality_gate(loss, s);
    }
    char buf[256];
    std::snprintf(buf, sizeof buf, "27-case grid: %d true (need exactly 1), %d disagreements; %d property failures",
                  trues, wrong, property_failures);
    return {trues == 1 && wrong == 0 && property_failures == 0, buf};
}

} // namespace

int main() {
    const std::vector<std::pair<const char*, Outcome (*)()>> criteria{
        {"closed-form oracle equivalence", criterion1}, {"gradient check", criterion2},
        {"block descent", criterion3},                 {"exact inversion", criterion4},
        {"synthesis consistency", criterion5},         {"round-trip improvement", criterion6},
        {"audit direction", criterion7},               {"determinism", criterion8},
        {"strict gate semantics", criterion9},
    };
    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        failures += !o.pass;
        std::printf("%s criterion %zu (%s): %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first,
                    o.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
