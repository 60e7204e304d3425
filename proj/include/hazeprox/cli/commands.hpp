#pragma once

// Batch drivers behind the command-line front end. Every command processes
// its inputs independently (optionally in parallel), writes the outputs of an
// item only after all of its computation succeeded, and returns a nonzero
// status iff at least one item failed.

#include "hazeprox/audit/audit.hpp"
#include "hazeprox/audit/scorers.hpp"
#include "hazeprox/core/error.hpp"
#include "hazeprox/core/metrics.hpp"
#include "hazeprox/core/parallel.hpp"
#include "hazeprox/io/pfm.hpp"
#include "hazeprox/io/png.hpp"
#include "hazeprox/io/records.hpp"
#include "hazeprox/proximal/engine.hpp"
#include "hazeprox/synth/procedural.hpp"
#include "hazeprox/synth/random.hpp"
#include "hazeprox/synth/synthesis.hpp"

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace hazeprox::cli {

namespace fs = std::filesystem;

enum class Command { synthesize, dehaze, audit, roundtrip };

struct RunConfig {
    Command command = Command::dehaze;
    std::vector<fs::path> inputs;
    std::vector<fs::path> depth_inputs; // one per input when given
    DepthMode depth_mode = DepthMode::vertical;
    std::size_t scenes = 0; // procedural clean scenes instead of input files
    std::size_t scene_size = 256;
    fs::path out_dir = ".";
    StageConfig stage{};
    SynthesisSpec synth{};
    std::uint64_t seed = 0;
    bool emit_intermediates = false;
    unsigned threads = 1; // 0 = hardware concurrency
    int png_bit_depth = 8;
    std::optional<fs::path> gate_baseline;
};

/// Stream ids passed to derive_seed.
inline constexpr std::uint64_t kHazeStream = 0;
inline constexpr std::uint64_t kSceneStream = 1;

struct InputItem {
    std::string name;
    std::optional<fs::path> image;
    std::optional<fs::path> depth;
    std::uint64_t scene_seed = 0;
    std::uint64_t haze_seed = 0;
};

namespace detail {

inline std::string scene_name(std::size_t i) {
    std::string digits = std::to_string(i);
    return "scene_" + std::string(digits.size() < 3 ? 3 - digits.size() : 0, '0') + digits;
}

/// Validates every path up front and assigns per-item seeds.
inline std::vector<InputItem> resolve_inputs(const RunConfig& config, bool clean_inputs) {
    std::vector<InputItem> items;
    if (config.scenes > 0 && !clean_inputs)
        throw InvalidArgument("scenes", "procedural scenes only apply to synthesize and roundtrip");
    if (!config.depth_inputs.empty() && config.depth_inputs.size() != config.inputs.size())
        throw InvalidArgument("depth", "give exactly one depth map per input");
    std::set<std::string> names;
    for (std::size_t i = 0; i < config.inputs.size(); ++i) {
        const fs::path& p = config.inputs[i];
        if (!fs::is_regular_file(p))
            throw IoError("input not found: " + p.string());
        InputItem item;
        item.name = p.stem().string();
        item.image = p;
        if (!config.depth_inputs.empty()) {
            if (!fs::is_regular_file(config.depth_inputs[i]))
                throw IoError("depth map not found: " + config.depth_inputs[i].string());
            item.depth = config.depth_inputs[i];
        }
        items.push_back(std::move(item));
    }
    for (std::size_t i = 0; i < config.scenes; ++i) {
        InputItem item;
        item.name = scene_name(i);
        item.scene_seed = derive_seed(config.seed, kSceneStream, i);
        items.push_back(std::move(item));
    }
    for (std::size_t i = 0; i < items.size(); ++i) {
        items[i].haze_seed = derive_seed(config.seed, kHazeStream, i);
        if (!names.insert(items[i].name).second)
            throw InvalidArgument("inputs", "duplicate output name '" + items[i].name + "'");
    }
    return items;
}

inline RgbImage load_clean(const InputItem& item, const RunConfig& config) {
    if (item.image)
        return io::read_png(*item.image).image;
    return procedural_scene(config.scene_size, config.scene_size, item.scene_seed);
}

inline ScalarField load_depth(const InputItem& item, const RunConfig& config, std::size_t width, std::size_t height) {
    if (!item.depth)
        return procedural_depth(config.depth_mode, width, height);
    ScalarField depth;
    if (item.depth->extension() == ".pfm") {
        depth = io::read_pfm<1>(*item.depth);
    } else {
        const RgbImage rgb = io::read_png(*item.depth).image;
        depth = ScalarField(rgb.width(), rgb.height());
        for (std::size_t i = 0; i < rgb.pixel_count(); ++i)
            depth.at_index(i) = rgb.at_index(i, 0);
    }
    if (depth.width() != width || depth.height() != height)
        throw DimensionError("depth", "expected " + shape_string(width, height) + ", got " +
                                          shape_string(depth.width(), depth.height()));
    for (double v : depth.values())
        if (!(v >= 0.0 && v <= 1.0))
            throw InvalidArgument("depth", "values must lie in [0,1]");
    return depth;
}

/// Collects the files of one item; removes them again unless committed.
class ItemWriter {
public:
    explicit ItemWriter(fs::path dir) : dir_(std::move(dir)) {}
    ItemWriter(const ItemWriter&) = delete;
    ItemWriter& operator=(const ItemWriter&) = delete;
    ~ItemWriter() {
        if (committed_)
            return;
        std::error_code ec;
        for (const fs::path& p : written_)
            fs::remove(p, ec);
    }

    void png(const std::string& file, const RgbImage& image, int bit_depth) {
        io::write_png(track(file), image, bit_depth);
    }
    template <std::size_t C>
    void pfm(const std::string& file, const Image<C>& image) {
        io::write_pfm(track(file), image);
    }
    void text(const std::string& file, const std::string& content) {
        std::ofstream f(track(file), std::ios::binary);
        if (!(f << content))
            throw IoError("cannot write " + (dir_ / file).string());
    }
    void commit() { committed_ = true; }

private:
    fs::path track(const std::string& file) {
        written_.push_back(dir_ / file);
        return written_.back();
    }

    fs::path dir_;
    std::vector<fs::path> written_;
    bool committed_ = false;
};

struct ItemOutcome {
    bool ok = false;
    std::string error;
    std::optional<io::Record> record;
};

/// Runs `work(item, writer)` for every item and reports failures in input
/// order on `err`.
template <typename Work>
std::vector<ItemOutcome> run_items(const std::vector<InputItem>& items, const RunConfig& config, std::ostream& err,
                                   Work&& work) {
    std::vector<ItemOutcome> outcomes(items.size());
    parallel_for(items.size(), config.threads, [&](std::size_t i) {
        try {
            ItemWriter writer(config.out_dir);
            outcomes[i].record = work(items[i], writer);
            writer.commit();
            outcomes[i].ok = true;
        } catch (const std::exception& e) {
            outcomes[i].error = e.what();
        }
    });
    for (std::size_t i = 0; i < items.size(); ++i)
        if (!outcomes[i].ok)
            err << "error: " << items[i].name << ": " << outcomes[i].error << '\n';
    return outcomes;
}

inline int exit_status(const std::vector<ItemOutcome>& outcomes) {
    return std::ranges::all_of(outcomes, [](const ItemOutcome& o) { return o.ok; }) ? 0 : 1;
}

inline void prepare_out_dir(const RunConfig& config) {
    std::error_code ec;
    fs::create_directories(config.out_dir, ec);
    if (!fs::is_directory(config.out_dir))
        throw IoError("cannot create output directory " + config.out_dir.string());
}

inline std::string trace_text(const StageTrace& trace) {
    std::string text;
    for (std::size_t k = 0; k < trace.data_term.size(); ++k)
        text += "stage=" + std::to_string(k) + "\tdata_term=" + io::format_double(trace.data_term[k]) + "\n";
    return text;
}

inline std::string trace_compact(const StageTrace& trace) {
    std::string text;
    for (std::size_t k = 0; k < trace.data_term.size(); ++k) {
        if (k > 0)
            text += ',';
        text += io::format_double(trace.data_term[k]);
    }
    return text;
}

inline void write_lines(const fs::path& path, const std::vector<std::string>& lines) {
    std::ofstream f(path, std::ios::binary);
    for (const std::string& line : lines)
        f << line << '\n';
    if (!f)
        throw IoError("cannot write " + path.string());
}

inline double median(std::vector<double> v) {
    if (v.empty())
        return 0.0;
    std::ranges::sort(v);
    const std::size_t n = v.size();
    return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

} // namespace detail

/// Manifest columns, in order: index name input depth seed beta_init
/// nonuniform h_near d0 airlight_r airlight_g airlight_b luminance_factor
/// hazy transmission airlight density.
inline int cmd_synthesize(const RunConfig& config, std::ostream& err = std::cerr) {
    validate(config.synth);
    const auto items = detail::resolve_inputs(config, true);
    detail::prepare_out_dir(config);
    auto outcomes = detail::run_items(items, config, err, [&](const InputItem& item, detail::ItemWriter& out) {
        const RgbImage clean = detail::load_clean(item, config);
        const ScalarField depth = detail::load_depth(item, config, clean.width(), clean.height());
        SynthesisSpec spec = config.synth;
        spec.seed = item.haze_seed;
        const SynthesisOutput s = synthesize(clean, depth, spec);

        const std::string hazy = item.name + "_hazy.png";
        const std::string t = item.name + "_T.pfm";
        const std::string a = item.name + "_A.pfm";
        const std::string beta = item.name + "_beta.pfm";
        out.png(hazy, s.hazy, config.png_bit_depth);
        out.pfm(t, s.transmission);
        out.pfm(a, s.airlight);
        out.pfm(beta, s.density);
        if (config.emit_intermediates) {
            out.png(item.name + "_clean.png", s.clean, config.png_bit_depth);
            out.pfm(item.name + "_depth.pfm", depth);
        }
        const Rgb air = s.airlight.pixel(0);
        io::Record r;
        r.add("name", item.name)
            .add("input", item.image ? item.image->string() : "procedural:" + std::to_string(item.scene_seed))
            .add("depth", item.depth ? item.depth->string() : "procedural:" + std::string(to_string(config.depth_mode)))
            .add("seed", spec.seed)
            .add("beta_init", s.beta_init)
            .add("nonuniform", s.nonuniform)
            .add("h_near", s.h_near)
            .add("d0", s.d0)
            .add("airlight_r", air[0])
            .add("airlight_g", air[1])
            .add("airlight_b", air[2])
            .add("luminance_factor", s.luminance_factor)
            .add("hazy", hazy)
            .add("transmission", t)
            .add("airlight", a)
            .add("density", beta);
        return r;
    });
    std::vector<std::string> lines;
    for (std::size_t i = 0; i < outcomes.size(); ++i) {
        if (!outcomes[i].ok)
            continue;
        io::Record line;
        line.add("index", i);
        for (const auto& [k, v] : outcomes[i].record->fields())
            line.add(k, v);
        lines.push_back(line.to_line());
    }
    detail::write_lines(config.out_dir / "manifest.tsv", lines);
    return detail::exit_status(outcomes);
}

inline int cmd_dehaze(const RunConfig& config, std::ostream& err = std::cerr) {
    validate(config.stage);
    const auto items = detail::resolve_inputs(config, false);
    detail::prepare_out_dir(config);
    StageConfig stage = config.stage;
    stage.record_objective = true;
    const auto outcomes = detail::run_items(items, config, err, [&](const InputItem& item, detail::ItemWriter& out) {
        const RgbImage hazy = io::read_png(*item.image).image;
        const PsarResult result = run_psar(hazy, stage);
        const ScatteringState state = public_output(result.state);
        out.png(item.name + "_dehazed.png", state.radiance, config.png_bit_depth);
        if (config.emit_intermediates) {
            out.pfm(item.name + "_T.pfm", state.transmission);
            out.pfm(item.name + "_A.pfm", state.airlight);
            out.text(item.name + "_trace.txt", detail::trace_text(result.trace));
        }
        return io::Record{};
    });
    return detail::exit_status(outcomes);
}

inline int cmd_audit(const RunConfig& config, std::ostream& err = std::cerr) {
    validate(config.stage);
    const auto items = detail::resolve_inputs(config, false);
    std::optional<std::array<double, 2>> baseline_scores;
    if (config.gate_baseline) {
        if (!fs::is_regular_file(*config.gate_baseline))
            throw IoError("gate baseline not found: " + config.gate_baseline->string());
        baseline_scores = gate_scores(io::read_png(*config.gate_baseline).image);
    }
    detail::prepare_out_dir(config);
    const auto outcomes = detail::run_items(items, config, err, [&](const InputItem& item, detail::ItemWriter& out) {
        const RgbImage image = io::read_png(*item.image).image;
        const AuditResult audit = audit_dehazed_full(image, config.stage);
        const auto scores = gate_scores(image);
        io::Record r;
        r.add("input", item.image->string())
            .add("seed", config.seed)
            .add("residual_haze_score", audit.report.residual_haze_score)
            .add("t_hat_min", audit.report.t_hat.min)
            .add("t_hat_median", audit.report.t_hat.median)
            .add("t_hat_mean", audit.report.t_hat.mean)
            .add("weight_coverage", audit.report.weight_coverage)
            .add("airlight_tv", audit.report.airlight_tv)
            .add("local_contrast", scores[0])
            .add("gradient_energy", scores[1]);
        if (baseline_scores) {
            r.add("gate_baseline", config.gate_baseline->string())
                .add("gate_pass", quality_gate(scores, *baseline_scores));
        }
        out.text(item.name + "_audit.txt", r.to_report());
        if (config.emit_intermediates) {
            out.pfm(item.name + "_w_dist.pfm", audit.weights.dist);
            out.pfm(item.name + "_w_tex.pfm", audit.weights.tex);
            out.pfm(item.name + "_w_high.pfm", audit.weights.high);
            out.pfm(item.name + "_w_baw.pfm", audit.weights.combined);
            out.pfm(item.name + "_T_hat.pfm", audit.audited.transmission);
        }
        return r;
    });
    return detail::exit_status(outcomes);
}

/// Per-image metrics of a synthesize-then-dehaze experiment.
struct RoundtripRow {
    double psnr_hazy = 0.0;
    double psnr_dehazed = 0.0;
    double t_mae = 0.0;
    StageTrace trace;
};

inline RoundtripRow roundtrip_one(const RgbImage& clean, const ScalarField& depth, const SynthesisSpec& spec,
                                  const StageConfig& stage, SynthesisOutput* synth_out = nullptr,
                                  ScatteringState* state_out = nullptr) {
    SynthesisOutput s = synthesize(clean, depth, spec);
    StageConfig cfg = stage;
    cfg.record_objective = true;
    PsarResult result = run_psar(s.hazy, cfg);
    const ScatteringState est = public_output(result.state);
    RoundtripRow row;
    row.psnr_hazy = psnr(s.hazy, s.clean);
    row.psnr_dehazed = psnr(est.radiance, s.clean);
    row.t_mae = mean_absolute_error(est.transmission, s.transmission);
    row.trace = std::move(result.trace);
    if (synth_out != nullptr)
        *synth_out = std::move(s);
    if (state_out != nullptr)
        *state_out = est;
    return row;
}

inline const std::vector<std::string>& roundtrip_columns() {
    static const std::vector<std::string> columns{"index",     "name",         "seed",      "psnr_hazy",
                                                  "psnr_dehazed", "psnr_gain", "t_mae",     "data_term_trace"};
    return columns;
}

/// Writes roundtrip.tsv (header + one row per successful image) and
/// roundtrip_summary.txt (medians over rows).
inline int cmd_roundtrip(const RunConfig& config, std::ostream& err = std::cerr) {
    validate(config.synth);
    validate(config.stage);
    const auto items = detail::resolve_inputs(config, true);
    detail::prepare_out_dir(config);
    const auto outcomes = detail::run_items(items, config, err, [&](const InputItem& item, detail::ItemWriter& out) {
        const RgbImage clean = detail::load_clean(item, config);
        const ScalarField depth = detail::load_depth(item, config, clean.width(), clean.height());
        SynthesisSpec spec = config.synth;
        spec.seed = item.haze_seed;
        SynthesisOutput synth;
        ScatteringState est;
        const RoundtripRow row = roundtrip_one(clean, depth, spec, config.stage, &synth, &est);
        if (config.emit_intermediates) {
            out.png(item.name + "_hazy.png", synth.hazy, config.png_bit_depth);
            out.png(item.name + "_dehazed.png", est.radiance, config.png_bit_depth);
            out.pfm(item.name + "_T_est.pfm", est.transmission);
            out.pfm(item.name + "_T_gt.pfm", synth.transmission);
        }
        io::Record r;
        r.add("name", item.name)
            .add("seed", spec.seed)
            .add("psnr_hazy", row.psnr_hazy)
            .add("psnr_dehazed", row.psnr_dehazed)
            .add("psnr_gain", row.psnr_dehazed - row.psnr_hazy)
            .add("t_mae", row.t_mae)
            .add("data_term_trace", detail::trace_compact(row.trace));
        return r;
    });

    std::string header;
    for (const std::string& c : roundtrip_columns())
        header += (header.empty() ? "" : "\t") + c;
    std::vector<std::string> lines{header};
    std::vector<double> hazy, dehazed, gain, mae;
    for (std::size_t i = 0; i < outcomes.size(); ++i) {
        if (!outcomes[i].ok)
            continue;
        const io::Record& r = *outcomes[i].record;
        std::string line = std::to_string(i);
        for (const auto& [k, v] : r.fields())
            line += "\t" + v;
        lines.push_back(line);
        hazy.push_back(std::stod(*r.find("psnr_hazy")));
        dehazed.push_back(std::stod(*r.find("psnr_dehazed")));
        gain.push_back(std::stod(*r.find("psnr_gain")));
        mae.push_back(std::stod(*r.find("t_mae")));
    }
    detail::write_lines(config.out_dir / "roundtrip.tsv", lines);

    io::Record summary;
    summary.add("seed", config.seed)
        .add("images", hazy.size())
        .add("median_psnr_hazy", detail::median(hazy))
        .add("median_psnr_dehazed", detail::median(dehazed))
        .add("median_psnr_gain", detail::median(gain))
        .add("mean_t_mae", mae.empty() ? 0.0 : pairwise_sum(mae) / static_cast<double>(mae.size()));
    {
        std::ofstream f(config.out_dir / "roundtrip_summary.txt", std::ios::binary);
        if (!(f << summary.to_report()))
            throw IoError("cannot write roundtrip summary");
    }
    return detail::exit_status(outcomes);
}

inline int run(const RunConfig& config, std::ostream& err = std::cerr) {
    switch (config.command) {
    case Command::synthesize: return cmd_synthesize(config, err);
    case Command::dehaze: return cmd_dehaze(config, err);
    case Command::audit: return cmd_audit(config, err);
    case Command::roundtrip: return cmd_roundtrip(config, err);
    }
    return 2;
}

} // namespace hazeprox::cli
