#include "wpd/analysis.hpp"
#include "wpd/errors.hpp"
#include "wpd/util.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <string>
#include <vector>

namespace {

struct CliState {
    wpd::RunConfig cfg;
    std::string boundary = "periodic";
    std::string threshold = "hard";
    std::string noise = "per-level";
    std::string impute = "fail";
    std::string header = "auto";
    std::string convention = "paper";
    std::string aggregation = "median";
    std::string scales = "1,2,4,8,16";
};

void add_io_options(CLI::App* cmd, CliState& st, bool needs_input) {
    if (needs_input)
        cmd->add_option("-i,--input", st.cfg.input_path, "input CSV (year,month,rainfall_mm)")
            ->required()
            ->envname("WPD_INPUT");
    cmd->add_option("-o,--out", st.cfg.out_dir, "output directory")
        ->required()
        ->envname("WPD_OUT");
    cmd->add_option("--missing-token", st.cfg.missing_token,
                    "rainfall field treated as missing")
        ->envname("WPD_MISSING_TOKEN");
    cmd->add_option("--header", st.header, "header handling: auto|yes|no")
        ->envname("WPD_HEADER");
    cmd->add_option("--impute", st.impute,
                    "missing data policy: fail|linear|climatology-mean")
        ->envname("WPD_IMPUTE");
}

void add_transform_options(CLI::App* cmd, CliState& st) {
    cmd->add_option("-w,--wavelet", st.cfg.wavelet, "wavelet: haar|db2|db3|db4")
        ->envname("WPD_WAVELET");
    cmd->add_option("-l,--levels", st.cfg.depth, "decomposition depth")
        ->envname("WPD_LEVELS");
    cmd->add_option("-b,--boundary", st.boundary,
                    "boundary mode: periodic|symmetric-reflect")
        ->envname("WPD_BOUNDARY");
}

wpd::HeaderMode parse_header_mode(const std::string& name) {
    std::string n = wpd::to_lower(name);
    if (n == "auto") return wpd::HeaderMode::Auto;
    if (n == "yes") return wpd::HeaderMode::Require;
    if (n == "no") return wpd::HeaderMode::Forbid;
    throw wpd::ParseError("unknown header mode: " + name);
}

wpd::ImputePolicy parse_impute(const std::string& name) {
    std::string n = wpd::to_lower(name);
    if (n == "fail") return wpd::ImputePolicy::Fail;
    if (n == "linear") return wpd::ImputePolicy::Linear;
    if (n == "climatology-mean") return wpd::ImputePolicy::ClimatologyMean;
    throw wpd::ParseError("unknown imputation policy: " + name);
}

std::vector<double> parse_scales(const std::string& text) {
    std::vector<double> scales;
    for (auto field : wpd::split(text, ',')) {
        auto t = wpd::trim(field);
        if (t.empty()) continue;
        try {
            scales.push_back(std::stod(std::string(t)));
        } catch (const std::exception&) {
            throw wpd::ParseError("bad scale value '" + std::string(t) + "'");
        }
    }
    if (scales.empty()) throw wpd::ParseError("scale list is empty");
    std::sort(scales.begin(), scales.end());
    scales.erase(std::unique(scales.begin(), scales.end()), scales.end());
    return scales;
}

void finalize_config(CliState& st) {
    st.cfg.boundary = wpd::parse_boundary(st.boundary);
    st.cfg.method = wpd::parse_threshold(st.threshold);
    st.cfg.noise = wpd::parse_noise_model(st.noise);
    st.cfg.impute = parse_impute(st.impute);
    st.cfg.header = parse_header_mode(st.header);
    st.cfg.convention = wpd::parse_convention(st.convention);
    st.cfg.aggregation = wpd::parse_aggregation(st.aggregation);
    st.cfg.scalogram_scales = parse_scales(st.scales);
}

wpd::ToneSpec parse_tone(const std::string& text) {
    auto parts = wpd::split(text, ':');
    if (parts.size() != 3)
        throw wpd::ParseError("tone must be period:amplitude:phase, got '" + text + "'");
    wpd::ToneSpec tone;
    try {
        tone.period_months = std::stod(std::string(parts[0]));
        tone.amplitude = std::stod(std::string(parts[1]));
        tone.phase = std::stod(std::string(parts[2]));
    } catch (const std::exception&) {
        throw wpd::ParseError("bad tone '" + text + "'");
    }
    return tone;
}

wpd::DipSpec parse_dip(const std::string& text) {
    auto parts = wpd::split(text, ':');
    if (parts.size() != 4)
        throw wpd::ParseError("dip must be start:spacing:width:depth, got '" + text + "'");
    wpd::DipSpec dip;
    try {
        dip.first_start = std::stol(std::string(parts[0]));
        dip.spacing = std::stol(std::string(parts[1]));
        dip.width = std::stol(std::string(parts[2]));
        dip.depth = std::stod(std::string(parts[3]));
    } catch (const std::exception&) {
        throw wpd::ParseError("bad dip '" + text + "'");
    }
    return dip;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"rainfall period detection via wavelet decomposition"};
    app.set_version_flag("--version", std::string(wpd::kToolName) + " " + wpd::kToolVersion);
    app.require_subcommand(1);

    CliState st;
    std::vector<std::string> tone_args;
    std::vector<std::string> dip_args;
    std::string synth_start = "1991-01";
    double synth_baseline = 300.0;
    long synth_length = 312;
    double synth_noise = 0.0;

    CLI::App* analyze = app.add_subcommand("analyze", "full pipeline: tables, episodes, figures");
    add_io_options(analyze, st, true);
    add_transform_options(analyze, st);
    analyze->add_option("-t,--threshold", st.threshold, "threshold method: hard|soft")
        ->envname("WPD_THRESHOLD");
    analyze->add_option("-n,--noise", st.noise, "noise model: per-level|single")
        ->envname("WPD_NOISE");
    analyze->add_option("--min-survivors", st.cfg.min_survivors,
                        "surviving coefficients needed for significance")
        ->envname("WPD_MIN_SURVIVORS");
    analyze->add_flag("--threshold-approx", [&st](std::int64_t) { st.cfg.keep_approx = false; },
                      "threshold the approximation block too");
    analyze->add_flag("--per-level-n", st.cfg.per_level_n,
                      "use per-level coefficient counts in the threshold formula")
        ->envname("WPD_PER_LEVEL_N");
    analyze->add_option("--convention", st.convention, "band mapping: paper|dyadic")
        ->envname("WPD_CONVENTION");
    analyze->add_option("--episode-k", st.cfg.episode_k,
                        "episode depth factor (mean - k*std)")
        ->envname("WPD_EPISODE_K");
    analyze->add_option("--aggregation", st.aggregation, "climatology: median|mean")
        ->envname("WPD_AGGREGATION");
    analyze->add_option("--scales", st.scales, "scalogram scales, comma separated")
        ->envname("WPD_SCALES");

    CLI::App* decompose = app.add_subcommand("decompose", "write decomposition JSON + component CSVs");
    add_io_options(decompose, st, true);
    add_transform_options(decompose, st);

    CLI::App* synth = app.add_subcommand("synth", "generate a synthetic rainfall series");
    synth->add_option("-o,--out", st.cfg.out_dir, "output directory")
        ->required()
        ->envname("WPD_OUT");
    synth->add_option("--length", synth_length, "series length in months");
    synth->add_option("--start", synth_start, "first month, YYYY-MM");
    synth->add_option("--baseline", synth_baseline, "baseline rainfall (mm)");
    synth->add_option("--tone", tone_args, "cosine component period:amplitude:phase");
    synth->add_option("--dip", dip_args, "notch plan start:spacing:width:depth");
    synth->add_option("--noise-sigma", synth_noise, "Gaussian noise sigma (mm)");
    synth->add_option("--seed", st.cfg.seed, "RNG seed")->required();

    CLI::App* scalogram = app.add_subcommand("scalogram", "write scalogram CSV + heatmap SVG");
    add_io_options(scalogram, st, true);
    scalogram->add_option("--scales", st.scales, "scales, comma separated")
        ->envname("WPD_SCALES");

    CLI11_PARSE(app, argc, argv);

    try {
        finalize_config(st);
        if (analyze->parsed()) {
            wpd::cmd_analyze(st.cfg);
        } else if (decompose->parsed()) {
            wpd::cmd_decompose(st.cfg);
        } else if (synth->parsed()) {
            wpd::SyntheticSpec spec;
            spec.length = synth_length;
            spec.start = wpd::MonthStamp::parse(synth_start);
            spec.baseline = synth_baseline;
            for (const auto& t : tone_args) spec.tones.push_back(parse_tone(t));
            for (const auto& d : dip_args) spec.dips.push_back(parse_dip(d));
            spec.noise_sigma = synth_noise;
            spec.seed = st.cfg.seed;
            wpd::cmd_synth(st.cfg, spec);
        } else if (scalogram->parsed()) {
            wpd::cmd_scalogram(st.cfg);
        }
    } catch (const wpd::ParseError& e) {
        std::fprintf(stderr, "error (parse): %s\n", e.what());
        return 2;
    } catch (const wpd::RangeError& e) {
        std::fprintf(stderr, "error (range): %s\n", e.what());
        return 3;
    } catch (const wpd::IoError& e) {
        std::fprintf(stderr, "error (io): %s\n", e.what());
        return 4;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
