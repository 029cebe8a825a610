#pragma once

#include "wpd/period_analysis.hpp"
#include "wpd/scalogram.hpp"
#include "wpd/series.hpp"
#include "wpd/shrinkage.hpp"
#include "wpd/wavelet.hpp"

#include <optional>
#include <string>
#include <vector>

namespace wpd {

inline constexpr const char* kToolName = "wpd";
inline constexpr const char* kToolVersion = "0.1.0";

/// Everything one pipeline run needs. Defaults mirror the reference setup:
/// four Haar levels, hard fixed-form thresholding, per-level noise,
/// periodic boundary.
struct RunConfig {
    std::string input_path;
    std::string out_dir;
    std::string wavelet = "haar";
    int depth = 4;
    BoundaryMode boundary = BoundaryMode::Periodic;
    ThresholdMethod method = ThresholdMethod::Hard;
    NoiseModel noise = NoiseModel::PerLevel;
    bool keep_approx = true;
    bool per_level_n = false;
    int min_survivors = 1;
    ImputePolicy impute = ImputePolicy::Fail;
    HeaderMode header = HeaderMode::Auto;
    std::string missing_token = "NA";
    BandConvention convention = BandConvention::Paper;
    double episode_k = 0.5;
    Aggregation aggregation = Aggregation::Median;
    std::vector<double> scalogram_scales = {1, 2, 4, 8, 16};
    std::uint64_t seed = 0; // synth only
};

/// Config as canonical JSON (the digest input).
std::string run_config_to_json(const RunConfig& cfg);

struct LevelEpisodes {
    int level = 0;
    Eigen::Index window = 0; // median period of the level's band
    std::vector<Episode> episodes;
    std::optional<double> repeat_interval_months;
};

/// Full pipeline product. Every artifact derives from the same input bytes,
/// recorded by digest.
struct AnalysisBundle {
    RainfallSeries series; // after imputation
    DenoiseResult denoised;
    std::vector<LevelSummary> summaries;
    std::vector<LevelEpisodes> episodes;
    ClimatologyProfile profile;
    PeriodCalendar calendar;
    std::vector<int> accumulation_months; // intersection of calendar rows
    RainPattern pattern = RainPattern::Indeterminate;
    ScalogramMatrix scalogram;
    std::string input_digest;  // fnv1a64 of input bytes
    std::string config_digest; // fnv1a64 of canonical config JSON
};

/// Runs the pipeline on already-loaded CSV text.
AnalysisBundle run_analysis(const RunConfig& cfg, const std::string& csv_text);

/// table1.csv, table2.csv, episodes.json, climatology.svg, scalogram.svg,
/// report.json under cfg.out_dir (created if absent).
void write_bundle(const AnalysisBundle& bundle, const RunConfig& cfg);

/// Full analysis pipeline: load, analyze, write the bundle.
void cmd_analyze(const RunConfig& cfg);

/// Decomposition JSON plus one component CSV per detail level and one for
/// the approximation.
void cmd_decompose(const RunConfig& cfg);

/// Synthetic series CSV plus its ground-truth JSON.
void cmd_synth(const RunConfig& cfg, const SyntheticSpec& spec);

/// Scalogram CSV and heatmap SVG.
void cmd_scalogram(const RunConfig& cfg);

} // namespace wpd
