#pragma once

#include "wpd/series.hpp"
#include "wpd/shrinkage.hpp"
#include "wpd/wavelet.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace wpd {

/// Level-to-period mapping. Paper anchors level 1 at 1-2 months (level j
/// spans [2^(j-1), 2^j]); Dyadic is the textbook sample convention (level j
/// spans [2^j, 2^(j+1)] months).
enum class BandConvention { Paper, Dyadic };

std::string convention_name(BandConvention c);
BandConvention parse_convention(const std::string& name);

/// Period and frequency range a detail level represents at one sample per
/// month. Frequencies are exact reciprocals of the period endpoints.
struct PeriodBand {
    int level = 0;
    std::int64_t period_lo = 0;   // months
    std::int64_t period_hi = 0;   // months
    std::int64_t median_period = 0;

    double freq_lo() const { return 1.0 / static_cast<double>(period_hi); }
    double freq_hi() const { return 1.0 / static_cast<double>(period_lo); }

    /// Exact decimal strings: period endpoints are powers of two, so the
    /// reciprocals terminate.
    std::string freq_lo_string() const;
    std::string freq_hi_string() const;
    /// 1/median_period truncated to three decimals (0.166, not 0.167).
    std::string median_freq_string() const;
    /// The same reciprocal as an exact rational, "1/6".
    std::string median_freq_rational() const;
};

/// Band for a detail level under the chosen convention; level >= 1.
PeriodBand band_for_level(int level, BandConvention conv = BandConvention::Paper);

/// One table row per significant level.
struct LevelSummary {
    PeriodBand band;
    Eigen::Index surviving_coeffs = 0;
    double component_min = 0.0; // mm, component plus series baseline
    double component_max = 0.0;
};

/// Rows for every significant level of the report, ordered by level.
/// Component ranges come from the decomposition's per-level reconstruction
/// lifted by the series mean. Throws on report/decomposition shape mismatch.
std::vector<LevelSummary> summarize_levels(const Decomposition& dec,
                                           const ShrinkageReport& report,
                                           const RainfallSeries& series,
                                           BandConvention conv = BandConvention::Paper);

/// Band table as CSV (the dataset-independent part of the summary).
std::string period_bands_csv(const std::vector<PeriodBand>& bands);

/// Full summary table as CSV.
std::string level_summaries_csv(const std::vector<LevelSummary>& rows);

/// Anomalously dry stretch of a level's reconstructed component.
struct Episode {
    int level = 0;
    Eigen::Index start_index = 0; // 1-based, inclusive
    Eigen::Index end_index = 0;
    MonthStamp start_stamp;
    MonthStamp end_stamp;
};

/// Slides a window of the band's median period across the component and
/// keeps windows whose mean is a strict local minimum among overlapping
/// windows and lies below mean - k*std of the component. Overlapping hits
/// merge into one episode.
std::vector<Episode> detect_episodes(const Eigen::ArrayXd& component,
                                     const PeriodBand& band,
                                     const RainfallSeries& series,
                                     double k = 0.5);

/// Median gap between consecutive episode starts; empty for fewer than two.
std::optional<double> repeat_interval(std::vector<Episode> episodes);

enum class Aggregation { Median, Mean };

std::string aggregation_name(Aggregation a);
Aggregation parse_aggregation(const std::string& name);

/// Per-calendar-month aggregate across all years.
struct ClimatologyProfile {
    Eigen::ArrayXd monthly = Eigen::ArrayXd::Zero(12); // January..December by index 0..11
    Aggregation aggregation = Aggregation::Median;
    std::vector<int> peak_months; // 1..12, strict circular local maxima
};

/// Requires at least 12 months and no missing samples.
ClimatologyProfile climatology(const RainfallSeries& series,
                               Aggregation agg = Aggregation::Median);

/// Months of the year each period lands on: {m in 1..12 : m mod p = 0}.
struct PeriodCalendar {
    struct Row {
        std::int64_t period = 0;
        std::vector<int> months;
        /// True when the period divides 12 and therefore repeats identically
        /// every year.
        bool phase_locked = true;
    };
    std::vector<Row> rows;
};

PeriodCalendar period_calendar(const std::vector<std::int64_t>& periods);

/// Intersection of all calendar rows; calendar must be nonempty.
std::vector<int> peak_months(const PeriodCalendar& cal);

/// Calendar as CSV with named months.
std::string period_calendar_csv(const PeriodCalendar& cal);

enum class RainPattern { EquatorialBimodal, MonsoonalUnimodal, Indeterminate };

std::string pattern_name(RainPattern p);

/// Two peaks about six months apart (circular distance 5..6) read as
/// equatorial-bimodal; exactly one peak as monsoonal-unimodal.
RainPattern classify_pattern(const ClimatologyProfile& profile);

/// Cosine component of the synthetic generator.
struct ToneSpec {
    double period_months = 12.0;
    double amplitude = 0.0; // mm
    double phase = 0.0;     // radians
};

/// Periodic rectangular notches cut into the synthetic series. Negative
/// depth turns the notch into a spike.
struct DipSpec {
    Eigen::Index first_start = 1; // 1-based month index
    Eigen::Index spacing = 16;    // months between starts
    Eigen::Index width = 2;       // months
    double depth = 0.0;           // mm subtracted over the window
};

struct SyntheticSpec {
    Eigen::Index length = 312;
    MonthStamp start{1991, 1};
    double baseline = 0.0; // mm
    std::vector<ToneSpec> tones;
    std::vector<DipSpec> dips;
    double noise_sigma = 0.0;
    std::uint64_t seed = 0;
};

struct GroundTruth {
    std::vector<ToneSpec> tones;
    std::vector<DipSpec> dips;
    std::vector<Eigen::Index> dip_starts; // 1-based, every realized window
};

struct SyntheticResult {
    RainfallSeries series;
    GroundTruth truth;
};

/// baseline + sum of cosines + notches + seeded Gaussian noise, clipped at
/// zero. Deterministic for a fixed spec. Rejects all-zero outputs.
SyntheticResult generate_synthetic(const SyntheticSpec& spec);

std::string ground_truth_to_json(const GroundTruth& truth);

} // namespace wpd
