#include "wpd/period_analysis.hpp"

#include "wpd/util.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace wpd;

namespace {

RainfallSeries constant_series(Eigen::Index n, double value) {
    return RainfallSeries(MonthStamp(1991, 1), Eigen::ArrayXd::Constant(n, value));
}

std::string golden(const std::string& name) {
    return read_file(std::string(WPD_GOLDEN_DIR) + "/" + name);
}

} // namespace

TEST_CASE("band mapping, default convention") {
    PeriodBand b1 = band_for_level(1);
    CHECK(b1.period_lo == 1);
    CHECK(b1.period_hi == 2);
    CHECK(b1.median_period == 2);
    CHECK(b1.freq_lo() == 0.5);
    CHECK(b1.freq_hi() == 1.0);
    CHECK(b1.freq_lo_string() == "0.5");
    CHECK(b1.freq_hi_string() == "1");
    CHECK(b1.median_freq_string() == "0.5");
    CHECK(b1.median_freq_rational() == "1/2");

    PeriodBand b2 = band_for_level(2);
    CHECK(b2.period_lo == 2);
    CHECK(b2.period_hi == 4);
    CHECK(b2.median_period == 3);
    CHECK(b2.freq_lo_string() == "0.25");
    CHECK(b2.freq_hi_string() == "0.5");
    CHECK(b2.median_freq_string() == "0.333");
    CHECK(b2.median_freq_rational() == "1/3");

    PeriodBand b3 = band_for_level(3);
    CHECK(b3.period_lo == 4);
    CHECK(b3.period_hi == 8);
    CHECK(b3.median_period == 6);
    CHECK(b3.freq_lo_string() == "0.125");
    CHECK(b3.freq_hi_string() == "0.25");
    CHECK(b3.median_freq_string() == "0.166");

    CHECK(band_for_level(4).median_period == 12);
    CHECK(band_for_level(4).median_freq_string() == "0.083");
    CHECK_THROWS_AS(band_for_level(0), RangeError);
}

TEST_CASE("band mapping, dyadic convention") {
    PeriodBand b1 = band_for_level(1, BandConvention::Dyadic);
    CHECK(b1.period_lo == 2);
    CHECK(b1.period_hi == 4);
    CHECK(b1.median_period == 3);
    PeriodBand b2 = band_for_level(2, BandConvention::Dyadic);
    CHECK(b2.period_lo == 4);
    CHECK(b2.period_hi == 8);
    CHECK(b2.median_period == 6);
    CHECK(parse_convention("dyadic") == BandConvention::Dyadic);
    CHECK_THROWS_AS(parse_convention("textbook"), ParseError);
}

TEST_CASE("band table byte-matches the golden CSV") {
    std::vector<PeriodBand> bands = {band_for_level(1), band_for_level(2),
                                     band_for_level(3)};
    CHECK(period_bands_csv(bands) == golden("table1_bands.csv"));
}

TEST_CASE("level summaries pick significant levels in order") {
    WaveletFilter f = make_filter("haar");
    RainfallSeries series = constant_series(32, 250.0);
    Decomposition dec = wavedec(series.values(), f, BoundaryMode::Periodic, 3);

    ShrinkageReport report;
    for (int j = 1; j <= 3; ++j) {
        LevelStats row;
        row.level = j;
        row.total = dec.details[static_cast<std::size_t>(j - 1)].size();
        row.surviving = j == 2 ? 0 : 4;
        report.levels.push_back(row);
    }
    significant_levels(report, 1);

    auto rows = summarize_levels(dec, report, series);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].band.level == 1);
    CHECK(rows[1].band.level == 3);
    CHECK(rows[0].surviving_coeffs == 4);
    // constant input: every detail component is zero, range collapses to the baseline
    CHECK(rows[0].component_min == doctest::Approx(250.0));
    CHECK(rows[0].component_max == doctest::Approx(250.0));

    ShrinkageReport bad;
    bad.levels.push_back(LevelStats{});
    CHECK_THROWS_AS(summarize_levels(dec, bad, series), Error);
}

TEST_CASE("no significant level yields an empty table") {
    WaveletFilter f = make_filter("haar");
    RainfallSeries series = constant_series(16, 100.0);
    Decomposition dec = wavedec(series.values(), f, BoundaryMode::Periodic, 2);
    ShrinkageReport report;
    for (int j = 1; j <= 2; ++j) {
        LevelStats row;
        row.level = j;
        report.levels.push_back(row);
    }
    significant_levels(report, 1);
    CHECK(summarize_levels(dec, report, series).empty());
    CHECK(level_summaries_csv({}) ==
          "level,period_lo_months,period_hi_months,freq_lo_cpm,freq_hi_cpm,"
          "median_period_months,median_freq_cpm,median_freq_exact,"
          "surviving_coeffs,component_min_mm,component_max_mm\n");
}

TEST_CASE("an isolated dip becomes a single episode") {
    RainfallSeries series = constant_series(64, 100.0);
    Eigen::ArrayXd component = Eigen::ArrayXd::Zero(64);
    component[12] = -1.0; // 1-based months 13 and 14
    component[13] = -1.0;
    PeriodBand band = band_for_level(1); // median period 2

    auto episodes = detect_episodes(component, band, series);
    REQUIRE(episodes.size() == 1);
    CHECK(episodes[0].start_index == 13);
    CHECK(episodes[0].end_index == 14);
    CHECK(episodes[0].start_stamp == MonthStamp(1992, 1));
    CHECK(episodes[0].end_stamp == MonthStamp(1992, 2));
    CHECK(episodes[0].level == 1);
}

TEST_CASE("constant component has no episodes") {
    RainfallSeries series = constant_series(48, 100.0);
    auto episodes = detect_episodes(Eigen::ArrayXd::Zero(48), band_for_level(2), series);
    CHECK(episodes.empty());
}

TEST_CASE("episode detection recovers planted dips") {
    // dips of width 3 every 16 months, detected in the 3-month window band
    const Eigen::Index n = 312;
    RainfallSeries series = constant_series(n, 400.0);
    Eigen::ArrayXd component = Eigen::ArrayXd::Zero(n);
    std::vector<Eigen::Index> planted;
    for (Eigen::Index start = 5; start + 2 <= n; start += 16) {
        planted.push_back(start);
        for (Eigen::Index t = start; t < start + 3; ++t) component[t - 1] = -50.0;
    }

    auto episodes = detect_episodes(component, band_for_level(2), series);
    Eigen::Index matched = 0;
    for (Eigen::Index want : planted)
        for (const auto& ep : episodes)
            if (std::abs(ep.start_index - want) <= 1) {
                ++matched;
                break;
            }
    CHECK(static_cast<double>(matched) >=
          0.9 * static_cast<double>(planted.size()));

    auto spacing = repeat_interval(episodes);
    REQUIRE(spacing.has_value());
    CHECK(*spacing == doctest::Approx(16.0));
}

TEST_CASE("episode window must fit the series") {
    RainfallSeries series = constant_series(24, 10.0);
    PeriodBand wide = band_for_level(6); // median period 48
    CHECK_THROWS_AS(detect_episodes(Eigen::ArrayXd::Zero(24), wide, series), RangeError);
    CHECK_THROWS_AS(detect_episodes(Eigen::ArrayXd::Zero(10), band_for_level(1), series),
                    Error);
}

TEST_CASE("a larger depth factor finds fewer episodes") {
    RainfallSeries series = constant_series(96, 100.0);
    Eigen::ArrayXd component = Eigen::ArrayXd::Zero(96);
    component[10] = component[11] = -3.0; // deep dip
    component[40] = component[41] = -1.0; // shallow dip
    PeriodBand band = band_for_level(1);
    auto loose = detect_episodes(component, band, series, 0.1);
    auto strict = detect_episodes(component, band, series, 3.0);
    CHECK(loose.size() == 2);
    REQUIRE(strict.size() == 1);
    CHECK(strict[0].start_index == 11);
}

TEST_CASE("repeat interval is the median start gap") {
    auto make = [](std::initializer_list<Eigen::Index> starts) {
        std::vector<Episode> eps;
        for (Eigen::Index s : starts) {
            Episode ep;
            ep.start_index = s;
            ep.end_index = s + 1;
            eps.push_back(ep);
        }
        return eps;
    };
    CHECK(*repeat_interval(make({5, 21, 37})) == doctest::Approx(16.0));
    CHECK(*repeat_interval(make({41, 56, 81, 105, 129})) == doctest::Approx(24.0));
    CHECK(*repeat_interval(make({56, 129, 41, 105, 81})) == doctest::Approx(24.0));
    CHECK_FALSE(repeat_interval(make({13})).has_value());
    CHECK_FALSE(repeat_interval({}).has_value());
}

TEST_CASE("climatology aggregates calendar months") {
    Eigen::ArrayXd values = Eigen::ArrayXd::Constant(24, 100.0);
    values[5] = 500.0;  // June 1991
    values[17] = 500.0; // June 1992
    values[11] = 480.0; // December 1991
    values[23] = 480.0; // December 1992
    RainfallSeries series(MonthStamp(1991, 1), values);

    ClimatologyProfile profile = climatology(series);
    CHECK(profile.monthly[5] == 500.0);
    CHECK(profile.monthly[11] == 480.0);
    CHECK(profile.monthly[0] == 100.0);
    CHECK(profile.peak_months == std::vector<int>{6, 12});
    CHECK(profile.aggregation == Aggregation::Median);
}

TEST_CASE("median and mean aggregation differ on skewed months") {
    Eigen::ArrayXd values = Eigen::ArrayXd::Constant(36, 100.0);
    values[0] = 100.0;
    values[12] = 100.0;
    values[24] = 700.0; // one extreme January
    RainfallSeries series(MonthStamp(1991, 1), values);
    CHECK(climatology(series, Aggregation::Median).monthly[0] == 100.0);
    CHECK(climatology(series, Aggregation::Mean).monthly[0] == doctest::Approx(300.0));
}

TEST_CASE("climatology preconditions") {
    CHECK_THROWS_AS(climatology(constant_series(11, 5.0)), RangeError);
    Eigen::ArrayXd gap = Eigen::ArrayXd::Constant(12, 5.0);
    gap[3] = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(climatology(RainfallSeries(MonthStamp(1991, 1), gap)), Error);
    CHECK(climatology(constant_series(12, 5.0)).peak_months.empty());
}

TEST_CASE("period calendar rows") {
    PeriodCalendar cal = period_calendar({2, 3, 6});
    REQUIRE(cal.rows.size() == 3);
    CHECK(cal.rows[0].months == std::vector<int>{2, 4, 6, 8, 10, 12});
    CHECK(cal.rows[1].months == std::vector<int>{3, 6, 9, 12});
    CHECK(cal.rows[2].months == std::vector<int>{6, 12});
    for (const auto& row : cal.rows) CHECK(row.phase_locked);

    PeriodCalendar odd = period_calendar({5});
    CHECK(odd.rows[0].months == std::vector<int>{5, 10});
    CHECK_FALSE(odd.rows[0].phase_locked);

    CHECK(period_calendar({24}).rows[0].months.empty());
    CHECK_THROWS_AS(period_calendar({0}), RangeError);
}

TEST_CASE("calendar CSV byte-matches the golden table") {
    CHECK(period_calendar_csv(period_calendar({2, 3, 6})) == golden("table2.csv"));
}

TEST_CASE("peak months intersect the calendar rows") {
    CHECK(peak_months(period_calendar({2, 3, 6})) == std::vector<int>{6, 12});
    CHECK(peak_months(period_calendar({6})) == std::vector<int>{6, 12});
    CHECK(peak_months(period_calendar({2, 3})) == std::vector<int>{6, 12});
    CHECK_THROWS_AS(peak_months(PeriodCalendar{}), RangeError);
}

TEST_CASE("pattern classification") {
    auto with_peaks = [](std::vector<int> peaks) {
        ClimatologyProfile p;
        p.peak_months = std::move(peaks);
        return p;
    };
    CHECK(classify_pattern(with_peaks({6, 12})) == RainPattern::EquatorialBimodal);
    CHECK(classify_pattern(with_peaks({3, 9})) == RainPattern::EquatorialBimodal);
    CHECK(classify_pattern(with_peaks({1, 6})) == RainPattern::EquatorialBimodal);
    CHECK(classify_pattern(with_peaks({1})) == RainPattern::MonsoonalUnimodal);
    CHECK(classify_pattern(with_peaks({3, 5, 9})) == RainPattern::Indeterminate);
    CHECK(classify_pattern(with_peaks({1, 2})) == RainPattern::Indeterminate);
    CHECK(classify_pattern(with_peaks({})) == RainPattern::Indeterminate);
    CHECK(pattern_name(RainPattern::EquatorialBimodal) == "equatorial-bimodal");
}

TEST_CASE("synthetic generator is deterministic and validates input") {
    SyntheticSpec spec;
    spec.length = 48;
    spec.baseline = 300.0;
    spec.tones = {{12.0, 100.0, 0.5}};
    spec.noise_sigma = 10.0;
    spec.seed = 42;

    auto a = generate_synthetic(spec);
    auto b = generate_synthetic(spec);
    CHECK((a.series.values() == b.series.values()).all());

    spec.seed = 43;
    auto c = generate_synthetic(spec);
    CHECK((a.series.values() != c.series.values()).any());

    SUBCASE("zero amplitude is a constant baseline") {
        SyntheticSpec flat;
        flat.length = 24;
        flat.baseline = 300.0;
        auto r = generate_synthetic(flat);
        CHECK((r.series.values() == 300.0).all());
    }

    SUBCASE("all-zero output is rejected") {
        SyntheticSpec zero;
        zero.length = 24;
        CHECK_THROWS_AS(generate_synthetic(zero), Error);
    }

    SUBCASE("parameter validation") {
        SyntheticSpec bad;
        bad.length = 12;
        CHECK_THROWS_AS(generate_synthetic(bad), RangeError);
        bad.length = 48;
        bad.tones = {{6.0, -1.0, 0.0}};
        CHECK_THROWS_AS(generate_synthetic(bad), RangeError);
        bad.tones = {{0.0, 1.0, 0.0}};
        CHECK_THROWS_AS(generate_synthetic(bad), RangeError);
        bad.tones.clear();
        bad.baseline = 10.0;
        bad.noise_sigma = -1.0;
        CHECK_THROWS_AS(generate_synthetic(bad), RangeError);
    }
}

TEST_CASE("dips are recorded in the ground truth and clipped at zero") {
    SyntheticSpec spec;
    spec.length = 60;
    spec.baseline = 100.0;
    spec.dips = {{5, 16, 3, 250.0}};
    auto r = generate_synthetic(spec);
    CHECK(r.truth.dip_starts == std::vector<Eigen::Index>{5, 21, 37, 53});
    // depth exceeds the baseline: clipped, never negative
    CHECK(r.series.values().minCoeff() == 0.0);
    CHECK(r.series.values()[3] == 100.0);
    CHECK(r.series.values()[4] == 0.0);
    CHECK(r.series.values()[7] == 100.0);
}

TEST_CASE("negative dip depth plants spikes") {
    SyntheticSpec spec;
    spec.length = 36;
    spec.baseline = 100.0;
    spec.dips = {{6, 6, 1, -500.0}};
    auto r = generate_synthetic(spec);
    CHECK(r.series.values()[5] == 600.0);
    CHECK(r.series.values()[11] == 600.0);
    CHECK(r.series.values()[4] == 100.0);
}

TEST_CASE("planted tones concentrate detail energy at the sample-band level") {
    // A period-p cosine falls in the detail level whose sample band
    // [2^j, 2^(j+1)) contains p, i.e. level floor(log2 p).
    WaveletFilter f = make_filter("haar");
    auto energy_argmax = [&](double period) {
        SyntheticSpec spec;
        spec.length = 312;
        spec.baseline = 300.0;
        spec.tones = {{period, 100.0, 0.0}};
        auto r = generate_synthetic(spec);
        Decomposition dec = wavedec(r.series.values(), f, BoundaryMode::Periodic, 4);
        int best = 0;
        double most = -1.0;
        for (int j = 1; j <= 4; ++j) {
            double e = dec.details[static_cast<std::size_t>(j - 1)].square().sum();
            if (e > most) {
                most = e;
                best = j;
            }
        }
        return best;
    };
    CHECK(energy_argmax(2.0) == 1);
    CHECK(energy_argmax(3.0) == 1);
    CHECK(energy_argmax(6.0) == 2);
    CHECK(energy_argmax(12.0) == 3);
}

TEST_CASE("ground truth serializes to JSON") {
    GroundTruth truth;
    truth.tones = {{6.0, 100.0, 0.25}};
    truth.dips = {{5, 16, 3, 250.0}};
    truth.dip_starts = {5, 21};
    std::string text = ground_truth_to_json(truth);
    CHECK(text.find("\"period_months\": 6.0") != std::string::npos);
    CHECK(text.find("\"dip_starts\"") != std::string::npos);
}
