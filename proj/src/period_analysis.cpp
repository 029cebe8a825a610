#include "wpd/period_analysis.hpp"

#include "wpd/util.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

namespace wpd {

namespace {

using json = nlohmann::ordered_json;

// Exact decimal expansion of 1/2^k: "0." followed by the digits of 5^k.
std::string dyadic_reciprocal(std::int64_t p) {
    if (p < 1) throw RangeError("period must be positive");
    if (p == 1) return "1";
    int k = 0;
    std::int64_t q = p;
    while (q > 1 && q % 2 == 0) {
        q /= 2;
        ++k;
    }
    if (q != 1) throw RangeError("period endpoint must be a power of two");
    std::uint64_t digits = 1;
    for (int i = 0; i < k; ++i) digits *= 5;
    std::string body = std::to_string(digits);
    std::string out = "0.";
    out.append(static_cast<std::size_t>(k) - body.size(), '0');
    out += body;
    while (out.back() == '0') out.pop_back();
    return out;
}

// 1/p truncated (not rounded) to three decimals, trailing zeros stripped.
std::string truncated_reciprocal(std::int64_t p) {
    if (p < 1) throw RangeError("period must be positive");
    if (p == 1) return "1";
    std::int64_t milli = 1000 / p;
    char buf[8];
    std::snprintf(buf, sizeof(buf), "%03lld", static_cast<long long>(milli));
    std::string out = "0.";
    out += buf;
    while (out.back() == '0') out.pop_back();
    if (out.back() == '.') out.pop_back();
    return out;
}

double circular_distance(int a, int b) {
    int d = std::abs(a - b);
    return std::min(d, 12 - d);
}

} // namespace

std::string convention_name(BandConvention c) {
    return c == BandConvention::Paper ? "paper" : "dyadic";
}

BandConvention parse_convention(const std::string& name) {
    std::string n = to_lower(name);
    if (n == "paper") return BandConvention::Paper;
    if (n == "dyadic") return BandConvention::Dyadic;
    throw ParseError("unknown band convention: " + name);
}

std::string PeriodBand::freq_lo_string() const { return dyadic_reciprocal(period_hi); }
std::string PeriodBand::freq_hi_string() const { return dyadic_reciprocal(period_lo); }
std::string PeriodBand::median_freq_string() const {
    return truncated_reciprocal(median_period);
}
std::string PeriodBand::median_freq_rational() const {
    return "1/" + std::to_string(median_period);
}

PeriodBand band_for_level(int level, BandConvention conv) {
    if (level < 1) throw RangeError("level must be at least 1");
    if (level > 40) throw RangeError("level too deep for 64-bit periods");
    PeriodBand band;
    band.level = level;
    const int shift = conv == BandConvention::Paper ? level - 1 : level;
    band.period_lo = std::int64_t{1} << shift;
    band.period_hi = std::int64_t{1} << (shift + 1);
    band.median_period = (band.period_lo + band.period_hi + 1) / 2; // half-up
    return band;
}

std::vector<LevelSummary> summarize_levels(const Decomposition& dec,
                                           const ShrinkageReport& report,
                                           const RainfallSeries& series,
                                           BandConvention conv) {
    if (report.levels.size() != static_cast<std::size_t>(dec.depth))
        throw Error("report and decomposition disagree on depth");
    if (series.size() != dec.original_length)
        throw Error("series length disagrees with decomposition");

    const double baseline = series.present_mean();
    std::vector<LevelSummary> rows;
    for (const auto& stats : report.levels) {
        if (!stats.significant) continue;
        LevelSummary row;
        row.band = band_for_level(stats.level, conv);
        row.surviving_coeffs = stats.surviving;
        Eigen::ArrayXd comp = detail_component(dec, stats.level) + baseline;
        row.component_min = comp.minCoeff();
        row.component_max = comp.maxCoeff();
        rows.push_back(std::move(row));
    }
    std::sort(rows.begin(), rows.end(),
              [](const LevelSummary& a, const LevelSummary& b) {
                  return a.band.level < b.band.level;
              });
    return rows;
}

std::string period_bands_csv(const std::vector<PeriodBand>& bands) {
    std::string out =
        "level,period_lo_months,period_hi_months,freq_lo_cpm,freq_hi_cpm,"
        "median_period_months,median_freq_cpm\n";
    for (const auto& b : bands) {
        out += std::to_string(b.level);
        out += ',';
        out += std::to_string(b.period_lo);
        out += ',';
        out += std::to_string(b.period_hi);
        out += ',';
        out += b.freq_lo_string();
        out += ',';
        out += b.freq_hi_string();
        out += ',';
        out += std::to_string(b.median_period);
        out += ',';
        out += b.median_freq_string();
        out += '\n';
    }
    return out;
}

std::string level_summaries_csv(const std::vector<LevelSummary>& rows) {
    std::string out =
        "level,period_lo_months,period_hi_months,freq_lo_cpm,freq_hi_cpm,"
        "median_period_months,median_freq_cpm,median_freq_exact,"
        "surviving_coeffs,component_min_mm,component_max_mm\n";
    for (const auto& r : rows) {
        const PeriodBand& b = r.band;
        out += std::to_string(b.level);
        out += ',';
        out += std::to_string(b.period_lo);
        out += ',';
        out += std::to_string(b.period_hi);
        out += ',';
        out += b.freq_lo_string();
        out += ',';
        out += b.freq_hi_string();
        out += ',';
        out += std::to_string(b.median_period);
        out += ',';
        out += b.median_freq_string();
        out += ',';
        out += b.median_freq_rational();
        out += ',';
        out += std::to_string(r.surviving_coeffs);
        out += ',';
        out += format_double(r.component_min);
        out += ',';
        out += format_double(r.component_max);
        out += '\n';
    }
    return out;
}

std::vector<Episode> detect_episodes(const Eigen::ArrayXd& component,
                                     const PeriodBand& band,
                                     const RainfallSeries& series,
                                     double k) {
    const Eigen::Index n = component.size();
    if (n != series.size())
        throw Error("component length disagrees with series");
    const Eigen::Index w = band.median_period;
    if (w < 1 || w > n) throw RangeError("window wider than series");

    const double mean = component.mean();
    const double var = (component - mean).square().sum() / static_cast<double>(n);
    const double floor_level = mean - k * std::sqrt(var);

    // window means via a prefix sum; window i (0-based) covers [i, i+w)
    const Eigen::Index wins = n - w + 1;
    Eigen::ArrayXd prefix(n + 1);
    prefix[0] = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) prefix[i + 1] = prefix[i] + component[i];
    Eigen::ArrayXd wmean(wins);
    for (Eigen::Index i = 0; i < wins; ++i)
        wmean[i] = (prefix[i + w] - prefix[i]) / static_cast<double>(w);

    std::vector<Eigen::Index> hits;
    for (Eigen::Index i = 0; i < wins; ++i) {
        if (!(wmean[i] < floor_level)) continue;
        bool strict_min = true;
        const Eigen::Index lo = std::max<Eigen::Index>(0, i - w + 1);
        const Eigen::Index hi = std::min(wins - 1, i + w - 1);
        for (Eigen::Index j = lo; j <= hi && strict_min; ++j)
            if (j != i && !(wmean[i] < wmean[j])) strict_min = false;
        if (strict_min) hits.push_back(i);
    }

    std::vector<Episode> episodes;
    for (Eigen::Index i : hits) {
        Eigen::Index start = i + 1; // to 1-based
        Eigen::Index end = i + w;
        if (!episodes.empty() && start <= episodes.back().end_index) {
            episodes.back().end_index = std::max(episodes.back().end_index, end);
        } else {
            Episode ep;
            ep.level = band.level;
            ep.start_index = start;
            ep.end_index = end;
            episodes.push_back(ep);
        }
    }
    for (auto& ep : episodes) {
        ep.start_stamp = series.stamp_at(ep.start_index);
        ep.end_stamp = series.stamp_at(ep.end_index);
    }
    return episodes;
}

std::optional<double> repeat_interval(std::vector<Episode> episodes) {
    if (episodes.size() < 2) return std::nullopt;
    std::sort(episodes.begin(), episodes.end(),
              [](const Episode& a, const Episode& b) {
                  return a.start_index < b.start_index;
              });
    Eigen::ArrayXd gaps(static_cast<Eigen::Index>(episodes.size()) - 1);
    for (std::size_t i = 1; i < episodes.size(); ++i)
        gaps[static_cast<Eigen::Index>(i - 1)] =
            static_cast<double>(episodes[i].start_index - episodes[i - 1].start_index);
    return median(gaps);
}

std::string aggregation_name(Aggregation a) {
    return a == Aggregation::Median ? "median" : "mean";
}

Aggregation parse_aggregation(const std::string& name) {
    std::string n = to_lower(name);
    if (n == "median") return Aggregation::Median;
    if (n == "mean") return Aggregation::Mean;
    throw ParseError("unknown aggregation: " + name);
}

ClimatologyProfile climatology(const RainfallSeries& series, Aggregation agg) {
    if (series.has_missing())
        throw Error("climatology requires a gap-free series");
    if (series.size() < 12)
        throw RangeError("climatology needs at least 12 months");

    std::vector<std::vector<double>> buckets(12);
    for (Eigen::Index i = 1; i <= series.size(); ++i)
        buckets[static_cast<std::size_t>(series.calendar_month(i) - 1)].push_back(
            series.values()[i - 1]);

    ClimatologyProfile profile;
    profile.aggregation = agg;
    for (int m = 0; m < 12; ++m) {
        const auto& b = buckets[static_cast<std::size_t>(m)];
        Eigen::Map<const Eigen::ArrayXd> v(b.data(), static_cast<Eigen::Index>(b.size()));
        profile.monthly[m] = agg == Aggregation::Median ? median(v) : v.mean();
    }
    for (int m = 0; m < 12; ++m) {
        double here = profile.monthly[m];
        double prev = profile.monthly[(m + 11) % 12];
        double next = profile.monthly[(m + 1) % 12];
        if (here > prev && here > next) profile.peak_months.push_back(m + 1);
    }
    return profile;
}

PeriodCalendar period_calendar(const std::vector<std::int64_t>& periods) {
    PeriodCalendar cal;
    for (std::int64_t p : periods) {
        if (p < 1) throw RangeError("calendar period must be at least 1");
        PeriodCalendar::Row row;
        row.period = p;
        for (std::int64_t m = 1; m <= 12; ++m)
            if (m % p == 0) row.months.push_back(static_cast<int>(m));
        row.phase_locked = (12 % p == 0);
        cal.rows.push_back(std::move(row));
    }
    return cal;
}

std::vector<int> peak_months(const PeriodCalendar& cal) {
    if (cal.rows.empty()) throw RangeError("calendar must have at least one row");
    std::vector<int> acc = cal.rows.front().months;
    for (std::size_t i = 1; i < cal.rows.size(); ++i) {
        std::vector<int> next;
        std::set_intersection(acc.begin(), acc.end(), cal.rows[i].months.begin(),
                              cal.rows[i].months.end(), std::back_inserter(next));
        acc = std::move(next);
    }
    return acc;
}

std::string period_calendar_csv(const PeriodCalendar& cal) {
    std::string out = "period_months,months\n";
    for (const auto& row : cal.rows) {
        out += std::to_string(row.period);
        out += ",\"";
        for (std::size_t i = 0; i < row.months.size(); ++i) {
            if (i > 0) out += ", ";
            out += month_name(row.months[i]);
        }
        out += "\"\n";
    }
    return out;
}

std::string pattern_name(RainPattern p) {
    switch (p) {
    case RainPattern::EquatorialBimodal: return "equatorial-bimodal";
    case RainPattern::MonsoonalUnimodal: return "monsoonal-unimodal";
    default: return "indeterminate";
    }
}

RainPattern classify_pattern(const ClimatologyProfile& profile) {
    const auto& peaks = profile.peak_months;
    if (peaks.size() == 1) return RainPattern::MonsoonalUnimodal;
    if (peaks.size() == 2) {
        double d = circular_distance(peaks[0], peaks[1]);
        if (d >= 5.0 && d <= 6.0) return RainPattern::EquatorialBimodal;
    }
    return RainPattern::Indeterminate;
}

SyntheticResult generate_synthetic(const SyntheticSpec& spec) {
    if (spec.length < 24) throw RangeError("synthetic series needs at least 24 months");
    for (const auto& tone : spec.tones) {
        if (tone.amplitude < 0.0) throw RangeError("tone amplitude must be non-negative");
        if (!(tone.period_months > 0.0)) throw RangeError("tone period must be positive");
    }
    for (const auto& dip : spec.dips) {
        if (dip.first_start < 1 || dip.width < 1 || dip.spacing < 1)
            throw RangeError("dip window parameters must be positive");
    }
    if (spec.noise_sigma < 0.0) throw RangeError("noise sigma must be non-negative");

    Eigen::ArrayXd values = Eigen::ArrayXd::Constant(spec.length, spec.baseline);
    for (const auto& tone : spec.tones)
        for (Eigen::Index t = 0; t < spec.length; ++t)
            values[t] += tone.amplitude *
                         std::cos(2.0 * std::numbers::pi * static_cast<double>(t) /
                                      tone.period_months +
                                  tone.phase);

    GroundTruth truth;
    truth.tones = spec.tones;
    truth.dips = spec.dips;
    for (const auto& dip : spec.dips) {
        for (Eigen::Index s = dip.first_start; s + dip.width - 1 <= spec.length;
             s += dip.spacing) {
            truth.dip_starts.push_back(s);
            for (Eigen::Index t = s; t < s + dip.width; ++t)
                values[t - 1] -= dip.depth;
        }
    }
    std::sort(truth.dip_starts.begin(), truth.dip_starts.end());

    if (spec.noise_sigma > 0.0) {
        std::mt19937_64 rng(spec.seed);
        std::normal_distribution<double> gauss(0.0, spec.noise_sigma);
        for (Eigen::Index t = 0; t < spec.length; ++t) values[t] += gauss(rng);
    }

    values = values.max(0.0);
    if ((values == 0.0).all())
        throw Error("synthetic parameters produce an all-zero series");

    return SyntheticResult{RainfallSeries(spec.start, std::move(values)),
                           std::move(truth)};
}

std::string ground_truth_to_json(const GroundTruth& truth) {
    json j;
    json tones = json::array();
    for (const auto& t : truth.tones) {
        json row;
        row["period_months"] = t.period_months;
        row["amplitude_mm"] = t.amplitude;
        row["phase_rad"] = t.phase;
        tones.push_back(std::move(row));
    }
    j["tones"] = std::move(tones);
    json dips = json::array();
    for (const auto& d : truth.dips) {
        json row;
        row["first_start"] = d.first_start;
        row["spacing_months"] = d.spacing;
        row["width_months"] = d.width;
        row["depth_mm"] = d.depth;
        dips.push_back(std::move(row));
    }
    j["dips"] = std::move(dips);
    j["dip_starts"] = truth.dip_starts;
    return j.dump(2) + "\n";
}

} // namespace wpd
