#include "wpd/analysis.hpp"

#include "wpd/svg.hpp"
#include "wpd/util.hpp"

#include <json.hpp>

#include <filesystem>

namespace wpd {

namespace {

using json = nlohmann::ordered_json;

json config_json(const RunConfig& cfg) {
    json j;
    j["wavelet"] = cfg.wavelet;
    j["depth"] = cfg.depth;
    j["boundary"] = boundary_name(cfg.boundary);
    j["threshold"] = threshold_name(cfg.method);
    j["noise_model"] = noise_model_name(cfg.noise);
    j["keep_approx"] = cfg.keep_approx;
    j["per_level_n"] = cfg.per_level_n;
    j["min_survivors"] = cfg.min_survivors;
    j["impute"] = cfg.impute == ImputePolicy::Fail
                      ? "fail"
                      : (cfg.impute == ImputePolicy::Linear ? "linear" : "climatology-mean");
    j["convention"] = convention_name(cfg.convention);
    j["episode_k"] = cfg.episode_k;
    j["aggregation"] = aggregation_name(cfg.aggregation);
    j["scalogram_scales"] = cfg.scalogram_scales;
    return j;
}

json episode_json(const Episode& ep) {
    json j;
    j["start_index"] = ep.start_index;
    j["end_index"] = ep.end_index;
    j["start"] = ep.start_stamp.to_string();
    j["end"] = ep.end_stamp.to_string();
    return j;
}

json episodes_json(const AnalysisBundle& bundle) {
    json levels = json::array();
    for (const auto& le : bundle.episodes) {
        json j;
        j["level"] = le.level;
        j["window_months"] = le.window;
        json eps = json::array();
        for (const auto& ep : le.episodes) eps.push_back(episode_json(ep));
        j["episodes"] = std::move(eps);
        if (le.repeat_interval_months)
            j["repeat_interval_months"] = *le.repeat_interval_months;
        else
            j["repeat_interval_months"] = nullptr;
        levels.push_back(std::move(j));
    }
    json root;
    root["levels"] = std::move(levels);
    return root;
}

json band_json(const PeriodBand& b) {
    json j;
    j["level"] = b.level;
    j["period_lo_months"] = b.period_lo;
    j["period_hi_months"] = b.period_hi;
    j["freq_lo_cpm"] = b.freq_lo_string();
    j["freq_hi_cpm"] = b.freq_hi_string();
    j["median_period_months"] = b.median_period;
    j["median_freq_cpm"] = b.median_freq_string();
    j["median_freq_exact"] = b.median_freq_rational();
    return j;
}

json report_json(const AnalysisBundle& bundle, const RunConfig& cfg) {
    json j;
    j["tool"] = {{"name", kToolName}, {"version", kToolVersion}};
    j["provenance"] = {{"input_digest", bundle.input_digest},
                       {"config_digest", bundle.config_digest},
                       {"config", config_json(cfg)}};
    j["series"] = {{"start", bundle.series.start().to_string()},
                   {"length", bundle.series.size()},
                   {"mean_mm", bundle.series.present_mean()}};

    json levels = json::array();
    for (const auto& r : bundle.denoised.report.levels) {
        json row;
        row["level"] = r.level;
        row["sigma"] = r.sigma;
        row["lambda"] = r.lambda;
        row["total"] = r.total;
        row["surviving"] = r.surviving;
        row["significant"] = r.significant;
        levels.push_back(std::move(row));
    }
    j["shrinkage"] = {{"method", bundle.denoised.report.method},
                      {"noise_model", bundle.denoised.report.noise_model},
                      {"levels", std::move(levels)},
                      {"highest_significant_level",
                       bundle.denoised.report.highest_significant}};

    json summaries = json::array();
    for (const auto& s : bundle.summaries) {
        json row;
        row["band"] = band_json(s.band);
        row["surviving_coeffs"] = s.surviving_coeffs;
        row["component_min_mm"] = s.component_min;
        row["component_max_mm"] = s.component_max;
        summaries.push_back(std::move(row));
    }
    j["band_convention"] = convention_name(cfg.convention);
    j["summaries"] = std::move(summaries);
    j["episodes"] = episodes_json(bundle)["levels"];

    json monthly = json::array();
    for (int m = 0; m < 12; ++m) monthly.push_back(bundle.profile.monthly[m]);
    json peak_names = json::array();
    for (int m : bundle.profile.peak_months) peak_names.push_back(month_name(m));
    j["climatology"] = {{"aggregation", aggregation_name(bundle.profile.aggregation)},
                        {"monthly_mm", std::move(monthly)},
                        {"peak_months", std::move(peak_names)}};

    json cal_rows = json::array();
    for (const auto& row : bundle.calendar.rows) {
        json names = json::array();
        for (int m : row.months) names.push_back(month_name(m));
        cal_rows.push_back({{"period_months", row.period},
                            {"months", std::move(names)},
                            {"phase_locked", row.phase_locked}});
    }
    json acc = json::array();
    for (int m : bundle.accumulation_months) acc.push_back(month_name(m));
    j["calendar"] = {{"rows", std::move(cal_rows)},
                     {"accumulation_months", std::move(acc)}};

    j["pattern"] = pattern_name(bundle.pattern);
    j["scalogram"] = {{"wavelet", bundle.scalogram.wavelet},
                      {"scales", bundle.scalogram.grid.scales},
                      {"translations", bundle.scalogram.grid.translations.size()}};
    return j;
}

RainfallSeries load_input(const RunConfig& cfg, const std::string& csv_text) {
    CsvOptions opts;
    opts.header = cfg.header;
    opts.missing_token = cfg.missing_token;
    return impute_missing(parse_csv(csv_text, opts), cfg.impute);
}

void ensure_dir(const std::string& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw IoError("cannot create output directory " + dir + ": " + ec.message());
}

std::string join(const std::string& dir, const std::string& name) {
    return (std::filesystem::path(dir) / name).string();
}

ScaleGrid grid_from_config(const RunConfig& cfg, Eigen::Index n) {
    ScaleGrid grid;
    for (double a : cfg.scalogram_scales)
        if (a <= static_cast<double>(n)) grid.scales.push_back(a);
    if (grid.scales.empty())
        throw RangeError("no scalogram scale fits a series of length " +
                         std::to_string(n));
    for (Eigen::Index b = 1; b <= n; ++b) grid.translations.push_back(b);
    return grid;
}

} // namespace

std::string run_config_to_json(const RunConfig& cfg) {
    return config_json(cfg).dump(2) + "\n";
}

AnalysisBundle run_analysis(const RunConfig& cfg, const std::string& csv_text) {
    RainfallSeries series = load_input(cfg, csv_text);

    WaveletFilter filter = make_filter(cfg.wavelet);
    ShrinkagePlan plan;
    plan.method = cfg.method;
    plan.noise = cfg.noise;
    plan.keep_approx = cfg.keep_approx;
    plan.per_level_n = cfg.per_level_n;
    plan.min_survivors = cfg.min_survivors;

    AnalysisBundle bundle{
        .series = series,
        .denoised = denoise(series.values(), filter, cfg.boundary, cfg.depth, plan),
        .summaries = {},
        .episodes = {},
        .profile = {},
        .calendar = {},
        .accumulation_months = {},
        .pattern = RainPattern::Indeterminate,
        .scalogram = {},
        .input_digest = fnv1a64_hex(csv_text),
        .config_digest = fnv1a64_hex(run_config_to_json(cfg)),
    };

    bundle.summaries = summarize_levels(bundle.denoised.thresholded,
                                        bundle.denoised.report, series, cfg.convention);

    for (const auto& summary : bundle.summaries) {
        LevelEpisodes le;
        le.level = summary.band.level;
        le.window = summary.band.median_period;
        if (summary.band.median_period <= series.size()) {
            Eigen::ArrayXd comp =
                detail_component(bundle.denoised.thresholded, summary.band.level);
            le.episodes = detect_episodes(comp, summary.band, series, cfg.episode_k);
            le.repeat_interval_months = repeat_interval(le.episodes);
        }
        bundle.episodes.push_back(std::move(le));
    }

    bundle.profile = climatology(series, cfg.aggregation);
    bundle.pattern = classify_pattern(bundle.profile);

    std::vector<std::int64_t> medians;
    for (const auto& s : bundle.summaries) medians.push_back(s.band.median_period);
    bundle.calendar = period_calendar(medians);
    if (!bundle.calendar.rows.empty())
        bundle.accumulation_months = peak_months(bundle.calendar);

    bundle.scalogram = cwt_quadrature(series, grid_from_config(cfg, series.size()));
    return bundle;
}

void write_bundle(const AnalysisBundle& bundle, const RunConfig& cfg) {
    ensure_dir(cfg.out_dir);
    write_file(join(cfg.out_dir, "table1.csv"), level_summaries_csv(bundle.summaries));
    write_file(join(cfg.out_dir, "table2.csv"), period_calendar_csv(bundle.calendar));
    write_file(join(cfg.out_dir, "episodes.json"), episodes_json(bundle).dump(2) + "\n");
    write_file(join(cfg.out_dir, "climatology.svg"),
               render_month_line_svg(bundle.profile.monthly,
                                     "monthly climatology (" +
                                         aggregation_name(bundle.profile.aggregation) +
                                         ")",
                                     "rainfall (mm)"));
    write_file(join(cfg.out_dir, "scalogram.svg"), render_heatmap_svg(bundle.scalogram));
    write_file(join(cfg.out_dir, "report.json"),
               report_json(bundle, cfg).dump(2) + "\n");
}

void cmd_analyze(const RunConfig& cfg) {
    AnalysisBundle bundle = run_analysis(cfg, read_file(cfg.input_path));
    write_bundle(bundle, cfg);
}

void cmd_decompose(const RunConfig& cfg) {
    std::string text = read_file(cfg.input_path);
    RainfallSeries series = load_input(cfg, text);
    WaveletFilter filter = make_filter(cfg.wavelet);
    Decomposition dec = wavedec(series.values(), filter, cfg.boundary, cfg.depth);

    ensure_dir(cfg.out_dir);
    write_file(join(cfg.out_dir, "decomposition.json"), decomposition_to_json(dec));

    auto component_csv = [&](const Eigen::ArrayXd& comp) {
        std::string out = "year,month,component_mm\n";
        for (Eigen::Index i = 1; i <= series.size(); ++i) {
            MonthStamp s = series.stamp_at(i);
            out += std::to_string(s.year) + "," + std::to_string(s.month) + "," +
                   format_double(comp[i - 1]) + "\n";
        }
        return out;
    };
    for (int j = 1; j <= dec.depth; ++j)
        write_file(join(cfg.out_dir, "component_d" + std::to_string(j) + ".csv"),
                   component_csv(detail_component(dec, j)));
    write_file(join(cfg.out_dir, "component_approx.csv"),
               component_csv(approx_component(dec)));
}

void cmd_synth(const RunConfig& cfg, const SyntheticSpec& spec) {
    SyntheticResult result = generate_synthetic(spec);
    ensure_dir(cfg.out_dir);
    write_file(join(cfg.out_dir, "synthetic.csv"), to_csv(result.series));
    write_file(join(cfg.out_dir, "ground_truth.json"),
               ground_truth_to_json(result.truth));
}

void cmd_scalogram(const RunConfig& cfg) {
    std::string text = read_file(cfg.input_path);
    RainfallSeries series = load_input(cfg, text);
    ScalogramMatrix m = cwt_quadrature(series, grid_from_config(cfg, series.size()));
    ensure_dir(cfg.out_dir);
    write_file(join(cfg.out_dir, "scalogram.csv"), scalogram_to_csv(m));
    write_file(join(cfg.out_dir, "scalogram.svg"), render_heatmap_svg(m));
}

} // namespace wpd
