#include "wpd/shrinkage.hpp"

#include "wpd/util.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <vector>

namespace wpd {

namespace {
using json = nlohmann::ordered_json;
}

std::string threshold_name(ThresholdMethod m) {
    return m == ThresholdMethod::Hard ? "hard" : "soft";
}

ThresholdMethod parse_threshold(const std::string& name) {
    std::string n = to_lower(name);
    if (n == "hard") return ThresholdMethod::Hard;
    if (n == "soft") return ThresholdMethod::Soft;
    throw ParseError("unknown threshold method: " + name);
}

std::string noise_model_name(NoiseModel m) {
    return m == NoiseModel::Single ? "single" : "per-level";
}

NoiseModel parse_noise_model(const std::string& name) {
    std::string n = to_lower(name);
    if (n == "single") return NoiseModel::Single;
    if (n == "per-level" || n == "per_level") return NoiseModel::PerLevel;
    throw ParseError("unknown noise model: " + name);
}

double median(const Eigen::ArrayXd& values) {
    const Eigen::Index n = values.size();
    if (n == 0) throw RangeError("median of empty vector");
    std::vector<double> v(values.begin(), values.end());
    auto mid = v.begin() + n / 2;
    std::nth_element(v.begin(), mid, v.end());
    if (n % 2 != 0) return *mid;
    double upper = *mid;
    double lower = *std::max_element(v.begin(), mid);
    return 0.5 * (lower + upper);
}

double estimate_sigma_mad(const Eigen::ArrayXd& coeffs) {
    if (coeffs.size() == 0) throw RangeError("sigma estimate needs coefficients");
    return median(coeffs.abs()) / 0.6745;
}

double fixed_form_lambda(Eigen::Index n, double sigma) {
    if (n < 1) throw RangeError("reference count must be at least 1");
    if (sigma < 0.0) throw RangeError("sigma must be non-negative");
    return sigma * std::sqrt(2.0 * std::log(static_cast<double>(n)));
}

Eigen::ArrayXd apply_threshold(const Eigen::ArrayXd& coeffs, double lambda,
                               ThresholdMethod method) {
    if (lambda < 0.0) throw RangeError("threshold must be non-negative");
    if (method == ThresholdMethod::Hard)
        return (coeffs.abs() > lambda).select(coeffs, 0.0);
    return coeffs.sign() * (coeffs.abs() - lambda).max(0.0);
}

DenoiseResult denoise(const Eigen::ArrayXd& x, const WaveletFilter& f,
                      BoundaryMode mode, int levels, const ShrinkagePlan& plan) {
    DenoiseResult result;
    result.thresholded = wavedec(x, f, mode, levels);
    Decomposition& dec = result.thresholded;

    result.report.method = threshold_name(plan.method);
    result.report.noise_model = noise_model_name(plan.noise);

    const double sigma_level1 = estimate_sigma_mad(dec.details[0]);

    for (int j = 1; j <= levels; ++j) {
        Eigen::ArrayXd& d = dec.details[static_cast<std::size_t>(j - 1)];
        LevelStats stats;
        stats.level = j;
        stats.total = d.size();
        stats.sigma = plan.noise == NoiseModel::Single ? sigma_level1
                                                       : estimate_sigma_mad(d);
        Eigen::Index ref_n = plan.per_level_n ? d.size() : dec.original_length;
        stats.lambda = fixed_form_lambda(ref_n, stats.sigma);
        d = apply_threshold(d, stats.lambda, plan.method);
        stats.surviving = (d != 0.0).count();
        stats.max_abs = d.abs().maxCoeff();
        result.report.levels.push_back(stats);
    }

    if (!plan.keep_approx) {
        double sigma = plan.noise == NoiseModel::Single ? sigma_level1
                                                        : estimate_sigma_mad(dec.approx);
        Eigen::Index ref_n = plan.per_level_n ? dec.approx.size() : dec.original_length;
        dec.approx = apply_threshold(dec.approx, fixed_form_lambda(ref_n, sigma),
                                     plan.method);
    }

    significant_levels(result.report, plan.min_survivors);
    result.denoised = waverec(dec);
    return result;
}

void significant_levels(ShrinkageReport& report, int min_survivors) {
    report.highest_significant = 0;
    for (auto& row : report.levels) {
        row.significant = row.surviving >= min_survivors;
        if (row.significant) report.highest_significant = std::max(report.highest_significant, row.level);
    }
}

std::string shrinkage_report_to_json(const ShrinkageReport& report) {
    json rows = json::array();
    for (const auto& r : report.levels) {
        json row;
        row["level"] = r.level;
        row["sigma"] = r.sigma;
        row["lambda"] = r.lambda;
        row["total"] = r.total;
        row["surviving"] = r.surviving;
        row["significant"] = r.significant;
        rows.push_back(std::move(row));
    }
    return rows.dump(2) + "\n";
}

} // namespace wpd
