#pragma once

#include "wpd/wavelet.hpp"

#include <Eigen/Core>

#include <string>
#include <vector>

namespace wpd {

enum class ThresholdMethod { Hard, Soft };
enum class NoiseModel { Single, PerLevel };

std::string threshold_name(ThresholdMethod m);
ThresholdMethod parse_threshold(const std::string& name);
std::string noise_model_name(NoiseModel m);
NoiseModel parse_noise_model(const std::string& name);

/// Median of the values (mean of the middle pair for even counts).
double median(const Eigen::ArrayXd& values);

/// Robust noise scale: median(|coeffs|) / 0.6745.
double estimate_sigma_mad(const Eigen::ArrayXd& coeffs);

/// Fixed-form universal threshold sigma * sqrt(2 ln n).
double fixed_form_lambda(Eigen::Index n, double sigma);

/// Hard keeps coefficients with |c| > lambda; soft additionally shrinks
/// survivors toward zero by lambda.
Eigen::ArrayXd apply_threshold(const Eigen::ArrayXd& coeffs, double lambda,
                               ThresholdMethod method);

/// Fixed-form rule configuration. Single noise estimates sigma once from the
/// level-1 details; PerLevel re-estimates per level (level-dependent noise).
struct ShrinkagePlan {
    ThresholdMethod method = ThresholdMethod::Hard;
    NoiseModel noise = NoiseModel::PerLevel;
    /// Never threshold the approximation block.
    bool keep_approx = true;
    /// Use the level's own coefficient count as n in the threshold formula
    /// instead of the original series length.
    bool per_level_n = false;
    /// Minimum surviving detail coefficients for a level to count as
    /// significant.
    int min_survivors = 1;
};

struct LevelStats {
    int level = 0;
    double sigma = 0.0;
    double lambda = 0.0;
    Eigen::Index total = 0;
    Eigen::Index surviving = 0;
    double max_abs = 0.0;
    bool significant = false;
};

struct ShrinkageReport {
    std::string method;
    std::string noise_model;
    std::vector<LevelStats> levels; // detail levels 1..J in order
    /// Deepest significant detail level, 0 when none qualify.
    int highest_significant = 0;
};

struct DenoiseResult {
    Eigen::ArrayXd denoised;
    ShrinkageReport report;
    Decomposition thresholded;
};

/// Decomposes x, thresholds every detail level per the plan, reconstructs.
/// All-zero details degenerate to sigma = 0, lambda = 0 and the identity.
DenoiseResult denoise(const Eigen::ArrayXd& x, const WaveletFilter& f,
                      BoundaryMode mode, int levels, const ShrinkagePlan& plan);

/// Sets the significance flags and the highest significant level:
/// significant(j) iff surviving(j) >= min_survivors.
void significant_levels(ShrinkageReport& report, int min_survivors);

/// Report rows as a JSON array: {level, sigma, lambda, total, surviving,
/// significant}.
std::string shrinkage_report_to_json(const ShrinkageReport& report);

} // namespace wpd
