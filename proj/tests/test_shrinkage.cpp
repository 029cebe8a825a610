#include "wpd/shrinkage.hpp"

#include "wpd/period_analysis.hpp"

#include <json.hpp>

#include <doctest.h>

#include <cmath>
#include <random>

using namespace wpd;

namespace {

Eigen::ArrayXd random_signal(Eigen::Index n, std::uint64_t seed, double scale = 1.0) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, scale);
    Eigen::ArrayXd x(n);
    for (Eigen::Index i = 0; i < n; ++i) x[i] = gauss(rng);
    return x;
}

ShrinkageReport report_with_survivors(const std::vector<Eigen::Index>& survivors) {
    ShrinkageReport report;
    for (std::size_t j = 0; j < survivors.size(); ++j) {
        LevelStats row;
        row.level = static_cast<int>(j + 1);
        row.total = 100;
        row.surviving = survivors[j];
        report.levels.push_back(row);
    }
    return report;
}

} // namespace

TEST_CASE("median handles both parities") {
    Eigen::ArrayXd odd(3);
    odd << 3.0, 1.0, 2.0;
    CHECK(median(odd) == 2.0);
    Eigen::ArrayXd even(4);
    even << 4.0, 1.0, 3.0, 2.0;
    CHECK(median(even) == 2.5);
    CHECK_THROWS_AS(median(Eigen::ArrayXd()), RangeError);
}

TEST_CASE("robust sigma estimate") {
    Eigen::ArrayXd d(3);
    d << 0.6745, -0.6745, 0.6745;
    CHECK(estimate_sigma_mad(d) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(estimate_sigma_mad(Eigen::ArrayXd::Zero(5)) == 0.0);
    CHECK_THROWS_AS(estimate_sigma_mad(Eigen::ArrayXd()), RangeError);
}

TEST_CASE("sigma estimate is consistent on normal draws") {
    Eigen::ArrayXd draws = random_signal(100000, 7);
    double sigma = estimate_sigma_mad(draws);
    CHECK(sigma > 0.98);
    CHECK(sigma < 1.02);
}

TEST_CASE("universal threshold formula") {
    CHECK(fixed_form_lambda(1, 1.0) == 0.0);
    CHECK(fixed_form_lambda(5000, 0.0) == 0.0);
    CHECK(fixed_form_lambda(312, 1.0) == doctest::Approx(3.3891).epsilon(1e-4));
    CHECK_THROWS_AS(fixed_form_lambda(0, 1.0), RangeError);
    CHECK_THROWS_AS(fixed_form_lambda(10, -0.1), RangeError);
}

TEST_CASE("threshold operators") {
    Eigen::ArrayXd c(3);
    c << 3.0, -1.0, 0.5;

    Eigen::ArrayXd hard = apply_threshold(c, 2.0, ThresholdMethod::Hard);
    CHECK(hard[0] == 3.0);
    CHECK(hard[1] == 0.0);
    CHECK(hard[2] == 0.0);

    Eigen::ArrayXd soft = apply_threshold(c, 2.0, ThresholdMethod::Soft);
    CHECK(soft[0] == doctest::Approx(1.0));
    CHECK(soft[1] == 0.0);
    CHECK(soft[2] == 0.0);

    Eigen::ArrayXd same = apply_threshold(c, 0.0, ThresholdMethod::Hard);
    CHECK((same == c).all());

    CHECK_THROWS_AS(apply_threshold(c, -1.0, ThresholdMethod::Hard), RangeError);
}

TEST_CASE("hard thresholding is idempotent, soft never exceeds hard") {
    Eigen::ArrayXd c = random_signal(64, 11, 3.0);
    for (double lambda : {0.5, 1.0, 2.0, 5.0}) {
        Eigen::ArrayXd once = apply_threshold(c, lambda, ThresholdMethod::Hard);
        Eigen::ArrayXd twice = apply_threshold(once, lambda, ThresholdMethod::Hard);
        CHECK((once == twice).all());
        Eigen::ArrayXd soft = apply_threshold(c, lambda, ThresholdMethod::Soft);
        CHECK((soft.abs() <= once.abs() + 1e-15).all());
    }
}

TEST_CASE("survivor count is monotone in lambda") {
    Eigen::ArrayXd c = random_signal(128, 13, 2.0);
    Eigen::Index prev = c.size();
    for (double lambda = 0.0; lambda < 8.0; lambda += 0.25) {
        Eigen::Index now =
            (apply_threshold(c, lambda, ThresholdMethod::Hard) != 0.0).count();
        CHECK(now <= prev);
        prev = now;
    }
    CHECK((apply_threshold(c, c.abs().maxCoeff() + 1.0, ThresholdMethod::Hard) == 0.0).all());
}

TEST_CASE("denoising a constant is the identity") {
    WaveletFilter f = make_filter("haar");
    Eigen::ArrayXd x = Eigen::ArrayXd::Constant(64, 300.0);
    DenoiseResult r = denoise(x, f, BoundaryMode::Periodic, 3, {});
    CHECK((r.denoised - x).abs().maxCoeff() < 1e-9);
    for (const auto& row : r.report.levels) {
        CHECK(row.sigma == 0.0);
        CHECK(row.lambda == 0.0);
        CHECK(row.surviving == 0);
    }
    CHECK(r.report.highest_significant == 0);
}

TEST_CASE("a clean tone thresholds itself away under the universal rule") {
    // With zero noise the detail magnitudes of a pure cosine are comparable
    // within each level, so median(|d|)/0.6745 * sqrt(2 ln n) exceeds even
    // the largest coefficient and every level is zeroed. Survivors require
    // genuinely sparse detail vectors, not clean periodic signals.
    SyntheticSpec spec;
    spec.length = 312;
    spec.baseline = 300.0;
    spec.tones = {{6.0, 100.0, 0.0}};
    auto synth = generate_synthetic(spec);

    WaveletFilter f = make_filter("haar");
    for (NoiseModel noise : {NoiseModel::PerLevel, NoiseModel::Single}) {
        ShrinkagePlan plan;
        plan.noise = noise;
        DenoiseResult r = denoise(synth.series.values(), f, BoundaryMode::Periodic, 4, plan);
        for (const auto& row : r.report.levels) CHECK(row.surviving == 0);
        CHECK(r.report.highest_significant == 0);
    }
}

TEST_CASE("single noise model reuses the level-1 sigma") {
    WaveletFilter f = make_filter("haar");
    Eigen::ArrayXd x = random_signal(64, 17, 5.0);
    ShrinkagePlan plan;
    plan.noise = NoiseModel::Single;
    DenoiseResult r = denoise(x, f, BoundaryMode::Periodic, 3, plan);
    REQUIRE(r.report.levels.size() == 3);
    CHECK(r.report.levels[1].sigma == r.report.levels[0].sigma);
    CHECK(r.report.levels[2].sigma == r.report.levels[0].sigma);
    CHECK(r.report.noise_model == "single");

    ShrinkagePlan per;
    per.noise = NoiseModel::PerLevel;
    DenoiseResult r2 = denoise(x, f, BoundaryMode::Periodic, 3, per);
    CHECK(r2.report.levels[2].sigma != r.report.levels[0].sigma);
}

TEST_CASE("per-level-n flag changes the reference count") {
    WaveletFilter f = make_filter("haar");
    Eigen::ArrayXd x = random_signal(64, 19, 5.0);
    ShrinkagePlan global;
    ShrinkagePlan local;
    local.per_level_n = true;
    DenoiseResult a = denoise(x, f, BoundaryMode::Periodic, 2, global);
    DenoiseResult b = denoise(x, f, BoundaryMode::Periodic, 2, local);
    // same sigma, smaller n => smaller lambda
    CHECK(b.report.levels[0].lambda < a.report.levels[0].lambda);
    CHECK(b.report.levels[0].lambda ==
          doctest::Approx(fixed_form_lambda(32, b.report.levels[0].sigma)).epsilon(1e-12));
}

TEST_CASE("scaling the input scales sigma and lambda, not the pattern") {
    WaveletFilter f = make_filter("db2");
    Eigen::ArrayXd x = random_signal(64, 23, 4.0).abs() + 1.0;
    const double alpha = 7.5;
    DenoiseResult base = denoise(x, f, BoundaryMode::Periodic, 3, {});
    DenoiseResult scaled = denoise(alpha * x, f, BoundaryMode::Periodic, 3, {});
    for (std::size_t j = 0; j < 3; ++j) {
        CHECK(scaled.report.levels[j].sigma ==
              doctest::Approx(alpha * base.report.levels[j].sigma).epsilon(1e-12));
        CHECK(scaled.report.levels[j].lambda ==
              doctest::Approx(alpha * base.report.levels[j].lambda).epsilon(1e-12));
        CHECK(scaled.report.levels[j].surviving == base.report.levels[j].surviving);
        Eigen::ArrayXd zb = (base.thresholded.details[j] == 0.0).cast<double>();
        Eigen::ArrayXd zs = (scaled.thresholded.details[j] == 0.0).cast<double>();
        CHECK((zb == zs).all());
    }
}

TEST_CASE("keep_approx=false also thresholds the approximation") {
    WaveletFilter f = make_filter("haar");
    Eigen::ArrayXd x = random_signal(64, 29, 5.0);
    ShrinkagePlan keep;
    ShrinkagePlan strip;
    strip.keep_approx = false;
    DenoiseResult a = denoise(x, f, BoundaryMode::Periodic, 4, keep);
    DenoiseResult b = denoise(x, f, BoundaryMode::Periodic, 4, strip);
    Decomposition raw = wavedec(x, f, BoundaryMode::Periodic, 4);
    CHECK((a.thresholded.approx == raw.approx).all());
    CHECK((b.thresholded.approx != raw.approx).any());
    CHECK((b.thresholded.approx == 0.0).any());
}

TEST_CASE("denoise equals the manually composed pipeline") {
    WaveletFilter f = make_filter("haar");
    Eigen::ArrayXd x = random_signal(64, 31, 5.0);
    ShrinkagePlan plan;
    DenoiseResult r = denoise(x, f, BoundaryMode::Periodic, 3, plan);

    Decomposition dec = wavedec(x, f, BoundaryMode::Periodic, 3);
    for (int j = 1; j <= 3; ++j) {
        auto& d = dec.details[static_cast<std::size_t>(j - 1)];
        double lambda = fixed_form_lambda(64, estimate_sigma_mad(d));
        d = apply_threshold(d, lambda, ThresholdMethod::Hard);
    }
    CHECK((r.denoised - waverec(dec)).abs().maxCoeff() < 1e-12);
}

TEST_CASE("reconstruction from the thresholded coefficients is exact") {
    WaveletFilter f = make_filter("db3");
    Eigen::ArrayXd x = random_signal(96, 37, 5.0);
    DenoiseResult r = denoise(x, f, BoundaryMode::SymmetricReflect, 2, {});
    CHECK((waverec(r.thresholded) - r.denoised).abs().maxCoeff() < 1e-9);
}

TEST_CASE("a single-coefficient level has lambda zero under per-level n") {
    // ln(1) = 0, so the deepest level of a full cascade keeps its lone
    // coefficient whenever it is nonzero.
    WaveletFilter f = make_filter("haar");
    Eigen::ArrayXd x = random_signal(64, 41, 5.0);
    ShrinkagePlan plan;
    plan.per_level_n = true;
    DenoiseResult r = denoise(x, f, BoundaryMode::Periodic, 6, plan);
    const LevelStats& deepest = r.report.levels.back();
    REQUIRE(deepest.total == 1);
    CHECK(deepest.lambda == 0.0);
    CHECK(deepest.surviving == 1);
}

TEST_CASE("significance flags follow the survivor counts") {
    ShrinkageReport report = report_with_survivors({59, 44, 18, 0});
    significant_levels(report, 1);
    CHECK(report.levels[0].significant);
    CHECK(report.levels[1].significant);
    CHECK(report.levels[2].significant);
    CHECK_FALSE(report.levels[3].significant);
    CHECK(report.highest_significant == 3);

    ShrinkageReport none = report_with_survivors({0, 0});
    significant_levels(none, 1);
    CHECK(none.highest_significant == 0);

    ShrinkageReport below = report_with_survivors({5, 5});
    significant_levels(below, 6);
    CHECK(below.highest_significant == 0);
}

TEST_CASE("report serializes to JSON rows") {
    ShrinkageReport report = report_with_survivors({3, 0});
    report.method = "hard";
    report.noise_model = "per-level";
    report.levels[0].sigma = 1.5;
    report.levels[0].lambda = 2.25;
    significant_levels(report, 1);

    auto rows = nlohmann::json::parse(shrinkage_report_to_json(report));
    REQUIRE(rows.is_array());
    REQUIRE(rows.size() == 2);
    CHECK(rows[0]["level"] == 1);
    CHECK(rows[0]["sigma"] == 1.5);
    CHECK(rows[0]["lambda"] == 2.25);
    CHECK(rows[0]["total"] == 100);
    CHECK(rows[0]["surviving"] == 3);
    CHECK(rows[0]["significant"] == true);
    CHECK(rows[1]["significant"] == false);
}
