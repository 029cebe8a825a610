#pragma once

#include "wpd/errors.hpp"

#include <Eigen/Core>

#include <string>
#include <string_view>
#include <vector>

namespace wpd {

/// Calendar month, month in 1..12.
struct MonthStamp {
    int year = 0;
    int month = 1;

    MonthStamp() = default;
    MonthStamp(int y, int m);

    /// Stamp k months later (k may be negative).
    MonthStamp plus_months(long k) const;

    /// Signed month count from this stamp to other.
    long months_until(const MonthStamp& other) const;

    /// "1991-03" form.
    std::string to_string() const;

    /// Parses "YYYY-MM"; throws ParseError otherwise.
    static MonthStamp parse(std::string_view text);

    friend bool operator==(const MonthStamp&, const MonthStamp&) = default;
    auto operator<=>(const MonthStamp& o) const {
        return (year * 12L + month) <=> (o.year * 12L + o.month);
    }
};

/// Contiguous monthly rainfall record. Values are mm/month; missing samples
/// are stored as NaN until an imputation pass removes them.
class RainfallSeries {
public:
    RainfallSeries(MonthStamp start, Eigen::ArrayXd values);

    const MonthStamp& start() const { return start_; }
    const Eigen::ArrayXd& values() const { return values_; }
    Eigen::Index size() const { return values_.size(); }

    /// Stamp of 1-based sample index.
    MonthStamp stamp_at(Eigen::Index index) const;

    /// 1-based index of a stamp; throws RangeError if outside the record.
    Eigen::Index index_of(const MonthStamp& stamp) const;

    /// Calendar month (1..12) of 1-based sample index.
    int calendar_month(Eigen::Index index) const;

    bool has_missing() const;
    std::vector<Eigen::Index> missing_indices() const; // 1-based

    /// Mean over present samples; throws Error when all are missing.
    double present_mean() const;

    /// Replaces the sample values, keeping the start stamp.
    RainfallSeries with_values(Eigen::ArrayXd values) const;

private:
    MonthStamp start_;
    Eigen::ArrayXd values_;
};

enum class HeaderMode { Auto, Require, Forbid };

enum class ImputePolicy { Fail, Linear, ClimatologyMean };

struct CsvOptions {
    HeaderMode header = HeaderMode::Auto;
    std::string missing_token = "NA";
};

/// Parses `year,month,rainfall_mm` CSV text into a contiguous series.
/// Rows may arrive in any order; coverage gaps become missing samples.
/// Duplicate months, non-finite or negative rainfall, and months outside
/// 1..12 are ParseErrors.
RainfallSeries parse_csv(std::string_view text, const CsvOptions& opts = {});

/// Reads and parses a CSV file.
RainfallSeries load_csv(const std::string& path, const CsvOptions& opts = {});

/// Serializes back to `year,month,rainfall_mm` rows in chronological order.
/// Missing samples serialize as an empty rainfall field.
std::string to_csv(const RainfallSeries& series);

/// Resolves missing samples according to policy. Fail throws if anything is
/// missing; Linear interpolates between present neighbours (endpoints must be
/// present); ClimatologyMean substitutes the mean of the same calendar month.
RainfallSeries impute_missing(const RainfallSeries& series, ImputePolicy policy);

} // namespace wpd
