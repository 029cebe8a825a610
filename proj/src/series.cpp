#include "wpd/series.hpp"

#include "wpd/util.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <map>
#include <optional>

namespace wpd {

namespace {

long month_ordinal(const MonthStamp& s) { return s.year * 12L + (s.month - 1); }

bool parse_int(std::string_view text, long& out) {
    std::string s{trim(text)};
    if (s.empty()) return false;
    char* end = nullptr;
    errno = 0;
    long v = std::strtol(s.c_str(), &end, 10);
    if (errno != 0 || end != s.c_str() + s.size()) return false;
    out = v;
    return true;
}

bool parse_number(std::string_view text, double& out) {
    std::string s{trim(text)};
    if (s.empty()) return false;
    char* end = nullptr;
    errno = 0;
    double v = std::strtod(s.c_str(), &end);
    if (end != s.c_str() + s.size()) return false;
    out = v;
    return true;
}

} // namespace

MonthStamp::MonthStamp(int y, int m) : year(y), month(m) {
    if (m < 1 || m > 12)
        throw RangeError("month out of range: " + std::to_string(m));
}

MonthStamp MonthStamp::plus_months(long k) const {
    long total = month_ordinal(*this) + k;
    long y = total >= 0 ? total / 12 : -((-total + 11) / 12);
    long m = total - y * 12;
    return MonthStamp(static_cast<int>(y), static_cast<int>(m) + 1);
}

long MonthStamp::months_until(const MonthStamp& other) const {
    return month_ordinal(other) - month_ordinal(*this);
}

std::string MonthStamp::to_string() const {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%04d-%02d", year, month);
    return buf;
}

MonthStamp MonthStamp::parse(std::string_view text) {
    auto parts = split(trim(text), '-');
    long y = 0;
    long m = 0;
    if (parts.size() != 2 || !parse_int(parts[0], y) || !parse_int(parts[1], m) ||
        m < 1 || m > 12)
        throw ParseError("expected YYYY-MM month stamp, got '" + std::string(text) + "'");
    return MonthStamp(static_cast<int>(y), static_cast<int>(m));
}

RainfallSeries::RainfallSeries(MonthStamp start, Eigen::ArrayXd values)
    : start_(start), values_(std::move(values)) {
    if (values_.size() == 0) throw RangeError("series must hold at least one sample");
    for (Eigen::Index i = 0; i < values_.size(); ++i) {
        double v = values_[i];
        if (std::isnan(v)) continue; // missing marker
        if (!std::isfinite(v))
            throw RangeError("sample " + std::to_string(i + 1) + " is not finite");
        if (v < 0.0)
            throw RangeError("sample " + std::to_string(i + 1) + " is negative: " +
                             format_double(v));
    }
}

MonthStamp RainfallSeries::stamp_at(Eigen::Index index) const {
    if (index < 1 || index > size())
        throw RangeError("sample index out of range: " + std::to_string(index));
    return start_.plus_months(index - 1);
}

Eigen::Index RainfallSeries::index_of(const MonthStamp& stamp) const {
    long offset = start_.months_until(stamp);
    if (offset < 0 || offset >= size())
        throw RangeError("stamp outside series: " + stamp.to_string());
    return offset + 1;
}

int RainfallSeries::calendar_month(Eigen::Index index) const {
    return stamp_at(index).month;
}

bool RainfallSeries::has_missing() const {
    return values_.isNaN().any();
}

std::vector<Eigen::Index> RainfallSeries::missing_indices() const {
    std::vector<Eigen::Index> out;
    for (Eigen::Index i = 0; i < values_.size(); ++i)
        if (std::isnan(values_[i])) out.push_back(i + 1);
    return out;
}

double RainfallSeries::present_mean() const {
    double sum = 0.0;
    Eigen::Index n = 0;
    for (Eigen::Index i = 0; i < values_.size(); ++i) {
        if (!std::isnan(values_[i])) {
            sum += values_[i];
            ++n;
        }
    }
    if (n == 0) throw Error("series has no present samples");
    return sum / static_cast<double>(n);
}

RainfallSeries RainfallSeries::with_values(Eigen::ArrayXd values) const {
    if (values.size() != values_.size())
        throw RangeError("replacement values must match series length");
    return RainfallSeries(start_, std::move(values));
}

RainfallSeries parse_csv(std::string_view text, const CsvOptions& opts) {
    struct Row {
        double value;   // NaN = missing
        std::size_t line;
    };

    auto lines = split(text, '\n');
    std::size_t first_data = 0;

    // Column layout defaults to year,month,rainfall_mm; a header may reorder.
    int col_year = 0;
    int col_month = 1;
    int col_rain = 2;

    // Find the first non-blank line to decide whether it is a header.
    std::size_t probe = 0;
    while (probe < lines.size() && trim(lines[probe]).empty()) ++probe;
    if (probe == lines.size()) throw ParseError("no data rows in input");

    bool header_present = false;
    {
        std::string_view line = lines[probe];
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        auto fields = split(line, ',');
        long dummy = 0;
        bool first_numeric = !fields.empty() && parse_int(fields[0], dummy);
        switch (opts.header) {
        case HeaderMode::Require: header_present = true; break;
        case HeaderMode::Forbid: header_present = false; break;
        case HeaderMode::Auto: header_present = !first_numeric; break;
        }
        if (header_present) {
            col_year = col_month = col_rain = -1;
            for (std::size_t i = 0; i < fields.size(); ++i) {
                auto name = trim(fields[i]);
                if (iequals(name, "year")) col_year = static_cast<int>(i);
                else if (iequals(name, "month")) col_month = static_cast<int>(i);
                else if (iequals(name, "rainfall_mm")) col_rain = static_cast<int>(i);
            }
            if (col_year < 0 || col_month < 0 || col_rain < 0)
                throw ParseError("header must name year, month and rainfall_mm columns");
            first_data = probe + 1;
        } else {
            first_data = probe;
        }
    }

    std::map<long, Row> rows; // keyed by month ordinal
    std::optional<long> lo, hi;
    int start_year = 0, start_month = 1;

    for (std::size_t li = first_data; li < lines.size(); ++li) {
        std::string_view line = lines[li];
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (trim(line).empty()) continue;
        std::size_t line_no = li + 1;
        auto fields = split(line, ',');
        int needed = std::max({col_year, col_month, col_rain}) + 1;
        if (static_cast<int>(fields.size()) < needed)
            throw ParseError("line " + std::to_string(line_no) + ": expected " +
                             std::to_string(needed) + " fields");

        long year = 0, month = 0;
        if (!parse_int(fields[static_cast<std::size_t>(col_year)], year))
            throw ParseError("line " + std::to_string(line_no) + ": bad year '" +
                             std::string(trim(fields[static_cast<std::size_t>(col_year)])) + "'");
        if (!parse_int(fields[static_cast<std::size_t>(col_month)], month) ||
            month < 1 || month > 12)
            throw ParseError("line " + std::to_string(line_no) + ": bad month '" +
                             std::string(trim(fields[static_cast<std::size_t>(col_month)])) + "'");

        auto rain_text = trim(fields[static_cast<std::size_t>(col_rain)]);
        double value = std::numeric_limits<double>::quiet_NaN();
        if (!rain_text.empty() && !iequals(rain_text, opts.missing_token)) {
            if (!parse_number(rain_text, value))
                throw ParseError("line " + std::to_string(line_no) + ": bad rainfall '" +
                                 std::string(rain_text) + "'");
            if (!std::isfinite(value) || value < 0.0)
                throw ParseError("line " + std::to_string(line_no) +
                                 ": rainfall must be finite and non-negative");
        }

        MonthStamp stamp(static_cast<int>(year), static_cast<int>(month));
        long key = year * 12L + (month - 1);
        auto [it, inserted] = rows.emplace(key, Row{value, line_no});
        if (!inserted)
            throw ParseError("line " + std::to_string(line_no) + ": duplicate month " +
                             stamp.to_string() + " (first on line " +
                             std::to_string(it->second.line) + ")");
        if (!lo || key < *lo) {
            lo = key;
            start_year = stamp.year;
            start_month = stamp.month;
        }
        if (!hi || key > *hi) hi = key;
    }

    if (rows.empty()) throw ParseError("no data rows in input");

    Eigen::Index n = static_cast<Eigen::Index>(*hi - *lo + 1);
    Eigen::ArrayXd values =
        Eigen::ArrayXd::Constant(n, std::numeric_limits<double>::quiet_NaN());
    for (const auto& [key, row] : rows)
        values[static_cast<Eigen::Index>(key - *lo)] = row.value;

    return RainfallSeries(MonthStamp(start_year, start_month), std::move(values));
}

RainfallSeries load_csv(const std::string& path, const CsvOptions& opts) {
    return parse_csv(read_file(path), opts);
}

std::string to_csv(const RainfallSeries& series) {
    std::string out = "year,month,rainfall_mm\n";
    for (Eigen::Index i = 1; i <= series.size(); ++i) {
        MonthStamp s = series.stamp_at(i);
        double v = series.values()[i - 1];
        out += std::to_string(s.year);
        out += ',';
        out += std::to_string(s.month);
        out += ',';
        if (!std::isnan(v)) out += format_double(v);
        out += '\n';
    }
    return out;
}

RainfallSeries impute_missing(const RainfallSeries& series, ImputePolicy policy) {
    auto missing = series.missing_indices();
    if (missing.empty()) return series;

    if (policy == ImputePolicy::Fail)
        throw Error("series has " + std::to_string(missing.size()) +
                    " missing samples, first at " +
                    series.stamp_at(missing.front()).to_string());

    Eigen::ArrayXd values = series.values();

    if (policy == ImputePolicy::Linear) {
        Eigen::Index n = values.size();
        if (std::isnan(values[0]) || std::isnan(values[n - 1]))
            throw Error("linear imputation needs present endpoint samples");
        Eigen::Index prev = 0;
        for (Eigen::Index i = 1; i < n; ++i) {
            if (std::isnan(values[i])) continue;
            if (i > prev + 1) {
                double a = values[prev];
                double b = values[i];
                double span = static_cast<double>(i - prev);
                for (Eigen::Index j = prev + 1; j < i; ++j)
                    values[j] = a + (b - a) * static_cast<double>(j - prev) / span;
            }
            prev = i;
        }
        // rainfall stays non-negative: interpolation between non-negative
        // endpoints cannot undershoot zero
    } else { // ClimatologyMean
        double month_sum[13] = {};
        long month_cnt[13] = {};
        for (Eigen::Index i = 1; i <= series.size(); ++i) {
            double v = values[i - 1];
            if (std::isnan(v)) continue;
            int m = series.calendar_month(i);
            month_sum[m] += v;
            month_cnt[m] += 1;
        }
        for (Eigen::Index idx : missing) {
            int m = series.calendar_month(idx);
            if (month_cnt[m] == 0)
                throw Error("no present samples share calendar month " +
                            month_name(m) + " for imputation");
            values[idx - 1] = month_sum[m] / static_cast<double>(month_cnt[m]);
        }
    }

    return series.with_values(std::move(values));
}

} // namespace wpd
