#include "epifit/series.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>

#include "epifit/errors.hpp"

namespace epifit {

namespace {

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> fields;
    std::string::size_type start = 0;
    while (true) {
        const auto pos = line.find(',', start);
        if (pos == std::string::npos) {
            fields.push_back(trim(std::string_view(line).substr(start)));
            break;
        }
        fields.push_back(trim(std::string_view(line).substr(start, pos - start)));
        start = pos + 1;
    }
    return fields;
}

bool parse_int(const std::string& s, std::int64_t& out) {
    const char* first = s.data();
    const char* last = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc{} && ptr == last && !s.empty();
}

// YYYY-MM-DD -> days since civil epoch. Validates the calendar date.
bool parse_iso_date(const std::string& s, long& serial_out) {
    if (s.size() != 10 || s[4] != '-' || s[7] != '-') return false;
    int y = 0;
    std::int64_t mo = 0, da = 0;
    {
        std::int64_t yy = 0;
        if (!parse_int(s.substr(0, 4), yy) || !parse_int(s.substr(5, 2), mo) ||
            !parse_int(s.substr(8, 2), da))
            return false;
        y = static_cast<int>(yy);
    }
    const std::chrono::year_month_day ymd{std::chrono::year{y},
                                          std::chrono::month{static_cast<unsigned>(mo)},
                                          std::chrono::day{static_cast<unsigned>(da)}};
    if (!ymd.ok()) return false;
    serial_out = std::chrono::sys_days(ymd).time_since_epoch().count();
    return true;
}

const char* kHeader = "day,new_infected,new_died,new_recovered";

}  // namespace

EpidemicSeries EpidemicSeries::from_records(std::vector<DailyRecord> records) {
    std::vector<std::string> issues;
    if (records.empty()) issues.emplace_back("series is empty");
    for (std::size_t i = 0; i < records.size(); ++i) {
        const auto& r = records[i];
        const std::string where = "record " + std::to_string(i + 1);
        if (r.new_infected < 0 || r.new_died < 0 || r.new_recovered < 0)
            issues.push_back(where + ": negative count");
        if (i > 0 && r.day != records[i - 1].day + 1)
            issues.push_back(where + ": day " + std::to_string(r.day) +
                             " does not follow day " + std::to_string(records[i - 1].day));
    }
    if (!issues.empty()) throw ValidationError(std::move(issues));

    EpidemicSeries s;
    const Eigen::Index n = static_cast<Eigen::Index>(records.size());
    s.days_.resize(n);
    s.cum_infected_.resize(n);
    s.cum_removed_.resize(n);
    double cum_t = 0.0, cum_r = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto& r = records[i];
        cum_t += static_cast<double>(r.new_infected);
        cum_r += static_cast<double>(r.new_died + r.new_recovered);
        s.days_[i] = r.day;
        s.cum_infected_[i] = cum_t;
        s.cum_removed_[i] = cum_r;
    }
    s.active_ = s.cum_infected_ - s.cum_removed_;
    if ((s.active_ < 0.0).any())
        throw ValidationError("removed count exceeds infected count (negative active population)");
    s.records_ = std::move(records);
    return s;
}

EpidemicSeries EpidemicSeries::from_cumulative(Eigen::VectorXi days,
                                               Eigen::ArrayXd cum_infected,
                                               Eigen::ArrayXd cum_removed) {
    const Eigen::Index n = days.size();
    if (n == 0) throw ValidationError("series is empty");
    if (cum_infected.size() != n || cum_removed.size() != n)
        throw ValidationError("cumulative series lengths do not match the day index");
    std::vector<std::string> issues;
    for (Eigen::Index i = 0; i < n; ++i) {
        const std::string where = "entry " + std::to_string(i + 1);
        if (i > 0 && days[i] != days[i - 1] + 1) issues.push_back(where + ": days not contiguous");
        if (!std::isfinite(cum_infected[i]) || !std::isfinite(cum_removed[i]))
            issues.push_back(where + ": non-finite value");
        else {
            if (cum_infected[i] < 0 || cum_removed[i] < 0) issues.push_back(where + ": negative value");
            if (i > 0 && (cum_infected[i] < cum_infected[i - 1] || cum_removed[i] < cum_removed[i - 1]))
                issues.push_back(where + ": cumulative series decreases");
            if (cum_removed[i] > cum_infected[i])
                issues.push_back(where + ": removed exceeds infected");
        }
    }
    if (!issues.empty()) throw ValidationError(std::move(issues));

    EpidemicSeries s;
    s.days_ = std::move(days);
    s.cum_infected_ = std::move(cum_infected);
    s.cum_removed_ = std::move(cum_removed);
    s.active_ = s.cum_infected_ - s.cum_removed_;
    return s;
}

EpidemicSeries EpidemicSeries::truncated(int last_day) const {
    Eigen::Index n = 0;
    while (n < days_.size() && days_[n] <= last_day) ++n;
    if (n == 0)
        throw ValidationError("truncation day " + std::to_string(last_day) +
                              " precedes the first observation");
    EpidemicSeries s;
    s.days_ = days_.head(n);
    s.cum_infected_ = cum_infected_.head(n);
    s.cum_removed_ = cum_removed_.head(n);
    s.active_ = active_.head(n);
    if (!records_.empty())
        s.records_.assign(records_.begin(), records_.begin() + static_cast<std::ptrdiff_t>(n));
    return s;
}

EpidemicSeries load_series(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open " + path.string());
    return read_series(in, path.string());
}

EpidemicSeries read_series(std::istream& in, const std::string& source_name) {
    std::string line;
    if (!std::getline(in, line)) throw ValidationError(source_name + ": empty file");
    if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);  // UTF-8 BOM
    if (trim(line) != kHeader)
        throw ValidationError(source_name + ": line 1: expected header `" + std::string(kHeader) +
                              "`, got `" + trim(line) + "`");

    std::vector<std::string> issues;
    std::vector<DailyRecord> records;
    enum class DayMode { unknown, index, date } mode = DayMode::unknown;
    long first_date_serial = 0;
    int line_no = 1;

    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        const std::string where = source_name + ": line " + std::to_string(line_no);
        const auto fields = split_csv(line);
        if (fields.size() != 4) {
            issues.push_back(where + ": expected 4 columns, got " + std::to_string(fields.size()));
            continue;
        }

        DailyRecord rec;
        bool row_ok = true;

        std::int64_t day_value = 0;
        long date_serial = 0;
        if (mode == DayMode::unknown)
            mode = parse_int(fields[0], day_value) ? DayMode::index : DayMode::date;
        if (mode == DayMode::index) {
            if (!parse_int(fields[0], day_value)) {
                issues.push_back(where + ": day `" + fields[0] + "` is not an integer");
                row_ok = false;
            } else {
                rec.day = static_cast<int>(day_value);
            }
        } else {
            if (!parse_iso_date(fields[0], date_serial)) {
                issues.push_back(where + ": day `" + fields[0] + "` is not an ISO-8601 date");
                row_ok = false;
            } else {
                if (records.empty()) first_date_serial = date_serial;
                rec.day = static_cast<int>(date_serial - first_date_serial) + 1;
            }
        }

        const char* names[] = {"new_infected", "new_died", "new_recovered"};
        std::int64_t* slots[] = {&rec.new_infected, &rec.new_died, &rec.new_recovered};
        for (int c = 0; c < 3; ++c) {
            std::int64_t v = 0;
            if (!parse_int(fields[c + 1], v)) {
                issues.push_back(where + ": " + names[c] + " `" + fields[c + 1] +
                                 "` is not an integer");
                row_ok = false;
            } else if (v < 0) {
                issues.push_back(where + ": " + names[c] + " is negative");
                row_ok = false;
            } else {
                *slots[c] = v;
            }
        }

        if (row_ok && !records.empty()) {
            const int prev = records.back().day;
            if (rec.day == prev)
                issues.push_back(where + ": duplicate day " + std::to_string(rec.day));
            else if (rec.day < prev)
                issues.push_back(where + ": day " + std::to_string(rec.day) +
                                 " out of order after day " + std::to_string(prev));
            else if (rec.day != prev + 1)
                issues.push_back(where + ": missing day(s) between " + std::to_string(prev) +
                                 " and " + std::to_string(rec.day));
        }
        if (row_ok) records.push_back(rec);
    }

    if (records.empty() && issues.empty()) issues.push_back(source_name + ": no data rows");
    if (!issues.empty()) throw ValidationError(std::move(issues));
    return EpidemicSeries::from_records(std::move(records));
}

void write_series(const EpidemicSeries& series, std::ostream& out) {
    if (series.records().empty())
        throw std::invalid_argument("write_series: series carries no per-cause records");
    out << kHeader << ",cum_infected,cum_removed,active\n";
    for (Eigen::Index i = 0; i < series.size(); ++i) {
        const auto& r = series.records()[static_cast<std::size_t>(i)];
        out << r.day << ',' << r.new_infected << ',' << r.new_died << ',' << r.new_recovered
            << ',' << static_cast<std::int64_t>(series.cum_infected()[i]) << ','
            << static_cast<std::int64_t>(series.cum_removed()[i]) << ','
            << static_cast<std::int64_t>(series.active()[i]) << '\n';
    }
}

Eigen::ArrayXd susceptible_series(const EpidemicSeries& series, double total_population) {
    const double max_t = series.cum_infected().maxCoeff();
    if (total_population < max_t)
        throw std::invalid_argument("total population " + std::to_string(total_population) +
                                    " is below the observed cumulative count " +
                                    std::to_string(max_t) + " (negative susceptibles)");
    return total_population - series.cum_infected();
}

GroupedCounts grouped_counts(const EpidemicSeries& series) {
    const Eigen::Index n = series.size();
    GroupedCounts g;
    g.boundaries = series.days().cast<double>();
    g.counts.resize(n);
    g.counts[0] = series.cum_infected()[0];
    for (Eigen::Index i = 1; i < n; ++i)
        g.counts[i] = series.cum_infected()[i] - series.cum_infected()[i - 1];
    return g;
}

}  // namespace epifit
