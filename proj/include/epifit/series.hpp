#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace epifit {

/// One observed day of an epidemic: newly infected, died and recovered counts.
struct DailyRecord {
    int day = 0;
    std::int64_t new_infected = 0;
    std::int64_t new_died = 0;
    std::int64_t new_recovered = 0;
};

/// Daily counts grouped into bins with boundaries t_0 < ... < t_n.
/// counts[0] holds everything observed up to and including t_0; counts[i]
/// holds the count in (t_{i-1}, t_i].
struct GroupedCounts {
    Eigen::ArrayXd boundaries;
    Eigen::ArrayXd counts;
};

/// An observed case-count time series together with the derived cumulative
/// quantities. Days are contiguous; "removed" is died + recovered. Immutable
/// after construction, safe to share across readers.
class EpidemicSeries {
public:
    /// Validates records (non-negative counts, contiguous strictly increasing
    /// days) and derives the cumulative columns.
    static EpidemicSeries from_records(std::vector<DailyRecord> records);

    /// Builds a series directly from real-valued cumulative curves. Used for
    /// model-generated data where rounding to integer counts would destroy
    /// the signal; such a series carries no per-cause records.
    static EpidemicSeries from_cumulative(Eigen::VectorXi days,
                                          Eigen::ArrayXd cum_infected,
                                          Eigen::ArrayXd cum_removed);

    Eigen::Index size() const { return days_.size(); }
    int day(Eigen::Index i) const { return days_[i]; }
    int first_day() const { return days_[0]; }
    int last_day() const { return days_[days_.size() - 1]; }

    const Eigen::VectorXi& days() const { return days_; }
    const Eigen::ArrayXd& cum_infected() const { return cum_infected_; }  // T~
    const Eigen::ArrayXd& cum_removed() const { return cum_removed_; }    // R~
    const Eigen::ArrayXd& active() const { return active_; }              // I~

    /// Per-cause records; empty when the series was built from cumulative curves.
    const std::vector<DailyRecord>& records() const { return records_; }

    /// Prefix of the series up to and including `last_day`.
    EpidemicSeries truncated(int last_day) const;

private:
    EpidemicSeries() = default;

    std::vector<DailyRecord> records_;
    Eigen::VectorXi days_;
    Eigen::ArrayXd cum_infected_;
    Eigen::ArrayXd cum_removed_;
    Eigen::ArrayXd active_;
};

/// Reads a series from CSV with header `day,new_infected,new_died,new_recovered`.
/// The day column holds integer day indices or ISO-8601 dates (dates are
/// converted to indices with day 1 = first row). All validation failures are
/// collected into the thrown ValidationError, each tagged with its line number.
EpidemicSeries load_series(const std::filesystem::path& path);
EpidemicSeries read_series(std::istream& in, const std::string& source_name = "<stream>");

/// Writes `day,new_infected,new_died,new_recovered,cum_infected,cum_removed,active`.
/// Requires a record-backed series.
void write_series(const EpidemicSeries& series, std::ostream& out);

/// S~(t) = N - T~(t). Throws if N < max T~ (negative susceptibles).
Eigen::ArrayXd susceptible_series(const EpidemicSeries& series, double total_population);

/// Daily grouped counts of new infections; counts[0] is the cumulative count
/// at the first observed day.
GroupedCounts grouped_counts(const EpidemicSeries& series);

}  // namespace epifit
