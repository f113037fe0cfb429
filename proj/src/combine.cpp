#include "epifit/combine.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <thread>

#include "epifit/errors.hpp"

namespace epifit {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

int first_truncation_day(const EpidemicSeries& series, const LPlotConfig& config) {
    const int by_days = series.first_day() + config.min_days - 1;
    for (Eigen::Index i = 0; i < series.size(); ++i) {
        const int d = series.day(i);
        if (d >= by_days && series.cum_infected()[i] >= config.min_cases) return d;
    }
    throw FitError("lplot: series never reaches the minimum fit window (" +
                   std::to_string(config.min_days) + " days and " +
                   std::to_string(config.min_cases) + " cases)");
}

// Runs `fn(day)` for every truncation day, in parallel when asked to, and
// assembles the points in truncation order.
template <typename Fn>
std::vector<LPlotPoint> map_truncations(int day_first, int day_last, int jobs, Fn&& fn) {
    const int count = day_last - day_first + 1;
    std::vector<LPlotPoint> points(static_cast<std::size_t>(count));
    const auto run = [&](int index) {
        const int day = day_first + index;
        LPlotPoint& p = points[static_cast<std::size_t>(index)];
        p.truncation_day = day;
        try {
            p.estimate = fn(day);
            p.ok = std::isfinite(p.estimate) && p.estimate > 0;
            if (!p.ok) p.estimate = kNaN;
        } catch (const std::exception&) {
            p.estimate = kNaN;
            p.ok = false;
        }
    };
    if (jobs <= 1) {
        for (int i = 0; i < count; ++i) run(i);
    } else {
        std::atomic<int> next{0};
        std::vector<std::thread> workers;
        const int n_workers = std::min(jobs, count);
        workers.reserve(static_cast<std::size_t>(n_workers));
        for (int w = 0; w < n_workers; ++w)
            workers.emplace_back([&] {
                for (int i = next.fetch_add(1); i < count; i = next.fetch_add(1)) run(i);
            });
        for (auto& t : workers) t.join();
    }
    return points;
}

void require_some_success(const LPlotSeries& lp) {
    if (std::none_of(lp.points.begin(), lp.points.end(),
                     [](const LPlotPoint& p) { return p.ok; }))
        throw FitError("lplot: every per-truncation fit failed");
}

}  // namespace

LPlotSeries lplot_gld(const EpidemicSeries& series, double t_conv, const LPlotConfig& config) {
    const int day_first = first_truncation_day(series, config);
    LPlotSeries lp;
    lp.model = ModelKind::gld;
    lp.t_conv = t_conv;
    lp.points = map_truncations(day_first, series.last_day(), config.jobs, [&](int day) {
        const EpidemicSeries prefix = series.truncated(day);
        const GldFit fit = fit_mle(grouped_counts(prefix), config.simplex);
        if (!fit.opt.converged) throw FitError("gld fit did not converge");
        const Eigen::Index last = prefix.size() - 1;
        const double n_hat = final_size_estimate(prefix.cum_infected()[last], day, fit.params);
        return std::isinf(t_conv) ? n_hat : n_hat * cdf(t_conv, fit.params);
    });
    require_some_success(lp);
    return lp;
}

LPlotSeries lplot_sir(const EpidemicSeries& series, double t_conv, double N,
                      const LPlotConfig& config) {
    if (!std::isfinite(t_conv)) throw std::invalid_argument("lplot_sir: t_conv must be finite");
    const int day_first = first_truncation_day(series, config);
    LPlotSeries lp;
    lp.model = ModelKind::sir;
    lp.t_conv = t_conv;
    lp.points = map_truncations(day_first, series.last_day(), config.jobs, [&](int day) {
        const EpidemicSeries prefix = series.truncated(day);
        BbsConfig bbs;
        bbs.s = config.s;
        bbs.N = N;
        bbs.dt = config.dt;
        bbs.epsilon = config.simplex.epsilon;
        bbs.max_iterations = config.simplex.max_iterations;
        const BbsFit fit = fit_bbs(prefix, bbs);
        if (!fit.opt.converged) throw FitError("bbs fit did not converge");

        const Eigen::Index last = prefix.size() - 1;
        if (t_conv == day) return prefix.cum_infected()[last];
        const SirState anchored{N - prefix.cum_infected()[last], prefix.active()[last],
                                prefix.cum_removed()[last]};
        const SirTrajectory traj = integrate(anchored, fit.params, day, t_conv, config.dt);
        const SirState end = traj.state(traj.size() - 1);
        return end.I + end.R;
    });
    require_some_success(lp);
    return lp;
}

std::optional<StabilizedEstimate> estimate_final_size(const LPlotSeries& lplot,
                                                      const StabilityConfig& config) {
    if (config.window < 1) throw std::invalid_argument("estimate_final_size: window must be >= 1");
    std::vector<const LPlotPoint*> ok;
    for (const auto& p : lplot.points)
        if (p.ok) ok.push_back(&p);

    const std::size_t w = static_cast<std::size_t>(config.window);
    for (std::size_t i = w; i <= ok.size(); ++i) {
        std::vector<double> window(w);
        for (std::size_t j = 0; j < w; ++j) window[j] = ok[i - w + j]->estimate;
        std::nth_element(window.begin(), window.begin() + static_cast<std::ptrdiff_t>(w / 2),
                         window.end());
        double median = window[w / 2];
        if (w % 2 == 0) {
            const double lower =
                *std::max_element(window.begin(), window.begin() + static_cast<std::ptrdiff_t>(w / 2));
            median = 0.5 * (median + lower);
        }
        const bool stable = std::all_of(window.begin(), window.end(), [&](double v) {
            return std::abs(v - median) <= config.band * median;
        });
        if (stable) return StabilizedEstimate{median, ok[i - 1]->truncation_day};
    }
    return std::nullopt;
}

CombinedForecast combined_forecast(const EpidemicSeries& series, int horizon,
                                   std::optional<double> N_override,
                                   const ForecastConfig& config) {
    if (horizon < 0) throw std::invalid_argument("combined_forecast: horizon must be >= 0");

    CombinedForecast fc;
    fc.horizon = horizon;
    if (N_override) {
        fc.N_hat = *N_override;
    } else {
        const LPlotSeries lp =
            lplot_gld(series, std::numeric_limits<double>::infinity(), config.lplot);
        const auto est = estimate_final_size(lp, config.stability);
        if (!est)
            throw FitError("combined_forecast: final-size estimates never stabilized; "
                           "supply N explicitly");
        fc.N_hat = est->n_hat;
        fc.stabilization_day = est->stabilization_day;
    }

    BbsConfig bbs;
    bbs.s = config.lplot.s;
    bbs.N = fc.N_hat;
    bbs.dt = config.lplot.dt;
    bbs.epsilon = config.lplot.simplex.epsilon;
    bbs.max_iterations = config.lplot.simplex.max_iterations;
    const BbsFit fit = fit_bbs(series, bbs);
    fc.params = fit.params;

    const Eigen::Index last = series.size() - 1;
    const SirState anchored{fc.N_hat - series.cum_infected()[last], series.active()[last],
                            series.cum_removed()[last]};
    const int day_last = series.last_day();
    if (horizon == 0) {
        fc.trajectory.params = fit.params;
        fc.trajectory.times = Eigen::VectorXd::Constant(1, day_last);
        fc.trajectory.states.resize(1, 3);
        fc.trajectory.states.row(0) = anchored.vec().transpose();
    } else {
        fc.trajectory =
            integrate(anchored, fit.params, day_last, day_last + horizon, config.lplot.dt);
    }
    return fc;
}

}  // namespace epifit
