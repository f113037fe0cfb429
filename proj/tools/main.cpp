// Command-line front end: validation, model fits, L-plots, combined
// forecasts and synthetic data generation for daily case-count series.

#include <CLI11.hpp>

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "epifit/bbs.hpp"
#include "epifit/combine.hpp"
#include "epifit/errors.hpp"
#include "epifit/gld.hpp"
#include "epifit/io.hpp"
#include "epifit/series.hpp"
#include "epifit/sir.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInvalid = 1;       // validation / precondition failure
constexpr int kExitNoConvergence = 2; // fit finished without converging

namespace fs = std::filesystem;

std::ofstream open_output(const fs::path& dir, const std::string& name) {
    fs::create_directories(dir);
    std::ofstream out(dir / name);
    if (!out) throw std::runtime_error("cannot write " + (dir / name).string());
    return out;
}

int cmd_validate(const std::string& input) {
    try {
        const auto series = epifit::load_series(input);
        std::cout << "ok: " << series.size() << " rows, days " << series.first_day() << ".."
                  << series.last_day() << ", cumulative infected "
                  << static_cast<std::int64_t>(series.cum_infected()[series.size() - 1])
                  << "\n";
        return kExitOk;
    } catch (const epifit::ValidationError& e) {
        for (const auto& issue : e.issues()) std::cerr << issue << "\n";
        return kExitInvalid;
    }
}

int cmd_fit_gld(const std::string& input, const fs::path& out_dir) {
    const auto series = epifit::load_series(input);
    const auto fit = epifit::fit_mle(epifit::grouped_counts(series));
    const Eigen::Index last = series.size() - 1;
    const double n_hat = epifit::final_size_estimate(series.cum_infected()[last],
                                                     series.last_day(), fit.params);

    const std::string report = epifit::gld_report_json(fit, n_hat);
    open_output(out_dir, "gld_fit.json") << report << "\n";
    auto curve = open_output(out_dir, "gld_curve.csv");
    curve << "t,F\n";
    for (Eigen::Index i = 0; i < series.size(); ++i)
        curve << series.day(i) << ',' << epifit::format_double(epifit::cdf(series.day(i), fit.params))
              << '\n';
    std::cout << report << "\n";
    return fit.opt.converged ? kExitOk : kExitNoConvergence;
}

int cmd_fit_sir(const std::string& input, const epifit::BbsConfig& config,
                const fs::path& out_dir) {
    const auto series = epifit::load_series(input);
    const auto fit = epifit::fit_bbs(series, config);
    const std::string report = epifit::bbs_report_json(fit, config);
    open_output(out_dir, "sir_fit.json") << report << "\n";
    std::cout << report << "\n";
    return fit.opt.converged ? kExitOk : kExitNoConvergence;
}

int cmd_lplot(const std::string& input, double t_conv, std::optional<double> n,
              const epifit::LPlotConfig& config, const fs::path& out_dir) {
    const auto series = epifit::load_series(input);
    std::vector<epifit::LPlotSeries> lplots;
    lplots.push_back(epifit::lplot_gld(series, t_conv, config));
    if (std::isfinite(t_conv)) {
        if (!n)
            throw std::invalid_argument("lplot: --N is required for the SIR branch when "
                                        "--t-conv is finite");
        lplots.push_back(epifit::lplot_sir(series, t_conv, *n, config));
    }
    auto out = open_output(out_dir, "lplot.csv");
    epifit::write_lplot_csv(lplots, out);
    return kExitOk;
}

int cmd_forecast(const std::string& input, int horizon, std::optional<double> n_override,
                 const epifit::ForecastConfig& config, const fs::path& out_dir) {
    const auto series = epifit::load_series(input);
    const auto fc = epifit::combined_forecast(series, horizon, n_override, config);
    const std::string report = epifit::forecast_report_json(fc);
    open_output(out_dir, "forecast.json") << report << "\n";
    auto out = open_output(out_dir, "forecast.csv");
    epifit::write_trajectory_csv(fc.trajectory, out);
    std::cout << report << "\n";
    return kExitOk;
}

// Turns a model's cumulative curve into integer daily counts. The rounding
// path differences the rounded cumulative levels, so the counts always sum
// to the rounded curve; the Poisson path draws each day's increment. The
// model level at day 0 is deterministic seed mass credited to day 1.
struct CountSampler {
    bool poisson = false;
    std::mt19937_64 rng;

    std::int64_t draw(double mean) {
        if (!(mean > 0)) return 0;
        std::poisson_distribution<std::int64_t> dist(mean);
        return dist(rng);
    }

    std::vector<std::int64_t> daily(const std::vector<double>& cumulative, double initial) {
        std::vector<std::int64_t> counts(cumulative.size());
        if (!poisson) {
            std::int64_t prev = 0;
            for (std::size_t i = 0; i < cumulative.size(); ++i) {
                const auto cur = std::llround(cumulative[i]);
                counts[i] = cur - prev;
                prev = cur;
            }
        } else {
            double prev = initial;
            for (std::size_t i = 0; i < cumulative.size(); ++i) {
                counts[i] = draw(cumulative[i] - prev);
                prev = cumulative[i];
            }
            counts[0] += std::llround(initial);
        }
        return counts;
    }
};

int cmd_simulate(const std::string& model, int days, double noise, std::uint64_t seed,
                 double lambda, double gamma, double n_total, double i0, double r0,
                 const epifit::GldParams& gld, double dt, const std::string& out_path) {
    if (days < 1) throw std::invalid_argument("simulate: --days must be >= 1");

    std::vector<double> cum_t(static_cast<std::size_t>(days));
    std::vector<double> cum_r(static_cast<std::size_t>(days), 0.0);
    double initial_t = 0.0, initial_r = 0.0;

    if (model == "sir") {
        if (!(n_total > 0)) throw std::invalid_argument("simulate: --N must be positive");
        if (!(i0 > 0)) throw std::invalid_argument("simulate: --i0 must be positive");
        if (i0 + r0 > n_total) throw std::invalid_argument("simulate: i0 + r0 exceeds N");
        const epifit::SirState start{n_total - i0 - r0, i0, r0};
        const auto traj =
            epifit::integrate(start, epifit::SirParams{lambda, gamma}, 0.0, days, dt);
        initial_t = i0 + r0;
        initial_r = r0;
        for (int d = 1; d <= days; ++d) {
            const auto st = traj.state(d);
            cum_t[static_cast<std::size_t>(d - 1)] = st.I + st.R;
            cum_r[static_cast<std::size_t>(d - 1)] = st.R;
        }
    } else if (model == "gld") {
        if (!(n_total > 0)) throw std::invalid_argument("simulate: --N must be positive");
        for (int d = 1; d <= days; ++d)
            cum_t[static_cast<std::size_t>(d - 1)] = n_total * epifit::cdf(d, gld);
    } else {
        throw std::invalid_argument("simulate: --model must be sir or gld");
    }

    CountSampler sampler{noise != 0.0, std::mt19937_64{seed}};
    auto new_infected = sampler.daily(cum_t, initial_t);
    auto new_removed = sampler.daily(cum_r, initial_r);
    if (sampler.poisson) {
        // removals can never outrun infections
        std::int64_t tot_t = 0, tot_r = 0;
        for (std::size_t i = 0; i < new_infected.size(); ++i) {
            tot_t += new_infected[i];
            if (tot_r + new_removed[i] > tot_t) new_removed[i] = tot_t - tot_r;
            tot_r += new_removed[i];
        }
    }

    std::vector<epifit::DailyRecord> records(static_cast<std::size_t>(days));
    for (int d = 1; d <= days; ++d) {
        auto& rec = records[static_cast<std::size_t>(d - 1)];
        rec.day = d;
        rec.new_infected = new_infected[static_cast<std::size_t>(d - 1)];
        rec.new_recovered = new_removed[static_cast<std::size_t>(d - 1)];
        rec.new_died = 0;
    }
    const auto series = epifit::EpidemicSeries::from_records(std::move(records));

    if (out_path.empty() || out_path == "-") {
        epifit::write_series(series, std::cout);
    } else {
        std::ofstream out(out_path);
        if (!out) throw std::runtime_error("cannot write " + out_path);
        epifit::write_series(series, out);
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"SIR + generalized-logistic epidemic curve fitting and forecasting"};
    app.require_subcommand(1);

    std::string input, out_dir = ".", out_path, model = "sir";
    double n_value = 0.0, t_conv = std::numeric_limits<double>::infinity();
    double dt = 0.05, epsilon = 1e-10, noise = 0.0;
    double lambda = 2e-5, gamma = 0.1, i0 = 1.0, r0 = 0.0;
    epifit::GldParams gld_params{5.0, 30.0, 1.0};
    int s = 7, horizon = 30, days = 90, jobs = 1;
    std::uint64_t seed = 0;
    bool have_n = false;

    auto* validate = app.add_subcommand("validate", "validate an input CSV");
    validate->add_option("input", input, "case-count CSV")->required();

    auto* fit_gld = app.add_subcommand("fit-gld", "maximum-likelihood GLD fit");
    fit_gld->add_option("input", input)->required();
    fit_gld->add_option("--out-dir", out_dir, "output directory");

    auto* fit_sir = app.add_subcommand("fit-sir", "best-backward-solution SIR fit");
    fit_sir->add_option("input", input)->required();
    fit_sir->add_option("--N", n_value, "assumed total population")->required();
    fit_sir->add_option("--s", s, "trailing window, days");
    fit_sir->add_option("--dt", dt, "integrator step");
    fit_sir->add_option("--epsilon", epsilon, "convergence tolerance");
    fit_sir->add_option("--out-dir", out_dir);

    auto* lplot = app.add_subcommand("lplot", "per-truncation-day estimates, both models");
    lplot->add_option("input", input)->required();
    lplot->add_option("--t-conv", t_conv, "evaluation day; inf for final size (GLD only)");
    auto* lplot_n = lplot->add_option("--N", n_value, "total population for the SIR branch");
    lplot->add_option("--s", s);
    lplot->add_option("--dt", dt);
    lplot->add_option("--jobs", jobs, "parallel workers for per-truncation fits");
    lplot->add_option("--out-dir", out_dir);

    auto* forecast = app.add_subcommand("forecast", "GLD-stabilized SIR forecast");
    forecast->add_option("input", input)->required();
    forecast->add_option("--horizon", horizon, "days past the last observation");
    auto* forecast_n = forecast->add_option("--N", n_value, "override the estimated final size");
    forecast->add_option("--s", s);
    forecast->add_option("--dt", dt);
    forecast->add_option("--out-dir", out_dir);

    auto* simulate = app.add_subcommand("simulate", "generate a synthetic case-count CSV");
    simulate->add_option("--model", model, "sir or gld")->required();
    simulate->add_option("--days", days, "number of observed days");
    simulate->add_option("--noise", noise, "0 = deterministic rounding, else Poisson counts");
    simulate->add_option("--seed", seed, "RNG seed for the Poisson draws");
    simulate->add_option("--lambda", lambda, "sir: infection rate");
    simulate->add_option("--gamma", gamma, "sir: removal rate");
    simulate->add_option("--N", n_value, "total population / final size")->required();
    simulate->add_option("--i0", i0, "sir: initially infectious");
    simulate->add_option("--r0", r0, "sir: initially removed");
    simulate->add_option("--sigma", gld_params.sigma, "gld: scale, days");
    simulate->add_option("--mu", gld_params.mu, "gld: location, days");
    simulate->add_option("--beta", gld_params.beta, "gld: shape");
    simulate->add_option("--dt", dt);
    simulate->add_option("--out", out_path, "output file; stdout by default");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitInvalid;
    }
    have_n = lplot_n->count() > 0 || forecast_n->count() > 0;

    try {
        if (app.got_subcommand(validate)) return cmd_validate(input);
        if (app.got_subcommand(fit_gld)) return cmd_fit_gld(input, out_dir);
        if (app.got_subcommand(fit_sir)) {
            epifit::BbsConfig config;
            config.s = s;
            config.N = n_value;
            config.dt = dt;
            config.epsilon = epsilon;
            return cmd_fit_sir(input, config, out_dir);
        }
        if (app.got_subcommand(lplot)) {
            epifit::LPlotConfig config;
            config.s = s;
            config.dt = dt;
            config.jobs = jobs;
            return cmd_lplot(input, t_conv,
                             have_n ? std::optional<double>(n_value) : std::nullopt, config,
                             out_dir);
        }
        if (app.got_subcommand(forecast)) {
            epifit::ForecastConfig config;
            config.lplot.s = s;
            config.lplot.dt = dt;
            return cmd_forecast(input, horizon,
                                have_n ? std::optional<double>(n_value) : std::nullopt, config,
                                out_dir);
        }
        if (app.got_subcommand(simulate))
            return cmd_simulate(model, days, noise, seed, lambda, gamma, n_value, i0, r0,
                                gld_params, dt, out_path);
    } catch (const epifit::ValidationError& e) {
        for (const auto& issue : e.issues()) std::cerr << issue << "\n";
        return kExitInvalid;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInvalid;
    }
    return kExitInvalid;
}
