#include "epifit/bbs.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "epifit/errors.hpp"

namespace epifit {

namespace {

// Rates smaller than this are indistinguishable from zero; keeps log-space
// coordinates finite when the initial guess is exactly zero.
constexpr double kRateFloor = 1e-12;

void check_setup(const EpidemicSeries& series, const BbsConfig& config) {
    const Eigen::Index n = series.size();
    if (config.s < 1) throw std::invalid_argument("bbs: window s must be >= 1");
    if (n < config.s + 1)
        throw FitError("bbs: need at least s+1 = " + std::to_string(config.s + 1) +
                       " observed days, got " + std::to_string(n));
    if (!(series.active()[n - 1] > 0))
        throw FitError("bbs: no active cases on the last observed day; the backward problem is degenerate");
    if (config.N < series.cum_infected().maxCoeff())
        throw std::invalid_argument("bbs: N is below the observed cumulative count");
}

SirState terminal_state(const EpidemicSeries& series, double N) {
    const Eigen::Index n = series.size() - 1;
    return {N - series.cum_infected()[n], series.active()[n], series.cum_removed()[n]};
}

}  // namespace

double bbs_objective(const SirParams& params, const EpidemicSeries& series,
                     const BbsConfig& config) {
    check_setup(series, config);
    const Eigen::Index n = series.size() - 1;
    const int day_n = series.day(n);

    SirTrajectory traj;
    try {
        traj = integrate(terminal_state(series, config.N), params, day_n,
                         day_n - config.s, config.dt);
    } catch (const IntegrationError&) {
        return std::numeric_limits<double>::infinity();
    }

    // traj row j sits at day_n - j, i.e. series index n - j.
    double e = 0.0;
    for (int j = 0; j <= config.s; ++j) {
        const SirState st = traj.state(j);
        const Eigen::Index i = n - j;
        const double dT = (st.I + st.R) - series.cum_infected()[i];
        const double dR = st.R - series.cum_removed()[i];
        e += dT * dT + dR * dR;
    }
    return e;
}

BbsFit fit_bbs(const EpidemicSeries& series, const BbsConfig& config) {
    check_setup(series, config);

    const RateEstimates rates = difference_estimates(series, config.N);
    const auto lambda_mean = rolling_mean(rates.lambda, 7);
    const auto gamma_mean = rolling_mean(rates.gamma, 7);
    const auto& lambda0 = lambda_mean.back();
    const auto& gamma0 = gamma_mean.back();
    if (!lambda0 || !gamma0)
        throw FitError("bbs: no defined initial guess (no active cases in the trailing window)");

    Eigen::Vector2d x0{std::log(std::max(*lambda0, kRateFloor)),
                       std::log(std::max(*gamma0, kRateFloor))};

    const auto objective = [&](const Eigen::VectorXd& x) {
        return bbs_objective(SirParams{std::exp(x[0]), std::exp(x[1])}, series, config);
    };

    SimplexConfig simplex;
    simplex.epsilon = config.epsilon;
    simplex.max_iterations = config.max_iterations;

    BbsFit fit;
    fit.opt = minimize(objective, x0, simplex);
    fit.params = SirParams{std::exp(fit.opt.argmin[0]), std::exp(fit.opt.argmin[1])};
    return fit;
}

}  // namespace epifit
