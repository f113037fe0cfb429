#include "epifit/sir.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "epifit/errors.hpp"

namespace epifit {

Eigen::Vector3d sir_rhs(const SirState& state, const SirParams& params) {
    const double infection = params.lambda * state.S * state.I;
    const double removal = params.gamma * state.I;
    return {-infection, infection - removal, removal};
}

namespace {

Eigen::Vector3d rk4_step(const Eigen::Vector3d& y, const SirParams& params, double h) {
    const auto f = [&](const Eigen::Vector3d& v) {
        return sir_rhs(SirState::from_vec(v), params);
    };
    const Eigen::Vector3d k1 = f(y);
    const Eigen::Vector3d k2 = f(y + 0.5 * h * k1);
    const Eigen::Vector3d k3 = f(y + 0.5 * h * k2);
    const Eigen::Vector3d k4 = f(y + h * k3);
    return y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

}  // namespace

SirTrajectory integrate(const SirState& initial, const SirParams& params, double t0, double t1,
                        double dt) {
    if (!(dt > 0)) throw std::invalid_argument("integrate: dt must be positive");
    if (t1 == t0) throw std::invalid_argument("integrate: t1 must differ from t0");
    if (params.lambda < 0 || params.gamma < 0)
        throw std::invalid_argument("integrate: rates must be non-negative");
    if (initial.S < 0 || initial.I < 0 || initial.R < 0)
        throw std::invalid_argument("integrate: state components must be non-negative");

    // Sample at the endpoints and at every day boundary between them.
    std::vector<double> sample_times{t0};
    if (t1 > t0) {
        for (double d = std::floor(t0) + 1.0; d < t1 - 1e-12; d += 1.0) sample_times.push_back(d);
    } else {
        for (double d = std::ceil(t0) - 1.0; d > t1 + 1e-12; d -= 1.0) sample_times.push_back(d);
    }
    sample_times.push_back(t1);

    const double guard = -1e-9 * std::max(initial.total(), 1.0);

    SirTrajectory traj;
    traj.params = params;
    traj.times.resize(static_cast<Eigen::Index>(sample_times.size()));
    traj.states.resize(static_cast<Eigen::Index>(sample_times.size()), 3);

    Eigen::Vector3d y = initial.vec();
    for (std::size_t si = 0; si < sample_times.size(); ++si) {
        if (si > 0) {
            const double gap = sample_times[si] - sample_times[si - 1];
            const int steps = std::max(1, static_cast<int>(std::ceil(std::abs(gap) / dt - 1e-12)));
            const double h = gap / steps;
            double t = sample_times[si - 1];
            for (int k = 0; k < steps; ++k) {
                y = rk4_step(y, params, h);
                t += h;
                if (!y.allFinite()) throw IntegrationError(t, "integrate: state is not finite");
                if (y.minCoeff() < guard)
                    throw IntegrationError(t, "integrate: state component went negative");
            }
        }
        traj.times[static_cast<Eigen::Index>(si)] = sample_times[si];
        traj.states.row(static_cast<Eigen::Index>(si)) = y.cwiseMax(0.0).transpose();
    }
    return traj;
}

double basic_reproduction_number(const SirParams& params, double initial_susceptible) {
    if (params.gamma == 0)
        throw std::domain_error("basic_reproduction_number: gamma must be positive");
    return params.lambda * initial_susceptible / params.gamma;
}

double current_reproduction_number(double lambda_t, double gamma_t, double susceptible_t) {
    if (gamma_t == 0)
        throw std::domain_error("current_reproduction_number: gamma must be positive");
    return lambda_t * susceptible_t / gamma_t;
}

RateEstimates difference_estimates(const EpidemicSeries& series, double total_population) {
    const Eigen::Index n = series.size();
    if (n < 2) throw std::invalid_argument("difference_estimates: need at least two days");
    const Eigen::ArrayXd susceptible = susceptible_series(series, total_population);
    const Eigen::ArrayXd& removed = series.cum_removed();
    const Eigen::ArrayXd& active = series.active();

    RateEstimates est;
    est.days = series.days().head(n - 1);
    est.lambda.resize(static_cast<std::size_t>(n - 1));
    est.gamma.resize(static_cast<std::size_t>(n - 1));
    for (Eigen::Index i = 0; i + 1 < n; ++i) {
        const auto j = static_cast<std::size_t>(i);
        if (active[i] > 0) {
            if (susceptible[i] > 0)
                est.lambda[j] = (susceptible[i] - susceptible[i + 1]) /
                                (susceptible[i] * active[i]);
            est.gamma[j] = (removed[i + 1] - removed[i]) / active[i];
        }
    }
    return est;
}

std::vector<std::optional<double>> rolling_mean(const std::vector<std::optional<double>>& values,
                                                int window) {
    if (window < 1) throw std::invalid_argument("rolling_mean: window must be >= 1");
    std::vector<std::optional<double>> out(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        double sum = 0.0;
        int count = 0;
        const std::size_t lo = i + 1 >= static_cast<std::size_t>(window)
                                   ? i + 1 - static_cast<std::size_t>(window)
                                   : 0;
        for (std::size_t j = lo; j <= i; ++j) {
            if (values[j]) {
                sum += *values[j];
                ++count;
            }
        }
        if (count > 0) out[i] = sum / count;
    }
    return out;
}

}  // namespace epifit
