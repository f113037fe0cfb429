#pragma once

#include <Eigen/Dense>

#include <optional>
#include <vector>

#include "epifit/series.hpp"

namespace epifit {

/// Infection rate (per person per day) and removal rate (per day).
struct SirParams {
    double lambda = 0.0;
    double gamma = 0.0;
};

struct SirState {
    double S = 0.0;
    double I = 0.0;
    double R = 0.0;

    double total() const { return S + I + R; }
    Eigen::Vector3d vec() const { return {S, I, R}; }
    static SirState from_vec(const Eigen::Vector3d& v) { return {v[0], v[1], v[2]}; }
};

/// Integrated S/I/R samples at day boundaries. Times decrease for backward runs.
struct SirTrajectory {
    Eigen::VectorXd times;
    Eigen::MatrixX3d states;  // columns S, I, R
    SirParams params;

    Eigen::Index size() const { return times.size(); }
    SirState state(Eigen::Index i) const {
        return {states(i, 0), states(i, 1), states(i, 2)};
    }
    Eigen::ArrayXd susceptible() const { return states.col(0).array(); }
    Eigen::ArrayXd infectious() const { return states.col(1).array(); }
    Eigen::ArrayXd removed() const { return states.col(2).array(); }
    /// T(t) = I(t) + R(t), the cumulative infected count.
    Eigen::ArrayXd cumulative_infected() const {
        return (states.col(1) + states.col(2)).array();
    }
};

/// Right-hand side (dS/dt, dI/dt, dR/dt) = (-lambda*S*I, lambda*S*I - gamma*I, gamma*I).
/// The components sum to zero: the total population is conserved.
Eigen::Vector3d sir_rhs(const SirState& state, const SirParams& params);

/// Classical fixed-step RK4 from t0 to t1 (t1 < t0 integrates backward),
/// sampled at every day boundary between the endpoints. Steps are shortened
/// so samples land exactly on day boundaries; the effective step never
/// exceeds dt. Throws IntegrationError when a state component drops below
/// -1e-9 * total or turns non-finite; small negative dips within that
/// tolerance are clamped to 0 in the reported samples.
SirTrajectory integrate(const SirState& initial, const SirParams& params, double t0,
                        double t1, double dt = 0.05);

/// R0 = lambda * S(0) / gamma. Throws std::domain_error when gamma = 0.
double basic_reproduction_number(const SirParams& params, double initial_susceptible);

/// R_c(t) = lambda(t) * S(t) / gamma(t). Throws std::domain_error when gamma_t = 0.
double current_reproduction_number(double lambda_t, double gamma_t, double susceptible_t);

/// Daily rate estimates; entries are unset where the estimator is undefined
/// (active count or susceptibles zero). Position i covers the step from
/// days[i] to days[i]+1.
struct RateEstimates {
    Eigen::VectorXi days;
    std::vector<std::optional<double>> lambda;
    std::vector<std::optional<double>> gamma;
};

/// Difference-equation estimators
///   lambda(t) = (S~(t) - S~(t+1)) / (S~(t) * I~(t))
///   gamma(t)  = (R~(t+1) - R~(t)) / I~(t)
/// for each observed day except the last.
RateEstimates difference_estimates(const EpidemicSeries& series, double total_population);

/// Trailing mean over the defined values in the last `window` positions.
/// Positions whose window holds no defined value stay undefined; gaps are
/// skipped, never treated as zero.
std::vector<std::optional<double>> rolling_mean(
    const std::vector<std::optional<double>>& values, int window);

}  // namespace epifit
