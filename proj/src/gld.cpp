#include "epifit/gld.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "epifit/errors.hpp"

namespace epifit {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// log(1 + e^x) without overflow; the direct form is used up to x = 30, the
// asymptotic form beyond.
double softplus(double x) {
    if (x > 30.0) return x + std::log1p(std::exp(-x));
    return std::log1p(std::exp(x));
}

void check_params(const GldParams& p) {
    if (!(p.sigma > 0)) throw std::invalid_argument("gld: sigma must be positive");
    if (!(p.beta > 0)) throw std::invalid_argument("gld: beta must be positive");
    if (!std::isfinite(p.mu)) throw std::invalid_argument("gld: mu must be finite");
}

void check_growth(const GrowthParams& p) {
    if (!(p.b > 0)) throw std::invalid_argument("growth: b must be positive");
    if (!(p.m > 0)) throw std::invalid_argument("growth: m must be positive");
    if (!(p.N > 0)) throw std::invalid_argument("growth: N must be positive");
    if (!(p.k > 0 && p.k < 1)) throw std::invalid_argument("growth: k must be in (0, 1)");
}

void check_grouped(const GroupedCounts& g) {
    const Eigen::Index n = g.boundaries.size();
    if (n < 1 || g.counts.size() != n)
        throw std::invalid_argument("grouped counts: boundary/count lengths mismatch");
    for (Eigen::Index i = 1; i < n; ++i)
        if (!(g.boundaries[i] > g.boundaries[i - 1]))
            throw std::invalid_argument("grouped counts: boundaries must increase strictly");
    if ((g.counts < 0).any()) throw std::invalid_argument("grouped counts: negative count");
    if (!(g.counts.sum() > 0)) throw std::invalid_argument("grouped counts: no mass");
}

}  // namespace

double cdf(double t, const GldParams& params) {
    check_params(params);
    const double z = (t - params.mu) / params.sigma;
    // F = (1 + e^-z)^-beta = exp(-beta * log(1 + e^-z))
    return std::exp(-params.beta * softplus(-z));
}

double pdf(double t, const GldParams& params) {
    check_params(params);
    const double z = (t - params.mu) / params.sigma;
    // f = (beta/sigma) e^-z (1 + e^-z)^-(beta+1)
    return params.beta / params.sigma * std::exp(-z - (params.beta + 1.0) * softplus(-z));
}

double quantile(double prob, const GldParams& params) {
    check_params(params);
    if (!(prob > 0 && prob < 1)) throw std::domain_error("quantile: probability must be in (0, 1)");
    // p^(-1/beta) - 1 = expm1(-log(p)/beta), kept in expm1 form for small tails
    return params.mu - params.sigma * std::log(std::expm1(-std::log(prob) / params.beta));
}

double log_likelihood(const GldParams& params, const GroupedCounts& data) {
    check_params(params);
    check_grouped(data);
    const auto& t = data.boundaries;
    const auto& k = data.counts;
    const Eigen::Index n = t.size() - 1;

    const double log_f_last = std::log(cdf(t[n], params));
    if (!std::isfinite(log_f_last)) return -kInf;

    double ll = 0.0;
    double f_prev = cdf(t[0], params);
    if (k[0] > 0) {
        if (!(f_prev > 0)) return -kInf;
        ll += k[0] * (std::log(f_prev) - log_f_last);
    }
    for (Eigen::Index i = 1; i <= n; ++i) {
        const double f_i = cdf(t[i], params);
        if (k[i] > 0) {
            const double bin = f_i - f_prev;
            if (!(bin > 0)) return -kInf;
            ll += k[i] * (std::log(bin) - log_f_last);
        }
        f_prev = f_i;
    }
    return ll;
}

namespace {

// Smallest boundary at which the cumulative grouped mass reaches q of the total.
double grouped_quantile(const GroupedCounts& g, double q) {
    const double target = q * g.counts.sum();
    double cum = 0.0;
    for (Eigen::Index i = 0; i < g.counts.size(); ++i) {
        cum += g.counts[i];
        if (cum >= target) return g.boundaries[i];
    }
    return g.boundaries[g.boundaries.size() - 1];
}

}  // namespace

GldFit fit_mle(const GroupedCounts& data, const SimplexConfig& config) {
    check_grouped(data);
    const Eigen::Index informative = (data.counts > 0).count();
    if (informative < 3)
        throw FitError("fit_mle: need at least 3 bins with positive counts, got " +
                       std::to_string(informative));

    const double median = grouped_quantile(data, 0.5);
    const double iqr = grouped_quantile(data, 0.75) - grouped_quantile(data, 0.25);
    const double sigma0 = std::max(iqr / 2.0, 0.5);  // half a bin when the IQR collapses

    Eigen::Vector3d x0{std::log(sigma0), median, 0.0};
    const auto objective = [&](const Eigen::VectorXd& x) {
        const GldParams p{std::exp(x[0]), x[1], std::exp(x[2])};
        return -log_likelihood(p, data);
    };

    GldFit fit;
    fit.opt = minimize(objective, x0, config);
    fit.params = GldParams{std::exp(fit.opt.argmin[0]), fit.opt.argmin[1],
                           std::exp(fit.opt.argmin[2])};
    return fit;
}

double logistic_growth(double t, double N, double T0, double lambda) {
    if (!(N > 0) || !(T0 > 0) || !(T0 < N))
        throw std::invalid_argument("logistic_growth: need 0 < T0 < N");
    if (!(lambda > 0)) throw std::invalid_argument("logistic_growth: lambda must be positive");
    return N * std::exp(-softplus(std::log(N / T0 - 1.0) - lambda * N * t));
}

double gld_growth(double t, const GrowthParams& params) {
    check_growth(params);
    // T = N (1 + (k^-m - 1) e^{-bmt})^{-1/m}, evaluated via logs so neither
    // the k^-m term nor the exponential can overflow.
    const double log_a = std::log(std::expm1(-params.m * std::log(params.k)));
    return params.N * std::exp(-softplus(log_a - params.b * params.m * t) / params.m);
}

std::optional<InflectionPoint> gld_inflection(const GrowthParams& params) {
    check_growth(params);
    // t* = log((k^-m - 1)/m) / (bm); only a positive-time inflection counts.
    const double log_arg =
        std::log(std::expm1(-params.m * std::log(params.k))) - std::log(params.m);
    if (!(log_arg > 0)) return std::nullopt;
    InflectionPoint p;
    p.t = log_arg / (params.b * params.m);
    p.value = gld_growth(p.t, params);
    return p;
}

GrowthParams params_to_growth(const GldParams& params, double N) {
    check_params(params);
    if (!(N > 0)) throw std::invalid_argument("params_to_growth: N must be positive");
    GrowthParams g;
    g.b = params.beta / params.sigma;
    g.m = 1.0 / params.beta;
    g.k = cdf(0.0, params);  // (1 + e^{mu/sigma})^-beta
    g.N = N;
    return g;
}

std::pair<GldParams, double> growth_to_params(const GrowthParams& params) {
    check_growth(params);
    GldParams p;
    p.sigma = 1.0 / (params.b * params.m);
    p.beta = 1.0 / params.m;
    // k^-m - 1 = expm1(-m log k); exact inverse of the k = F(0) mapping
    p.mu = std::log(std::expm1(-params.m * std::log(params.k))) / (params.b * params.m);
    return {p, params.N};
}

double final_size_estimate(double cum_infected, double t, const GldParams& params) {
    const double f = cdf(t, params);
    if (!(f > 0))
        throw std::domain_error("final_size_estimate: F(t) underflows to zero this early");
    return cum_infected / f;
}

}  // namespace epifit
