#pragma once

#include <optional>
#include <utility>

#include "epifit/nelder_mead.hpp"
#include "epifit/series.hpp"

namespace epifit {

/// Generalized logistic distribution F(t) = (1 + exp(-(t-mu)/sigma))^(-beta).
struct GldParams {
    double sigma = 1.0;  ///< scale, days, > 0
    double mu = 0.0;     ///< location, days
    double beta = 1.0;   ///< shape, > 0
};

/// Growth-equation parameterization of the same curve:
///   dT/dt = b*T*(1 - (T/N)^m),  T(0) = k*N.
struct GrowthParams {
    double b = 1.0;  ///< growth rate, per day, > 0
    double k = 0.5;  ///< initial fraction T(0)/N, in (0, 1)
    double m = 1.0;  ///< asymmetry exponent, > 0
    double N = 1.0;  ///< final size, > 0
};

/// CDF value in (0, 1), strictly increasing in t. Extreme arguments saturate
/// toward 0 or 1 through a log-space evaluation instead of overflowing.
double cdf(double t, const GldParams& params);

/// Density dF/dt, evaluated in log space for tail stability.
double pdf(double t, const GldParams& params);

/// Inverse CDF: t = mu - sigma * log(p^(-1/beta) - 1) for p in (0, 1).
double quantile(double prob, const GldParams& params);

/// Grouped truncated log-likelihood
///   k_0 log(F(t_0)/F(t_n)) + sum_i k_i log((F(t_i) - F(t_{i-1})) / F(t_n)).
/// Bins with zero count contribute nothing; a positive-count bin whose
/// probability underflows to <= 0 yields -inf rather than an exception.
double log_likelihood(const GldParams& params, const GroupedCounts& data);

struct GldFit {
    GldParams params;
    OptResult opt;
};

/// Maximum-likelihood fit over (log sigma, mu, log beta). Starts from
/// sigma = sample IQR / 2, mu = sample median, beta = 1. Requires at least
/// three bins with positive counts.
GldFit fit_mle(const GroupedCounts& data, const SimplexConfig& config = {});

/// Logistic growth T(t) = N / (1 + (N/T0 - 1) exp(-lambda*N*t)).
double logistic_growth(double t, double N, double T0, double lambda);

/// Closed-form solution of the generalized growth equation,
///   T(t) = N / (1 + (k^(-m) - 1) exp(-b*m*t))^(1/m).
/// Reduces to logistic_growth when m = 1 and b = lambda*N.
double gld_growth(double t, const GrowthParams& params);

struct InflectionPoint {
    double t = 0.0;
    double value = 0.0;  ///< T at the inflection, N*(1+m)^(-1/m)
};

/// Inflection time t* = log((k^(-m) - 1)/m) / (b*m) and the curve value
/// there. Empty when the curve is already past its inflection at t = 0.
std::optional<InflectionPoint> gld_inflection(const GrowthParams& params);

/// (sigma, mu, beta) + N -> (b, k, m, N):  b = beta/sigma, k = F(0), m = 1/beta.
GrowthParams params_to_growth(const GldParams& params, double N);

/// (b, k, m, N) -> (sigma, mu, beta) + N:  sigma = 1/(bm),
/// mu = log(k^(-m) - 1)/(bm), beta = 1/m. Exact inverse of params_to_growth.
std::pair<GldParams, double> growth_to_params(const GrowthParams& params);

/// Final-size estimate T_hat(inf) = T(t) / F(t). Throws std::domain_error
/// when F(t) underflows to zero (too early to estimate).
double final_size_estimate(double cum_infected, double t, const GldParams& params);

}  // namespace epifit
