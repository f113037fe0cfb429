#pragma once

#include "epifit/nelder_mead.hpp"
#include "epifit/series.hpp"
#include "epifit/sir.hpp"

namespace epifit {

/// Configuration of the best-backward-solution fit.
struct BbsConfig {
    int s = 7;                ///< trailing window length in days
    double epsilon = 1e-10;   ///< simplex convergence tolerance
    double N = 0.0;           ///< assumed total population, >= max T~
    double dt = 0.05;         ///< integrator step
    int max_iterations = 5000;
};

/// Squared deviation E(n, s) of the backward SIR solution from the
/// observations over the trailing window:
///   E = sum_{j=n-s..n} (T(t_j) - T~(t_j))^2 + (R(t_j) - R~(t_j))^2,
/// with the terminal state anchored to the observations so the j = n term is
/// zero by construction. Infeasible parameters (backward integration failure)
/// yield +inf rather than an exception.
double bbs_objective(const SirParams& params, const EpidemicSeries& series,
                     const BbsConfig& config);

struct BbsFit {
    SirParams params;
    OptResult opt;
};

/// Fits (lambda, gamma) by minimizing bbs_objective in log-parameter space.
/// The initial guess is the trailing 7-day mean of the difference-equation
/// estimates at the second-to-last day.
BbsFit fit_bbs(const EpidemicSeries& series, const BbsConfig& config);

}  // namespace epifit
