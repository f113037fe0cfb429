#pragma once

#include <Eigen/Dense>

#include <functional>

namespace epifit {

/// Coefficients and stopping rule for the Nelder-Mead simplex.
struct SimplexConfig {
    double reflection = 1.0;
    double expansion = 2.0;
    double contraction = 0.5;
    double shrink = 0.5;
    double epsilon = 1e-10;   ///< tolerance on objective change between iterations
    int max_iterations = 5000;
};

struct OptResult {
    Eigen::VectorXd argmin;
    double value = 0.0;
    int iterations = 0;
    bool converged = false;
};

/// Derivative-free minimization of `objective` starting from `x0`.
///
/// The initial simplex is x0 plus a per-coordinate perturbation of
/// max(0.05*|x0_i|, 1e-4). Objective values of +inf are legal and ranked
/// worst, which lets callers encode constraint violations. Deterministic:
/// identical inputs give identical outputs.
OptResult minimize(const std::function<double(const Eigen::VectorXd&)>& objective,
                   const Eigen::VectorXd& x0, const SimplexConfig& config = {});

}  // namespace epifit
