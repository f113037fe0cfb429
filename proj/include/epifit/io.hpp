#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "epifit/bbs.hpp"
#include "epifit/combine.hpp"
#include "epifit/gld.hpp"
#include "epifit/sir.hpp"

namespace epifit {

/// Formats with 17 significant digits so reruns are byte-identical and
/// values round-trip exactly.
std::string format_double(double x);

/// Trajectory CSV: `t,S,I,R,T`.
void write_trajectory_csv(const SirTrajectory& trajectory, std::ostream& out);

/// L-plot CSV: `truncation_day,estimate,model,status`. Failed points carry an
/// empty estimate field.
void write_lplot_csv(const std::vector<LPlotSeries>& lplots, std::ostream& out);

/// `{lambda, gamma, objective, iterations, converged, window_s, N}`
std::string bbs_report_json(const BbsFit& fit, const BbsConfig& config);

/// `{sigma, mu, beta, log_likelihood, N_hat, converged}`
std::string gld_report_json(const GldFit& fit, double n_hat);

/// `{N_hat, lambda, gamma, stabilization_day}`; the day is null when the
/// final size was supplied rather than detected.
std::string forecast_report_json(const CombinedForecast& forecast);

}  // namespace epifit
