#pragma once

#include <optional>
#include <vector>

#include "epifit/bbs.hpp"
#include "epifit/gld.hpp"
#include "epifit/series.hpp"
#include "epifit/sir.hpp"

namespace epifit {

enum class ModelKind { gld, sir };

struct LPlotPoint {
    int truncation_day = 0;
    double estimate = 0.0;  ///< NaN when the fit failed
    bool ok = false;
};

/// Per-truncation-time estimates of T(t_conv) (or of the final size when
/// t_conv is infinite) under one model.
struct LPlotSeries {
    ModelKind model = ModelKind::gld;
    double t_conv = 0.0;
    std::vector<LPlotPoint> points;
};

struct LPlotConfig {
    int min_days = 10;       ///< first truncation: at least this many observed days
    double min_cases = 20;   ///< ... and at least this many cumulative cases
    int s = 7;               ///< BBS window for the SIR branch
    double dt = 0.05;
    int jobs = 1;            ///< parallel workers for the per-truncation fits
    SimplexConfig simplex{};
};

/// Fits the GLD to every data prefix and records T_hat(t_conv); pass an
/// infinite t_conv for final-size estimates. Failed fits are recorded as
/// failed, never interpolated. Throws FitError when every fit fails.
LPlotSeries lplot_gld(const EpidemicSeries& series, double t_conv,
                      const LPlotConfig& config = {});

/// BBS-fits the SIR to every data prefix (with the supplied N), integrates to
/// t_conv from the anchored terminal state, and records T(t_conv).
LPlotSeries lplot_sir(const EpidemicSeries& series, double t_conv, double N,
                      const LPlotConfig& config = {});

struct StabilityConfig {
    int window = 5;      ///< trailing estimates that must agree
    double band = 0.02;  ///< relative band around their median
};

struct StabilizedEstimate {
    double n_hat = 0.0;
    int stabilization_day = 0;
};

/// Scans the L-plot for the first day whose trailing `window` successful
/// estimates all lie within +-band of their median; that median is the final
/// size estimate. Empty when the sequence never stabilizes.
std::optional<StabilizedEstimate> estimate_final_size(const LPlotSeries& lplot,
                                                      const StabilityConfig& config = {});

struct ForecastConfig {
    LPlotConfig lplot{};
    StabilityConfig stability{};
};

struct CombinedForecast {
    double N_hat = 0.0;
    std::optional<int> stabilization_day;
    SirParams params;
    SirTrajectory trajectory;  ///< forward from the last observation
    int horizon = 0;
};

/// The combination method: estimate the final size from the GLD L-plot (or
/// take the override), hand it to the BBS fit as N, then integrate the SIR
/// forward from the last observed state for `horizon` days.
CombinedForecast combined_forecast(const EpidemicSeries& series, int horizon,
                                   std::optional<double> N_override = {},
                                   const ForecastConfig& config = {});

}  // namespace epifit
