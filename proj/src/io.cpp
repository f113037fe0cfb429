#include "epifit/io.hpp"

#include <cstdio>
#include <ostream>

namespace epifit {

std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

void write_trajectory_csv(const SirTrajectory& trajectory, std::ostream& out) {
    out << "t,S,I,R,T\n";
    for (Eigen::Index i = 0; i < trajectory.size(); ++i) {
        const SirState st = trajectory.state(i);
        out << format_double(trajectory.times[i]) << ',' << format_double(st.S) << ','
            << format_double(st.I) << ',' << format_double(st.R) << ','
            << format_double(st.I + st.R) << '\n';
    }
}

void write_lplot_csv(const std::vector<LPlotSeries>& lplots, std::ostream& out) {
    out << "truncation_day,estimate,model,status\n";
    for (const auto& lp : lplots) {
        const char* model = lp.model == ModelKind::gld ? "gld" : "sir";
        for (const auto& p : lp.points) {
            out << p.truncation_day << ',';
            if (p.ok) out << format_double(p.estimate);
            out << ',' << model << ',' << (p.ok ? "ok" : "failed") << '\n';
        }
    }
}

std::string bbs_report_json(const BbsFit& fit, const BbsConfig& config) {
    std::string s = "{";
    s += "\"lambda\": " + format_double(fit.params.lambda);
    s += ", \"gamma\": " + format_double(fit.params.gamma);
    s += ", \"objective\": " + format_double(fit.opt.value);
    s += ", \"iterations\": " + std::to_string(fit.opt.iterations);
    s += std::string(", \"converged\": ") + (fit.opt.converged ? "true" : "false");
    s += ", \"window_s\": " + std::to_string(config.s);
    s += ", \"N\": " + format_double(config.N);
    s += "}";
    return s;
}

std::string gld_report_json(const GldFit& fit, double n_hat) {
    std::string s = "{";
    s += "\"sigma\": " + format_double(fit.params.sigma);
    s += ", \"mu\": " + format_double(fit.params.mu);
    s += ", \"beta\": " + format_double(fit.params.beta);
    s += ", \"log_likelihood\": " + format_double(-fit.opt.value);
    s += ", \"N_hat\": " + format_double(n_hat);
    s += std::string(", \"converged\": ") + (fit.opt.converged ? "true" : "false");
    s += "}";
    return s;
}

std::string forecast_report_json(const CombinedForecast& forecast) {
    std::string s = "{";
    s += "\"N_hat\": " + format_double(forecast.N_hat);
    s += ", \"lambda\": " + format_double(forecast.params.lambda);
    s += ", \"gamma\": " + format_double(forecast.params.gamma);
    s += ", \"stabilization_day\": ";
    s += forecast.stabilization_day ? std::to_string(*forecast.stabilization_day) : "null";
    s += "}";
    return s;
}

}  // namespace epifit
