#include "epifit/nelder_mead.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace epifit {

namespace {

void validate(const SimplexConfig& c) {
    if (!(c.reflection > 0)) throw std::invalid_argument("simplex: reflection must be > 0");
    if (!(c.expansion > 1)) throw std::invalid_argument("simplex: expansion must be > 1");
    if (!(c.contraction > 0 && c.contraction < 1))
        throw std::invalid_argument("simplex: contraction must be in (0, 1)");
    if (!(c.shrink > 0 && c.shrink < 1))
        throw std::invalid_argument("simplex: shrink must be in (0, 1)");
    if (!(c.epsilon > 0)) throw std::invalid_argument("simplex: epsilon must be > 0");
    if (c.max_iterations < 1) throw std::invalid_argument("simplex: max_iterations must be >= 1");
}

}  // namespace

OptResult minimize(const std::function<double(const Eigen::VectorXd&)>& objective,
                   const Eigen::VectorXd& x0, const SimplexConfig& config) {
    validate(config);
    const Eigen::Index dim = x0.size();
    if (dim < 1) throw std::invalid_argument("minimize: dimension must be >= 1");

    // NaN sorts worst; +inf is a legal "infeasible" marker.
    const auto eval = [&](const Eigen::VectorXd& x) {
        const double v = objective(x);
        return std::isnan(v) ? std::numeric_limits<double>::infinity() : v;
    };

    const double f_start = objective(x0);
    if (!std::isfinite(f_start))
        throw std::invalid_argument("minimize: objective is not finite at the starting point");

    std::vector<Eigen::VectorXd> vertices(static_cast<std::size_t>(dim) + 1, x0);
    std::vector<double> values(static_cast<std::size_t>(dim) + 1);
    values[0] = f_start;
    for (Eigen::Index i = 0; i < dim; ++i) {
        auto& v = vertices[static_cast<std::size_t>(i) + 1];
        v[i] += std::max(0.05 * std::abs(x0[i]), 1e-4);
        values[static_cast<std::size_t>(i) + 1] = eval(v);
    }

    std::vector<std::size_t> order(vertices.size());
    std::iota(order.begin(), order.end(), 0);
    const auto sort_order = [&] {
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    };
    sort_order();

    OptResult result;
    double prev_best = values[order.front()];
    int iter = 0;
    for (; iter < config.max_iterations; ++iter) {
        const std::size_t best = order.front();
        const std::size_t worst = order.back();
        const std::size_t second_worst = order[order.size() - 2];

        Eigen::VectorXd centroid = Eigen::VectorXd::Zero(dim);
        for (std::size_t idx : order)
            if (idx != worst) centroid += vertices[idx];
        centroid /= static_cast<double>(dim);

        const Eigen::VectorXd reflected =
            centroid + config.reflection * (centroid - vertices[worst]);
        const double f_reflected = eval(reflected);

        if (f_reflected < values[best]) {
            const Eigen::VectorXd expanded =
                centroid + config.expansion * (reflected - centroid);
            const double f_expanded = eval(expanded);
            if (f_expanded < f_reflected) {
                vertices[worst] = expanded;
                values[worst] = f_expanded;
            } else {
                vertices[worst] = reflected;
                values[worst] = f_reflected;
            }
        } else if (f_reflected < values[second_worst]) {
            vertices[worst] = reflected;
            values[worst] = f_reflected;
        } else {
            bool shrink = false;
            if (f_reflected < values[worst]) {
                const Eigen::VectorXd contracted =
                    centroid + config.contraction * (reflected - centroid);
                const double f_contracted = eval(contracted);
                if (f_contracted <= f_reflected) {
                    vertices[worst] = contracted;
                    values[worst] = f_contracted;
                } else {
                    shrink = true;
                }
            } else {
                const Eigen::VectorXd contracted =
                    centroid + config.contraction * (vertices[worst] - centroid);
                const double f_contracted = eval(contracted);
                if (f_contracted < values[worst]) {
                    vertices[worst] = contracted;
                    values[worst] = f_contracted;
                } else {
                    shrink = true;
                }
            }
            if (shrink) {
                for (std::size_t idx : order) {
                    if (idx == best) continue;
                    vertices[idx] = vertices[best] + config.shrink * (vertices[idx] - vertices[best]);
                    values[idx] = eval(vertices[idx]);
                }
            }
        }

        sort_order();
        const double f_best = values[order.front()];
        const double spread = values[order.back()] - f_best;
        if (std::abs(f_best - prev_best) < config.epsilon && spread < config.epsilon) {
            result.converged = true;
            ++iter;
            break;
        }
        prev_best = f_best;
    }

    result.argmin = vertices[order.front()];
    result.value = values[order.front()];
    result.iterations = iter;
    return result;
}

}  // namespace epifit
