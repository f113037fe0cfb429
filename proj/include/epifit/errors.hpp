#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace epifit {

/// Input data failed validation. Carries one message per offending row.
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(std::vector<std::string> issues)
        : std::runtime_error(join(issues)), issues_(std::move(issues)) {}

    explicit ValidationError(std::string issue)
        : ValidationError(std::vector<std::string>{std::move(issue)}) {}

    const std::vector<std::string>& issues() const noexcept { return issues_; }

private:
    static std::string join(const std::vector<std::string>& issues) {
        std::string out;
        for (const auto& s : issues) {
            if (!out.empty()) out += '\n';
            out += s;
        }
        return out;
    }

    std::vector<std::string> issues_;
};

/// ODE integration left the feasible region (negative or non-finite state).
class IntegrationError : public std::runtime_error {
public:
    IntegrationError(double time, const std::string& what)
        : std::runtime_error(what + " at t = " + std::to_string(time)), time_(time) {}

    double time() const noexcept { return time_; }

private:
    double time_;
};

/// A fit could not be set up or carried out (too little data, degenerate state).
class FitError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace epifit
