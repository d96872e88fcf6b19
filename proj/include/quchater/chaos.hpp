#pragma once

#include <utility>
#include <vector>

#include "quchater/errors.hpp"

namespace quchater {

/// Logistic and Henon map parameters. The logistic control parameter must
/// stay below 4 for the perturbed recurrence to remain bounded.
struct ChaosConfig {
    double r = 3.8475;
    double a = 1.4;
    double b = 0.3;

    ChaosConfig() = default;
    explicit ChaosConfig(double r_, double a_ = 1.4, double b_ = 0.3)
        : r(r_), a(a_), b(b_) {
        validate();
    }

    void validate() const {
        if (!(r > 0.0 && r < 4.0))
            throw std::invalid_argument("chaos parameter r must lie in (0, 4)");
    }
};

/// Elementwise r * h * (1 - h). Inputs must lie in [0, 1]; outputs lie in
/// [0, r/4] which is a strict subset of [0, 1) for r < 4.
std::vector<double> logistic_step(const std::vector<double>& h, double r);

/// One Henon iteration: (x, y) -> (1 - a x^2 + y, b x).
std::pair<double, double> henon_step(double x, double y, const ChaosConfig& cfg);

/// Chaotic hidden-state update: squash h from [-1,1] to [0,1], apply the
/// logistic map, unsquash, then replace dimensions 0 and 1 with one Henon
/// step of the post-logistic pair.
std::vector<double> perturb_hidden(const std::vector<double>& h, const ChaosConfig& cfg);

} // namespace quchater
