#include "quchater/chaos.hpp"

#include <cmath>
#include <string>

namespace quchater {

std::vector<double> logistic_step(const std::vector<double>& h, double r) {
    if (!(r > 0.0 && r < 4.0))
        throw std::invalid_argument("chaos parameter r must lie in (0, 4)");
    std::vector<double> out(h.size());
    for (std::size_t i = 0; i < h.size(); ++i) {
        const double v = h[i];
        if (!(v >= 0.0 && v <= 1.0))
            throw OutOfDomain("logistic_step input component " + std::to_string(i) +
                              " = " + std::to_string(v) + " outside [0, 1]");
        out[i] = r * v * (1.0 - v);
    }
    return out;
}

std::pair<double, double> henon_step(double x, double y, const ChaosConfig& cfg) {
    return {1.0 - cfg.a * x * x + y, cfg.b * x};
}

std::vector<double> perturb_hidden(const std::vector<double>& h, const ChaosConfig& cfg) {
    if (h.size() < 2)
        throw DimensionTooSmall("perturb_hidden needs at least 2 hidden dimensions");
    cfg.validate();

    std::vector<double> squashed(h.size());
    for (std::size_t i = 0; i < h.size(); ++i) {
        const double s = (h[i] + 1.0) * 0.5;
        if (!(s >= 0.0 && s <= 1.0))
            throw OutOfDomain("hidden component " + std::to_string(i) +
                              " outside [-1, 1] before chaotic perturbation");
        squashed[i] = s;
    }
    const std::vector<double> z = logistic_step(squashed, cfg.r);

    std::vector<double> out(h.size());
    for (std::size_t i = 0; i < h.size(); ++i) out[i] = 2.0 * z[i] - 1.0;
    const auto [hx, hy] = henon_step(out[0], out[1], cfg);
    out[0] = hx;
    out[1] = hy;
    return out;
}

} // namespace quchater
