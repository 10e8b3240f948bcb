#pragma once

// Sine-quotient Lagrange interpolation and the epsilon-uniformity functional
// max_theta max_i prod_{l != i} |sin pi(theta - theta_l)| / |sin pi(theta_i - theta_l)|.

#include <cmath>
#include <utility>
#include <vector>

#include "mosaic/errors.hpp"

namespace mosaic {

namespace detail {

inline void check_distinct_mod1(const std::vector<double>& nodes) {
    for (size_t i = 0; i < nodes.size(); ++i)
        for (size_t l = i + 1; l < nodes.size(); ++l) {
            double d = std::fabs(std::sin(M_PI * (nodes[i] - nodes[l])));
            if (d < 1e-13) throw DuplicateNodes("nodes " + std::to_string(i) + "," + std::to_string(l));
        }
}

} // namespace detail

// sum_i f_i prod_{l != i} sin pi(theta - theta_l) / sin pi(theta_i - theta_l),
// products accumulated in the log domain
inline double lagrange_reconstruct(const std::vector<std::pair<double, double>>& samples,
                                   double theta_eval) {
    if (samples.empty()) throw ConfigError("lagrange_reconstruct: no samples");
    std::vector<double> nodes;
    nodes.reserve(samples.size());
    for (auto& s : samples) nodes.push_back(s.first);
    detail::check_distinct_mod1(nodes);

    double total = 0.0;
    for (size_t i = 0; i < nodes.size(); ++i) {
        double lg = 0.0;
        int sign = 1;
        bool zero = false;
        for (size_t l = 0; l < nodes.size(); ++l) {
            if (l == i) continue;
            double num = std::sin(M_PI * (theta_eval - nodes[l]));
            double den = std::sin(M_PI * (nodes[i] - nodes[l]));
            if (num == 0.0) { zero = true; break; }
            lg += std::log(std::fabs(num)) - std::log(std::fabs(den));
            if ((num < 0.0) != (den < 0.0)) sign = -sign;
        }
        if (!zero) total += samples[i].second * sign * std::exp(lg);
    }
    return total;
}

struct UniformityReport {
    std::vector<double> nodes;
    double max_ratio_log = 0.0;  // log of the maximized product ratio
    double epsilon_star = 0.0;   // max_ratio_log / k
    double argmax_theta = 0.0;
    int grid_resolution = 0;

    bool is_uniform(double epsilon) const { return epsilon_star < epsilon; }
};

inline UniformityReport epsilon_uniform_check(const std::vector<double>& nodes, int grid_resolution = 0) {
    if (nodes.size() < 2) throw ConfigError("epsilon_uniform_check: >= 2 nodes");
    detail::check_distinct_mod1(nodes);
    const int k = static_cast<int>(nodes.size()) - 1;
    if (grid_resolution <= 0) grid_resolution = 16 * (k + 1);

    std::vector<double> denom_log(nodes.size(), 0.0);
    for (size_t i = 0; i < nodes.size(); ++i)
        for (size_t l = 0; l < nodes.size(); ++l)
            if (l != i) denom_log[i] += std::log(std::fabs(std::sin(M_PI * (nodes[i] - nodes[l]))));

    auto envelope = [&](double th) {
        double S = 0.0;
        std::vector<double> logs(nodes.size());
        for (size_t l = 0; l < nodes.size(); ++l) {
            double v = std::fabs(std::sin(M_PI * (th - nodes[l])));
            logs[l] = std::log(std::max(v, 1e-300));
            S += logs[l];
        }
        double best = -1e308;
        for (size_t i = 0; i < nodes.size(); ++i) best = std::max(best, (S - logs[i]) - denom_log[i]);
        return best;
    };

    double best = -1e308, best_th = 0.0;
    for (int g = 0; g < grid_resolution; ++g) {
        double th = (g + 0.5) / static_cast<double>(grid_resolution);
        double v = envelope(th);
        if (v > best) { best = v; best_th = th; }
    }
    // golden-section refinement inside the best grid cell
    {
        const double gr = 0.3819660112501051;
        double a = best_th - 1.0 / grid_resolution, b = best_th + 1.0 / grid_resolution;
        double x1 = a + gr * (b - a), x2 = b - gr * (b - a);
        double f1 = envelope(x1), f2 = envelope(x2);
        for (int it = 0; it < 60; ++it) {
            if (f1 < f2) {
                a = x1; x1 = x2; f1 = f2;
                x2 = b - gr * (b - a); f2 = envelope(x2);
            } else {
                b = x2; x2 = x1; f2 = f1;
                x1 = a + gr * (b - a); f1 = envelope(x1);
            }
        }
        double xm = (a + b) / 2, fm = envelope(xm);
        if (fm > best) { best = fm; best_th = xm - std::floor(xm); }
    }

    UniformityReport rep;
    rep.nodes = nodes;
    rep.max_ratio_log = std::max(best, 0.0);
    rep.epsilon_star = k > 0 ? rep.max_ratio_log / k : 0.0;
    rep.argmax_theta = best_th;
    rep.grid_resolution = grid_resolution;
    return rep;
}

} // namespace mosaic
