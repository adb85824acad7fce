#pragma once

#include <cmath>
#include <numbers>
#include <vector>

namespace csdnet::detail {

struct QuadratureRule {
    std::vector<double> points;   // on [0, 1]
    std::vector<double> weights;  // sum to 1
};

// Gauss-Legendre nodes on [-1, 1] by Newton iteration on P_n.
inline QuadratureRule gauss_legendre(int order) {
    QuadratureRule rule;
    rule.points.resize(static_cast<std::size_t>(order));
    rule.weights.resize(static_cast<std::size_t>(order));
    for (int i = 0; i < order; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (order + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= order; ++k) {
                const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = pk;
            }
            dp = order * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        // recompute derivative at the converged root
        double p0 = 1.0, p1 = x;
        for (int k = 2; k <= order; ++k) {
            const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
            p0 = p1;
            p1 = pk;
        }
        dp = order * (x * p1 - p0) / (x * x - 1.0);
        rule.points[static_cast<std::size_t>(i)] = x;
        rule.weights[static_cast<std::size_t>(i)] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    return rule;
}

// Composite Gauss-Legendre rule on [0, 1].
inline QuadratureRule unit_interval_rule(int panels, int order = 10) {
    const QuadratureRule base = gauss_legendre(order);
    QuadratureRule rule;
    const double h = 1.0 / panels;
    for (int p = 0; p < panels; ++p) {
        for (std::size_t i = 0; i < base.points.size(); ++i) {
            rule.points.push_back(h * (p + 0.5 * (base.points[i] + 1.0)));
            rule.weights.push_back(0.5 * h * base.weights[i]);
        }
    }
    return rule;
}

template <class F>
double integrate_unit(const QuadratureRule& rule, F&& f) {
    double sum = 0.0;
    for (std::size_t i = 0; i < rule.points.size(); ++i) sum += rule.weights[i] * f(rule.points[i]);
    return sum;
}

}  // namespace csdnet::detail
