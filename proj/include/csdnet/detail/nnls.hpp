#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <vector>

#include <Eigen/Dense>

namespace csdnet::detail {

// Lawson-Hanson active-set non-negative least squares:
//   minimize ||E x - f||  subject to  x >= 0.
inline Eigen::VectorXd nnls(const Eigen::MatrixXd& E, const Eigen::VectorXd& f) {
    const Eigen::Index n = E.cols();
    Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
    if (n == 0) return x;

    std::vector<bool> passive(static_cast<std::size_t>(n), false);
    const double tol = 10.0 * std::numeric_limits<double>::epsilon() *
                       std::max<double>(1.0, E.lpNorm<Eigen::Infinity>()) *
                       static_cast<double>(std::max(E.rows(), n)) *
                       std::max(1.0, f.lpNorm<Eigen::Infinity>());

    auto solve_passive = [&]() {
        std::vector<Eigen::Index> idx;
        for (Eigen::Index j = 0; j < n; ++j)
            if (passive[static_cast<std::size_t>(j)]) idx.push_back(j);
        Eigen::MatrixXd Ep(E.rows(), static_cast<Eigen::Index>(idx.size()));
        for (std::size_t k = 0; k < idx.size(); ++k) Ep.col(static_cast<Eigen::Index>(k)) = E.col(idx[k]);
        Eigen::VectorXd zp = Ep.completeOrthogonalDecomposition().solve(f);
        Eigen::VectorXd z = Eigen::VectorXd::Zero(n);
        for (std::size_t k = 0; k < idx.size(); ++k) z[idx[k]] = zp[static_cast<Eigen::Index>(k)];
        return z;
    };

    const int max_outer = static_cast<int>(3 * n + 10);
    for (int outer = 0; outer < max_outer; ++outer) {
        Eigen::VectorXd w = E.transpose() * (f - E * x);
        Eigen::Index best = -1;
        double best_w = tol;
        for (Eigen::Index j = 0; j < n; ++j)
            if (!passive[static_cast<std::size_t>(j)] && w[j] > best_w) {
                best_w = w[j];
                best = j;
            }
        if (best < 0) break;
        passive[static_cast<std::size_t>(best)] = true;

        for (int inner = 0; inner < max_outer; ++inner) {
            Eigen::VectorXd z = solve_passive();
            bool all_positive = true;
            for (Eigen::Index j = 0; j < n; ++j)
                if (passive[static_cast<std::size_t>(j)] && z[j] <= 0.0) all_positive = false;
            if (all_positive) {
                x = z;
                break;
            }
            double alpha = std::numeric_limits<double>::infinity();
            for (Eigen::Index j = 0; j < n; ++j)
                if (passive[static_cast<std::size_t>(j)] && z[j] <= 0.0)
                    alpha = std::min(alpha, x[j] / (x[j] - z[j]));
            x += alpha * (z - x);
            for (Eigen::Index j = 0; j < n; ++j)
                if (passive[static_cast<std::size_t>(j)] && x[j] <= tol) {
                    passive[static_cast<std::size_t>(j)] = false;
                    x[j] = 0.0;
                }
        }
    }
    return x;
}

// Least-distance programming: minimize ||x|| subject to G x >= h.
// Returns nullopt when the constraints are inconsistent.
inline std::optional<Eigen::VectorXd> least_distance(const Eigen::MatrixXd& G, const Eigen::VectorXd& h) {
    const Eigen::Index k = G.cols();
    const Eigen::Index m = G.rows();
    const double scale = std::max(1.0, h.lpNorm<Eigen::Infinity>());
    Eigen::MatrixXd E(k + 1, m);
    E.topRows(k) = G.transpose();
    E.row(k) = (h / scale).transpose();
    Eigen::VectorXd f = Eigen::VectorXd::Zero(k + 1);
    f[k] = 1.0;
    const Eigen::VectorXd u = nnls(E, f);
    const Eigen::VectorXd r = E * u - f;
    if (r.norm() <= 1e-12 || r[k] >= -1e-14) return std::nullopt;
    return Eigen::VectorXd(-scale * r.head(k) / r[k]);
}

}  // namespace csdnet::detail
