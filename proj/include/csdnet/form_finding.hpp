#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "csdnet/detail/nnls.hpp"
#include "csdnet/errors.hpp"
#include "csdnet/model.hpp"

namespace csdnet {

/// Direction-cosine matrix mapping member tensions to the stacked force sums
/// at the free nodes. Rows come in blocks of `dimension`, one block per free
/// node (ascending id); columns are members (ascending id).
struct EquilibriumMatrix {
    Eigen::MatrixXd cosines;
    Eigen::VectorXd loads;  // external loads stacked the same way as the rows
    std::vector<int> free_nodes;
    std::vector<int> members;
    int dimension = 0;
};

inline EquilibriumMatrix build_equilibrium_matrix(const CableNetModel& model) {
    EquilibriumMatrix eq;
    eq.dimension = model.dimension();
    eq.free_nodes = model.free_node_ids();
    for (const auto& m : model.members()) eq.members.push_back(m.id);

    const int d = eq.dimension;
    std::vector<int> row_of(model.nodes().size() + 1, -1);
    for (std::size_t k = 0; k < eq.free_nodes.size(); ++k)
        row_of[static_cast<std::size_t>(eq.free_nodes[k])] = static_cast<int>(k) * d;

    const auto rows = static_cast<Eigen::Index>(eq.free_nodes.size()) * d;
    eq.cosines = Eigen::MatrixXd::Zero(rows, static_cast<Eigen::Index>(eq.members.size()));
    eq.loads = Eigen::VectorXd::Zero(rows);
    for (std::size_t j = 0; j < model.members().size(); ++j) {
        const auto& m = model.members()[j];
        const Eigen::VectorXd dir = (model.node(m.node_b).position - model.node(m.node_a).position).normalized();
        const auto col = static_cast<Eigen::Index>(j);
        if (int r = row_of[static_cast<std::size_t>(m.node_a)]; r >= 0) eq.cosines.col(col).segment(r, d) += dir;
        if (int r = row_of[static_cast<std::size_t>(m.node_b)]; r >= 0) eq.cosines.col(col).segment(r, d) -= dir;
    }
    for (std::size_t k = 0; k < eq.free_nodes.size(); ++k)
        eq.loads.segment(static_cast<Eigen::Index>(k) * d, d) = model.load_at(eq.free_nodes[k]);
    return eq;
}

struct TensionDesign {
    Eigen::VectorXd sigma;
    Eigen::VectorXd sigma_des;
    double sigma_min = 0.0;
    double residual_norm = 0.0;  // ||M_cos sigma + p||
    double kkt_residual = 0.0;   // stationarity residual relative to max(||grad||, ||sigma_des||)
    std::vector<std::size_t> active_lower_bounds;  // member indices held at sigma_min

    double objective() const { return (sigma - sigma_des).squaredNorm(); }
    bool at_bound(std::size_t member_index) const {
        return std::find(active_lower_bounds.begin(), active_lower_bounds.end(), member_index) !=
               active_lower_bounds.end();
    }
};

/// No tension vector with sigma >= sigma_min balances the net.
/// `closest` minimizes ||M_cos sigma + p|| over sigma >= sigma_min and
/// `min_residual` is that minimum (the infeasibility certificate).
class InfeasibleTensionError : public NumericalError {
public:
    InfeasibleTensionError(const std::string& what, Eigen::VectorXd closest, double min_residual)
        : NumericalError(what), closest(std::move(closest)), min_residual(min_residual) {}
    Eigen::VectorXd closest;
    double min_residual;
};

inline constexpr double kEqualityTolerance = 1e-8;
inline constexpr double kKktTolerance = 1e-8;

inline double default_sigma_min(const Eigen::VectorXd& sigma_des) {
    return 1e-6 * (sigma_des.size() > 0 ? sigma_des.maxCoeff() : 1.0);
}

namespace detail {

// Orthonormal basis of null(C) and a minimum-norm solution of C x = d.
struct AffineSet {
    Eigen::MatrixXd null_basis;
    Eigen::VectorXd particular;
    double inconsistency = 0.0;  // ||C x_p - d||
};

inline AffineSet affine_set(const Eigen::MatrixXd& C, const Eigen::VectorXd& d, Eigen::Index n) {
    AffineSet s;
    if (C.rows() == 0) {
        s.null_basis = Eigen::MatrixXd::Identity(n, n);
        s.particular = Eigen::VectorXd::Zero(n);
        return s;
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(C, Eigen::ComputeFullU | Eigen::ComputeFullV);
    svd.setThreshold(1e-11);
    const Eigen::Index r = svd.rank();
    s.particular = svd.solve(d);
    s.null_basis = svd.matrixV().rightCols(n - r);
    s.inconsistency = (C * s.particular - d).norm();
    return s;
}

inline Eigen::MatrixXd stack_constraints(const Eigen::MatrixXd& A, const std::set<Eigen::Index>& working,
                                         Eigen::Index n) {
    Eigen::MatrixXd C = Eigen::MatrixXd::Zero(A.rows() + static_cast<Eigen::Index>(working.size()), n);
    C.topRows(A.rows()) = A;
    Eigen::Index r = A.rows();
    for (auto i : working) C(r++, i) = 1.0;
    return C;
}

inline Eigen::VectorXd stack_targets(const Eigen::VectorXd& b, std::size_t n_working, double sigma_min) {
    Eigen::VectorXd d(b.size() + static_cast<Eigen::Index>(n_working));
    d.head(b.size()) = b;
    d.tail(static_cast<Eigen::Index>(n_working)).setConstant(sigma_min);
    return d;
}

}  // namespace detail

/// Tension distribution closest to `sigma_des` that balances the net with
/// every member at least `sigma_min`:
///   minimize ||sigma - sigma_des||^2  s.t.  M_cos sigma + p = 0,  sigma >= sigma_min.
///
/// A feasible start comes from least-distance programming in the null space
/// of the equilibrium equations; a primal active-set pass then settles the
/// working set and checks the KKT conditions.
inline TensionDesign find_tensions(const CableNetModel& model, const Eigen::VectorXd& sigma_des,
                                   std::optional<double> sigma_min_opt = std::nullopt) {
    const EquilibriumMatrix eq = build_equilibrium_matrix(model);
    const Eigen::Index n = static_cast<Eigen::Index>(eq.members.size());
    if (sigma_des.size() != n)
        throw ValidationError("sigma_des has " + std::to_string(sigma_des.size()) + " entries, model has " +
                              std::to_string(n) + " members");
    if (!sigma_des.allFinite() || (n > 0 && sigma_des.minCoeff() <= 0.0))
        throw ValidationError("sigma_des must be finite and positive");
    const double sigma_min = sigma_min_opt.value_or(default_sigma_min(sigma_des));
    if (!(sigma_min > 0.0) || !std::isfinite(sigma_min)) throw ValidationError("sigma_min must be positive");

    const Eigen::MatrixXd& A = eq.cosines;
    const Eigen::VectorXd b = -eq.loads;
    const double eq_tol = kEqualityTolerance * std::max(1.0, eq.loads.norm());

    auto infeasible = [&](const std::string& why) -> InfeasibleTensionError {
        // closest = sigma_min + s,  s = argmin_{s>=0} ||A s - (b - A sigma_min)||
        const Eigen::VectorXd floor = Eigen::VectorXd::Constant(n, sigma_min);
        Eigen::VectorXd closest = floor;
        if (A.rows() > 0) closest += detail::nnls(A, b - A * floor);
        const double res = A.rows() > 0 ? (A * closest - b).norm() : 0.0;
        return InfeasibleTensionError("tension design infeasible: " + why + " (minimal residual " +
                                          std::to_string(res) + " N)",
                                      closest, res);
    };

    // Feasible starting point.
    const detail::AffineSet eq_set = detail::affine_set(A, b, n);
    if (eq_set.inconsistency > eq_tol) throw infeasible("equilibrium equations are inconsistent");
    const Eigen::MatrixXd& Z = eq_set.null_basis;
    const Eigen::VectorXd projected = eq_set.particular + Z * (Z.transpose() * (sigma_des - eq_set.particular));
    Eigen::VectorXd sigma = projected;
    const Eigen::VectorXd h = Eigen::VectorXd::Constant(n, sigma_min) - projected;
    if (n > 0 && h.maxCoeff() > 0.0) {
        if (Z.cols() == 0) throw infeasible("unique equilibrium violates the lower bound");
        const auto x = detail::least_distance(Z, h);
        if (!x) throw infeasible("no equilibrium satisfies the lower bound");
        sigma = projected + Z * (*x);
    }

    // Primal active set from the feasible point.
    const double slack = 1e-9 * std::max(1.0, sigma_des.lpNorm<Eigen::Infinity>());
    std::set<Eigen::Index> working;
    for (Eigen::Index i = 0; i < n; ++i)
        if (sigma[i] <= sigma_min + slack) working.insert(i);
    {
        const Eigen::MatrixXd C = detail::stack_constraints(A, working, n);
        const Eigen::VectorXd d = detail::stack_targets(b, working.size(), sigma_min);
        if (C.rows() > 0) {
            Eigen::JacobiSVD<Eigen::MatrixXd> svd(C, Eigen::ComputeThinU | Eigen::ComputeThinV);
            svd.setThreshold(1e-11);
            sigma -= svd.solve(C * sigma - d);
        }
    }

    Eigen::VectorXd multipliers;
    Eigen::MatrixXd C_final;
    const int max_iterations = static_cast<int>(10 * n + 20);
    bool converged = false;
    for (int it = 0; it < max_iterations; ++it) {
        const Eigen::MatrixXd C = detail::stack_constraints(A, working, n);
        const Eigen::VectorXd d = detail::stack_targets(b, working.size(), sigma_min);
        const detail::AffineSet sub = detail::affine_set(C, d, n);
        const Eigen::VectorXd step = sub.null_basis * (sub.null_basis.transpose() * (sigma_des - sigma));

        if (step.norm() <= 1e-13 * std::max(1.0, sigma_des.norm())) {
            const Eigen::VectorXd grad = 2.0 * (sigma - sigma_des);
            multipliers = C.rows() > 0 ? Eigen::VectorXd(C.transpose().completeOrthogonalDecomposition().solve(grad))
                                       : Eigen::VectorXd();
            Eigen::Index worst = -1;
            double worst_value = -kKktTolerance * std::max(1.0, grad.norm());
            Eigen::Index k = A.rows();
            for (auto i : working) {
                if (multipliers[k] < worst_value) {
                    worst_value = multipliers[k];
                    worst = i;
                }
                ++k;
            }
            if (worst < 0) {
                C_final = C;
                converged = true;
                break;
            }
            working.erase(worst);
            continue;
        }

        double alpha = 1.0;
        Eigen::Index blocking = -1;
        for (Eigen::Index i = 0; i < n; ++i) {
            if (working.count(i) || step[i] >= 0.0) continue;
            const double a = (sigma_min - sigma[i]) / step[i];
            if (a < alpha) {
                alpha = std::max(0.0, a);
                blocking = i;
            }
        }
        sigma += alpha * step;
        if (blocking >= 0) {
            sigma[blocking] = sigma_min;
            working.insert(blocking);
        }
    }
    if (!converged) throw NumericalError("tension design: active-set iteration did not converge");

    for (auto i : working) sigma[i] = sigma_min;

    TensionDesign out;
    out.sigma = sigma;
    out.sigma_des = sigma_des;
    out.sigma_min = sigma_min;
    out.residual_norm = A.rows() > 0 ? (A * sigma - b).norm() : 0.0;
    out.active_lower_bounds.assign(working.begin(), working.end());
    const Eigen::VectorXd grad = 2.0 * (sigma - sigma_des);
    const Eigen::VectorXd stationarity =
        C_final.rows() > 0 ? Eigen::VectorXd(grad - C_final.transpose() * multipliers) : grad;
    out.kkt_residual = stationarity.norm() / std::max({grad.norm(), sigma_des.norm(), 1e-300});

    if (out.residual_norm > eq_tol)
        throw NumericalError("tension design: equilibrium residual " + std::to_string(out.residual_norm) +
                             " N exceeds tolerance");
    if (out.kkt_residual > kKktTolerance)
        throw NumericalError("tension design: KKT stationarity residual " + std::to_string(out.kkt_residual));
    return out;
}

}  // namespace csdnet
