#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "csdnet/element.hpp"
#include "csdnet/model.hpp"

namespace csdnet {

/// Global numbering of free degrees of freedom.
///
/// Nodal DOFs of free nodes come first (ascending node id, d per node) and
/// are shared by every incident member. Internal DOFs follow, one private
/// contiguous range per member in ascending member id. Fixed nodes get none.
class DofMap {
public:
    DofMap() = default;

    DofMap(const CableNetModel& model, const CsdConfig& config) : dimension_(model.dimension()), config_(config) {
        config.validate();
        nodal_.assign(model.nodes().size(), -1);
        int next = 0;
        for (const auto& n : model.nodes()) {
            if (n.fixed) continue;
            nodal_[static_cast<std::size_t>(n.id - 1)] = next;
            next += dimension_;
        }
        n_nodal_ = next;
        const int per_member = config.internal_dofs(dimension_);
        for (std::size_t j = 0; j < model.members().size(); ++j) {
            internal_.push_back(next);
            next += per_member;
        }
        size_ = next;
    }

    int size() const { return size_; }
    int nodal_size() const { return n_nodal_; }
    int dimension() const { return dimension_; }
    const CsdConfig& config() const { return config_; }

    // Global index of a node coordinate, -1 if the node is fixed.
    int nodal_dof(int node_id, int axis) const {
        const int base = nodal_.at(static_cast<std::size_t>(node_id - 1));
        return base < 0 ? -1 : base + axis;
    }

    int internal_offset(std::size_t member_index) const { return internal_.at(member_index); }
    int internal_count() const { return config_.internal_dofs(dimension_); }

    // Global index for each local coordinate of a member (-1 where fixed).
    std::vector<int> element_indices(const CableNetModel& model, std::size_t member_index) const {
        const MemberSpec& m = model.members().at(member_index);
        std::vector<int> idx;
        idx.reserve(static_cast<std::size_t>(config_.element_dofs(dimension_)));
        for (int node : {m.node_a, m.node_b})
            for (int k = 0; k < dimension_; ++k) idx.push_back(nodal_dof(node, k));
        for (int k = 0; k < internal_count(); ++k) idx.push_back(internal_offset(member_index) + k);
        return idx;
    }

    // Element coordinate vector gathered from a global vector (zeros at fixed DOFs).
    Eigen::VectorXd gather(const CableNetModel& model, std::size_t member_index, const Eigen::VectorXd& global) const {
        const auto idx = element_indices(model, member_index);
        Eigen::VectorXd local = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(idx.size()));
        for (std::size_t k = 0; k < idx.size(); ++k)
            if (idx[k] >= 0) local[static_cast<Eigen::Index>(k)] = global[idx[k]];
        return local;
    }

private:
    int dimension_ = 0;
    CsdConfig config_;
    std::vector<int> nodal_;
    std::vector<int> internal_;
    int n_nodal_ = 0;
    int size_ = 0;
};

inline DofMap build_dof_map(const CableNetModel& model, const CsdConfig& config) { return DofMap(model, config); }

struct GlobalSystem {
    Eigen::MatrixXd mass;
    Eigen::MatrixXd stiffness;
    DofMap dofs;
};

/// Scatter every member's linearized M and K into the free-DOF system.
/// Fixed nodal rows and columns are dropped (elimination, not penalty).
inline GlobalSystem assemble(const CableNetModel& model, const CsdConfig& config) {
    GlobalSystem sys;
    sys.dofs = build_dof_map(model, config);
    const int n = sys.dofs.size();
    sys.mass = Eigen::MatrixXd::Zero(n, n);
    sys.stiffness = Eigen::MatrixXd::Zero(n, n);
    for (std::size_t j = 0; j < model.members().size(); ++j) {
        const ElementMatrices e = element_matrices(member_properties(model, j), config);
        const auto idx = sys.dofs.element_indices(model, j);
        for (std::size_t a = 0; a < idx.size(); ++a) {
            if (idx[a] < 0) continue;
            for (std::size_t b = a; b < idx.size(); ++b) {
                if (idx[b] < 0) continue;
                const auto ia = static_cast<Eigen::Index>(a), ib = static_cast<Eigen::Index>(b);
                // accumulate into the upper triangle only
                const int r = std::min(idx[a], idx[b]), c = std::max(idx[a], idx[b]);
                const double mv = e.mass(ia, ib), kv = e.stiffness(ia, ib);
                sys.mass(r, c) += mv;
                sys.stiffness(r, c) += kv;
            }
        }
    }
    sys.mass.triangularView<Eigen::StrictlyLower>() = sys.mass.transpose();
    sys.stiffness.triangularView<Eigen::StrictlyLower>() = sys.stiffness.transpose();
    return sys;
}

}  // namespace csdnet
