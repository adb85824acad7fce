#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "csdnet/errors.hpp"

namespace csdnet {

struct NodeSpec {
    int id = 0;
    Eigen::VectorXd position;  // 2 or 3 coordinates, meters
    bool fixed = false;
};

struct MemberSpec {
    int id = 0;
    int node_a = 0;
    int node_b = 0;
    double youngs_modulus = 0.0;  // Pa
    double area = 0.0;            // m^2
    double density = 0.0;         // kg/m^3 (volumetric)
    double tension = 0.0;         // N

    double axial_rigidity() const { return youngs_modulus * area; }
    double linear_density() const { return density * area; }
};

struct NodalLoad {
    int node = 0;
    Eigen::VectorXd force;  // N
};

struct DerivedMemberGeometry {
    double length = 0.0;          // deformed (design) length L
    double rest_length = 0.0;     // undeformed length L0
    double linear_density = 0.0;  // kg/m
    double mass = 0.0;            // kg, linear_density * length
};

// Undeformed length from sigma = EA (L - L0) / L0.
inline double rest_length_from_tension(double axial_rigidity, double length, double tension) {
    return axial_rigidity * length / (axial_rigidity + tension);
}

inline double tension_from_rest_length(double axial_rigidity, double length, double rest_length) {
    return axial_rigidity * (length - rest_length) / rest_length;
}

/// Pin-jointed tensioned cable net: nodes, members, and external nodal loads.
///
/// Construction validates every invariant and throws ValidationError naming
/// the offending node or member. Members are kept sorted by id, which is the
/// column order of the equilibrium matrix and the order of internal DOFs.
/// Instances are immutable.
class CableNetModel {
public:
    CableNetModel(std::vector<NodeSpec> nodes, std::vector<MemberSpec> members,
                  std::vector<NodalLoad> loads = {})
        : nodes_(std::move(nodes)), members_(std::move(members)), loads_(std::move(loads)) {
        std::sort(nodes_.begin(), nodes_.end(),
                  [](const NodeSpec& a, const NodeSpec& b) { return a.id < b.id; });
        std::sort(members_.begin(), members_.end(),
                  [](const MemberSpec& a, const MemberSpec& b) { return a.id < b.id; });
        validate();
        derive();
    }

    int dimension() const { return dimension_; }
    const std::vector<NodeSpec>& nodes() const { return nodes_; }
    const std::vector<MemberSpec>& members() const { return members_; }
    const std::vector<NodalLoad>& loads() const { return loads_; }

    const NodeSpec& node(int id) const {
        if (id < 1 || id > static_cast<int>(nodes_.size()))
            throw ValidationError("unknown node " + std::to_string(id));
        return nodes_[static_cast<std::size_t>(id - 1)];
    }

    std::size_t member_index(int member_id) const {
        auto it = std::lower_bound(members_.begin(), members_.end(), member_id,
                                   [](const MemberSpec& m, int id) { return m.id < id; });
        if (it == members_.end() || it->id != member_id)
            throw ValidationError("unknown member " + std::to_string(member_id));
        return static_cast<std::size_t>(it - members_.begin());
    }

    const DerivedMemberGeometry& geometry(std::size_t member_index) const {
        return geometry_.at(member_index);
    }

    std::vector<int> free_node_ids() const {
        std::vector<int> ids;
        for (const auto& n : nodes_)
            if (!n.fixed) ids.push_back(n.id);
        return ids;
    }

    std::size_t free_node_count() const { return free_node_ids().size(); }

    // Sum of all loads applied at the node (zero vector when unloaded).
    Eigen::VectorXd load_at(int node_id) const {
        Eigen::VectorXd f = Eigen::VectorXd::Zero(dimension_);
        for (const auto& l : loads_)
            if (l.node == node_id) f += l.force;
        return f;
    }

    // Copy with member tensions replaced (ordered as members(), ascending id).
    CableNetModel with_tensions(std::span<const double> tensions) const {
        if (tensions.size() != members_.size())
            throw ValidationError("tension vector has " + std::to_string(tensions.size()) +
                                  " entries, model has " + std::to_string(members_.size()) +
                                  " members");
        auto members = members_;
        for (std::size_t i = 0; i < members.size(); ++i) members[i].tension = tensions[i];
        return CableNetModel(nodes_, std::move(members), loads_);
    }

    Eigen::VectorXd tensions() const {
        Eigen::VectorXd t(static_cast<Eigen::Index>(members_.size()));
        for (std::size_t i = 0; i < members_.size(); ++i)
            t[static_cast<Eigen::Index>(i)] = members_[i].tension;
        return t;
    }

private:
    void validate() {
        if (nodes_.empty()) throw ValidationError("model has no nodes");
        dimension_ = static_cast<int>(nodes_.front().position.size());
        if (dimension_ != 2 && dimension_ != 3)
            throw ValidationError("node " + std::to_string(nodes_.front().id) +
                                  ": position must have 2 or 3 coordinates");
        bool any_fixed = false;
        for (std::size_t i = 0; i < nodes_.size(); ++i) {
            const auto& n = nodes_[i];
            const std::string who = "node " + std::to_string(n.id);
            if (n.id != static_cast<int>(i) + 1)
                throw ValidationError(who + ": node ids must be unique and contiguous from 1");
            if (n.position.size() != dimension_)
                throw ValidationError(who + ": dimensionality differs from node 1");
            if (!n.position.allFinite()) throw ValidationError(who + ": non-finite coordinate");
            any_fixed = any_fixed || n.fixed;
        }
        if (!any_fixed) throw ValidationError("model has no fixed node");

        std::vector<int> degree(nodes_.size(), 0);
        for (std::size_t i = 0; i < members_.size(); ++i) {
            const auto& m = members_[i];
            const std::string who = "member " + std::to_string(m.id);
            if (i > 0 && members_[i - 1].id == m.id) throw ValidationError(who + ": duplicate id");
            auto known = [&](int id) { return id >= 1 && id <= static_cast<int>(nodes_.size()); };
            if (!known(m.node_a) || !known(m.node_b))
                throw ValidationError(who + ": references unknown node");
            if (m.node_a == m.node_b) throw ValidationError(who + ": both ends on the same node");
            if (!(m.youngs_modulus > 0.0) || !std::isfinite(m.youngs_modulus))
                throw ValidationError(who + ": non-positive Young's modulus");
            if (!(m.area > 0.0) || !std::isfinite(m.area))
                throw ValidationError(who + ": non-positive area");
            if (!(m.density > 0.0) || !std::isfinite(m.density))
                throw ValidationError(who + ": non-positive density");
            if (!(m.tension > 0.0) || !std::isfinite(m.tension))
                throw ValidationError(who + ": non-positive tension");
            const double len = (node(m.node_b).position - node(m.node_a).position).norm();
            if (!(len > 0.0)) throw ValidationError(who + ": coincident end nodes");
            ++degree[static_cast<std::size_t>(m.node_a - 1)];
            ++degree[static_cast<std::size_t>(m.node_b - 1)];
        }
        for (const auto& n : nodes_)
            if (!n.fixed && degree[static_cast<std::size_t>(n.id - 1)] < 2)
                throw ValidationError("node " + std::to_string(n.id) +
                                      ": free node needs at least 2 members");
        for (const auto& l : loads_) {
            const std::string who = "load on node " + std::to_string(l.node);
            if (l.node < 1 || l.node > static_cast<int>(nodes_.size()))
                throw ValidationError(who + ": unknown node");
            if (l.force.size() != dimension_) throw ValidationError(who + ": wrong dimension");
            if (!l.force.allFinite()) throw ValidationError(who + ": non-finite force");
        }
    }

    void derive() {
        geometry_.clear();
        geometry_.reserve(members_.size());
        for (const auto& m : members_) {
            DerivedMemberGeometry g;
            g.length = (node(m.node_b).position - node(m.node_a).position).norm();
            g.rest_length = rest_length_from_tension(m.axial_rigidity(), g.length, m.tension);
            g.linear_density = m.linear_density();
            g.mass = g.linear_density * g.length;
            geometry_.push_back(g);
        }
    }

    std::vector<NodeSpec> nodes_;
    std::vector<MemberSpec> members_;
    std::vector<NodalLoad> loads_;
    std::vector<DerivedMemberGeometry> geometry_;
    int dimension_ = 0;
};

/// Out-of-balance force at each free node: the sum over incident members of
/// tension times the unit vector toward the far end, plus the external load.
/// Keyed by node id; zero everywhere iff the net is in static equilibrium.
inline std::map<int, Eigen::VectorXd> equilibrium_residual(const CableNetModel& model) {
    std::map<int, Eigen::VectorXd> residual;
    for (int id : model.free_node_ids()) residual.emplace(id, model.load_at(id));
    for (const auto& m : model.members()) {
        const Eigen::VectorXd d = model.node(m.node_b).position - model.node(m.node_a).position;
        const Eigen::VectorXd pull = m.tension * d / d.norm();
        if (auto it = residual.find(m.node_a); it != residual.end()) it->second += pull;
        if (auto it = residual.find(m.node_b); it != residual.end()) it->second -= pull;
    }
    return residual;
}

inline double max_residual_norm(const std::map<int, Eigen::VectorXd>& residual) {
    double worst = 0.0;
    for (const auto& [id, r] : residual) worst = std::max(worst, r.norm());
    return worst;
}

}  // namespace csdnet
