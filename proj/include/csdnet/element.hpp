#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include <Eigen/Dense>

#include "csdnet/detail/quadrature.hpp"
#include "csdnet/errors.hpp"
#include "csdnet/model.hpp"

namespace csdnet {

/// Number of sine terms per member: `longitudinal_terms` along r and
/// `transverse_terms` along each transverse direction. (0, 0) is the
/// two-node bar element with geometric stiffness.
struct CsdConfig {
    int longitudinal_terms = 0;
    int transverse_terms = 0;

    static constexpr CsdConfig fea_baseline() { return {0, 0}; }

    int internal_dofs(int dimension) const { return longitudinal_terms + (dimension - 1) * transverse_terms; }
    int element_dofs(int dimension) const { return 2 * dimension + internal_dofs(dimension); }

    void validate() const {
        if (longitudinal_terms < 0 || transverse_terms < 0)
            throw ValidationError("internal term counts must be non-negative");
    }

    friend bool operator==(const CsdConfig&, const CsdConfig&) = default;
};

// Index layout of one member's generalized coordinates:
//   [a_x a_y (a_z) b_x b_y (b_z) | q_l^1..q_l^Nl | q_t1^1..q_t1^Nt | q_t2^1..q_t2^Nt]
// Nodal entries are displacements from the design position.
struct ElementLayout {
    int dimension = 2;
    CsdConfig config;

    int node_a(int axis) const { return axis; }
    int node_b(int axis) const { return dimension + axis; }
    int longitudinal(int i) const { return 2 * dimension + i - 1; }
    int transverse(int direction, int j) const {
        return 2 * dimension + config.longitudinal_terms + (direction - 1) * config.transverse_terms + j - 1;
    }
    int size() const { return config.element_dofs(dimension); }
};

struct MemberFrame {
    Eigen::VectorXd longitudinal;  // r
    Eigen::VectorXd transverse1;   // w1
    Eigen::VectorXd transverse2;   // w2, empty in 2D
    double length = 0.0;

    int dimension() const { return static_cast<int>(longitudinal.size()); }
    const Eigen::VectorXd& transverse(int direction) const { return direction == 1 ? transverse1 : transverse2; }
};

/// Longitudinal and transverse unit vectors of a member.
///
/// In 3D the first transverse direction is the largest of the three
/// candidates (-dy, dx, 0), (-dz, 0, dx), (0, -dz, dy); ties keep the earlier
/// one. The second is R x W1 normalized, so (r, w1, w2) is right-handed.
inline MemberFrame member_frame(const Eigen::VectorXd& start, const Eigen::VectorXd& end) {
    if (start.size() != end.size() || (start.size() != 2 && start.size() != 3))
        throw ValidationError("member_frame: endpoints must both be 2D or both 3D");
    const Eigen::VectorXd R = end - start;
    MemberFrame f;
    f.length = R.norm();
    if (!(f.length > 0.0)) throw ValidationError("member_frame: coincident endpoints");
    f.longitudinal = R / f.length;
    if (R.size() == 2) {
        f.transverse1 = Eigen::Vector2d(-R[1], R[0]) / f.length;
        return f;
    }
    const Eigen::Vector3d R3 = R;
    const Eigen::Vector3d candidates[3] = {
        {-R3[1], R3[0], 0.0},
        {-R3[2], 0.0, R3[0]},
        {0.0, -R3[2], R3[1]},
    };
    int pick = 0;
    for (int k = 1; k < 3; ++k)
        if (candidates[k].norm() > candidates[pick].norm()) pick = k;
    const Eigen::Vector3d W1 = candidates[pick];
    const Eigen::Vector3d W2 = R3.cross(W1);
    f.transverse1 = W1 / W1.norm();
    f.transverse2 = W2 / W2.norm();
    return f;
}

/// Everything the element needs about one tensioned member.
struct MemberProperties {
    Eigen::VectorXd start;
    Eigen::VectorXd end;
    double axial_rigidity = 0.0;  // EA, N
    double tension = 0.0;         // sigma, N
    double linear_density = 0.0;  // kg/m

    int dimension() const { return static_cast<int>(start.size()); }
    double length() const { return (end - start).norm(); }
    double rest_length() const { return rest_length_from_tension(axial_rigidity, length(), tension); }
    double mass() const { return linear_density * length(); }
};

inline MemberProperties member_properties(const CableNetModel& model, std::size_t member_index) {
    const MemberSpec& m = model.members().at(member_index);
    return {model.node(m.node_a).position, model.node(m.node_b).position, m.axial_rigidity(), m.tension,
            m.linear_density()};
}

namespace detail {

inline QuadratureRule element_rule(const CsdConfig& c) {
    return unit_interval_rule(std::max({4, 2 * c.longitudinal_terms, 2 * c.transverse_terms}));
}

inline void check_coords(const MemberProperties& member, const CsdConfig& config, const Eigen::VectorXd& q) {
    config.validate();
    const ElementLayout layout{member.dimension(), config};
    if (q.size() != layout.size())
        throw ValidationError("generalized coordinate vector has " + std::to_string(q.size()) +
                              " entries, expected " + std::to_string(layout.size()));
}

}  // namespace detail

/// Kinetic energy of the member for generalized velocities `qdot`, with the
/// frame frozen at the design configuration.
inline double kinetic_energy(const MemberProperties& member, const CsdConfig& config, const Eigen::VectorXd& qdot) {
    detail::check_coords(member, config, qdot);
    const int d = member.dimension();
    const ElementLayout layout{d, config};
    const MemberFrame frame = member_frame(member.start, member.end);
    const Eigen::VectorXd va = qdot.segment(layout.node_a(0), d);
    const Eigen::VectorXd vb = qdot.segment(layout.node_b(0), d);
    const double pi = std::numbers::pi;

    auto speed_sq = [&](double xi) {
        Eigen::VectorXd v = (1.0 - xi) * va + xi * vb;
        for (int i = 1; i <= config.longitudinal_terms; ++i)
            v += std::sin(i * pi * xi) * qdot[layout.longitudinal(i)] * frame.longitudinal;
        for (int dir = 1; dir < d; ++dir)
            for (int j = 1; j <= config.transverse_terms; ++j)
                v += std::sin(j * pi * xi) * qdot[layout.transverse(dir, j)] * frame.transverse(dir);
        return v.squaredNorm();
    };
    return 0.5 * member.mass() * detail::integrate_unit(detail::element_rule(config), speed_sq);
}

/// Strain energy of the member at generalized coordinates q (nonlinear).
///
/// Longitudinal part: EA/(2 L0) (dL/dxi - L0)^2 integrated over the member.
/// Transverse part: tension times the extra length sqrt(dL^2 + dW^2) - dL,
/// with the tension held at its design value. Throws NumericalError if the
/// longitudinal terms fold the member locally (dL/dxi <= 0).
inline double potential_energy(const MemberProperties& member, const CsdConfig& config, const Eigen::VectorXd& q) {
    detail::check_coords(member, config, q);
    const int d = member.dimension();
    const ElementLayout layout{d, config};
    const double pi = std::numbers::pi;
    const double L = ((member.end + q.segment(layout.node_b(0), d)) - (member.start + q.segment(layout.node_a(0), d)))
                         .norm();
    const double L0 = member.rest_length();
    const double EA = member.axial_rigidity;

    auto stretch = [&](double xi) {
        double s = L;
        for (int i = 1; i <= config.longitudinal_terms; ++i)
            s += q[layout.longitudinal(i)] * i * pi * std::cos(i * pi * xi);
        return s;
    };
    auto transverse_sq = [&](double xi) {
        double sum = 0.0;
        for (int dir = 1; dir < d; ++dir) {
            double slope = 0.0;
            for (int j = 1; j <= config.transverse_terms; ++j)
                slope += q[layout.transverse(dir, j)] * j * pi * std::cos(j * pi * xi);
            sum += slope * slope;
        }
        return sum;
    };

    const detail::QuadratureRule rule = detail::element_rule(config);
    const int probes = 64 * std::max(1, config.longitudinal_terms);
    for (int k = 0; k <= probes; ++k)
        if (!(stretch(static_cast<double>(k) / probes) > 0.0))
            throw NumericalError("potential_energy: element locally inverted");

    return detail::integrate_unit(rule, [&](double xi) {
        const double s = stretch(xi);
        if (!(s > 0.0)) throw NumericalError("potential_energy: element locally inverted");
        const double w2 = transverse_sq(xi);
        const double axial = 0.5 * EA * (s - L0) * (s - L0) / L0;
        const double lateral = member.tension * w2 / (std::sqrt(s * s + w2) + s);
        return axial + lateral;
    });
}

struct ElementMatrices {
    Eigen::MatrixXd mass;       // kg
    Eigen::MatrixXd stiffness;  // N/m
};

/// Linearized mass and stiffness of one member about its design
/// configuration (nodes at design positions, internal coordinates zero).
inline ElementMatrices element_matrices(const MemberProperties& member, const CsdConfig& config) {
    config.validate();
    const int d = member.dimension();
    const ElementLayout layout{d, config};
    const int n = layout.size();
    const MemberFrame frame = member_frame(member.start, member.end);
    const double pi = std::numbers::pi;
    const double m = member.mass();
    const double L = frame.length;
    const double L0 = member.rest_length();
    const double EA = member.axial_rigidity;

    ElementMatrices out{Eigen::MatrixXd::Zero(n, n), Eigen::MatrixXd::Zero(n, n)};
    Eigen::MatrixXd& M = out.mass;
    Eigen::MatrixXd& K = out.stiffness;

    for (int k = 0; k < d; ++k) {
        M(layout.node_a(k), layout.node_a(k)) = m / 3.0;
        M(layout.node_b(k), layout.node_b(k)) = m / 3.0;
        M(layout.node_a(k), layout.node_b(k)) = m / 6.0;
        M(layout.node_b(k), layout.node_a(k)) = m / 6.0;
    }
    // Coupling of the linear interpolation with sin(i pi xi):
    // int (1 - xi) sin = 1/(i pi),  int xi sin = (-1)^(i+1)/(i pi).
    auto couple = [&](int col, int i, const Eigen::VectorXd& dir) {
        const double ca = m / (i * pi);
        const double cb = (i % 2 == 1 ? 1.0 : -1.0) * m / (i * pi);
        for (int k = 0; k < d; ++k) {
            M(layout.node_a(k), col) = M(col, layout.node_a(k)) = ca * dir[k];
            M(layout.node_b(k), col) = M(col, layout.node_b(k)) = cb * dir[k];
        }
        M(col, col) = m / 2.0;
    };
    for (int i = 1; i <= config.longitudinal_terms; ++i) {
        const int col = layout.longitudinal(i);
        couple(col, i, frame.longitudinal);
        K(col, col) = EA * i * i * pi * pi / (2.0 * L0);
    }
    for (int dir = 1; dir < d; ++dir)
        for (int j = 1; j <= config.transverse_terms; ++j) {
            const int col = layout.transverse(dir, j);
            couple(col, j, frame.transverse(dir));
            K(col, col) = member.tension * j * j * pi * pi / (2.0 * L);
        }

    // Nodal block: axial EA/L0 along r, geometric EA (L - L0)/(L0 L) across.
    const Eigen::MatrixXd rr = frame.longitudinal * frame.longitudinal.transpose();
    const Eigen::MatrixXd Kn =
        (EA / L0) * rr + (EA * (L - L0) / (L0 * L)) * (Eigen::MatrixXd::Identity(d, d) - rr);
    K.block(layout.node_a(0), layout.node_a(0), d, d) = Kn;
    K.block(layout.node_b(0), layout.node_b(0), d, d) = Kn;
    K.block(layout.node_a(0), layout.node_b(0), d, d) = -Kn;
    K.block(layout.node_b(0), layout.node_a(0), d, d) = -Kn;
    // exact symmetry
    K = 0.5 * (K + K.transpose()).eval();
    return out;
}

inline ElementMatrices fea_baseline_matrices(const MemberProperties& member) {
    return element_matrices(member, CsdConfig::fea_baseline());
}

}  // namespace csdnet
