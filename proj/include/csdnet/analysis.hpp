#pragma once

#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "csdnet/assembly.hpp"
#include "csdnet/element.hpp"
#include "csdnet/errors.hpp"
#include "csdnet/model.hpp"

namespace csdnet {

enum class Axis { x = 0, y = 1, z = 2 };

inline Axis parse_axis(std::string_view s) {
    if (s == "x") return Axis::x;
    if (s == "y") return Axis::y;
    if (s == "z") return Axis::z;
    throw ValidationError("unknown direction \"" + std::string(s) + "\" (expected x, y or z)");
}

inline char axis_name(Axis a) { return "xyz"[static_cast<int>(a)]; }

// A nodal coordinate of the model, e.g. node 1 in y ("n1_y").
struct DofRef {
    int node = 0;
    Axis axis = Axis::x;

    std::string label() const { return "n" + std::to_string(node) + "_" + axis_name(axis); }
};

inline int global_dof(const CableNetModel& model, const DofMap& dofs, const DofRef& ref) {
    if (ref.node < 1 || ref.node > static_cast<int>(model.nodes().size()))
        throw ValidationError("unknown node " + std::to_string(ref.node));
    if (static_cast<int>(ref.axis) >= model.dimension())
        throw ValidationError("direction " + std::string(1, axis_name(ref.axis)) + " not available in a " +
                              std::to_string(model.dimension()) + "D model");
    const int dof = dofs.nodal_dof(ref.node, static_cast<int>(ref.axis));
    if (dof < 0) throw ValidationError("node " + std::to_string(ref.node) + " is fixed");
    return dof;
}

/// Harmonic point load F0 sin(2 pi f t) on one nodal coordinate.
struct PointForce {
    int node = 0;
    Axis direction = Axis::x;
    double amplitude = 0.0;     // N
    double frequency_hz = 0.0;  // Hz

    DofRef dof() const { return {node, direction}; }
};

// ---------------------------------------------------------------- modal

struct ModalResult {
    Eigen::VectorXd frequencies_hz;  // ascending
    Eigen::VectorXd eigenvalues;     // omega^2
    Eigen::MatrixXd shapes;          // mass-normalized, one column per mode
};

/// Lowest `n_modes` eigenpairs of K phi = omega^2 M phi.
inline ModalResult modal(const GlobalSystem& sys, int n_modes) {
    const int n = sys.dofs.size();
    if (n_modes < 1 || n_modes > n)
        throw ValidationError("requested " + std::to_string(n_modes) + " modes, system has " + std::to_string(n) +
                              " free DOFs");
    Eigen::LLT<Eigen::MatrixXd> chol(sys.mass);
    if (chol.info() != Eigen::Success) throw NumericalError("modal: mass matrix is not positive definite");

    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> solver(sys.stiffness, sys.mass,
                                                                     Eigen::ComputeEigenvectors | Eigen::Ax_lBx);
    if (solver.info() != Eigen::Success) throw NumericalError("modal: eigensolver failed");

    ModalResult out;
    out.eigenvalues = solver.eigenvalues().head(n_modes);
    out.shapes = solver.eigenvectors().leftCols(n_modes);
    out.frequencies_hz.resize(n_modes);
    const double scale = std::max(1.0, std::abs(solver.eigenvalues().maxCoeff()));
    for (int i = 0; i < n_modes; ++i) {
        double lambda = out.eigenvalues[i];
        if (lambda < -1e-9 * scale) throw NumericalError("modal: stiffness matrix is indefinite");
        lambda = std::max(lambda, 0.0);
        out.frequencies_hz[i] = std::sqrt(lambda) / (2.0 * std::numbers::pi);
    }
    return out;
}

inline ModalResult modal(const CableNetModel& model, const CsdConfig& config, int n_modes) {
    return modal(assemble(model, config), n_modes);
}

// Fraction of a mode carried by the nodal coordinates, in [0, 1]:
// s_n' M_nn s_n / (s_n' M_nn s_n + s_i' M_ii s_i), splitting the shape into
// nodal (n) and internal (i) parts and dropping the cross-coupling blocks.
inline double nodal_participation(const GlobalSystem& sys, const Eigen::VectorXd& shape) {
    const int nn = sys.dofs.nodal_size();
    const int ni = sys.dofs.size() - nn;
    const Eigen::VectorXd s = shape.head(nn), q = shape.tail(ni);
    const double nodal = s.dot(sys.mass.topLeftCorner(nn, nn) * s);
    const double internal = q.dot(sys.mass.bottomRightCorner(ni, ni) * q);
    return nodal + internal > 0.0 ? nodal / (nodal + internal) : 0.0;
}

// ------------------------------------------------------ response traces

enum class SampleStatus : int { ok = 0, ill_conditioned = 1, resonant = 2 };

/// Sampled output: abscissa (Hz or s) and one ordinate series per probe.
struct ResponseTrace {
    std::vector<double> abscissa;
    std::vector<std::string> labels;
    std::vector<std::vector<double>> values;  // values[probe][sample], m
    std::vector<SampleStatus> status;         // frequency sweeps only
};

inline constexpr double kIllConditioned = 1e12;

/// Undamped steady-state amplitude |x| of (K - (2 pi f)^2 M) x = F over a
/// uniform grid of `n_samples` frequencies from f_min to f_max inclusive.
/// Samples whose condition estimate exceeds 1e12 are flagged; an exactly
/// singular system is flagged resonant with amplitude +inf.
inline ResponseTrace frequency_response(const CableNetModel& model, const GlobalSystem& sys, const PointForce& load,
                                        std::span<const DofRef> probes, double f_min, double f_max, int n_samples) {
    if (!(f_min >= 0.0) || !(f_max > f_min) || !std::isfinite(f_max))
        throw ValidationError("frequency range must satisfy 0 <= f_min < f_max");
    if (n_samples < 2) throw ValidationError("frequency sweep needs at least 2 samples");
    if (probes.empty()) throw ValidationError("frequency response needs at least one probe");
    if (!std::isfinite(load.amplitude)) throw ValidationError("force amplitude must be finite");

    const int drive = global_dof(model, sys.dofs, load.dof());
    std::vector<int> probe_dofs;
    ResponseTrace trace;
    for (const auto& p : probes) {
        probe_dofs.push_back(global_dof(model, sys.dofs, p));
        trace.labels.push_back(p.label());
    }
    trace.values.assign(probes.size(), std::vector<double>(static_cast<std::size_t>(n_samples)));
    trace.status.assign(static_cast<std::size_t>(n_samples), SampleStatus::ok);

    Eigen::VectorXd force = Eigen::VectorXd::Zero(sys.dofs.size());
    force[drive] = load.amplitude;

    for (int k = 0; k < n_samples; ++k) {
        const double f = f_min + (f_max - f_min) * k / (n_samples - 1);
        trace.abscissa.push_back(f);
        const double omega = 2.0 * std::numbers::pi * f;
        const Eigen::MatrixXd D = sys.stiffness - omega * omega * sys.mass;
        Eigen::PartialPivLU<Eigen::MatrixXd> lu(D);
        const double pivot = lu.matrixLU().diagonal().cwiseAbs().minCoeff();
        Eigen::VectorXd x;
        bool singular = !(pivot > 0.0);
        if (!singular) {
            x = lu.solve(force);
            singular = !x.allFinite();
        }
        const auto ks = static_cast<std::size_t>(k);
        if (singular) {
            trace.status[ks] = SampleStatus::resonant;
            for (auto& series : trace.values) series[ks] = std::numeric_limits<double>::infinity();
            continue;
        }
        if (1.0 / lu.rcond() > kIllConditioned) trace.status[ks] = SampleStatus::ill_conditioned;
        for (std::size_t p = 0; p < probe_dofs.size(); ++p) trace.values[p][ks] = std::abs(x[probe_dofs[p]]);
    }
    return trace;
}

inline ResponseTrace frequency_response(const CableNetModel& model, const CsdConfig& config, const PointForce& load,
                                        std::span<const DofRef> probes, double f_min, double f_max, int n_samples) {
    return frequency_response(model, assemble(model, config), load, probes, f_min, f_max, n_samples);
}

// -------------------------------------------------------------- Newmark

struct NewmarkParameters {
    double beta = 0.25;
    double gamma = 0.5;
};

/// Newmark time stepping for M a + K u = f with a constant step. The default
/// parameters are the average-acceleration rule (unconditionally stable, no
/// numerical dissipation).
class NewmarkIntegrator {
public:
    NewmarkIntegrator(Eigen::MatrixXd mass, Eigen::MatrixXd stiffness, double dt, NewmarkParameters params = {})
        : M_(std::move(mass)), K_(std::move(stiffness)), dt_(dt), p_(params) {
        if (!(dt > 0.0) || !std::isfinite(dt)) throw ValidationError("time step must be positive");
        a0_ = 1.0 / (p_.beta * dt_ * dt_);
        a1_ = 1.0 / (p_.beta * dt_);
        a2_ = 1.0 / (2.0 * p_.beta) - 1.0;
        effective_.compute(K_ + a0_ * M_);
        if (effective_.info() != Eigen::Success)
            throw NumericalError("Newmark: effective stiffness is not positive definite");
        const auto n = M_.rows();
        u_ = v_ = a_ = Eigen::VectorXd::Zero(n);
    }

    void initialize(const Eigen::VectorXd& u0, const Eigen::VectorXd& v0, const Eigen::VectorXd& f0) {
        u_ = u0;
        v_ = v0;
        Eigen::LLT<Eigen::MatrixXd> m(M_);
        if (m.info() != Eigen::Success) throw NumericalError("Newmark: mass matrix is not positive definite");
        a_ = m.solve(f0 - K_ * u0);
        time_ = 0.0;
        steps_ = 0;
    }

    void step(const Eigen::VectorXd& f_next) {
        const Eigen::VectorXd rhs = f_next + M_ * (a0_ * u_ + a1_ * v_ + a2_ * a_);
        const Eigen::VectorXd u_next = effective_.solve(rhs);
        const Eigen::VectorXd a_next = a0_ * (u_next - u_) - a1_ * v_ - a2_ * a_;
        v_ += dt_ * ((1.0 - p_.gamma) * a_ + p_.gamma * a_next);
        u_ = u_next;
        a_ = a_next;
        ++steps_;
        time_ = steps_ * dt_;
        if (!u_.allFinite() || !v_.allFinite())
            throw NumericalError("Newmark: response diverged at step " + std::to_string(steps_));
    }

    const Eigen::VectorXd& displacement() const { return u_; }
    const Eigen::VectorXd& velocity() const { return v_; }
    const Eigen::VectorXd& acceleration() const { return a_; }
    double time() const { return time_; }
    long steps() const { return steps_; }
    double dt() const { return dt_; }

    // Kinetic plus strain energy of the linear system.
    double energy() const { return 0.5 * v_.dot(M_ * v_) + 0.5 * u_.dot(K_ * u_); }

private:
    Eigen::MatrixXd M_, K_;
    double dt_;
    NewmarkParameters p_;
    double a0_ = 0, a1_ = 0, a2_ = 0;
    Eigen::LLT<Eigen::MatrixXd> effective_;
    Eigen::VectorXd u_, v_, a_;
    double time_ = 0.0;
    long steps_ = 0;
};

inline double default_time_step(double excitation_hz) {
    if (!(excitation_hz > 0.0)) throw ValidationError("default time step needs a positive excitation frequency");
    return 1.0 / (200.0 * excitation_hz);
}

/// Forced response from rest under F0 sin(2 pi f t), sampled every step
/// from t = 0 to t_end at the probe coordinates.
inline ResponseTrace transient(const CableNetModel& model, const GlobalSystem& sys, const PointForce& load,
                               double t_end, std::optional<double> dt_opt, std::span<const DofRef> probes) {
    if (!(t_end > 0.0) || !std::isfinite(t_end)) throw ValidationError("t_end must be positive");
    if (!std::isfinite(load.amplitude)) throw ValidationError("force amplitude must be finite");
    const double dt = dt_opt ? *dt_opt : default_time_step(load.frequency_hz);
    if (!(dt > 0.0)) throw ValidationError("time step must be positive");

    const int drive = global_dof(model, sys.dofs, load.dof());
    ResponseTrace trace;
    std::vector<int> probe_dofs;
    for (const auto& p : probes) {
        probe_dofs.push_back(global_dof(model, sys.dofs, p));
        trace.labels.push_back(p.label());
    }
    trace.values.assign(probes.size(), {});

    const long n_steps = std::max(1L, std::lround(t_end / dt));
    const int n = sys.dofs.size();
    const double omega = 2.0 * std::numbers::pi * load.frequency_hz;
    Eigen::VectorXd force = Eigen::VectorXd::Zero(n);

    NewmarkIntegrator integrator(sys.mass, sys.stiffness, dt);
    integrator.initialize(Eigen::VectorXd::Zero(n), Eigen::VectorXd::Zero(n), force);
    auto record = [&] {
        trace.abscissa.push_back(integrator.time());
        for (std::size_t p = 0; p < probe_dofs.size(); ++p)
            trace.values[p].push_back(integrator.displacement()[probe_dofs[p]]);
    };
    record();
    for (long k = 1; k <= n_steps; ++k) {
        force[drive] = load.amplitude * std::sin(omega * k * dt);
        integrator.step(force);
        record();
    }
    return trace;
}

inline ResponseTrace transient(const CableNetModel& model, const CsdConfig& config, const PointForce& load,
                               double t_end, std::optional<double> dt, std::span<const DofRef> probes) {
    return transient(model, assemble(model, config), load, t_end, dt, probes);
}

// ---------------------------------------------------------- mode shapes

/// Displacement of the member centerline at xi (design position
/// subtracted) for local generalized coordinates q.
inline Eigen::VectorXd member_displacement(const MemberFrame& frame, const CsdConfig& config,
                                           const Eigen::VectorXd& q, double xi) {
    const int d = frame.dimension();
    const ElementLayout layout{d, config};
    const double pi = std::numbers::pi;
    Eigen::VectorXd u = (1.0 - xi) * q.segment(layout.node_a(0), d) + xi * q.segment(layout.node_b(0), d);
    for (int i = 1; i <= config.longitudinal_terms; ++i)
        u += std::sin(i * pi * xi) * q[layout.longitudinal(i)] * frame.longitudinal;
    for (int dir = 1; dir < d; ++dir)
        for (int j = 1; j <= config.transverse_terms; ++j)
            u += std::sin(j * pi * xi) * q[layout.transverse(dir, j)] * frame.transverse(dir);
    return u;
}

struct MemberShape {
    int member = 0;
    std::vector<double> xi;
    std::vector<Eigen::VectorXd> rest;          // design position
    std::vector<Eigen::VectorXd> displacement;  // scaled mode displacement
};

/// Continuous member shapes of one mode, sampled uniformly in xi and scaled
/// so the largest displacement anywhere is 1.
inline std::vector<MemberShape> mode_shape_field(const CableNetModel& model, const GlobalSystem& sys,
                                                 const ModalResult& modes, int mode_index, int samples_per_member) {
    if (mode_index < 0 || mode_index >= modes.shapes.cols())
        throw ValidationError("mode index " + std::to_string(mode_index) + " out of range");
    if (samples_per_member < 2) throw ValidationError("need at least 2 samples per member");
    const Eigen::VectorXd phi = modes.shapes.col(mode_index);
    const CsdConfig& config = sys.dofs.config();

    std::vector<MemberShape> shapes;
    double peak = 0.0;
    for (std::size_t j = 0; j < model.members().size(); ++j) {
        const MemberProperties props = member_properties(model, j);
        const MemberFrame frame = member_frame(props.start, props.end);
        const Eigen::VectorXd q = sys.dofs.gather(model, j, phi);
        MemberShape s;
        s.member = model.members()[j].id;
        for (int k = 0; k < samples_per_member; ++k) {
            const double xi = static_cast<double>(k) / (samples_per_member - 1);
            s.xi.push_back(xi);
            s.rest.push_back((1.0 - xi) * props.start + xi * props.end);
            s.displacement.push_back(member_displacement(frame, config, q, xi));
            peak = std::max(peak, s.displacement.back().norm());
        }
        shapes.push_back(std::move(s));
    }
    if (peak > 0.0)
        for (auto& s : shapes)
            for (auto& u : s.displacement) u /= peak;
    return shapes;
}

}  // namespace csdnet
