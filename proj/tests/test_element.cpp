#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "csdnet/element.hpp"
#include "support/oracles.hpp"

using namespace csdnet;
using std::numbers::pi;

namespace {

MemberProperties steel_member(const Eigen::VectorXd& a, const Eigen::VectorXd& b, double tension) {
    const double area = 3.14e-6;
    return {a, b, 200e9 * area, tension, 7850.0 * area};
}

bool orthonormal_right_handed(const MemberFrame& f) {
    const double tol = 1e-12;
    if (std::abs(f.longitudinal.norm() - 1.0) > tol || std::abs(f.transverse1.norm() - 1.0) > tol) return false;
    if (std::abs(f.longitudinal.dot(f.transverse1)) > tol) return false;
    if (f.dimension() == 2) {
        // w = r rotated +90 degrees
        return std::abs(f.longitudinal[0] * f.transverse1[1] - f.longitudinal[1] * f.transverse1[0] - 1.0) < tol;
    }
    const Eigen::Vector3d r = f.longitudinal, w1 = f.transverse1, w2 = f.transverse2;
    return std::abs(w2.norm() - 1.0) < tol && std::abs(r.dot(w2)) < tol && std::abs(w1.dot(w2)) < tol &&
           (r.cross(w1) - w2).norm() < tol;
}

}  // namespace

TEST(CsdConfig, DofCounts) {
    EXPECT_EQ(CsdConfig::fea_baseline().element_dofs(2), 4);
    EXPECT_EQ((CsdConfig{0, 1}).element_dofs(2), 5);
    EXPECT_EQ((CsdConfig{2, 3}).element_dofs(3), 6 + 2 + 6);
    EXPECT_THROW((CsdConfig{-1, 0}).validate(), ValidationError);
    const ElementLayout layout{3, {2, 3}};
    EXPECT_EQ(layout.longitudinal(1), 6);
    EXPECT_EQ(layout.transverse(1, 1), 8);
    EXPECT_EQ(layout.transverse(2, 3), 13);
}

TEST(MemberFrame, PlanarAlongX) {
    const MemberFrame f = member_frame(Eigen::Vector2d(0, 0), Eigen::Vector2d(2, 0));
    EXPECT_DOUBLE_EQ(f.length, 2.0);
    EXPECT_NEAR((f.longitudinal - Eigen::Vector2d(1, 0)).norm(), 0.0, 1e-15);
    EXPECT_NEAR((f.transverse1 - Eigen::Vector2d(0, 1)).norm(), 0.0, 1e-15);
}

TEST(MemberFrame, SpatialAlongZ) {
    const MemberFrame f = member_frame(Eigen::Vector3d(0, 0, 0), Eigen::Vector3d(0, 0, 1));
    EXPECT_NEAR((f.transverse1 - Eigen::Vector3d(-1, 0, 0)).norm(), 0.0, 1e-15);
    EXPECT_NEAR((f.transverse2 - Eigen::Vector3d(0, -1, 0)).norm(), 0.0, 1e-15);
}

TEST(MemberFrame, RandomFramesOrthonormalProperty) {
    std::mt19937 rng(2024);
    for (int trial = 0; trial < 1000; ++trial) {
        const int dim = trial % 2 == 0 ? 2 : 3;
        const MemberProperties m = oracle::random_member(rng, dim);
        EXPECT_TRUE(orthonormal_right_handed(member_frame(m.start, m.end))) << "trial " << trial;
    }
    EXPECT_THROW(member_frame(Eigen::Vector3d(1, 1, 1), Eigen::Vector3d(1, 1, 1)), ValidationError);
}

TEST(KineticEnergy, RigidTranslation) {
    const MemberProperties m = steel_member(Eigen::Vector2d(0, 0), Eigen::Vector2d(1.5, 0.5), 300.0);
    const CsdConfig c{1, 2};
    Eigen::VectorXd qdot = Eigen::VectorXd::Zero(c.element_dofs(2));
    qdot.head(4) << 0.3, -0.4, 0.3, -0.4;
    EXPECT_NEAR(kinetic_energy(m, c, qdot), 0.5 * m.mass() * 0.25, 1e-15);
}

TEST(KineticEnergy, SingleTransverseTerm) {
    const MemberProperties m = steel_member(Eigen::Vector3d(0, 0, 0), Eigen::Vector3d(0, 2, 1), 300.0);
    const CsdConfig c{0, 1};
    Eigen::VectorXd qdot = Eigen::VectorXd::Zero(c.element_dofs(3));
    qdot[ElementLayout{3, c}.transverse(2, 1)] = 1.0;
    // (1/2) m int sin^2 = m / 4
    EXPECT_NEAR(kinetic_energy(m, c, qdot), m.mass() / 4.0, 1e-15);
}

TEST(PotentialEnergy, DesignConfiguration) {
    const MemberProperties m = steel_member(Eigen::Vector2d(0, 0), Eigen::Vector2d(1, 0), 628.0);
    const CsdConfig c{2, 2};
    const double L = 1.0, L0 = m.rest_length(), EA = m.axial_rigidity;
    const Eigen::VectorXd q0 = Eigen::VectorXd::Zero(c.element_dofs(2));
    EXPECT_NEAR(potential_energy(m, c, q0), EA * (L - L0) * (L - L0) / (2.0 * L0), 1e-12);
}

TEST(PotentialEnergy, SmallTransverseAmplitude) {
    const MemberProperties m = steel_member(Eigen::Vector2d(0, 0), Eigen::Vector2d(1, 0), 628.0);
    const CsdConfig c{0, 1};
    Eigen::VectorXd q = Eigen::VectorXd::Zero(5);
    const double V0 = potential_energy(m, c, q);
    const double amp = 1e-4;
    q[4] = amp;
    const double expected = amp * amp * pi * pi * m.tension / (4.0 * m.length());
    EXPECT_NEAR((potential_energy(m, c, q) - V0) / expected, 1.0, 1e-6);
}

TEST(PotentialEnergy, LongitudinalIsExactlyQuadratic) {
    const MemberProperties m = steel_member(Eigen::Vector2d(0, 0), Eigen::Vector2d(1, 0), 628.0);
    const CsdConfig c{1, 0};
    Eigen::VectorXd q = Eigen::VectorXd::Zero(5);
    const double V0 = potential_energy(m, c, q);
    for (double amp : {1e-6, 1e-4, 1e-2}) {
        q[4] = amp;
        const double expected = amp * amp * m.axial_rigidity * pi * pi / (4.0 * m.rest_length());
        EXPECT_NEAR((potential_energy(m, c, q) - V0) / expected, 1.0, 1e-9) << amp;
    }
}

TEST(PotentialEnergy, RejectsInvertedElement) {
    const MemberProperties m = steel_member(Eigen::Vector2d(0, 0), Eigen::Vector2d(1, 0), 628.0);
    const CsdConfig c{1, 0};
    Eigen::VectorXd q = Eigen::VectorXd::Zero(5);
    q[4] = 1.0;  // d(length)/dxi = 1 + pi cos(pi xi) dips below zero
    EXPECT_THROW(potential_energy(m, c, q), NumericalError);
    EXPECT_THROW(potential_energy(m, c, Eigen::VectorXd::Zero(4)), ValidationError);
}

TEST(ElementMatrices, AxisAlignedEntries) {
    const MemberProperties m = steel_member(Eigen::Vector2d(0, 0), Eigen::Vector2d(1, 0), 628.0);
    const ElementMatrices e = fea_baseline_matrices(m);
    const double EA = m.axial_rigidity, L0 = m.rest_length();
    EXPECT_NEAR(e.stiffness(0, 0), EA / L0, 1e-9 * EA);
    EXPECT_NEAR(e.stiffness(1, 1), m.tension / 1.0, 1e-9);
    EXPECT_NEAR(e.stiffness(0, 2), -EA / L0, 1e-9 * EA);
    EXPECT_NEAR(e.stiffness(0, 1), 0.0, 1e-9);
    EXPECT_NEAR(e.mass(0, 0), m.mass() / 3.0, 1e-18);
    EXPECT_NEAR(e.mass(0, 2), m.mass() / 6.0, 1e-18);
}

// Closed-form planar member with one longitudinal and one transverse term.
// The y0 row of the transverse column carries +(x1 - x0), which is what the
// kinetic energy integral gives.
TEST(ElementMatrices, MatchesClosedFormPlanarMatrices) {
    const double x0 = -0.1228, y0 = -0.1964, x1 = 0.8772, y1 = -1.1964;
    const MemberProperties mem = steel_member(Eigen::Vector2d(x0, y0), Eigen::Vector2d(x1, y1), 707.10);
    const double L = mem.length(), L0 = mem.rest_length(), EA = mem.axial_rigidity, m = mem.mass();
    const double c = 1.0 / (pi * L);

    Eigen::MatrixXd M(6, 6);
    M << 1.0 / 3, 0, 1.0 / 6, 0, (x1 - x0) * c, (y0 - y1) * c,  //
        0, 1.0 / 3, 0, 1.0 / 6, (y1 - y0) * c, (x1 - x0) * c,   //
        1.0 / 6, 0, 1.0 / 3, 0, (x1 - x0) * c, (y0 - y1) * c,   //
        0, 1.0 / 6, 0, 1.0 / 3, (y1 - y0) * c, (x1 - x0) * c,   //
        (x1 - x0) * c, (y1 - y0) * c, (x1 - x0) * c, (y1 - y0) * c, 0.5, 0,  //
        (y0 - y1) * c, (x1 - x0) * c, (y0 - y1) * c, (x1 - x0) * c, 0, 0.5;
    M *= m;

    const double dx = x0 - x1, dy = y0 - y1;
    const double a = EA / (4.0 * L0 * L * L), g = EA * (2.0 * L0 - 2.0 * L) / (2.0 * L0 * L * L * L);
    const double k11 = a * 4 * dx * dx - g * dy * dy;
    const double k12 = a * 4 * dx * dy + g * dx * dy;
    const double k22 = a * 4 * dy * dy - g * dx * dx;
    Eigen::MatrixXd K = Eigen::MatrixXd::Zero(6, 6);
    K.topLeftCorner(4, 4) << k11, k12, -k11, -k12,  //
        k12, k22, -k12, -k22,                        //
        -k11, -k12, k11, k12,                        //
        -k12, -k22, k12, k22;
    K(4, 4) = EA * pi * pi / (2.0 * L0);
    K(5, 5) = EA * pi * pi / (2.0 * L0) - EA * pi * pi / (2.0 * L);

    const ElementMatrices e = element_matrices(mem, {1, 1});
    EXPECT_LT(oracle::relative_error(e.mass, M), 1e-12);
    EXPECT_LT(oracle::relative_error(e.stiffness, K), 1e-9);
    // the transverse diagonal through the tension
    EXPECT_NEAR(e.stiffness(5, 5), mem.tension * pi * pi / (2.0 * L), 1e-6);
}

TEST(ElementMatrices, HessianOfEnergiesProperty) {
    std::mt19937 rng(99);
    for (int trial = 0; trial < 40; ++trial) {
        const int dim = 2 + trial % 2;
        const MemberProperties m = oracle::random_member(rng, dim);
        const CsdConfig c = oracle::random_config(rng);
        const ElementMatrices e = element_matrices(m, c);
        const Eigen::VectorXd q0 = Eigen::VectorXd::Zero(c.element_dofs(dim));
        const auto V = [&](const Eigen::VectorXd& q) { return potential_energy(m, c, q); };
        const auto T = [&](const Eigen::VectorXd& q) { return kinetic_energy(m, c, q); };
        const Eigen::MatrixXd HK = oracle::fd_hessian(V, q0, 1e-5 * m.length());
        const Eigen::MatrixXd HM = oracle::fd_hessian(T, q0, 1.0);
        EXPECT_LT(oracle::relative_error(HK, e.stiffness), 1e-5) << "trial " << trial;
        EXPECT_LT(oracle::relative_error(HM, e.mass), 1e-8) << "trial " << trial;
    }
}

TEST(ElementMatrices, SymmetricSemidefiniteWithTranslationNullspaceProperty) {
    std::mt19937 rng(3);
    for (int trial = 0; trial < 100; ++trial) {
        const int dim = 2 + trial % 2;
        const MemberProperties m = oracle::random_member(rng, dim);
        const CsdConfig c = oracle::random_config(rng);
        const ElementMatrices e = element_matrices(m, c);
        ASSERT_LT((e.stiffness - e.stiffness.transpose()).norm(), 1e-12 * e.stiffness.norm());
        ASSERT_LT((e.mass - e.mass.transpose()).norm(), 1e-15 * e.mass.norm());

        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ks(e.stiffness);
        const double kmax = ks.eigenvalues().maxCoeff();
        EXPECT_GT(ks.eigenvalues().minCoeff(), -1e-10 * kmax);
        // exactly d zero eigenvalues: rigid translations
        int zeros = 0;
        for (Eigen::Index i = 0; i < ks.eigenvalues().size(); ++i)
            if (std::abs(ks.eigenvalues()[i]) < 1e-10 * kmax) ++zeros;
        EXPECT_EQ(zeros, dim) << "trial " << trial;
        for (int axis = 0; axis < dim; ++axis) {
            Eigen::VectorXd t = Eigen::VectorXd::Zero(c.element_dofs(dim));
            t[axis] = t[dim + axis] = 1.0;
            EXPECT_LT((e.stiffness * t).norm(), 1e-10 * kmax);
        }

        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ms(e.mass);
        EXPECT_GT(ms.eigenvalues().minCoeff(), 0.0) << "trial " << trial;
    }
}

TEST(ElementMatrices, InternalCoordinatesDecoupledInStiffnessProperty) {
    std::mt19937 rng(17);
    for (int trial = 0; trial < 50; ++trial) {
        const int dim = 2 + trial % 2;
        const MemberProperties m = oracle::random_member(rng, dim);
        const CsdConfig c{1 + trial % 3, 1 + trial % 2};
        const Eigen::MatrixXd K = element_matrices(m, c).stiffness;
        const int nn = 2 * dim;
        const int ni = c.internal_dofs(dim);
        EXPECT_EQ(K.block(0, nn, nn, ni).norm(), 0.0);
        const Eigen::MatrixXd Ki = K.block(nn, nn, ni, ni);
        EXPECT_EQ((Ki - Eigen::MatrixXd(Ki.diagonal().asDiagonal())).norm(), 0.0);
    }
}

TEST(ElementMatrices, RotationEquivariantProperty) {
    std::mt19937 rng(41);
    for (int trial = 0; trial < 50; ++trial) {
        const MemberProperties m = oracle::random_member(rng, 3);
        const CsdConfig c = oracle::random_config(rng);
        const Eigen::Matrix3d Q = oracle::random_rotation(rng);
        MemberProperties rot = m;
        rot.start = Q * m.start;
        rot.end = Q * m.end;
        const ElementMatrices e = element_matrices(m, c);
        const ElementMatrices er = element_matrices(rot, c);
        // nodal blocks rotate as tensors; the transverse frame may be chosen
        // differently, but each internal diagonal only depends on the member.
        Eigen::MatrixXd R = Eigen::MatrixXd::Zero(6, 6);
        R.topLeftCorner(3, 3) = Q;
        R.bottomRightCorner(3, 3) = Q;
        const Eigen::MatrixXd Kn = R * e.stiffness.topLeftCorner(6, 6) * R.transpose();
        EXPECT_LT(oracle::relative_error(er.stiffness.topLeftCorner(6, 6), Kn), 1e-10);
        EXPECT_LT(oracle::relative_error(er.mass.topLeftCorner(6, 6), e.mass.topLeftCorner(6, 6)), 1e-12);
        const int ni = c.internal_dofs(3);
        EXPECT_LT((er.stiffness.bottomRightCorner(ni, ni) - e.stiffness.bottomRightCorner(ni, ni)).norm(),
                  1e-10 * (1.0 + e.stiffness.norm()));
        EXPECT_LT((er.mass.bottomRightCorner(ni, ni) - e.mass.bottomRightCorner(ni, ni)).norm(), 1e-15);
        // longitudinal coupling rotates with the member
        for (int i = 1; i <= c.longitudinal_terms; ++i) {
            const int col = ElementLayout{3, c}.longitudinal(i);
            const Eigen::Vector3d before = e.mass.block(0, col, 3, 1);
            const Eigen::Vector3d after = er.mass.block(0, col, 3, 1);
            EXPECT_LT((after - Q * before).norm(), 1e-12 * (1.0 + before.norm()));
        }
    }
}

TEST(ElementMatrices, SingleFreeNodeBarFrequency) {
    // One member, node a fixed, node b free only transversally: the bar
    // element gives omega^2 = (sigma / L) / (m / 3).
    const MemberProperties m = steel_member(Eigen::Vector2d(0, 0), Eigen::Vector2d(std::sqrt(2.0), 0), 707.10);
    const ElementMatrices e = fea_baseline_matrices(m);
    const double omega = std::sqrt(e.stiffness(3, 3) / e.mass(3, 3));
    const double expected = std::sqrt((m.tension / m.length()) / (m.mass() / 3.0));
    EXPECT_NEAR(omega / expected, 1.0, 1e-12);
}
