#include "stokeswall/kernels.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

namespace stokeswall {
namespace {

using namespace kernels;
using testing::fd_divergence;
using testing::fd_gradient;
using testing::fd_hessian;
using testing::fd_laplacian;
using testing::fd_laplacian4;
using testing::Random;
using testing::rel_err;
using testing::ScalarFn;

const OutputOrders kAll = kValue | kGradient | kHessian;
constexpr int kConfigs = 100;

TEST(LaplaceMonopole, AxisClosedForm) {
    const auto e = laplace_monopole(Vec3(2, 0, 0), Vec3::Zero(), 1.0, kValue);
    EXPECT_NEAR(e.value, 1.0 / (8.0 * kPi), 1e-16);
    EXPECT_NEAR(e.value, 0.039788735, 1e-9);
}

TEST(LaplaceMonopole, ZeroStrength) {
    const auto e = laplace_monopole(Vec3(1, 0, 0), Vec3::Zero(), 0.0, kAll);
    EXPECT_EQ(e.value, 0.0);
    EXPECT_TRUE(e.gradient.isZero(0.0));
}

TEST(LaplaceMonopole, GradientMatchesFiniteDifferences) {
    const Vec3 x(0.3, 0.1, 0.7), y(0.9, 0.4, 0.2);
    const auto e = laplace_monopole(x, y, 2.0, kValue | kGradient);
    const Vec3 fd = fd_gradient([&](const Vec3 &p) { return laplace_monopole(p, y, 2.0, kValue).value; }, x, 1e-5);
    EXPECT_LE(rel_err(e.gradient, fd), 1e-6);
}

TEST(LaplaceMonopole, CoincidentPointsThrow) {
    EXPECT_THROW(laplace_monopole(Vec3(1, 2, 3), Vec3(1, 2, 3), 1.0, kValue), CoincidentPoints);
    EXPECT_THROW(stokeslet(Vec3(1, 2, 3), Vec3(1, 2, 3), Vec3(1, 0, 0), kValue), CoincidentPoints);
    EXPECT_THROW(laplace_dipole_potential(Vec3::Zero(), Vec3::Zero(), Vec3(1, 0, 0), kValue), CoincidentPoints);
    EXPECT_THROW(laplace_quadrupole_potential(Vec3::Zero(), Vec3::Zero(), Mat3::Identity(), kValue), CoincidentPoints);
}

TEST(LaplaceDipole, AxisClosedForm) {
    const auto e = laplace_dipole_potential(Vec3(0, 0, 2), Vec3::Zero(), Vec3(0, 0, 1), kValue);
    EXPECT_NEAR(e.value, 1.0 / (16.0 * kPi), 1e-16);
    EXPECT_NEAR(e.value, 0.019894368, 1e-9);
}

TEST(LaplaceDipole, OrthogonalMomentVanishes) {
    const auto e = laplace_dipole_potential(Vec3(1, 0, 0), Vec3::Zero(), Vec3(0, 1, 0), kValue);
    EXPECT_EQ(e.value, 0.0);
}

TEST(LaplaceDipole, ChargePairLimit) {
    Random rng(11);
    for (int c = 0; c < kConfigs; ++c) {
        const auto [x, y] = rng.separated_pair();
        const Vec3 d = rng.vec(-1, 1);
        // Richardson-extrapolated one-sided difference of the monopole in y.
        auto D = [&](double h) {
            return (laplace_monopole(x, y + h * d, 1.0, kValue).value - laplace_monopole(x, y, 1.0, kValue).value) / h;
        };
        const double h = 1e-4;
        const double limit = 2.0 * D(h / 2) - D(h);
        EXPECT_LE(rel_err(laplace_dipole_potential(x, y, d, kValue).value, limit), 1e-5);
    }
}

TEST(LaplaceQuadrupole, ZeroStrength) {
    const auto e = laplace_quadrupole_potential(Vec3(1, 0.5, 0), Vec3::Zero(), Mat3::Zero(), kAll);
    EXPECT_EQ(e.value, 0.0);
    EXPECT_TRUE(e.gradient.isZero(0.0));
}

// G^Q(x,y) : S = sum_j d/dy_j [G^D(x,y) . S_j,:], by central differences in y.
double quadrupole_oracle(const Vec3 &x, const Vec3 &y, const Mat3 &S, double h) {
    double v = 0.0;
    for (int j = 0; j < 3; ++j) {
        const Vec3 e = h * Vec3::Unit(j);
        const Vec3 row = S.row(j).transpose();
        v += (laplace_dipole_potential(x, y + e, row, kValue).value -
              laplace_dipole_potential(x, y - e, row, kValue).value) /
             (2.0 * h);
    }
    return v;
}

TEST(LaplaceQuadrupole, MatchesDipoleSourceDerivative) {
    Random rng(12);
    for (int c = 0; c < kConfigs; ++c) {
        const auto [x, y] = rng.separated_pair();
        const Mat3 S = rng.mat();
        EXPECT_LE(rel_err(laplace_quadrupole_potential(x, y, S, kValue).value, quadrupole_oracle(x, y, S, 1e-5)), 1e-5);
    }
}

TEST(LaplaceQuadrupole, IdentityStrengthIsTracePart) {
    Random rng(13);
    for (int c = 0; c < 20; ++c) {
        const auto [x, y] = rng.separated_pair();
        const Mat3 I = Mat3::Identity();
        Mat3 e00 = Mat3::Zero();
        e00(0, 0) = 1.0;
        const double v = laplace_quadrupole_potential(x, y, I, kValue).value;
        // Harmonic potential: the trace part is zero, and the oracle agrees.
        EXPECT_NEAR(v, 0.0, 1e-12 * std::abs(laplace_quadrupole_potential(x, y, e00, kValue).value));
        EXPECT_NEAR(quadrupole_oracle(x, y, I, 1e-5), v, 1e-6);
    }
}

TEST(Stokeslet, AxisCases) {
    const auto l = stokeslet(Vec3(1, 0, 0), Vec3::Zero(), Vec3(1, 0, 0), kValue).value;
    EXPECT_NEAR(l.x(), 1.0 / (4.0 * kPi), 1e-16);
    EXPECT_NEAR(l.x(), 0.079577472, 1e-9);
    EXPECT_EQ(l.y(), 0.0);
    EXPECT_EQ(l.z(), 0.0);
    const auto t = stokeslet(Vec3(1, 0, 0), Vec3::Zero(), Vec3(0, 1, 0), kValue).value;
    EXPECT_EQ(t.x(), 0.0);
    EXPECT_NEAR(t.y(), 1.0 / (8.0 * kPi), 1e-16);
    EXPECT_NEAR(t.y(), 0.039788735, 1e-9);
    EXPECT_EQ(t.z(), 0.0);
}

TEST(Stokeslet, LaplacianMatchesFiniteDifferences) {
    Random rng(14);
    for (int c = 0; c < kConfigs; ++c) {
        const auto [x, y] = rng.separated_pair();
        const Vec3 f = rng.vec(-1, 1);
        const auto e = stokeslet(x, y, f, kValue | kLaplacian);
        const Vec3 fd = fd_laplacian([&](const Vec3 &p) { return stokeslet(p, y, f, kValue).value; }, x, 1e-4);
        EXPECT_LE(rel_err(e.laplacian, fd), 1e-5);
        EXPECT_LE(rel_err(stokes_laplacian_Q(x, y, f), fd), 1e-5);
    }
}

TEST(StokesLaplacianQ, DivergenceFreeAndHarmonic) {
    Random rng(15);
    for (int c = 0; c < kConfigs; ++c) {
        const auto [x, y] = rng.separated_pair();
        const Vec3 f = rng.vec(-1, 1);
        auto Qf = [&](const Vec3 &p) { return stokes_laplacian_Q(p, y, f); };
        const double r = (x - y).norm();
        const double scale = f.norm() / std::pow(r, 4); // size of a first derivative of Qf
        EXPECT_LE(std::abs(fd_divergence(Qf, x, 1e-5)), 1e-6 * scale);
        EXPECT_LE(fd_laplacian4(Qf, x, 1e-2 * r).norm(), 1e-6 * scale / r);
    }
}

TEST(Kernels, DerivativesMatchFiniteDifferences) {
    Random rng(16);
    for (int c = 0; c < kConfigs; ++c) {
        const auto [x, y] = rng.separated_pair();
        const double q = rng.uniform(-1, 1);
        const Vec3 d = rng.vec(-1, 1);
        const Mat3 S = rng.mat();

        const ScalarFn mono = [&](const Vec3 &p) { return laplace_monopole(p, y, q, kValue).value; };
        const ScalarFn dip = [&](const Vec3 &p) { return laplace_dipole_potential(p, y, d, kValue).value; };
        const ScalarFn quad = [&](const Vec3 &p) { return laplace_quadrupole_potential(p, y, S, kValue).value; };

        const auto em = laplace_monopole(x, y, q, kAll);
        const auto ed = laplace_dipole_potential(x, y, d, kAll);
        const auto eq = laplace_quadrupole_potential(x, y, S, kAll);

        EXPECT_LE(rel_err(em.gradient, fd_gradient(mono, x, 1e-5)), 1e-6);
        EXPECT_LE(rel_err(ed.gradient, fd_gradient(dip, x, 1e-5)), 1e-6);
        EXPECT_LE(rel_err(eq.gradient, fd_gradient(quad, x, 1e-5)), 1e-6);
        EXPECT_LE(rel_err(em.hessian, fd_hessian(mono, x, 1e-4)), 1e-5);
        EXPECT_LE(rel_err(ed.hessian, fd_hessian(dip, x, 1e-4)), 1e-5);
        EXPECT_LE(rel_err(eq.hessian, fd_hessian(quad, x, 1e-4)), 1e-5);
    }
}

TEST(Kernels, HessiansAreSymmetricAndTraceFree) {
    Random rng(17);
    for (int c = 0; c < kConfigs; ++c) {
        const auto [x, y] = rng.separated_pair();
        for (const auto &e : {laplace_monopole(x, y, rng.uniform(-1, 1), kHessian),
                              laplace_dipole_potential(x, y, rng.vec(-1, 1), kHessian),
                              laplace_quadrupole_potential(x, y, rng.mat(), kHessian)}) {
            const double scale = e.hessian.norm();
            EXPECT_LE((e.hessian - e.hessian.transpose()).norm(), 1e-14 * scale);
            EXPECT_LE(std::abs(e.hessian.trace()), 1e-12 * scale);
        }
    }
}

TEST(Kernels, SymmetryUnderExchange) {
    Random rng(18);
    for (int c = 0; c < kConfigs; ++c) {
        const auto [x, y] = rng.separated_pair(1e-3);
        const double gxy = laplace_monopole(x, y, 1.0, kValue).value;
        const double gyx = laplace_monopole(y, x, 1.0, kValue).value;
        EXPECT_LE(rel_err(gxy, gyx), 1e-14);
        const Mat3 J = stokeslet_tensor(x, y);
        EXPECT_LE(rel_err(J, stokeslet_tensor(y, x)), 1e-14);
        EXPECT_LE((J - J.transpose()).norm(), 1e-14 * J.norm());
        // The tensor and the applied form agree.
        const Vec3 f = rng.vec(-1, 1);
        EXPECT_LE(rel_err(stokeslet(x, y, f, kValue).value, Vec3(J * f)), 1e-14);
    }
}

TEST(Kernels, LinearInStrength) {
    Random rng(19);
    for (int c = 0; c < kConfigs; ++c) {
        const auto [x, y] = rng.separated_pair();
        const double alpha = rng.uniform(-3, 3);
        const double q = rng.uniform(-1, 1);
        const Vec3 d = rng.vec(-1, 1);
        const Mat3 S = rng.mat();
        const auto m1 = laplace_monopole(x, y, alpha * q, kAll);
        const auto m0 = laplace_monopole(x, y, q, kAll);
        EXPECT_LE(rel_err(m1.value, alpha * m0.value), 1e-15);
        EXPECT_LE(rel_err(m1.hessian, Mat3(alpha * m0.hessian)), 1e-15);
        const auto d1 = laplace_dipole_potential(x, y, alpha * d, kAll);
        const auto d0 = laplace_dipole_potential(x, y, d, kAll);
        EXPECT_LE(rel_err(d1.gradient, Vec3(alpha * d0.gradient)), 1e-14);
        const auto q1 = laplace_quadrupole_potential(x, y, alpha * S, kAll);
        const auto q0 = laplace_quadrupole_potential(x, y, S, kAll);
        EXPECT_LE(rel_err(q1.gradient, Vec3(alpha * q0.gradient)), 1e-14);
        const auto s1 = stokeslet(x, y, alpha * d, kValue | kLaplacian);
        const auto s0 = stokeslet(x, y, d, kValue | kLaplacian);
        EXPECT_LE(rel_err(s1.value, Vec3(alpha * s0.value)), 1e-15);
        EXPECT_LE(rel_err(s1.laplacian, Vec3(alpha * s0.laplacian)), 1e-15);
    }
}

TEST(Kernels, UnrequestedOrdersStayZero) {
    const auto e = laplace_quadrupole_potential(Vec3(1, 2, 3), Vec3::Zero(), Mat3::Identity() * 2, kGradient);
    EXPECT_EQ(e.value, 0.0);
    EXPECT_TRUE(e.hessian.isZero(0.0));
    const auto s = stokeslet(Vec3(1, 2, 3), Vec3::Zero(), Vec3(1, 1, 1), kLaplacian);
    EXPECT_TRUE(s.value.isZero(0.0));
    EXPECT_FALSE(s.laplacian.isZero(0.0));
}

} // namespace
} // namespace stokeswall
