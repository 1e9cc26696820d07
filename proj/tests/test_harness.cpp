#include "stokeswall/harness.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <random>

namespace stokeswall {
namespace {

using namespace harness;

TEST(Variants, RoundTrip) {
    for (auto v : {KernelVariant::Stokeslet, KernelVariant::StokesletLaplacian, KernelVariant::RpyMono,
                   KernelVariant::RpyPoly, KernelVariant::Classic})
        EXPECT_EQ(parse_variant(to_string(v)), v);
    EXPECT_FALSE(parse_variant("blake").has_value());
}

TEST(GenerateSources, SingleSourceInBox) {
    const auto s = generate_sources(1, 3);
    ASSERT_EQ(s.size(), 1u);
    for (int k = 0; k < 3; ++k) {
        EXPECT_GE(s[0].position[k], 0.0);
        EXPECT_GE(s[0].force[k], -0.5);
        EXPECT_LE(s[0].force[k], 0.5);
    }
    EXPECT_LT(s[0].position.x(), 1.0);
    EXPECT_LT(s[0].position.z(), 0.5);
}

TEST(GenerateSources, DeterministicAndFillsBox) {
    const auto a = generate_sources(1000, 7);
    const auto b = generate_sources(1000, 7);
    const auto c = generate_sources(1000, 8);
    ASSERT_EQ(a.size(), b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        EXPECT_EQ(a[i].position, b[i].position);
        EXPECT_EQ(a[i].force, b[i].force);
    }
    EXPECT_NE(a[0].position, c[0].position);
    const Vec3 e(1.0, 1.0, 0.5);
    for (int k = 0; k < 3; ++k) {
        double lo = 1e9, hi = -1e9;
        for (const auto &s : a) {
            lo = std::min(lo, s.position[k]);
            hi = std::max(hi, s.position[k]);
        }
        EXPECT_EQ(lo, 0.0);
        EXPECT_LT(hi, e[k]);
        EXPECT_GT(hi, e[k] * (1.0 - 1e-8));
    }
}

TEST(GenerateSources, LognormalKolmogorovSmirnov) {
    // Oracle: draw the raw lognormal coordinates in the documented order and
    // map the theoretical CDF through the same per-axis affine map.
    constexpr std::size_t n = 10000;
    constexpr std::uint64_t seed = 5;
    const auto s = generate_sources(n, seed);
    std::mt19937_64 rng(seed);
    std::lognormal_distribution<double> coord(0.2, 0.5);
    std::uniform_real_distribution<double> force(-0.5, 0.5);
    std::vector<Vec3> raw(n);
    for (auto &r : raw) {
        for (int k = 0; k < 3; ++k)
            r[k] = coord(rng);
        for (int k = 0; k < 3; ++k)
            (void)force(rng);
    }
    const Vec3 e(1.0, 1.0, 0.5);
    for (int k = 0; k < 3; ++k) {
        double lo = 1e300, hi = -1e300;
        for (const auto &r : raw) {
            lo = std::min(lo, r[k]);
            hi = std::max(hi, r[k]);
        }
        std::vector<double> x;
        for (const auto &p : s)
            x.push_back(p.position[k]);
        std::sort(x.begin(), x.end());
        auto cdf = [&](double v) {
            const double X = lo + v / (e[k] * (1.0 - 1e-9)) * (hi - lo);
            return 0.5 * std::erfc(-(std::log(X) - 0.2) / (0.5 * std::sqrt(2.0)));
        };
        double D = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double F = cdf(x[i]);
            D = std::max({D, std::abs(F - double(i) / n), std::abs(F - double(i + 1) / n)});
        }
        EXPECT_LT(D, 0.02) << "axis " << k;
    }
    for (const auto &p : s)
        EXPECT_LE(p.force.cwiseAbs().maxCoeff(), 0.5);
}

TEST(ExperimentSources, RadiiPerVariant) {
    ExperimentConfig c;
    c.n_sources = 50;
    c.variant = KernelVariant::RpyMono;
    for (const auto &s : experiment_sources(c))
        EXPECT_EQ(s.radius, c.radii.a);
    c.variant = KernelVariant::RpyPoly;
    for (const auto &s : experiment_sources(c)) {
        EXPECT_GE(s.radius, c.radii.b_min);
        EXPECT_LE(s.radius, c.radii.b_max);
    }
    c.variant = KernelVariant::Stokeslet;
    for (const auto &s : experiment_sources(c))
        EXPECT_EQ(s.radius, 0.0);
}

TEST(Chebyshev, ClosedFormsAndSymmetry) {
    EXPECT_EQ(chebyshev_nodes(2), (std::vector<double>{0.0, 1.0}));
    EXPECT_EQ(chebyshev_nodes(3), (std::vector<double>{0.0, 0.5, 1.0}));
    for (int m : {4, 7, 33, 97}) {
        const auto t = chebyshev_nodes(m);
        for (int k = 0; k < m; ++k) {
            EXPECT_NEAR(t[k], 0.5 * (1.0 - std::cos(k * kPi / (m - 1))), 1e-15);
            EXPECT_LE(std::abs(t[k] + t[m - 1 - k] - 1.0), 1e-15);
        }
    }
    EXPECT_THROW(chebyshev_nodes(1), ValidationError);
}

TEST(Chebyshev, FacesMapToBox) {
    const Vec3 e(2.0, 3.0, 0.5);
    const auto wall = chebyshev_mesh(5, Face::Wall, e);
    ASSERT_EQ(wall.size(), 25u);
    for (const auto &p : wall)
        EXPECT_EQ(p.z(), 0.0);
    const auto x0 = chebyshev_mesh(5, Face::X0, e), x1 = chebyshev_mesh(5, Face::X1, e);
    const auto y0 = chebyshev_mesh(5, Face::Y0, e), y1 = chebyshev_mesh(5, Face::Y1, e);
    for (std::size_t i = 0; i < x0.size(); ++i) {
        EXPECT_EQ(x0[i].x(), 0.0);
        EXPECT_EQ(x1[i].x(), 2.0);
        EXPECT_EQ(x0[i].tail<2>(), x1[i].tail<2>());
        EXPECT_EQ(y0[i].y(), 0.0);
        EXPECT_EQ(y1[i].y(), 3.0);
        EXPECT_EQ(y0[i].x(), y1[i].x());
        EXPECT_LE(x0[i].z(), 0.5);
    }
    const auto corners = chebyshev_mesh(2, Face::Wall, e);
    EXPECT_EQ(corners.size(), 4u);
}

ExperimentConfig small(KernelVariant v, PeriodicMode mode = PeriodicMode::None) {
    ExperimentConfig c;
    c.variant = v;
    c.n_sources = 40;
    c.mesh = 9;
    c.seed = 3;
    c.periodicity.mode = mode;
    return c;
}

TEST(Noslip, NonPeriodicVariants) {
    for (auto v : {KernelVariant::Stokeslet, KernelVariant::StokesletLaplacian, KernelVariant::RpyMono,
                   KernelVariant::RpyPoly, KernelVariant::Classic})
        EXPECT_LE(noslip_residual(small(v)), 1e-12) << to_string(v);
}

TEST(Noslip, PeriodicShellsStayClean) {
    auto c = small(KernelVariant::Stokeslet, PeriodicMode::DPxy);
    c.shells = {1, 3};
    for (const auto &r : noslip_reports(c)) {
        EXPECT_LE(r.normalized, 1e-12);
        EXPECT_GT(r.reference_scale, 0.0);
    }
}

TEST(Noslip, ScaleInvariant) {
    // Scaling forces by 1e3 is the same as evaluating a scaled copy; compare
    // through image_velocities since the config generates its own forces.
    const auto c = small(KernelVariant::Stokeslet);
    auto sources = experiment_sources(c);
    const auto wall = chebyshev_mesh(c.mesh, Face::Wall);
    const auto cloud = reference_cloud({1, 1, 0.5});
    auto residual = [&](const std::vector<StokesSource> &src) {
        std::vector<TargetPoint> w, r;
        for (const auto &p : wall)
            w.push_back({p, 0.0});
        for (const auto &p : cloud)
            r.push_back({p, 0.0});
        const int shells[] = {0};
        const auto uw = image_velocities(KernelVariant::Stokeslet, src, w, {}, shells)[0];
        const auto ur = image_velocities(KernelVariant::Stokeslet, src, r, {}, shells)[0];
        double mw = 0.0, mr = 0.0;
        for (const auto &u : uw)
            mw = std::max(mw, u.cwiseAbs().maxCoeff());
        for (const auto &u : ur)
            mr = std::max(mr, u.cwiseAbs().maxCoeff());
        return mw / mr;
    };
    // The residual is itself roundoff, so the bound is on the normalised value.
    const double base = residual(sources);
    auto scaled = sources;
    for (auto &s : scaled)
        s.force *= 1e3;
    EXPECT_LE(std::abs(residual(scaled) - base), 1e-13);
    // A power of two scales every rounding step exactly.
    for (auto &s : sources)
        s.force *= 1024.0;
    EXPECT_EQ(residual(sources), base);
}

TEST(Noslip, ZeroForcesGiveZero) {
    const auto c = small(KernelVariant::Stokeslet);
    auto sources = experiment_sources(c);
    for (auto &s : sources)
        s.force.setZero();
    std::vector<TargetPoint> w;
    for (const auto &p : chebyshev_mesh(5, Face::Wall))
        w.push_back({p, 0.0});
    const int shells[] = {0};
    const auto u = image_velocities(KernelVariant::Stokeslet, sources, w, {}, shells);
    for (const auto &v : u[0])
        EXPECT_EQ(v, Vec3::Zero());
}

TEST(Periodicity, ModeMismatch) {
    EXPECT_THROW(periodicity_error(small(KernelVariant::Stokeslet)), ModeMismatch);
    EXPECT_THROW(periodicity_error_axis(small(KernelVariant::Stokeslet, PeriodicMode::SPx), Axis::Y), ModeMismatch);
}

TEST(Periodicity, SpHasOnlyX) {
    auto c = small(KernelVariant::Stokeslet, PeriodicMode::SPx);
    c.shells = {2};
    const auto rep = periodicity_error(c);
    EXPECT_TRUE(rep.eps_L2_X.has_value());
    EXPECT_FALSE(rep.eps_L2_Y.has_value());
    EXPECT_GE(*rep.eps_L2_X, 0.0);
}

TEST(Periodicity, DecreasesWithShells) {
    auto c = small(KernelVariant::Stokeslet, PeriodicMode::DPxy);
    c.mesh = 5;
    c.shells = {2, 4, 8};
    const auto rep = periodicity_error(c);
    ASSERT_EQ(rep.trace.size(), 3u);
    for (std::size_t k = 1; k < rep.trace.size(); ++k) {
        EXPECT_LT(*rep.trace[k].eps_x, *rep.trace[k - 1].eps_x);
        EXPECT_LT(*rep.trace[k].eps_y, *rep.trace[k - 1].eps_y);
    }
}

TEST(Periodicity, ManualTilingMatchesShellSum) {
    auto c = small(KernelVariant::Stokeslet, PeriodicMode::DPxy);
    c.mesh = 5;
    c.n_sources = 20;
    c.shells = {3};
    c.periodicity.L1 = 1.0;
    c.periodicity.L2 = 1.0;
    const auto rep = periodicity_error(c);

    const auto base = experiment_sources(c);
    std::vector<StokesSource> tiled;
    for (const Vec3 &o : shell_offsets(3, c.periodicity))
        for (auto s : base) {
            s.position += o;
            tiled.push_back(s);
        }
    const Vec3 e(1, 1, 0.5);
    auto face = [&](Face f) {
        std::vector<TargetPoint> t;
        for (const auto &p : chebyshev_mesh(c.mesh, f, e))
            t.push_back({p, 0.0});
        const int shells[] = {0};
        return image_velocities(KernelVariant::Stokeslet, tiled, t, {}, shells)[0];
    };
    const double eps_x = relative_l2_mismatch(face(Face::X0), face(Face::X1));
    const double eps_y = relative_l2_mismatch(face(Face::Y0), face(Face::Y1));
    EXPECT_LE(std::abs(eps_x - *rep.eps_L2_X), 1e-14);
    EXPECT_LE(std::abs(eps_y - *rep.eps_L2_Y), 1e-14);
}

TEST(Periodicity, CompositeRouteAgrees) {
    auto c = small(KernelVariant::Stokeslet, PeriodicMode::DPxy);
    c.n_sources = 15;
    const auto sources = experiment_sources(c);
    const auto pts = reference_cloud({1, 1, 0.5});
    std::vector<TargetPoint> t;
    for (const auto &p : pts)
        t.push_back({p, 0.0});
    const std::vector<int> shells{2, 4};
    const auto a = image_velocities(KernelVariant::Stokeslet, sources, t, c.periodicity, shells);
    const auto b = composite_periodic_velocities(sources, pts, c.periodicity, shells);
    for (std::size_t k = 0; k < shells.size(); ++k)
        for (std::size_t i = 0; i < pts.size(); ++i)
            EXPECT_LE((a[k][i] - b[k][i]).norm(), 1e-12 * std::max(1.0, b[k][i].norm()));
}

TEST(Periodicity, Deterministic) {
    auto c = small(KernelVariant::RpyPoly, PeriodicMode::SPx);
    c.shells = {1, 2};
    const auto a = periodicity_error(c);
    const auto b = periodicity_error(c);
    for (std::size_t k = 0; k < a.trace.size(); ++k) {
        EXPECT_EQ(*a.trace[k].eps_x, *b.trace[k].eps_x);
        EXPECT_EQ(a.trace[k].max_noslip, b.trace[k].max_noslip);
    }
}

TEST(RelativeL2, Definition) {
    const std::vector<Vec3> a{Vec3(1, 0, 0), Vec3(0, 1, 0)};
    const std::vector<Vec3> b{Vec3(1, 0, 0), Vec3(0, 0, 0)};
    EXPECT_NEAR(relative_l2_mismatch(a, b), std::sqrt(1.0 / 3.0), 1e-16);
    EXPECT_EQ(relative_l2_mismatch(a, a), 0.0);
    EXPECT_THROW(relative_l2_mismatch(a, std::vector<Vec3>{Vec3::Zero()}), ValidationError);
}

TEST(Config, Validation) {
    ExperimentConfig c;
    c.n_sources = 0;
    EXPECT_THROW(c.validate(), ValidationError);
    c.n_sources = 1;
    c.mesh = 1;
    EXPECT_THROW(c.validate(), ValidationError);
    c.mesh = 2;
    EXPECT_NO_THROW(c.validate());
    EXPECT_EQ(c.shell_list(), std::vector<int>{0});
}

TEST(RpyField, WallNoSlipPointTarget) {
    GridSpec g;
    g.n1 = 17;
    g.n3 = 9;
    const StokesSource src{Vec3(0, 0, 1), Vec3::UnitX(), 1.0};
    const auto field = rpy_field_grid(src, 0.0, g);
    ASSERT_EQ(field.size(), 17u * 9u);
    for (const auto &s : field)
        if (s.position.z() == 0.0)
            EXPECT_LE(s.velocity.norm(), 1e-14);
}

TEST(RpyField, AxisymmetricUnderNormalForce) {
    GridSpec g;
    g.n1 = 33;
    g.n3 = 13;
    const StokesSource src{Vec3(0, 0, 1), Vec3::UnitZ(), 1.0};
    const auto field = rpy_field_grid(src, 0.5, g);
    for (int k = 0; k < g.n3; ++k)
        for (int i = 0; i < g.n1; ++i) {
            const auto &l = field[k * g.n1 + i];
            const auto &r = field[k * g.n1 + (g.n1 - 1 - i)];
            EXPECT_EQ(l.position.x(), -r.position.x());
            const double scale = std::max(l.velocity.norm(), 1e-300);
            EXPECT_LE(std::abs(l.velocity.x() + r.velocity.x()), 1e-13 * scale);
            EXPECT_LE(std::abs(l.velocity.z() - r.velocity.z()), 1e-13 * scale);
            EXPECT_EQ(l.overlap, r.overlap);
        }
}

TEST(RpyField, SourceCentreMatchesSelfMobility) {
    GridSpec g;
    g.x1_min = g.x1_max = 0.0;
    g.x3_min = g.x3_max = 1.0;
    g.n1 = g.n3 = 1;
    const StokesSource src{Vec3(0, 0, 1), Vec3(0.3, 0.0, -0.7), 0.4};
    const auto field = rpy_field_grid(src, 0.4, g);
    const images::Particle p{src.position, 0.4};
    const Eigen::MatrixXd M = images::mobility_matrix(std::span(&p, 1));
    EXPECT_LE((field[0].velocity - M * src.force).norm(), 1e-15 * field[0].velocity.norm());
    EXPECT_TRUE(field[0].overlap);
    const StokesSource point{Vec3(0, 0, 1), Vec3::UnitX(), 0.0};
    EXPECT_THROW(rpy_field_grid(point, 0.0, g), CoincidentPoints);
}

TEST(RpyField, FarFieldDecay) {
    GridSpec g;
    g.x1_min = 10.0;
    g.x1_max = 60.0;
    g.x3_min = 0.5;
    g.x3_max = 0.5;
    g.n1 = 26;
    g.n3 = 1;
    const StokesSource src{Vec3(0, 0, 1), Vec3::UnitX(), 1.0};
    const auto field = rpy_field_grid(src, 0.0, g);
    for (std::size_t i = 1; i < field.size(); ++i)
        EXPECT_LT(field[i].velocity.norm(), field[i - 1].velocity.norm());
}

TEST(RpyField, OverlapFlag) {
    GridSpec g;
    g.x1_min = 0.0;
    g.x1_max = 0.0;
    g.x3_min = 1.0;
    g.x3_max = 3.0;
    g.n1 = 1;
    g.n3 = 3;
    const StokesSource src{Vec3(0, 0, 1.0 + 1e-3), Vec3::UnitX(), 1.0};
    const auto field = rpy_field_grid(src, 0.5, g);
    EXPECT_TRUE(field[0].overlap);
    EXPECT_FALSE(field[2].overlap);
    EXPECT_TRUE(field[0].velocity.allFinite());
}

} // namespace
} // namespace stokeswall
