#include "stokeswall/images.hpp"
#include "stokeswall/kernels.hpp"

#include <cmath>
#include <sstream>

namespace stokeswall {

std::string to_string(ImageSystem system) {
    switch (system) {
    case ImageSystem::Stokeslet:
        return "stokeslet";
    case ImageSystem::StokesletLaplacian:
        return "laplacian";
    case ImageSystem::RpyMono:
        return "rpy-mono";
    case ImageSystem::RpyPoly:
        return "rpy-poly";
    }
    return "unknown";
}

namespace images {

namespace {

const Vec3 kE3 = Vec3::UnitZ();

void check_sources(std::span<const StokesSource> sources) {
    for (std::size_t i = 0; i < sources.size(); ++i) {
        const auto &s = sources[i];
        if (!s.position.allFinite() || !s.force.allFinite() || !std::isfinite(s.radius))
            throw ValidationError("source " + std::to_string(i) + " is not finite");
        if (s.position.z() < 0.0) {
            std::ostringstream os;
            os << "source " << i << " lies below the wall (y3 = " << s.position.z() << ")";
            throw SourceBelowWall(os.str());
        }
        if (s.radius < 0.0)
            throw ValidationError("source " + std::to_string(i) + " has a negative radius");
    }
}

std::vector<Vec3> target_positions(std::span<const TargetPoint> targets) {
    std::vector<Vec3> out;
    out.reserve(targets.size());
    for (std::size_t t = 0; t < targets.size(); ++t) {
        if (targets[t].position.z() < 0.0)
            throw ValidationError("target " + std::to_string(t) + " lies below the wall");
        out.push_back(targets[t].position);
    }
    return out;
}

Vec3 mirror(const Vec3 &v) { return {v.x(), v.y(), -v.z()}; }

KernelSumRequest make_request(std::string label, KernelId kernel, OutputOrders orders, const std::vector<Vec3> &targets,
                              std::size_t n_reserve) {
    KernelSumRequest r;
    r.label = std::move(label);
    r.kernel = kernel;
    r.orders = orders;
    r.targets = targets;
    r.sources.reserve(n_reserve);
    return r;
}

void push(KernelSumRequest &r, const Vec3 &position, Strength strength, std::size_t owner, bool image) {
    r.sources.push_back(SourceEntry{position, std::move(strength), static_cast<int>(owner), image});
}

// Source pair (q at y, -q at y^I) used by every neutral Stokes/monopole sum.
template <typename T>
void push_pair(KernelSumRequest &r, const Vec3 &y, const T &q, std::size_t owner) {
    push(r, y, Strength(q), owner, false);
    push(r, mirror(y), Strength(T(-q)), owner, true);
}

const TargetOutputs &require(std::span<const TargetOutputs> outs, std::size_t index, std::size_t expected_count,
                             KernelId kernel, OutputOrders needed, std::size_t t) {
    if (outs.size() != expected_count)
        throw MissingOutputOrder("expected " + std::to_string(expected_count) + " kernel-sum outputs, got " +
                                 std::to_string(outs.size()));
    const TargetOutputs &o = outs[index];
    if (o.kernel != kernel)
        throw MissingOutputOrder("output " + std::to_string(index) + " ('" + o.label + "') has kernel " +
                                 to_string(o.kernel) + ", expected " + to_string(kernel));
    if (!o.orders.contains(needed))
        throw MissingOutputOrder("output '" + o.label + "' was evaluated with orders " + to_string(o.orders) +
                                 " but " + to_string(needed) + " is required");
    if (t >= o.size())
        throw MissingOutputOrder("output '" + o.label + "' has no entry for target " + std::to_string(t));
    return o;
}

/// (x3 grad - e3) phi
Vec3 papkovich(double x3, const ScalarFieldEval &phi) { return x3 * phi.gradient - phi.value * kE3; }

/// d/dx3 grad phi, read from the symmetric Hessian.
Vec3 d3_grad(const ScalarFieldEval &phi) { return phi.hessian.row(2).transpose(); }

} // namespace

std::pair<Vec3, Vec3> reflect(const StokesSource &src) { return {mirror(src.position), mirror(src.force)}; }

Vec3 classic_image_velocity(const Vec3 &x, const StokesSource &src) {
    const auto [yI, fI] = reflect(src);
    const Vec3 &y = src.position;
    const Vec3 &f = src.force;
    const OutputOrders vg = kValue | kGradient;
    ScalarFieldEval phi = kernels::laplace_monopole(x, yI, fI.z(), vg);
    phi += kernels::laplace_dipole_potential(x, yI, y.z() * fI, vg);
    const Vec3 uC = papkovich(x.z(), phi);
    return kernels::stokeslet(x, y, f, kValue).value - kernels::stokeslet(x, yI, fI, kValue).value - uC;
}

std::vector<KernelSumRequest> build_stokeslet_sums(std::span<const StokesSource> sources,
                                                   std::span<const TargetPoint> targets) {
    check_sources(sources);
    const auto tpos = target_positions(targets);
    const std::size_t n = sources.size();
    std::vector<KernelSumRequest> reqs;
    reqs.reserve(stokeslet_sums::Count);
    reqs.push_back(make_request("stokes", KernelId::Stokeslet, kValue, tpos, 2 * n));
    reqs.push_back(make_request("dipole", KernelId::LaplaceDipole, kValue | kGradient, tpos, n));
    reqs.push_back(make_request("monopole1", KernelId::LaplaceMonopole, kValue | kGradient, tpos, 2 * n));
    reqs.push_back(make_request("monopole2", KernelId::LaplaceMonopole, kGradient, tpos, 2 * n));
    for (std::size_t i = 0; i < n; ++i) {
        const Vec3 &y = sources[i].position;
        const Vec3 &f = sources[i].force;
        const double y3 = y.z();
        push_pair(reqs[stokeslet_sums::Stokes], y, Vec3(f.x(), f.y(), 0.0), i);
        push(reqs[stokeslet_sums::Dipole], mirror(y), Vec3(y3 * Vec3(-f.x(), -f.y(), f.z())), i, true);
        push_pair(reqs[stokeslet_sums::Monopole1], y, f.z(), i);
        push_pair(reqs[stokeslet_sums::Monopole2], y, f.z() * y3, i);
    }
    return reqs;
}

Vec3 combine_stokeslet(const TargetPoint &x, std::span<const TargetOutputs> outs, std::size_t t) {
    using namespace stokeslet_sums;
    const auto &uS = require(outs, Stokes, Count, KernelId::Stokeslet, kValue, t).vector[t];
    const auto &phiD = require(outs, Dipole, Count, KernelId::LaplaceDipole, kValue | kGradient, t).scalar[t];
    const auto &phiS = require(outs, Monopole1, Count, KernelId::LaplaceMonopole, kValue | kGradient, t).scalar[t];
    const auto &phiSZ = require(outs, Monopole2, Count, KernelId::LaplaceMonopole, kGradient, t).scalar[t];
    const double x3 = x.position.z();
    return uS.value + papkovich(x3, phiD) - 0.5 * papkovich(x3, phiS) + 0.5 * phiSZ.gradient;
}

FlowSample laplacian_image_flow(const TargetPoint &x, const StokesSource &src) {
    const auto [yI, fI] = reflect(src);
    const Vec3 &p = x.position;
    const Vec3 direct = kernels::laplace_dipole_potential(p, src.position, src.force, kGradient).gradient;
    // Q(x,y^I) f^I is the gradient of the image dipole potential; phi^GD is its
    // third component and grad phi^GD the third Hessian row.
    const ScalarFieldEval image = kernels::laplace_dipole_potential(p, yI, fI, kGradient | kHessian);
    ScalarFieldEval phiGD;
    phiGD.value = image.gradient.z();
    phiGD.gradient = d3_grad(image);
    FlowSample out;
    out.velocity = direct - image.gradient - 2.0 * papkovich(p.z(), phiGD);
    out.pressure = -4.0 * phiGD.gradient.z();
    return out;
}

std::vector<KernelSumRequest> build_laplacian_sums(std::span<const StokesSource> sources,
                                                   std::span<const TargetPoint> targets) {
    check_sources(sources);
    const auto tpos = target_positions(targets);
    const std::size_t n = sources.size();
    std::vector<KernelSumRequest> reqs;
    reqs.reserve(laplacian_sums::Count);
    reqs.push_back(make_request("q_direct", KernelId::LaplaceDipole, kGradient, tpos, n));
    reqs.push_back(make_request("q_image", KernelId::LaplaceDipole, kGradient | kHessian, tpos, n));
    for (std::size_t i = 0; i < n; ++i) {
        const auto [yI, fI] = reflect(sources[i]);
        push(reqs[laplacian_sums::Direct], sources[i].position, sources[i].force, i, false);
        push(reqs[laplacian_sums::Image], yI, fI, i, true);
    }
    return reqs;
}

FlowSample combine_laplacian(const TargetPoint &x, std::span<const TargetOutputs> outs, std::size_t t) {
    using namespace laplacian_sums;
    const auto &direct = require(outs, Direct, Count, KernelId::LaplaceDipole, kGradient, t).scalar[t];
    const auto &image = require(outs, Image, Count, KernelId::LaplaceDipole, kGradient | kHessian, t).scalar[t];
    ScalarFieldEval phiGD;
    phiGD.value = image.gradient.z();
    phiGD.gradient = d3_grad(image);
    FlowSample out;
    out.velocity = direct.gradient - image.gradient - 2.0 * papkovich(x.position.z(), phiGD);
    out.pressure = -4.0 * phiGD.gradient.z();
    return out;
}

Vec3 rpy_free_space(const TargetPoint &x, const StokesSource &src) {
    const VectorFieldEval J = kernels::stokeslet(x.position, src.position, src.force, kValue | kLaplacian);
    const double a2 = x.radius * x.radius;
    const double b2 = src.radius * src.radius;
    return J.value + ((a2 + b2) / 6.0) * J.laplacian;
}

Mat3 rpy_quadrupole_strength(const Vec3 &f) {
    Mat3 S = Mat3::Zero();
    S(0, 0) = f.z();
    S(1, 1) = f.z();
    S(2, 0) = f.x();
    S(2, 1) = f.y();
    return 2.0 * S;
}

namespace {

// Entries shared verbatim by the mono and poly tables.
void push_rpy_common(std::vector<KernelSumRequest> &reqs, std::size_t stokes, std::size_t mono1, std::size_t mono2,
                     std::size_t dip1, const StokesSource &src, std::size_t i) {
    const Vec3 &y = src.position;
    const Vec3 &f = src.force;
    push_pair(reqs[stokes], y, Vec3(f.x(), f.y(), 0.0), i);
    push_pair(reqs[mono1], y, f.z(), i);
    push_pair(reqs[mono2], y, f.z() * y.z(), i);
    push(reqs[dip1], mirror(y), Vec3(y.z() * Vec3(-f.x(), -f.y(), f.z())), i, true);
}

// `weight` scales the dipole-2 and quadrupole strengths: 1 for mono, b^2 for poly.
void push_rpy_weighted(std::vector<KernelSumRequest> &reqs, std::size_t dip2, std::size_t quad,
                       const StokesSource &src, double weight, std::size_t i) {
    const Vec3 &y = src.position;
    const Vec3 dz(0.0, 0.0, weight * src.force.z());
    push(reqs[dip2], y, dz, i, false);
    push(reqs[dip2], mirror(y), dz, i, true);
    // The quadrupole is the y-Laplacian of the image dipole, so it sits at y^I.
    push(reqs[quad], mirror(y), Mat3(weight * rpy_quadrupole_strength(src.force)), i, true);
}

} // namespace

std::vector<KernelSumRequest> build_rpy_sums_mono(std::span<const StokesSource> sources,
                                                  std::span<const TargetPoint> targets, double a) {
    using namespace rpy_mono_sums;
    check_sources(sources);
    if (!(a >= 0.0) || !std::isfinite(a))
        throw ValidationError("RPY radius must be finite and non-negative");
    const auto tpos = target_positions(targets);
    const std::size_t n = sources.size();
    const OutputOrders vgh = kValue | kGradient | kHessian;
    std::vector<KernelSumRequest> reqs;
    reqs.reserve(Count);
    reqs.push_back(make_request("stokes1", KernelId::Stokeslet, kValue | kLaplacian, tpos, 2 * n));
    reqs.push_back(make_request("monopole1", KernelId::LaplaceMonopole, vgh, tpos, 2 * n));
    reqs.push_back(make_request("monopole2", KernelId::LaplaceMonopole, vgh, tpos, 2 * n));
    reqs.push_back(make_request("dipole1", KernelId::LaplaceDipole, vgh, tpos, n));
    reqs.push_back(make_request("dipole2", KernelId::LaplaceDipole, kGradient, tpos, 2 * n));
    reqs.push_back(make_request("quadrupole", KernelId::LaplaceQuadrupole, vgh, tpos, n));
    for (std::size_t i = 0; i < n; ++i) {
        push_rpy_common(reqs, Stokes, Monopole1, Monopole2, Dipole1, sources[i], i);
        push_rpy_weighted(reqs, Dipole2, Quadrupole, sources[i], 1.0, i);
    }
    return reqs;
}

Vec3 combine_rpy_mono(const TargetPoint &x, std::span<const TargetOutputs> outs, std::size_t t, double a) {
    using namespace rpy_mono_sums;
    const OutputOrders vgh = kValue | kGradient | kHessian;
    const auto &uS = require(outs, Stokes, Count, KernelId::Stokeslet, kValue | kLaplacian, t).vector[t];
    const auto &phiS = require(outs, Monopole1, Count, KernelId::LaplaceMonopole, vgh, t).scalar[t];
    const auto &phiSZ = require(outs, Monopole2, Count, KernelId::LaplaceMonopole, kGradient, t).scalar[t];
    const auto &phiD = require(outs, Dipole1, Count, KernelId::LaplaceDipole, vgh, t).scalar[t];
    const auto &phiDZ = require(outs, Dipole2, Count, KernelId::LaplaceDipole, kGradient, t).scalar[t];
    const auto &phiQ = require(outs, Quadrupole, Count, KernelId::LaplaceQuadrupole, vgh, t).scalar[t];
    const double x3 = x.position.z();
    const double a2 = a * a;
    Vec3 u = uS.value + (a2 / 3.0) * uS.laplacian;
    u += papkovich(x3, phiD) + (a2 / 3.0) * d3_grad(phiD);
    u -= 0.5 * (papkovich(x3, phiS) + (a2 / 3.0) * d3_grad(phiS));
    u += 0.5 * phiSZ.gradient + (a2 / 6.0) * phiDZ.gradient;
    u += (a2 / 6.0) * papkovich(x3, phiQ) + (a2 * a2 / 18.0) * d3_grad(phiQ);
    return u;
}

std::vector<KernelSumRequest> build_rpy_sums_poly(std::span<const StokesSource> sources,
                                                  std::span<const TargetPoint> targets) {
    using namespace rpy_poly_sums;
    check_sources(sources);
    const auto tpos = target_positions(targets);
    const std::size_t n = sources.size();
    const OutputOrders vgh = kValue | kGradient | kHessian;
    std::vector<KernelSumRequest> reqs;
    reqs.reserve(Count);
    reqs.push_back(make_request("stokes1", KernelId::Stokeslet, kValue | kLaplacian, tpos, 2 * n));
    reqs.push_back(make_request("stokes2", KernelId::Stokeslet, kLaplacian, tpos, 2 * n));
    reqs.push_back(make_request("monopole1", KernelId::LaplaceMonopole, vgh, tpos, 2 * n));
    reqs.push_back(make_request("monopole2", KernelId::LaplaceMonopole, vgh, tpos, 2 * n));
    reqs.push_back(make_request("dipole1", KernelId::LaplaceDipole, vgh, tpos, n));
    reqs.push_back(make_request("dipole2", KernelId::LaplaceDipole, kGradient, tpos, 2 * n));
    reqs.push_back(make_request("quadrupole", KernelId::LaplaceQuadrupole, vgh, tpos, n));
    for (std::size_t i = 0; i < n; ++i) {
        const StokesSource &s = sources[i];
        const double b2 = s.radius * s.radius;
        push_rpy_common(reqs, Stokes1, Monopole1, Monopole2, Dipole1, s, i);
        push_pair(reqs[Stokes2], s.position, Vec3(b2 * Vec3(s.force.x(), s.force.y(), 0.0)), i);
        push_rpy_weighted(reqs, Dipole2, Quadrupole, s, b2, i);
    }
    return reqs;
}

Vec3 combine_rpy_poly(const TargetPoint &x, std::span<const TargetOutputs> outs, std::size_t t) {
    using namespace rpy_poly_sums;
    const OutputOrders vgh = kValue | kGradient | kHessian;
    const auto &uS = require(outs, Stokes1, Count, KernelId::Stokeslet, kValue | kLaplacian, t).vector[t];
    const auto &ubS = require(outs, Stokes2, Count, KernelId::Stokeslet, kLaplacian, t).vector[t];
    const auto &phiS = require(outs, Monopole1, Count, KernelId::LaplaceMonopole, vgh, t).scalar[t];
    const auto &phiSZ = require(outs, Monopole2, Count, KernelId::LaplaceMonopole, kGradient, t).scalar[t];
    const auto &phiD = require(outs, Dipole1, Count, KernelId::LaplaceDipole, vgh, t).scalar[t];
    const auto &phiDZ = require(outs, Dipole2, Count, KernelId::LaplaceDipole, kGradient, t).scalar[t];
    const auto &phiQ = require(outs, Quadrupole, Count, KernelId::LaplaceQuadrupole, vgh, t).scalar[t];
    const double x3 = x.position.z();
    const double a2 = x.radius * x.radius;
    Vec3 u = uS.value + (a2 / 6.0) * uS.laplacian + (1.0 / 6.0) * ubS.laplacian;
    u += papkovich(x3, phiD) + (a2 / 3.0) * d3_grad(phiD);
    u -= 0.5 * (papkovich(x3, phiS) + (a2 / 3.0) * d3_grad(phiS));
    u += 0.5 * phiSZ.gradient + (1.0 / 6.0) * phiDZ.gradient;
    u += (1.0 / 6.0) * papkovich(x3, phiQ) + (a2 / 18.0) * d3_grad(phiQ);
    return u;
}

std::vector<KernelSumRequest> build_sums(ImageSystem system, std::span<const StokesSource> sources,
                                         std::span<const TargetPoint> targets, double a) {
    switch (system) {
    case ImageSystem::Stokeslet:
        return build_stokeslet_sums(sources, targets);
    case ImageSystem::StokesletLaplacian:
        return build_laplacian_sums(sources, targets);
    case ImageSystem::RpyMono:
        return build_rpy_sums_mono(sources, targets, a);
    case ImageSystem::RpyPoly:
        return build_rpy_sums_poly(sources, targets);
    }
    throw ValidationError("unknown image system");
}

FlowSample combine(ImageSystem system, const TargetPoint &x, std::span<const TargetOutputs> outs, std::size_t t,
                   double a) {
    switch (system) {
    case ImageSystem::Stokeslet:
        return {combine_stokeslet(x, outs, t), std::nullopt};
    case ImageSystem::StokesletLaplacian:
        return combine_laplacian(x, outs, t);
    case ImageSystem::RpyMono:
        return {combine_rpy_mono(x, outs, t, a), std::nullopt};
    case ImageSystem::RpyPoly:
        return {combine_rpy_poly(x, outs, t), std::nullopt};
    }
    throw ValidationError("unknown image system");
}

std::vector<FlowSample> evaluate(ImageSystem system, std::span<const StokesSource> sources,
                                 std::span<const TargetPoint> targets, const PeriodicityConfig &periodicity,
                                 const SummationBackend &backend, double a) {
    const auto reqs = build_sums(system, sources, targets, a);
    std::vector<TargetOutputs> outs;
    outs.reserve(reqs.size());
    for (const auto &r : reqs)
        outs.push_back(backend.evaluate(r, periodicity));
    std::vector<FlowSample> samples(targets.size());
    for (std::size_t t = 0; t < targets.size(); ++t)
        samples[t] = combine(system, targets[t], outs, t, a);
    return samples;
}

std::vector<FlowSample> evaluate(ImageSystem system, std::span<const StokesSource> sources,
                                 std::span<const TargetPoint> targets, const PeriodicityConfig &periodicity, double a) {
    return evaluate(system, sources, targets, periodicity, default_backend(periodicity), a);
}

Eigen::MatrixXd mobility_matrix(std::span<const Particle> particles, const PeriodicityConfig &periodicity) {
    const std::size_t n = particles.size();
    std::vector<TargetPoint> targets(n);
    for (std::size_t i = 0; i < n; ++i) {
        const Particle &p = particles[i];
        if (!(p.radius > 0.0) || !std::isfinite(p.radius))
            throw ValidationError("particle " + std::to_string(i) + " needs a positive finite radius");
        if (p.position.z() < 0.0)
            throw SourceBelowWall("particle " + std::to_string(i) + " lies below the wall");
        for (std::size_t j = 0; j < i; ++j)
            if (particles[j].position == p.position)
                throw CoincidentPoints("particles " + std::to_string(j) + " and " + std::to_string(i) + " coincide");
        targets[i] = {p.position, p.radius};
    }
    const SummationBackend &backend = default_backend(periodicity);
    Eigen::MatrixXd M = Eigen::MatrixXd::Zero(3 * n, 3 * n);
    std::vector<int> owners(n);
    for (std::size_t i = 0; i < n; ++i)
        owners[i] = static_cast<int>(i);

    for (std::size_t j = 0; j < n; ++j) {
        for (int k = 0; k < 3; ++k) {
            const StokesSource src{particles[j].position, Vec3::Unit(k), particles[j].radius};
            auto reqs = build_rpy_sums_poly(std::span<const StokesSource>(&src, 1), targets);
            std::vector<TargetOutputs> outs;
            outs.reserve(reqs.size());
            for (auto &r : reqs) {
                for (auto &s : r.sources)
                    s.owner = static_cast<int>(j);
                // The singular free-space pair term on the diagonal is replaced below.
                r.target_owner = owners;
                outs.push_back(backend.evaluate(r, periodicity));
            }
            const std::size_t col = 3 * j + static_cast<std::size_t>(k);
            for (std::size_t i = 0; i < n; ++i)
                M.block<3, 1>(3 * i, col) = combine_rpy_poly(targets[i], outs, i);
            M(col, col) += 1.0 / (6.0 * kPi * particles[j].radius);
        }
    }
    return M;
}

} // namespace images
} // namespace stokeswall
