#ifndef STOKESWALL_IMAGES_HPP_
#define STOKESWALL_IMAGES_HPP_

#include "stokeswall/request.hpp"
#include "stokeswall/summation.hpp"

#include <Eigen/Dense>

#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace stokeswall {

/// Point force above the wall x3 = 0. `radius` is the RPY source radius b (0 for a bare Stokeslet).
struct StokesSource {
    Vec3 position = Vec3::Zero();
    Vec3 force = Vec3::Zero();
    double radius = 0.0;
};

/// Evaluation point; `radius` is the RPY target radius a.
struct TargetPoint {
    Vec3 position = Vec3::Zero();
    double radius = 0.0;
};

struct FlowSample {
    Vec3 velocity = Vec3::Zero();
    std::optional<double> pressure;
};

/// Image systems that can be assembled from kernel sums.
enum class ImageSystem { Stokeslet, StokesletLaplacian, RpyMono, RpyPoly };

std::string to_string(ImageSystem system);

namespace images {

/// Mirror point and mirror force: (y1, y2, -y3) and (f1, f2, -f3).
std::pair<Vec3, Vec3> reflect(const StokesSource &src);

/// Wall Stokeslet in the original (non-neutral) Papkovich-Neuber form:
/// J(x,y) f - J(x,y^I) f^I - (x3 grad - e3) phi with
/// phi = G^S(x,y^I) f3^I + G^D(x,y^I) . (y3 f^I).
Vec3 classic_image_velocity(const Vec3 &x, const StokesSource &src);

// Neutral Stokeslet image: four kernel sums.
//   0 stokes     f_xy at y, -f_xy at y^I               value
//   1 dipole     y3 (-f1,-f2,f3) at y^I                value, gradient
//   2 monopole1  f3 at y, -f3 at y^I                   value, gradient
//   3 monopole2  f3 y3 at y, -f3 y3 at y^I             gradient
namespace stokeslet_sums {
enum Index : std::size_t { Stokes = 0, Dipole, Monopole1, Monopole2, Count };
}

std::vector<KernelSumRequest> build_stokeslet_sums(std::span<const StokesSource> sources,
                                                   std::span<const TargetPoint> targets);

Vec3 combine_stokeslet(const TargetPoint &x, std::span<const TargetOutputs> outs, std::size_t t);

/// Laplacian-of-Stokeslet image, closed form. Pressure p = -4 d(phi^GD)/dx3.
FlowSample laplacian_image_flow(const TargetPoint &x, const StokesSource &src);

// Same system as two dipole kernel sums (Q f = grad_x(G^D . f)).
//   0 direct  f at y          gradient
//   1 image   f^I at y^I      gradient, hessian
namespace laplacian_sums {
enum Index : std::size_t { Direct = 0, Image, Count };
}

std::vector<KernelSumRequest> build_laplacian_sums(std::span<const StokesSource> sources,
                                                   std::span<const TargetPoint> targets);

FlowSample combine_laplacian(const TargetPoint &x, std::span<const TargetOutputs> outs, std::size_t t);

/// Free-space RPY: (1 + (a^2 + b^2)/6 lap) J f.
Vec3 rpy_free_space(const TargetPoint &x, const StokesSource &src);

namespace rpy_mono_sums {
enum Index : std::size_t { Stokes = 0, Monopole1, Monopole2, Dipole1, Dipole2, Quadrupole, Count };
}

namespace rpy_poly_sums {
enum Index : std::size_t { Stokes1 = 0, Stokes2, Monopole1, Monopole2, Dipole1, Dipole2, Quadrupole, Count };
}

/// Strength tensor 2 [[f3,0,0],[0,f3,0],[f1,f2,0]] of the RPY quadrupole sum.
Mat3 rpy_quadrupole_strength(const Vec3 &f);

/// Monodisperse RPY image (six sums). Source radii are ignored; every particle has radius a.
std::vector<KernelSumRequest> build_rpy_sums_mono(std::span<const StokesSource> sources,
                                                  std::span<const TargetPoint> targets, double a);

Vec3 combine_rpy_mono(const TargetPoint &x, std::span<const TargetOutputs> outs, std::size_t t, double a);

/// Polydisperse RPY image (seven sums) with per-source radius b carried in the strengths.
std::vector<KernelSumRequest> build_rpy_sums_poly(std::span<const StokesSource> sources,
                                                  std::span<const TargetPoint> targets);

/// Uses x.radius as the target radius a.
Vec3 combine_rpy_poly(const TargetPoint &x, std::span<const TargetOutputs> outs, std::size_t t);

// Generic dispatch over ImageSystem. `a` is only read by RpyMono.
std::vector<KernelSumRequest> build_sums(ImageSystem system, std::span<const StokesSource> sources,
                                         std::span<const TargetPoint> targets, double a = 0.0);

FlowSample combine(ImageSystem system, const TargetPoint &x, std::span<const TargetOutputs> outs, std::size_t t,
                   double a = 0.0);

/// Builds, evaluates with `backend`, and combines at every target.
std::vector<FlowSample> evaluate(ImageSystem system, std::span<const StokesSource> sources,
                                 std::span<const TargetPoint> targets, const PeriodicityConfig &periodicity,
                                 const SummationBackend &backend, double a = 0.0);

std::vector<FlowSample> evaluate(ImageSystem system, std::span<const StokesSource> sources,
                                 std::span<const TargetPoint> targets, const PeriodicityConfig &periodicity = {},
                                 double a = 0.0);

/// Sphere used by the mobility assembly.
struct Particle {
    Vec3 position = Vec3::Zero();
    double radius = 0.0;
};

/// Dense 3N x 3N RPY mobility above the wall. Column 3j+k is the velocity of
/// every particle under a unit force e_k on particle j. Diagonal blocks are
/// I/(6 pi a) plus the image-system correction at zero separation.
Eigen::MatrixXd mobility_matrix(std::span<const Particle> particles, const PeriodicityConfig &periodicity = {});

} // namespace images
} // namespace stokeswall

#endif
