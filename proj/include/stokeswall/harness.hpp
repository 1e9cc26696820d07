#ifndef STOKESWALL_HARNESS_HPP_
#define STOKESWALL_HARNESS_HPP_

#include "stokeswall/images.hpp"
#include "stokeswall/summation.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace stokeswall::harness {

/// Image systems the harness can drive. Classic is the original non-neutral form,
/// evaluated pointwise and, under periodicity, replica by replica.
enum class KernelVariant { Stokeslet, StokesletLaplacian, RpyMono, RpyPoly, Classic };

std::string to_string(KernelVariant v);
std::optional<KernelVariant> parse_variant(std::string_view name);

struct RadiusSpec {
    double a = 0.02;     // target radius, and the shared radius for rpy-mono
    double b_min = 0.01; // rpy-poly source radii ~ U[b_min, b_max]
    double b_max = 0.03;
};

struct ExperimentConfig {
    KernelVariant variant = KernelVariant::Stokeslet;
    PeriodicityConfig periodicity;
    std::vector<int> shells; // sweep; empty means {periodicity.n_shell}
    std::size_t n_sources = 500;
    std::uint64_t seed = 1;
    int mesh = 33;
    RadiusSpec radii;
    Vec3 extent{1.0, 1.0, 0.5}; // x1, x2 follow the box lengths when periodic

    void validate() const;
    std::vector<int> shell_list() const;
};

/// Lognormal(0.2, 0.5) coordinates rescaled per axis to fill [0,e1) x [0,e2) x [0,e3);
/// forces uniform in [-0.5, 0.5]^3. Deterministic in `seed`.
std::vector<StokesSource> generate_sources(std::size_t n, std::uint64_t seed, const Vec3 &extent = {1.0, 1.0, 0.5});

/// Sources for a config, with radii assigned per variant.
std::vector<StokesSource> experiment_sources(const ExperimentConfig &config);

/// Chebyshev-Lobatto nodes (1 - cos(k pi/(m-1)))/2 on [0,1], mirrored so t_k + t_{m-1-k} == 1.
std::vector<double> chebyshev_nodes(int m);

enum class Face { Wall, X0, X1, Y0, Y1 };

/// m x m tensor grid on a face of the box [0,e1] x [0,e2] x [0,e3].
std::vector<Vec3> chebyshev_mesh(int m, Face face, const Vec3 &extent = {1.0, 1.0, 0.5});

/// Nodes per axis of the reference cloud used to normalise the no-slip residual.
inline constexpr int kReferenceCloudNodes = 5;
std::vector<Vec3> reference_cloud(const Vec3 &extent);

/// Velocities of `variant` at `targets` for every shell count in `shells`
/// (result aligned with `shells`). Non-periodic configs return one snapshot per entry.
std::vector<std::vector<Vec3>> image_velocities(KernelVariant variant, std::span<const StokesSource> sources,
                                                std::span<const TargetPoint> targets,
                                                const PeriodicityConfig &periodicity, std::span<const int> shells,
                                                double a = 0.0);

/// Original image system summed replica by replica in symmetric shell pairs.
std::vector<std::vector<Vec3>> composite_periodic_velocities(std::span<const StokesSource> sources,
                                                             std::span<const Vec3> targets,
                                                             const PeriodicityConfig &periodicity,
                                                             std::span<const int> shells);

struct NoslipReport {
    int n_shell = 0;
    double max_abs_wall = 0.0;    // max |u_k| on the wall mesh
    double reference_scale = 0.0; // max |u_k| on the reference cloud
    double normalized = 0.0;      // max_abs_wall / reference_scale (0 if both vanish)
};

/// One report per shell count in config.shell_list().
std::vector<NoslipReport> noslip_reports(const ExperimentConfig &config);

/// Normalised residual at the first configured shell count.
double noslip_residual(const ExperimentConfig &config);

struct ShellTrace {
    int n_shell = 0;
    std::optional<double> eps_x;
    std::optional<double> eps_y;
    double max_noslip = 0.0;
};

struct ErrorReport {
    double max_noslip = 0.0;
    std::optional<double> eps_L2_X;
    std::optional<double> eps_L2_Y;
    std::vector<ShellTrace> trace;
};

/// ||u(face0) - u(face1)||_2 / ||u over both faces||_2 for index-paired meshes.
double relative_l2_mismatch(std::span<const Vec3> face0, std::span<const Vec3> face1);

enum class Axis { X, Y };

/// eps_L2 along one axis for each shell count. Throws ModeMismatch when the
/// axis is not periodic under the config.
std::vector<double> periodicity_error_axis(const ExperimentConfig &config, Axis axis);

/// Periodicity mismatch in every periodic direction plus the no-slip residual,
/// per shell count. The headline fields carry the largest shell count.
ErrorReport periodicity_error(const ExperimentConfig &config);

struct GridSpec {
    double x1_min = -4.0, x1_max = 4.0;
    double x3_min = 0.0, x3_max = 6.0;
    int n1 = 33, n3 = 25;
    double x2 = 0.0;
};

struct FieldSample {
    Vec3 position = Vec3::Zero();
    Vec3 velocity = Vec3::Zero();
    bool overlap = false; // |x - y| < a + b
};

/// Target-particle velocity on a vertical x1-x3 grid, non-periodic RPY image.
std::vector<FieldSample> rpy_field_grid(const StokesSource &source, double a, const GridSpec &grid);

} // namespace stokeswall::harness

#endif
