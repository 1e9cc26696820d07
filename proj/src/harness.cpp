#include "stokeswall/harness.hpp"
#include "stokeswall/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace stokeswall::harness {

std::string to_string(KernelVariant v) {
    switch (v) {
    case KernelVariant::Stokeslet:
        return "stokeslet";
    case KernelVariant::StokesletLaplacian:
        return "laplacian";
    case KernelVariant::RpyMono:
        return "rpy-mono";
    case KernelVariant::RpyPoly:
        return "rpy-poly";
    case KernelVariant::Classic:
        return "classic";
    }
    return "unknown";
}

std::optional<KernelVariant> parse_variant(std::string_view name) {
    if (name == "stokeslet")
        return KernelVariant::Stokeslet;
    if (name == "laplacian" || name == "stokeslet-laplacian")
        return KernelVariant::StokesletLaplacian;
    if (name == "rpy-mono")
        return KernelVariant::RpyMono;
    if (name == "rpy-poly")
        return KernelVariant::RpyPoly;
    if (name == "classic")
        return KernelVariant::Classic;
    return std::nullopt;
}

void ExperimentConfig::validate() const {
    if (n_sources < 1)
        throw ValidationError("at least one source is required");
    if (mesh < 2)
        throw ValidationError("mesh size must be at least 2");
    for (int s : shell_list())
        if (s < 0)
            throw ValidationError("shell counts must be non-negative");
    if (periodicity.periodic_x() && !(periodicity.L1 > 0.0))
        throw ValidationError("box length L1 must be positive");
    if (periodicity.periodic_y() && !(periodicity.L2 > 0.0))
        throw ValidationError("box length L2 must be positive");
    if (!(radii.a >= 0.0) || !(radii.b_min >= 0.0) || !(radii.b_max >= radii.b_min))
        throw ValidationError("radii must satisfy a >= 0 and 0 <= b_min <= b_max");
    if (!(extent.minCoeff() > 0.0))
        throw ValidationError("box extent must be positive");
}

std::vector<int> ExperimentConfig::shell_list() const {
    if (shells.empty())
        return {periodicity.n_shell};
    return shells;
}

namespace {

Vec3 box_extent(const ExperimentConfig &config) {
    Vec3 e = config.extent;
    if (config.periodicity.periodic_x())
        e.x() = config.periodicity.L1;
    if (config.periodicity.periodic_y())
        e.y() = config.periodicity.L2;
    return e;
}

std::optional<ImageSystem> system_of(KernelVariant v) {
    switch (v) {
    case KernelVariant::Stokeslet:
        return ImageSystem::Stokeslet;
    case KernelVariant::StokesletLaplacian:
        return ImageSystem::StokesletLaplacian;
    case KernelVariant::RpyMono:
        return ImageSystem::RpyMono;
    case KernelVariant::RpyPoly:
        return ImageSystem::RpyPoly;
    case KernelVariant::Classic:
        return std::nullopt;
    }
    return std::nullopt;
}

bool is_rpy(KernelVariant v) { return v == KernelVariant::RpyMono || v == KernelVariant::RpyPoly; }

std::vector<TargetPoint> as_targets(std::span<const Vec3> points, double radius) {
    std::vector<TargetPoint> out;
    out.reserve(points.size());
    for (const auto &p : points)
        out.push_back({p, radius});
    return out;
}

double max_abs_component(std::span<const Vec3> v) {
    double m = 0.0;
    for (const auto &u : v)
        m = std::max(m, u.cwiseAbs().maxCoeff());
    return m;
}

} // namespace

std::vector<StokesSource> generate_sources(std::size_t n, std::uint64_t seed, const Vec3 &extent) {
    std::mt19937_64 rng(seed);
    std::lognormal_distribution<double> coord(0.2, 0.5);
    std::uniform_real_distribution<double> force(-0.5, 0.5);
    std::vector<StokesSource> out(n);
    for (auto &s : out) {
        for (int k = 0; k < 3; ++k)
            s.position[k] = coord(rng);
        for (int k = 0; k < 3; ++k)
            s.force[k] = force(rng);
    }
    // Per-axis min/max rescale into the half-open box.
    constexpr double kShrink = 1.0 - 1e-9;
    for (int k = 0; k < 3; ++k) {
        double lo = std::numeric_limits<double>::infinity();
        double hi = -lo;
        for (const auto &s : out) {
            lo = std::min(lo, s.position[k]);
            hi = std::max(hi, s.position[k]);
        }
        for (auto &s : out) {
            const double u = hi > lo ? (s.position[k] - lo) / (hi - lo) : 0.5;
            s.position[k] = u * kShrink * extent[k];
        }
    }
    return out;
}

std::vector<StokesSource> experiment_sources(const ExperimentConfig &config) {
    auto sources = generate_sources(config.n_sources, config.seed, box_extent(config));
    if (config.variant == KernelVariant::RpyMono) {
        for (auto &s : sources)
            s.radius = config.radii.a;
    } else if (config.variant == KernelVariant::RpyPoly) {
        std::mt19937_64 rng(config.seed ^ 0x9E3779B97F4A7C15ULL);
        std::uniform_real_distribution<double> radius(config.radii.b_min, config.radii.b_max);
        for (auto &s : sources)
            s.radius = radius(rng);
    }
    return sources;
}

std::vector<double> chebyshev_nodes(int m) {
    if (m < 2)
        throw ValidationError("Chebyshev mesh needs at least 2 nodes");
    std::vector<double> t(static_cast<std::size_t>(m));
    const double h = kPi / (m - 1);
    for (int k = 0; 2 * k < m - 1; ++k) {
        t[k] = 0.5 * (1.0 - std::cos(k * h));
        t[m - 1 - k] = 1.0 - t[k];
    }
    if (m % 2 == 1)
        t[m / 2] = 0.5;
    t.front() = 0.0;
    t.back() = 1.0;
    return t;
}

std::vector<Vec3> chebyshev_mesh(int m, Face face, const Vec3 &extent) {
    const auto t = chebyshev_nodes(m);
    std::vector<Vec3> out;
    out.reserve(t.size() * t.size());
    for (double u : t) {
        for (double v : t) {
            switch (face) {
            case Face::Wall:
                out.emplace_back(u * extent.x(), v * extent.y(), 0.0);
                break;
            case Face::X0:
                out.emplace_back(0.0, u * extent.y(), v * extent.z());
                break;
            case Face::X1:
                out.emplace_back(extent.x(), u * extent.y(), v * extent.z());
                break;
            case Face::Y0:
                out.emplace_back(u * extent.x(), 0.0, v * extent.z());
                break;
            case Face::Y1:
                out.emplace_back(u * extent.x(), extent.y(), v * extent.z());
                break;
            }
        }
    }
    return out;
}

std::vector<Vec3> reference_cloud(const Vec3 &extent) {
    const auto t = chebyshev_nodes(kReferenceCloudNodes);
    std::vector<Vec3> out;
    out.reserve(t.size() * t.size() * t.size());
    for (double u : t)
        for (double v : t)
            for (double w : t)
                out.emplace_back(u * extent.x(), v * extent.y(), w * extent.z());
    return out;
}

std::vector<std::vector<Vec3>> composite_periodic_velocities(std::span<const StokesSource> sources,
                                                             std::span<const Vec3> targets,
                                                             const PeriodicityConfig &periodicity,
                                                             std::span<const int> shells) {
    std::vector<int> order(shells.begin(), shells.end());
    const int max_shell =
        periodicity.mode == PeriodicMode::None || order.empty() ? 0 : *std::max_element(order.begin(), order.end());
    const auto offsets = shell_offsets(max_shell, periodicity);
    const std::size_t per_shell = periodicity.mode == PeriodicMode::SPx ? 2 : 8;

    std::vector<std::vector<Vec3>> out(shells.size(), std::vector<Vec3>(targets.size(), Vec3::Zero()));
    for_each_index(targets.size(), [&](std::size_t t) {
        const Vec3 &x = targets[t];
        auto replica = [&](const Vec3 &offset) {
            Vec3 u = Vec3::Zero();
            for (const auto &s : sources) {
                StokesSource moved = s;
                moved.position += offset;
                u += images::classic_image_velocity(x, moved);
            }
            return u;
        };
        Vec3 total = replica(offsets[0]);
        auto emit = [&](int shell) {
            for (std::size_t i = 0; i < shells.size(); ++i)
                if ((periodicity.mode == PeriodicMode::None ? 0 : shells[i]) == shell)
                    out[i][t] = total;
        };
        emit(0);
        std::size_t k = 1;
        for (int shell = 1; shell <= max_shell; ++shell) {
            const std::size_t end = k + (periodicity.mode == PeriodicMode::SPx ? per_shell : per_shell * shell);
            for (; k < end; k += 2) {
                const Vec3 pair = replica(offsets[k]) + replica(offsets[k + 1]);
                total += pair;
            }
            emit(shell);
        }
    });
    return out;
}

std::vector<std::vector<Vec3>> image_velocities(KernelVariant variant, std::span<const StokesSource> sources,
                                                std::span<const TargetPoint> targets,
                                                const PeriodicityConfig &periodicity, std::span<const int> shells,
                                                double a) {
    const auto system = system_of(variant);
    if (!system) {
        std::vector<Vec3> points;
        points.reserve(targets.size());
        for (const auto &t : targets)
            points.push_back(t.position);
        return composite_periodic_velocities(sources, points, periodicity, shells);
    }
    const auto reqs = images::build_sums(*system, sources, targets, a);
    // per_request[r][k] = outputs of request r at shells[k]
    std::vector<std::vector<TargetOutputs>> per_request;
    per_request.reserve(reqs.size());
    for (const auto &r : reqs)
        per_request.push_back(periodic_sum_sweep(r, periodicity, shells));

    std::vector<std::vector<Vec3>> out(shells.size(), std::vector<Vec3>(targets.size()));
    std::vector<TargetOutputs> outs(reqs.size());
    for (std::size_t k = 0; k < shells.size(); ++k) {
        for (std::size_t r = 0; r < reqs.size(); ++r)
            outs[r] = std::move(per_request[r][k]);
        for (std::size_t t = 0; t < targets.size(); ++t)
            out[k][t] = images::combine(*system, targets[t], outs, t, a).velocity;
    }
    return out;
}

namespace {

struct Evaluated {
    std::vector<int> shells;
    std::vector<std::vector<Vec3>> wall;      // per shell
    std::vector<std::vector<Vec3>> reference; // per shell
    std::vector<std::vector<Vec3>> faces;     // per shell: X0 | X1 | Y0 | Y1 (periodic directions only)
    std::size_t face_size = 0;
};

// Evaluates the wall mesh, the reference cloud, and optionally the side faces
// for every configured shell count.
Evaluated evaluate_config(const ExperimentConfig &config, bool with_faces) {
    config.validate();
    Evaluated ev;
    ev.shells = config.shell_list();
    const Vec3 extent = box_extent(config);
    const auto sources = experiment_sources(config);
    const double a = config.radii.a;

    // No-slip is a property of point targets: RPY wall points carry radius 0 and
    // go through the polydisperse path (mono sources already have b = a).
    const auto wall = chebyshev_mesh(config.mesh, Face::Wall, extent);
    const KernelVariant wall_variant = is_rpy(config.variant) ? KernelVariant::RpyPoly : config.variant;
    ev.wall = image_velocities(wall_variant, sources, as_targets(wall, 0.0), config.periodicity, ev.shells);

    std::vector<Vec3> others = reference_cloud(extent);
    const std::size_t n_ref = others.size();
    if (with_faces) {
        const auto p = config.periodicity;
        std::vector<Face> faces;
        if (p.periodic_x())
            faces.insert(faces.end(), {Face::X0, Face::X1});
        if (p.periodic_y())
            faces.insert(faces.end(), {Face::Y0, Face::Y1});
        for (Face f : faces) {
            const auto mesh = chebyshev_mesh(config.mesh, f, extent);
            ev.face_size = mesh.size();
            others.insert(others.end(), mesh.begin(), mesh.end());
        }
    }
    const double target_radius = is_rpy(config.variant) ? a : 0.0;
    auto all = image_velocities(config.variant, sources, as_targets(others, target_radius), config.periodicity,
                                ev.shells, a);
    for (auto &v : all) {
        ev.reference.emplace_back(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(n_ref));
        ev.faces.emplace_back(v.begin() + static_cast<std::ptrdiff_t>(n_ref), v.end());
    }
    return ev;
}

NoslipReport make_noslip(int shell, std::span<const Vec3> wall, std::span<const Vec3> reference) {
    NoslipReport r;
    r.n_shell = shell;
    r.max_abs_wall = max_abs_component(wall);
    r.reference_scale = max_abs_component(reference);
    r.normalized = r.reference_scale > 0.0 ? r.max_abs_wall / r.reference_scale : 0.0;
    return r;
}

} // namespace

std::vector<NoslipReport> noslip_reports(const ExperimentConfig &config) {
    const Evaluated ev = evaluate_config(config, false);
    std::vector<NoslipReport> out;
    for (std::size_t k = 0; k < ev.shells.size(); ++k)
        out.push_back(make_noslip(ev.shells[k], ev.wall[k], ev.reference[k]));
    return out;
}

double noslip_residual(const ExperimentConfig &config) { return noslip_reports(config).front().normalized; }

double relative_l2_mismatch(std::span<const Vec3> face0, std::span<const Vec3> face1) {
    if (face0.size() != face1.size())
        throw ValidationError("paired face meshes differ in size");
    double diff2 = 0.0;
    double norm2 = 0.0;
    for (std::size_t i = 0; i < face0.size(); ++i) {
        diff2 += (face0[i] - face1[i]).squaredNorm();
        norm2 += face0[i].squaredNorm() + face1[i].squaredNorm();
    }
    return norm2 > 0.0 ? std::sqrt(diff2 / norm2) : 0.0;
}

ErrorReport periodicity_error(const ExperimentConfig &config) {
    if (config.periodicity.mode == PeriodicMode::None)
        throw ModeMismatch("periodicity error requested for a non-periodic configuration");
    const Evaluated ev = evaluate_config(config, true);
    const std::size_t m2 = ev.face_size;
    ErrorReport report;
    for (std::size_t k = 0; k < ev.shells.size(); ++k) {
        ShellTrace tr;
        tr.n_shell = ev.shells[k];
        const std::span<const Vec3> faces(ev.faces[k]);
        tr.eps_x = relative_l2_mismatch(faces.subspan(0, m2), faces.subspan(m2, m2));
        if (config.periodicity.periodic_y())
            tr.eps_y = relative_l2_mismatch(faces.subspan(2 * m2, m2), faces.subspan(3 * m2, m2));
        tr.max_noslip = make_noslip(tr.n_shell, ev.wall[k], ev.reference[k]).normalized;
        report.trace.push_back(tr);
    }
    // Headline values at the largest shell count.
    const auto best = std::max_element(report.trace.begin(), report.trace.end(),
                                       [](const ShellTrace &l, const ShellTrace &r) { return l.n_shell < r.n_shell; });
    report.max_noslip = best->max_noslip;
    report.eps_L2_X = best->eps_x;
    report.eps_L2_Y = best->eps_y;
    return report;
}

std::vector<double> periodicity_error_axis(const ExperimentConfig &config, Axis axis) {
    const auto &p = config.periodicity;
    if (axis == Axis::X && !p.periodic_x())
        throw ModeMismatch("eps_L2,X requested but x1 is not periodic (mode " + to_string(p.mode) + ")");
    if (axis == Axis::Y && !p.periodic_y())
        throw ModeMismatch("eps_L2,Y requested but x2 is not periodic (mode " + to_string(p.mode) + ")");
    const ErrorReport report = periodicity_error(config);
    std::vector<double> out;
    for (const auto &tr : report.trace)
        out.push_back(axis == Axis::X ? *tr.eps_x : *tr.eps_y);
    return out;
}

std::vector<FieldSample> rpy_field_grid(const StokesSource &source, double a, const GridSpec &grid) {
    if (grid.n1 < 1 || grid.n3 < 1)
        throw ValidationError("grid needs at least one point per axis");
    if (grid.x3_min < 0.0)
        throw ValidationError("grid must lie above the wall");
    if (!(a >= 0.0))
        throw ValidationError("target radius must be non-negative");
    auto lin = [](double lo, double hi, int n, int i) { return n == 1 ? lo : lo + (hi - lo) * i / (n - 1); };
    std::vector<TargetPoint> targets;
    targets.reserve(static_cast<std::size_t>(grid.n1) * grid.n3);
    for (int k = 0; k < grid.n3; ++k)
        for (int i = 0; i < grid.n1; ++i)
            targets.push_back({Vec3(lin(grid.x1_min, grid.x1_max, grid.n1, i), grid.x2,
                                    lin(grid.x3_min, grid.x3_max, grid.n3, k)),
                               a});
    // A grid point exactly on the source centre gets the image part plus the
    // zero-separation RPY value f / (6 pi max(a, b)), as on the mobility diagonal.
    const double r_max = std::max(a, source.radius);
    std::vector<int> target_owner(targets.size(), -1);
    for (std::size_t t = 0; t < targets.size(); ++t) {
        if (targets[t].position == source.position) {
            if (!(r_max > 0.0))
                throw CoincidentPoints("grid point coincides with a point source");
            target_owner[t] = 0;
        }
    }
    auto reqs = images::build_rpy_sums_poly(std::span<const StokesSource>(&source, 1), targets);
    std::vector<TargetOutputs> outs;
    for (auto &r : reqs) {
        for (auto &e : r.sources)
            e.owner = 0;
        r.target_owner = target_owner;
        outs.push_back(direct_sum(r));
    }
    std::vector<FieldSample> out(targets.size());
    for (std::size_t t = 0; t < targets.size(); ++t) {
        out[t].position = targets[t].position;
        out[t].velocity = images::combine_rpy_poly(targets[t], outs, t);
        if (target_owner[t] == 0)
            out[t].velocity += source.force / (6.0 * kPi * r_max);
        out[t].overlap = (targets[t].position - source.position).norm() < a + source.radius;
    }
    return out;
}

} // namespace stokeswall::harness
