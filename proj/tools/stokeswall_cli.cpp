// stokeswall command-line driver: CSV in, CSV and manifest.txt out.
#include "stokeswall/harness.hpp"
#include "stokeswall/images.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/os.h>

#ifdef _OPENMP
#include <omp.h>
#endif

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

namespace fs = std::filesystem;
using namespace stokeswall;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitContract = 2;
constexpr int kExitUsage = 64;

struct Options {
    std::string kernel = "stokeslet";
    std::string mode = "none";
    std::vector<double> box{1.0, 1.0};
    std::vector<int> shells;
    std::size_t n = 500;
    int mesh = 33;
    std::uint64_t seed = 1;
    double radius = 0.02;
    double b_min = 0.01;
    double b_max = 0.03;
    std::string out = ".";
    int threads = 0;

    std::string sources_csv;
    std::string targets_csv;

    // rpy-field
    double height = 1.0;
    double source_radius = 1.0;
    std::string force = "x";
    int n1 = 33, n3 = 25;

    std::size_t bench_targets = 2000;
};

class Manifest {
  public:
    void set(const std::string &key, const std::string &value) { entries_[key] = value; }
    void set(const std::string &key, double value) { entries_[key] = fmt::format("{:.17g}", value); }

    void write(const fs::path &path) const {
        std::ofstream os(path);
        for (const auto &[k, v] : entries_)
            os << k << '=' << v << '\n';
    }

  private:
    std::map<std::string, std::string> entries_;
};

std::string fmt17(double v) { return fmt::format("{:.17g}", v); }

std::vector<std::string> split(const std::string &line) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ','))
        cells.push_back(cell);
    return cells;
}

double parse_double(const std::string &s, const std::string &where) {
    try {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        if (used != s.size() && s.find_first_not_of(" \t\r", used) != std::string::npos)
            throw std::invalid_argument(s);
        return v;
    } catch (const std::exception &) {
        throw ValidationError(where + ": not a number: '" + s + "'");
    }
}

// Header-checked numeric table; `optional_col` may be absent.
std::vector<std::vector<double>> read_csv(const std::string &path, const std::vector<std::string> &required,
                                          const std::string &optional_col) {
    std::ifstream is(path);
    if (!is)
        throw ValidationError("cannot open " + path);
    std::string line;
    if (!std::getline(is, line))
        throw ValidationError(path + ": missing header row");
    if (!line.empty() && line.back() == '\r')
        line.pop_back();
    const auto header = split(line);
    bool with_optional = header.size() == required.size() + 1 && header.back() == optional_col;
    if (!with_optional && header != required)
        throw ValidationError(path + ": unexpected header '" + line + "'");
    for (std::size_t i = 0; i < required.size(); ++i)
        if (header[i] != required[i])
            throw ValidationError(path + ": unexpected header '" + line + "'");

    std::vector<std::vector<double>> rows;
    std::size_t lineno = 1;
    while (std::getline(is, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.empty())
            continue;
        const auto cells = split(line);
        if (cells.size() != header.size())
            throw ValidationError(path + ":" + std::to_string(lineno) + ": expected " +
                                  std::to_string(header.size()) + " columns");
        std::vector<double> row;
        for (const auto &c : cells)
            row.push_back(parse_double(c, path + ":" + std::to_string(lineno)));
        rows.push_back(std::move(row));
    }
    return rows;
}

std::vector<StokesSource> read_sources(const std::string &path, double default_b) {
    const auto rows = read_csv(path, {"x1", "x2", "x3", "f1", "f2", "f3"}, "b");
    if (rows.empty())
        throw ValidationError(path + ": no sources");
    std::vector<StokesSource> out;
    for (const auto &r : rows)
        out.push_back({Vec3(r[0], r[1], r[2]), Vec3(r[3], r[4], r[5]), r.size() > 6 ? r[6] : default_b});
    return out;
}

std::vector<TargetPoint> read_targets(const std::string &path, double default_a) {
    const auto rows = read_csv(path, {"x1", "x2", "x3"}, "a");
    if (rows.empty())
        throw ValidationError(path + ": no targets");
    std::vector<TargetPoint> out;
    for (const auto &r : rows)
        out.push_back({Vec3(r[0], r[1], r[2]), r.size() > 3 ? r[3] : default_a});
    return out;
}

PeriodicityConfig periodicity(const Options &o) {
    PeriodicityConfig p;
    if (o.mode == "none")
        p.mode = PeriodicMode::None;
    else if (o.mode == "sp")
        p.mode = PeriodicMode::SPx;
    else if (o.mode == "dp")
        p.mode = PeriodicMode::DPxy;
    if (o.box.size() != 2)
        throw ValidationError("--box expects L1,L2");
    p.L1 = o.box[0];
    p.L2 = o.box[1];
    if (!(p.L1 > 0.0 && p.L2 > 0.0))
        throw ValidationError("box lengths must be positive");
    p.n_shell = o.shells.empty() ? 0 : *std::max_element(o.shells.begin(), o.shells.end());
    return p;
}

harness::KernelVariant variant(const Options &o) {
    const auto v = harness::parse_variant(o.kernel);
    if (!v)
        throw ValidationError("unknown kernel '" + o.kernel + "'");
    return *v;
}

harness::ExperimentConfig experiment(const Options &o) {
    harness::ExperimentConfig c;
    c.variant = variant(o);
    c.periodicity = periodicity(o);
    c.shells = o.shells;
    c.n_sources = o.n;
    c.seed = o.seed;
    c.mesh = o.mesh;
    c.radii = {o.radius, o.b_min, o.b_max};
    c.validate();
    return c;
}

void echo_config(Manifest &m, const Options &o, const std::string &command) {
    m.set("command", command);
    m.set("kernel", o.kernel);
    m.set("mode", o.mode);
    m.set("box", fmt::format("{:.17g},{:.17g}", o.box.at(0), o.box.at(1)));
    std::string shells;
    for (std::size_t i = 0; i < o.shells.size(); ++i)
        shells += (i ? "," : "") + std::to_string(o.shells[i]);
    m.set("shells", shells.empty() ? "0" : shells);
    m.set("n", std::to_string(o.n));
    m.set("mesh", std::to_string(o.mesh));
    m.set("seed", std::to_string(o.seed));
    m.set("radius", o.radius);
    m.set("neutrality_tolerance", kNeutralityTolerance);
    m.set("noslip_normalization", "max |u_k| over the reference cloud");
#ifdef _OPENMP
    m.set("threads", std::to_string(omp_get_max_threads()));
#else
    m.set("threads", "1");
#endif
}

template <typename F>
double timed(F &&f) {
    const auto t0 = std::chrono::steady_clock::now();
    f();
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

int run_evaluate(const Options &o, Manifest &m) {
    if (o.sources_csv.empty() || o.targets_csv.empty())
        throw ValidationError("evaluate needs --sources and --targets");
    const auto v = variant(o);
    const auto p = periodicity(o);
    const auto sources = read_sources(o.sources_csv, o.radius);
    const auto targets = read_targets(o.targets_csv, o.radius);

    std::vector<FlowSample> flow(targets.size());
    const double seconds = timed([&] {
        if (v == harness::KernelVariant::StokesletLaplacian) {
            flow = images::evaluate(ImageSystem::StokesletLaplacian, sources, targets, p);
        } else {
            const int shells[] = {p.n_shell};
            const auto u = harness::image_velocities(v, sources, targets, p, shells, o.radius);
            for (std::size_t t = 0; t < targets.size(); ++t)
                flow[t].velocity = u[0][t];
        }
    });

    const bool with_p = v == harness::KernelVariant::StokesletLaplacian;
    auto out = fmt::output_file((fs::path(o.out) / "velocities.csv").string());
    out.print("{}", with_p ? "x1,x2,x3,u1,u2,u3,p\n" : "x1,x2,x3,u1,u2,u3\n");
    for (std::size_t t = 0; t < targets.size(); ++t) {
        const Vec3 &x = targets[t].position;
        const Vec3 &u = flow[t].velocity;
        out.print("{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g}", x[0], x[1], x[2], u[0], u[1], u[2]);
        if (with_p)
            out.print(",{:.17g}", flow[t].pressure.value_or(0.0));
        out.print("\n");
    }
    m.set("sources", std::to_string(sources.size()));
    m.set("targets", std::to_string(targets.size()));
    m.set("seconds", seconds);
    return kExitOk;
}

int run_verify_noslip(const Options &o, Manifest &m) {
    const auto c = experiment(o);
    std::vector<harness::NoslipReport> reports;
    const double seconds = timed([&] { reports = harness::noslip_reports(c); });
    auto out = fmt::output_file((fs::path(o.out) / "noslip.csv").string());
    out.print("n_shell,max_abs_wall,reference_scale,max_noslip\n");
    double worst = 0.0;
    for (const auto &r : reports) {
        out.print("{},{:.17g},{:.17g},{:.17g}\n", r.n_shell, r.max_abs_wall, r.reference_scale, r.normalized);
        worst = std::max(worst, r.normalized);
    }
    m.set("max_noslip", worst);
    m.set("seconds", seconds);
    std::cout << "max_noslip=" << fmt17(worst) << '\n';
    return kExitOk;
}

int run_verify_periodic(const Options &o, Manifest &m) {
    const auto c = experiment(o);
    harness::ErrorReport rep;
    const double seconds = timed([&] { rep = harness::periodicity_error(c); });
    auto opt = [](const std::optional<double> &v) { return v ? fmt17(*v) : std::string(); };
    auto out = fmt::output_file((fs::path(o.out) / "periodic.csv").string());
    out.print("n_shell,eps_L2_X,eps_L2_Y,max_noslip\n");
    for (const auto &t : rep.trace)
        out.print("{},{},{},{:.17g}\n", t.n_shell, opt(t.eps_x), opt(t.eps_y), t.max_noslip);
    if (rep.eps_L2_X)
        m.set("eps_L2_X", *rep.eps_L2_X);
    if (rep.eps_L2_Y)
        m.set("eps_L2_Y", *rep.eps_L2_Y);
    m.set("max_noslip", rep.max_noslip);
    m.set("seconds", seconds);
    for (const auto &t : rep.trace)
        std::cout << "n_shell=" << t.n_shell << " eps_x=" << opt(t.eps_x) << " eps_y=" << opt(t.eps_y)
                  << " max_noslip=" << fmt17(t.max_noslip) << '\n';
    if (rep.eps_L2_X && rep.eps_L2_Y) {
        const double ratio = *rep.eps_L2_X / *rep.eps_L2_Y;
        if (ratio > 3.0 || ratio < 1.0 / 3.0)
            std::cerr << "warning: eps_L2_X and eps_L2_Y differ by more than a factor of 3\n";
    }
    return kExitOk;
}

int run_rpy_field(const Options &o, Manifest &m) {
    Vec3 f;
    if (o.force == "x")
        f = Vec3::UnitX();
    else if (o.force == "z")
        f = Vec3::UnitZ();
    else
        throw ValidationError("--force must be x or z");
    if (!(o.height > 0.0))
        throw ValidationError("--height must be positive");
    const StokesSource src{Vec3(0, 0, o.height), f, o.source_radius};
    harness::GridSpec g;
    g.n1 = o.n1;
    g.n3 = o.n3;
    std::vector<harness::FieldSample> field;
    const double seconds = timed([&] { field = harness::rpy_field_grid(src, o.radius, g); });
    auto out = fmt::output_file((fs::path(o.out) / "rpy_field.csv").string());
    out.print("x1,x2,x3,u1,u2,u3,overlap\n");
    for (const auto &s : field)
        out.print("{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{}\n", s.position[0], s.position[1],
                  s.position[2], s.velocity[0], s.velocity[1], s.velocity[2], s.overlap ? 1 : 0);
    m.set("source_height", o.height);
    m.set("source_radius", o.source_radius);
    m.set("force", o.force);
    m.set("seconds", seconds);
    return kExitOk;
}

int run_bench(const Options &o, Manifest &m) {
    const auto v = variant(o);
    const auto sources = harness::generate_sources(o.n, o.seed);
    const auto points = harness::generate_sources(o.bench_targets, o.seed + 1);
    std::vector<TargetPoint> targets;
    for (const auto &p : points)
        targets.push_back({p.position, o.radius});
    std::vector<std::vector<Vec3>> u;
    const int shells[] = {0};
    const double seconds =
        timed([&] { u = harness::image_velocities(v, sources, targets, PeriodicityConfig{}, shells, o.radius); });
    double checksum = 0.0;
    for (const auto &x : u[0])
        checksum += x.sum();
    const double pairs = static_cast<double>(sources.size()) * static_cast<double>(targets.size());
    auto out = fmt::output_file((fs::path(o.out) / "bench.csv").string());
    out.print("kernel,sources,targets,checksum\n{},{},{},{:.17g}\n", o.kernel, sources.size(), targets.size(),
              checksum);
    m.set("backend", "direct");
    m.set("seconds", seconds);
    m.set("pairs_per_second", seconds > 0.0 ? pairs / seconds : 0.0);
    std::cout << fmt::format("{} pairs in {:.3f} s ({:.3e} pairs/s)\n", pairs, seconds,
                             seconds > 0.0 ? pairs / seconds : 0.0);
    return kExitOk;
}

void add_common(CLI::App *app, Options &o) {
    app->add_option("--kernel", o.kernel, "stokeslet | laplacian | rpy-mono | rpy-poly | classic")
        ->check(CLI::IsMember({"stokeslet", "laplacian", "rpy-mono", "rpy-poly", "classic"}));
    app->add_option("--mode", o.mode, "none | sp | dp")->check(CLI::IsMember({"none", "sp", "dp"}));
    app->add_option("--box", o.box, "L1,L2")->delimiter(',')->expected(2);
    app->add_option("--shells", o.shells, "shell counts, e.g. 4,8,16")->delimiter(',');
    app->add_option("--n", o.n, "number of random sources")->check(CLI::PositiveNumber);
    app->add_option("--mesh", o.mesh, "Chebyshev mesh size per side")->check(CLI::Range(2, 1 << 16));
    app->add_option("--seed", o.seed);
    app->add_option("--radius", o.radius, "target radius a");
    app->add_option("--b-min", o.b_min);
    app->add_option("--b-max", o.b_max);
    app->add_option("--out", o.out, "output directory");
    app->add_option("--threads", o.threads, "OpenMP threads (0 = runtime default)")->check(CLI::NonNegativeNumber);
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"Force-neutral image systems for Stokes flow above a no-slip wall"};
    app.require_subcommand(1);
    Options o;

    auto *evaluate = app.add_subcommand("evaluate", "velocities at targets from sources");
    add_common(evaluate, o);
    evaluate->add_option("--sources", o.sources_csv, "CSV x1,x2,x3,f1,f2,f3[,b]");
    evaluate->add_option("--targets", o.targets_csv, "CSV x1,x2,x3[,a]");

    auto *noslip = app.add_subcommand("verify-noslip", "wall residual on a Chebyshev mesh");
    add_common(noslip, o);

    auto *periodic = app.add_subcommand("verify-periodic", "side-face mismatch per shell count");
    add_common(periodic, o);

    auto *field = app.add_subcommand("rpy-field", "RPY target velocity on a vertical grid");
    add_common(field, o);
    field->add_option("--height", o.height, "source height above the wall");
    field->add_option("--source-radius", o.source_radius, "source radius b");
    field->add_option("--force", o.force, "x | z");
    field->add_option("--n1", o.n1)->check(CLI::PositiveNumber);
    field->add_option("--n3", o.n3)->check(CLI::PositiveNumber);

    auto *bench = app.add_subcommand("bench", "direct-backend throughput");
    add_common(bench, o);
    bench->add_option("--targets-count", o.bench_targets)->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        app.exit(e);
        return kExitUsage;
    }

#ifdef _OPENMP
    if (o.threads > 0)
        omp_set_num_threads(o.threads);
#endif

    try {
        fs::create_directories(o.out);
        Manifest m;
        int rc = kExitOk;
        const std::string name = app.get_subcommands().front()->get_name();
        echo_config(m, o, name);
        if (name == "evaluate")
            rc = run_evaluate(o, m);
        else if (name == "verify-noslip")
            rc = run_verify_noslip(o, m);
        else if (name == "verify-periodic")
            rc = run_verify_periodic(o, m);
        else if (name == "rpy-field")
            rc = run_rpy_field(o, m);
        else
            rc = run_bench(o, m);
        m.write(fs::path(o.out) / "manifest.txt");
        return rc;
    } catch (const NeutralityViolation &e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitContract;
    } catch (const MissingOutputOrder &e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitContract;
    } catch (const Error &e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitValidation;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitValidation;
    }
}
