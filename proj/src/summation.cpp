#include "stokeswall/summation.hpp"
#include "stokeswall/kernels.hpp"
#include "stokeswall/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <sstream>

namespace stokeswall {

std::string to_string(PeriodicMode mode) {
    switch (mode) {
    case PeriodicMode::None:
        return "none";
    case PeriodicMode::SPx:
        return "sp";
    case PeriodicMode::DPxy:
        return "dp";
    }
    return "unknown";
}

std::string NeutralityReport::describe() const {
    std::ostringstream os;
    os.precision(17);
    os << "request '" << label << "' (" << to_string(kernel) << ") ";
    if (ok) {
        os << "is neutral";
    } else if (kernel == KernelId::Stokeslet) {
        os << "has net force (" << net.x() << ", " << net.y() << ", " << net.z() << ")";
    } else {
        os << "has net monopole " << net.x();
    }
    os << ", sum |strength| = " << total_abs;
    return os.str();
}

namespace {

// Strengths unpacked by type so the inner loops do not visit variants.
struct PreparedSources {
    KernelId kernel;
    OutputOrders orders;
    std::vector<Vec3> position;
    std::vector<double> scalar;
    std::vector<Vec3> vector;
    std::vector<Mat3> tensor;
    std::vector<int> owner;
    std::vector<char> image;
    std::vector<char> zero;

    explicit PreparedSources(const KernelSumRequest &request) : kernel(request.kernel), orders(request.orders) {
        const std::size_t n = request.sources.size();
        position.reserve(n);
        owner.reserve(n);
        image.reserve(n);
        zero.reserve(n);
        for (const auto &s : request.sources) {
            position.push_back(s.position);
            owner.push_back(s.owner);
            image.push_back(s.image ? 1 : 0);
            switch (kernel) {
            case KernelId::LaplaceMonopole:
                scalar.push_back(std::get<double>(s.strength));
                zero.push_back(scalar.back() == 0.0);
                break;
            case KernelId::Stokeslet:
            case KernelId::LaplaceDipole:
                vector.push_back(std::get<Vec3>(s.strength));
                zero.push_back(vector.back().isZero(0.0));
                break;
            case KernelId::LaplaceQuadrupole:
                tensor.push_back(std::get<Mat3>(s.strength));
                zero.push_back(tensor.back().isZero(0.0));
                break;
            }
        }
    }

    std::size_t size() const { return position.size(); }
};

[[noreturn]] void throw_coincident(std::size_t t, std::size_t s, const Vec3 &x, const Vec3 &offset) {
    std::ostringstream os;
    os.precision(17);
    os << "target " << t << " coincides with source " << s;
    if (!offset.isZero(0.0))
        os << " (replica offset " << offset.transpose() << ")";
    os << " at (" << x.transpose() << ")";
    throw CoincidentPoints(os.str());
}

// Adds the contribution of every source translated by `offset` to one target.
// Sources are visited in index order.
template <typename Out>
void accumulate(const PreparedSources &src, std::size_t t, const Vec3 &x, const Vec3 &offset, int self_owner,
                Out &out) {
    const bool origin = offset.isZero(0.0);
    const std::size_t n = src.size();
    for (std::size_t s = 0; s < n; ++s) {
        if (origin && self_owner >= 0 && src.owner[s] == self_owner && !src.image[s])
            continue;
        const Vec3 y = src.position[s] + offset;
        if (y == x) {
            if (src.zero[s])
                continue;
            throw_coincident(t, s, x, offset);
        }
        const Vec3 r = x - y;
        if constexpr (std::is_same_v<Out, VectorFieldEval>) {
            kernels::detail::add_stokeslet(r, src.vector[s], src.orders, out);
        } else {
            switch (src.kernel) {
            case KernelId::LaplaceMonopole:
                kernels::detail::add_monopole(r, src.scalar[s], src.orders, out);
                break;
            case KernelId::LaplaceDipole:
                kernels::detail::add_dipole(r, src.vector[s], src.orders, out);
                break;
            case KernelId::LaplaceQuadrupole:
                kernels::detail::add_quadrupole(r, src.tensor[s], src.orders, out);
                break;
            case KernelId::Stokeslet:
                break;
            }
        }
    }
}

int owner_of(const KernelSumRequest &request, std::size_t t) {
    return request.target_owner.empty() ? -1 : request.target_owner[t];
}

template <typename Out>
std::vector<Out> &slot(TargetOutputs &outputs) {
    if constexpr (std::is_same_v<Out, VectorFieldEval>)
        return outputs.vector;
    else
        return outputs.scalar;
}

template <typename Out>
void sweep_impl(const KernelSumRequest &request, const PreparedSources &src, const std::vector<Vec3> &offsets,
                const std::vector<std::size_t> &shell_end, const std::vector<std::size_t> &snapshot_shell,
                std::vector<TargetOutputs> &results) {
    // offsets: origin, then pairs. shell_end[s] = number of offsets through shell s.
    for_each_index(request.targets.size(), [&](std::size_t t) {
        const Vec3 &x = request.targets[t];
        const int self = owner_of(request, t);
        Out total;
        accumulate(src, t, x, offsets[0], self, total);
        std::size_t next_snapshot = 0;
        auto emit = [&](std::size_t shell) {
            while (next_snapshot < snapshot_shell.size() && snapshot_shell[next_snapshot] == shell) {
                slot<Out>(results[next_snapshot])[t] = total;
                ++next_snapshot;
            }
        };
        emit(0);
        std::size_t k = 1;
        for (std::size_t shell = 1; shell < shell_end.size(); ++shell) {
            for (; k < shell_end[shell]; k += 2) {
                Out pair;
                accumulate(src, t, x, offsets[k], self, pair);
                accumulate(src, t, x, offsets[k + 1], self, pair);
                total += pair;
            }
            emit(shell);
        }
    });
}

} // namespace

TargetOutputs direct_sum(const KernelSumRequest &request) {
    request.validate();
    const PreparedSources src(request);
    TargetOutputs out = make_outputs(request);
    const Vec3 origin = Vec3::Zero();
    for_each_index(request.targets.size(), [&](std::size_t t) {
        if (out.is_vector())
            accumulate(src, t, request.targets[t], origin, owner_of(request, t), out.vector[t]);
        else
            accumulate(src, t, request.targets[t], origin, owner_of(request, t), out.scalar[t]);
    });
    return out;
}

NeutralityReport check_neutrality(const KernelSumRequest &request, const PeriodicityConfig &periodicity) {
    NeutralityReport report;
    report.label = request.label;
    report.kernel = request.kernel;
    if (request.kernel == KernelId::Stokeslet) {
        for (const auto &s : request.sources) {
            const Vec3 &f = std::get<Vec3>(s.strength);
            report.net += f;
            report.total_abs += f.norm();
        }
        report.ok = report.net.norm() <= kNeutralityTolerance * report.total_abs;
    } else if (request.kernel == KernelId::LaplaceMonopole) {
        for (const auto &s : request.sources) {
            const double q = std::get<double>(s.strength);
            report.net.x() += q;
            report.total_abs += std::abs(q);
        }
        report.ok = std::abs(report.net.x()) <= kNeutralityTolerance * report.total_abs;
    }
    // Dipole and quadrupole sums carry no net charge.
    if (periodicity.mode == PeriodicMode::None)
        report.ok = true;
    return report;
}

std::vector<Vec3> shell_offsets(int n_shell, const PeriodicityConfig &periodicity) {
    if (n_shell < 0)
        throw ValidationError("shell count must be non-negative");
    std::vector<Vec3> offsets{Vec3::Zero()};
    if (periodicity.mode == PeriodicMode::None)
        return offsets;
    if (!(periodicity.L1 > 0.0) || (periodicity.periodic_y() && !(periodicity.L2 > 0.0)))
        throw ValidationError("box lengths must be positive");
    const double L1 = periodicity.L1;
    const double L2 = periodicity.L2;
    for (int s = 1; s <= n_shell; ++s) {
        if (periodicity.mode == PeriodicMode::SPx) {
            offsets.emplace_back(s * L1, 0.0, 0.0);
            offsets.emplace_back(-s * L1, 0.0, 0.0);
            continue;
        }
        // Representatives of the (+v, -v) pairs: i > 0, or i == 0 and j > 0.
        for (int i = 0; i <= s; ++i) {
            for (int j = -s; j <= s; ++j) {
                if (std::max(std::abs(i), std::abs(j)) != s)
                    continue;
                if (i == 0 && j <= 0)
                    continue;
                offsets.emplace_back(i * L1, j * L2, 0.0);
                offsets.emplace_back(-i * L1, -j * L2, 0.0);
            }
        }
    }
    return offsets;
}

std::vector<TargetOutputs> periodic_sum_sweep(const KernelSumRequest &request, const PeriodicityConfig &periodicity,
                                              std::span<const int> shells) {
    request.validate();
    if (shells.empty())
        return {};
    for (int s : shells)
        if (s < 0)
            throw ValidationError("shell count must be non-negative");
    const NeutralityReport neutral = check_neutrality(request, periodicity);
    if (!neutral.ok)
        throw NeutralityViolation(neutral.describe());

    const int max_shell = periodicity.mode == PeriodicMode::None ? 0 : *std::max_element(shells.begin(), shells.end());
    const std::vector<Vec3> offsets = shell_offsets(max_shell, periodicity);

    // Offsets per shell: SP has 2, DP has 8s.
    std::vector<std::size_t> shell_end(static_cast<std::size_t>(max_shell) + 1, 1);
    for (int s = 1; s <= max_shell; ++s)
        shell_end[s] = shell_end[s - 1] + (periodicity.mode == PeriodicMode::SPx ? 2 : 8 * static_cast<std::size_t>(s));

    // Snapshot order sorted by shell; remember where each requested entry goes.
    std::vector<std::size_t> order(shells.size());
    for (std::size_t i = 0; i < order.size(); ++i)
        order[i] = i;
    auto effective = [&](std::size_t i) {
        return periodicity.mode == PeriodicMode::None ? std::size_t{0} : static_cast<std::size_t>(shells[i]);
    };
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return effective(a) < effective(b); });
    std::vector<std::size_t> snapshot_shell(order.size());
    for (std::size_t i = 0; i < order.size(); ++i)
        snapshot_shell[i] = effective(order[i]);

    const PreparedSources src(request);
    std::vector<TargetOutputs> sorted(order.size(), make_outputs(request));
    if (request.kernel == KernelId::Stokeslet)
        sweep_impl<VectorFieldEval>(request, src, offsets, shell_end, snapshot_shell, sorted);
    else
        sweep_impl<ScalarFieldEval>(request, src, offsets, shell_end, snapshot_shell, sorted);

    std::vector<TargetOutputs> results(order.size());
    for (std::size_t i = 0; i < order.size(); ++i)
        results[order[i]] = std::move(sorted[i]);
    return results;
}

TargetOutputs periodic_sum(const KernelSumRequest &request, const PeriodicityConfig &periodicity) {
    const int shells[] = {periodicity.n_shell};
    return std::move(periodic_sum_sweep(request, periodicity, shells).front());
}

TargetOutputs DirectBackend::evaluate(const KernelSumRequest &request, const PeriodicityConfig &periodicity) const {
    if (periodicity.mode != PeriodicMode::None)
        throw ModeMismatch("direct backend cannot evaluate periodic mode " + to_string(periodicity.mode));
    return direct_sum(request);
}

TargetOutputs ShellBackend::evaluate(const KernelSumRequest &request, const PeriodicityConfig &periodicity) const {
    return periodic_sum(request, periodicity);
}

const SummationBackend &default_backend(const PeriodicityConfig &periodicity) {
    static const DirectBackend direct;
    static const ShellBackend shell;
    if (periodicity.mode == PeriodicMode::None)
        return direct;
    return shell;
}

} // namespace stokeswall
