#ifndef STOKESWALL_SUMMATION_HPP_
#define STOKESWALL_SUMMATION_HPP_

#include "stokeswall/request.hpp"

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace stokeswall {

enum class PeriodicMode { None, SPx, DPxy };

std::string to_string(PeriodicMode mode);

struct PeriodicityConfig {
    PeriodicMode mode = PeriodicMode::None;
    double L1 = 1.0;
    double L2 = 1.0;
    int n_shell = 0;

    bool periodic_x() const { return mode != PeriodicMode::None; }
    bool periodic_y() const { return mode == PeriodicMode::DPxy; }
};

/// Outcome of a neutrality check. `net` is the summed strength (scalar kernels use x only).
struct NeutralityReport {
    bool ok = true;
    std::string label;
    KernelId kernel = KernelId::LaplaceMonopole;
    Vec3 net = Vec3::Zero();
    double total_abs = 0.0;

    std::string describe() const;
};

/// Relative tolerance on the net strength, scaled by sum |strength|.
inline constexpr double kNeutralityTolerance = 1e-12;

/// Exact sum over all sources, source index ascending per target.
TargetOutputs direct_sum(const KernelSumRequest &request);

NeutralityReport check_neutrality(const KernelSumRequest &request, const PeriodicityConfig &periodicity);

/// Lattice translations with Chebyshev shell index <= n_shell. Origin first, then
/// each shell as consecutive (+v, -v) pairs. Mode None yields the origin only.
std::vector<Vec3> shell_offsets(int n_shell, const PeriodicityConfig &periodicity);

/// Replica sum truncated at periodicity.n_shell, accumulated per shell in
/// symmetric pairs. Throws NeutralityViolation for non-neutral Stokeslet or
/// monopole requests in a periodic mode.
TargetOutputs periodic_sum(const KernelSumRequest &request, const PeriodicityConfig &periodicity);

/// Same accumulation as periodic_sum, snapshotted after each shell count in
/// `shells` (any order; output aligned with `shells`). One pass up to the max.
std::vector<TargetOutputs> periodic_sum_sweep(const KernelSumRequest &request, const PeriodicityConfig &periodicity,
                                              std::span<const int> shells);

/// Pluggable summation engine. Implementations must be deterministic and linear
/// in the source strengths.
class SummationBackend {
  public:
    virtual ~SummationBackend() = default;
    virtual TargetOutputs evaluate(const KernelSumRequest &request, const PeriodicityConfig &periodicity) const = 0;
    virtual std::string name() const = 0;
};

/// Non-periodic reference backend; rejects periodic configurations.
class DirectBackend final : public SummationBackend {
  public:
    TargetOutputs evaluate(const KernelSumRequest &request, const PeriodicityConfig &periodicity) const override;
    std::string name() const override { return "direct"; }
};

/// Truncated symmetric-shell replica summation; mode None reduces to direct_sum.
class ShellBackend final : public SummationBackend {
  public:
    TargetOutputs evaluate(const KernelSumRequest &request, const PeriodicityConfig &periodicity) const override;
    std::string name() const override { return "shell"; }
};

/// Direct for mode None, shell summation otherwise.
const SummationBackend &default_backend(const PeriodicityConfig &periodicity);

} // namespace stokeswall

#endif
