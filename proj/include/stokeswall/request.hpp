#ifndef STOKESWALL_REQUEST_HPP_
#define STOKESWALL_REQUEST_HPP_

#include "stokeswall/types.hpp"

#include <string>
#include <variant>
#include <vector>

namespace stokeswall {

enum class KernelId { Stokeslet, LaplaceMonopole, LaplaceDipole, LaplaceQuadrupole };

std::string to_string(KernelId id);

/// Scalar for monopoles, vector for Stokeslets and dipoles, tensor for quadrupoles.
using Strength = std::variant<double, Vec3, Mat3>;

struct SourceEntry {
    Vec3 position = Vec3::Zero();
    Strength strength = 0.0;
    // Index of the physical particle this entry was generated from (-1 if none)
    // and whether it sits at the mirror point. Used for self-interaction exclusion.
    int owner = -1;
    bool image = false;
};

/// One homogeneous kernel sum g(x_t) = sum_s K(x_t, y_s) q_s.
struct KernelSumRequest {
    std::string label;
    KernelId kernel = KernelId::LaplaceMonopole;
    std::vector<SourceEntry> sources;
    std::vector<Vec3> targets;
    OutputOrders orders;
    // Optional, aligned with targets. When target t has owner k >= 0, non-image
    // sources with owner k are skipped in the zero-offset replica.
    std::vector<int> target_owner;

    /// Throws ValidationError if a strength does not match the kernel or a coordinate is not finite.
    void validate() const;
};

/// Per-target results of one kernel sum. Exactly one of scalar/vector is populated.
struct TargetOutputs {
    std::string label;
    KernelId kernel = KernelId::LaplaceMonopole;
    OutputOrders orders;
    std::vector<ScalarFieldEval> scalar;
    std::vector<VectorFieldEval> vector;

    std::size_t size() const { return kernel == KernelId::Stokeslet ? vector.size() : scalar.size(); }
    bool is_vector() const { return kernel == KernelId::Stokeslet; }
};

/// Empty outputs shaped for `request` (all zeros).
TargetOutputs make_outputs(const KernelSumRequest &request);

} // namespace stokeswall

#endif
