#include "stokeswall/request.hpp"

#include <cmath>

namespace stokeswall {

std::string to_string(KernelId id) {
    switch (id) {
    case KernelId::Stokeslet:
        return "stokeslet";
    case KernelId::LaplaceMonopole:
        return "laplace-monopole";
    case KernelId::LaplaceDipole:
        return "laplace-dipole";
    case KernelId::LaplaceQuadrupole:
        return "laplace-quadrupole";
    }
    return "unknown";
}

namespace {

std::size_t expected_alternative(KernelId id) {
    switch (id) {
    case KernelId::LaplaceMonopole:
        return 0;
    case KernelId::Stokeslet:
    case KernelId::LaplaceDipole:
        return 1;
    case KernelId::LaplaceQuadrupole:
        return 2;
    }
    return 0;
}

bool finite(const Strength &s) {
    return std::visit(
        [](const auto &v) {
            if constexpr (std::is_same_v<std::decay_t<decltype(v)>, double>)
                return std::isfinite(v);
            else
                return v.allFinite();
        },
        s);
}

} // namespace

void KernelSumRequest::validate() const {
    const std::size_t alt = expected_alternative(kernel);
    for (std::size_t i = 0; i < sources.size(); ++i) {
        const auto &s = sources[i];
        if (s.strength.index() != alt)
            throw ValidationError("request '" + label + "': source " + std::to_string(i) +
                                  " has a strength type that does not match kernel " + to_string(kernel));
        if (!s.position.allFinite() || !finite(s.strength))
            throw ValidationError("request '" + label + "': source " + std::to_string(i) + " is not finite");
    }
    for (std::size_t t = 0; t < targets.size(); ++t)
        if (!targets[t].allFinite())
            throw ValidationError("request '" + label + "': target " + std::to_string(t) + " is not finite");
    if (!target_owner.empty() && target_owner.size() != targets.size())
        throw ValidationError("request '" + label + "': target_owner length does not match targets");
}

TargetOutputs make_outputs(const KernelSumRequest &request) {
    TargetOutputs out;
    out.label = request.label;
    out.kernel = request.kernel;
    out.orders = request.orders;
    if (out.is_vector())
        out.vector.resize(request.targets.size());
    else
        out.scalar.resize(request.targets.size());
    return out;
}

} // namespace stokeswall
