#ifndef STOKESWALL_TYPES_HPP_
#define STOKESWALL_TYPES_HPP_

#include <Eigen/Dense>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace stokeswall {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

inline constexpr double kPi = 3.14159265358979323846;

/// Set of derivative orders requested from a kernel evaluation.
class OutputOrders {
  public:
    enum Flag : std::uint8_t { Value = 1, Gradient = 2, Hessian = 4, Laplacian = 8 };

    constexpr OutputOrders() = default;
    constexpr OutputOrders(std::uint8_t bits) : bits_(bits) {}

    constexpr bool has(Flag f) const { return (bits_ & f) != 0; }
    constexpr bool contains(OutputOrders other) const { return (bits_ & other.bits_) == other.bits_; }
    constexpr std::uint8_t bits() const { return bits_; }

    friend constexpr OutputOrders operator|(OutputOrders a, OutputOrders b) {
        return OutputOrders(static_cast<std::uint8_t>(a.bits_ | b.bits_));
    }
    friend constexpr bool operator==(OutputOrders a, OutputOrders b) { return a.bits_ == b.bits_; }

  private:
    std::uint8_t bits_ = 0;
};

inline constexpr OutputOrders kValue{OutputOrders::Value};
inline constexpr OutputOrders kGradient{OutputOrders::Gradient};
inline constexpr OutputOrders kHessian{OutputOrders::Hessian};
inline constexpr OutputOrders kLaplacian{OutputOrders::Laplacian};

std::string to_string(OutputOrders orders);

/// Potential value and x-derivatives of a scalar (Laplace) field at one target.
struct ScalarFieldEval {
    double value = 0.0;
    Vec3 gradient = Vec3::Zero();
    Mat3 hessian = Mat3::Zero();

    ScalarFieldEval &operator+=(const ScalarFieldEval &o) {
        value += o.value;
        gradient += o.gradient;
        hessian += o.hessian;
        return *this;
    }
};

/// Velocity of a vector (Stokes) field at one target, with its Laplacian on request.
struct VectorFieldEval {
    Vec3 value = Vec3::Zero();
    Vec3 laplacian = Vec3::Zero();

    VectorFieldEval &operator+=(const VectorFieldEval &o) {
        value += o.value;
        laplacian += o.laplacian;
        return *this;
    }
};

// Error hierarchy. Every library failure derives from Error so callers can
// catch broadly and map to exit codes.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

class CoincidentPoints : public Error {
  public:
    using Error::Error;
};

class SourceBelowWall : public Error {
  public:
    using Error::Error;
};

class MissingOutputOrder : public Error {
  public:
    using Error::Error;
};

class NeutralityViolation : public Error {
  public:
    using Error::Error;
};

class ModeMismatch : public Error {
  public:
    using Error::Error;
};

class ValidationError : public Error {
  public:
    using Error::Error;
};

} // namespace stokeswall

#endif
