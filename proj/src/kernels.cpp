#include "stokeswall/kernels.hpp"

#include <sstream>

namespace stokeswall {

std::string to_string(OutputOrders orders) {
    std::string s;
    auto append = [&](OutputOrders::Flag f, const char *name) {
        if (orders.has(f)) {
            if (!s.empty())
                s += '+';
            s += name;
        }
    };
    append(OutputOrders::Value, "value");
    append(OutputOrders::Gradient, "gradient");
    append(OutputOrders::Hessian, "hessian");
    append(OutputOrders::Laplacian, "laplacian");
    return s.empty() ? "none" : s;
}

namespace kernels {

namespace {

constexpr double kInv4Pi = 1.0 / (4.0 * kPi);
constexpr double kInv8Pi = 1.0 / (8.0 * kPi);

Vec3 checked_offset(const Vec3 &x, const Vec3 &y) {
    if (x == y) {
        std::ostringstream os;
        os << "target and source coincide at (" << x.transpose() << ")";
        throw CoincidentPoints(os.str());
    }
    return x - y;
}

} // namespace

namespace detail {

// Derivatives of 1/R contracted with the source strengths; R = |r|, r = x - y.

void add_monopole(const Vec3 &r, double q, OutputOrders orders, ScalarFieldEval &out) {
    const double rinv = 1.0 / r.norm();
    const double rinv3 = rinv * rinv * rinv;
    const double s = q * kInv4Pi;
    if (orders.has(OutputOrders::Value))
        out.value += s * rinv;
    if (orders.has(OutputOrders::Gradient))
        out.gradient -= (s * rinv3) * r;
    if (orders.has(OutputOrders::Hessian)) {
        const double rinv5 = rinv3 * rinv * rinv;
        out.hessian += (3.0 * s * rinv5) * (r * r.transpose());
        out.hessian.diagonal().array() -= s * rinv3;
    }
}

void add_dipole(const Vec3 &r, const Vec3 &d, OutputOrders orders, ScalarFieldEval &out) {
    const double rinv = 1.0 / r.norm();
    const double rinv2 = rinv * rinv;
    const double rinv3 = rinv2 * rinv;
    const double rinv5 = rinv3 * rinv2;
    const double rd = r.dot(d);
    if (orders.has(OutputOrders::Value))
        out.value += kInv4Pi * rd * rinv3;
    if (orders.has(OutputOrders::Gradient))
        out.gradient += kInv4Pi * (rinv3 * d - (3.0 * rd * rinv5) * r);
    if (orders.has(OutputOrders::Hessian)) {
        const double rinv7 = rinv5 * rinv2;
        Mat3 h = (15.0 * rd * rinv7) * (r * r.transpose()) - (3.0 * rinv5) * (d * r.transpose() + r * d.transpose());
        h.diagonal().array() -= 3.0 * rd * rinv5;
        out.hessian += kInv4Pi * h;
    }
}

void add_quadrupole(const Vec3 &r, const Mat3 &S, OutputOrders orders, ScalarFieldEval &out) {
    const double rinv = 1.0 / r.norm();
    const double rinv2 = rinv * rinv;
    const double rinv3 = rinv2 * rinv;
    const double rinv5 = rinv3 * rinv2;
    const double rinv7 = rinv5 * rinv2;
    const Mat3 Ssym = 0.5 * (S + S.transpose());
    const Vec3 Sr = Ssym * r;
    const double rSr = r.dot(Sr);
    const double trS = S.trace();
    if (orders.has(OutputOrders::Value))
        out.value += kInv4Pi * (3.0 * rSr * rinv5 - trS * rinv3);
    if (orders.has(OutputOrders::Gradient))
        out.gradient += kInv4Pi * ((-15.0 * rSr * rinv7) * r + (3.0 * rinv5) * (2.0 * Sr + trS * r));
    if (orders.has(OutputOrders::Hessian)) {
        const double rinv9 = rinv7 * rinv2;
        const Mat3 rr = r * r.transpose();
        Mat3 h = (105.0 * rSr * rinv9) * rr - (15.0 * rinv7) * (2.0 * (Sr * r.transpose() + r * Sr.transpose()) + trS * rr) +
                 (6.0 * rinv5) * Ssym;
        h.diagonal().array() += 3.0 * trS * rinv5 - 15.0 * rSr * rinv7;
        out.hessian += kInv4Pi * h;
    }
}

void add_stokeslet(const Vec3 &r, const Vec3 &f, OutputOrders orders, VectorFieldEval &out) {
    const double rinv = 1.0 / r.norm();
    const double rinv2 = rinv * rinv;
    const double rinv3 = rinv2 * rinv;
    const double rf = r.dot(f);
    if (orders.has(OutputOrders::Value))
        out.value += kInv8Pi * (rinv * f + (rf * rinv3) * r);
    if (orders.has(OutputOrders::Laplacian))
        out.laplacian += kInv4Pi * (rinv3 * f - (3.0 * rf * rinv3 * rinv2) * r);
}

} // namespace detail

ScalarFieldEval laplace_monopole(const Vec3 &x, const Vec3 &y, double q, OutputOrders orders) {
    ScalarFieldEval out;
    detail::add_monopole(checked_offset(x, y), q, orders, out);
    return out;
}

ScalarFieldEval laplace_dipole_potential(const Vec3 &x, const Vec3 &y, const Vec3 &d, OutputOrders orders) {
    ScalarFieldEval out;
    detail::add_dipole(checked_offset(x, y), d, orders, out);
    return out;
}

ScalarFieldEval laplace_quadrupole_potential(const Vec3 &x, const Vec3 &y, const Mat3 &S, OutputOrders orders) {
    ScalarFieldEval out;
    detail::add_quadrupole(checked_offset(x, y), S, orders, out);
    return out;
}

VectorFieldEval stokeslet(const Vec3 &x, const Vec3 &y, const Vec3 &f, OutputOrders orders) {
    VectorFieldEval out;
    detail::add_stokeslet(checked_offset(x, y), f, orders, out);
    return out;
}

Vec3 stokes_laplacian_Q(const Vec3 &x, const Vec3 &y, const Vec3 &f) {
    // Q f = grad_x (G^D . f)
    return laplace_dipole_potential(x, y, f, kGradient).gradient;
}

Mat3 stokeslet_tensor(const Vec3 &x, const Vec3 &y) {
    const Vec3 r = checked_offset(x, y);
    const double rinv = 1.0 / r.norm();
    Mat3 J = (rinv * rinv * rinv) * (r * r.transpose());
    J.diagonal().array() += rinv;
    return kInv8Pi * J;
}

} // namespace kernels
} // namespace stokeswall
