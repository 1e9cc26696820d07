#ifndef STOKESWALL_KERNELS_HPP_
#define STOKESWALL_KERNELS_HPP_

#include "stokeswall/types.hpp"

namespace stokeswall::kernels {

/*
 * Closed-form free-space Green's functions with viscosity fixed at 1.
 *
 *   G^S(x,y) = 1/(4 pi |x-y|)               Laplace monopole
 *   G^D(x,y) = grad_y G^S                    Laplace dipole
 *   G^Q(x,y) = grad_y G^D                    Laplace quadrupole
 *   J(x,y)   = (I/r + r r^T/r^3)/(8 pi)      Stokeslet
 *   Q(x,y)   = lap_x J = grad_x G^D          Laplacian of the Stokeslet
 *
 * All derivatives returned are with respect to the target x. Only the orders
 * present in `orders` are filled; the rest stay zero.
 */

ScalarFieldEval laplace_monopole(const Vec3 &x, const Vec3 &y, double q, OutputOrders orders);

/// Potential G^D(x,y) . d of a dipole with moment d at y.
ScalarFieldEval laplace_dipole_potential(const Vec3 &x, const Vec3 &y, const Vec3 &d, OutputOrders orders);

/// Potential G^Q(x,y) : S of a quadrupole with strength tensor S at y.
ScalarFieldEval laplace_quadrupole_potential(const Vec3 &x, const Vec3 &y, const Mat3 &S, OutputOrders orders);

/// J(x,y) f; the Laplacian slot holds Q(x,y) f when requested.
VectorFieldEval stokeslet(const Vec3 &x, const Vec3 &y, const Vec3 &f, OutputOrders orders);

Vec3 stokes_laplacian_Q(const Vec3 &x, const Vec3 &y, const Vec3 &f);

/// The 3x3 Stokeslet tensor itself.
Mat3 stokeslet_tensor(const Vec3 &x, const Vec3 &y);

// Unchecked variants used by the summation loops once coincidence has been
// ruled out. `r` is x - y.
namespace detail {
void add_monopole(const Vec3 &r, double q, OutputOrders orders, ScalarFieldEval &out);
void add_dipole(const Vec3 &r, const Vec3 &d, OutputOrders orders, ScalarFieldEval &out);
void add_quadrupole(const Vec3 &r, const Mat3 &S, OutputOrders orders, ScalarFieldEval &out);
void add_stokeslet(const Vec3 &r, const Vec3 &f, OutputOrders orders, VectorFieldEval &out);
} // namespace detail

} // namespace stokeswall::kernels

#endif
