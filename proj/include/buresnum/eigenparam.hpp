#pragma once
// Squared-hypersphere parameterization of the probability-simplex of
// eigenvalue vectors (d_1,...,d_n), sum d_i = 1, driven by n-1 angles in
// [0,pi]:
//
//   d_k = cos^2(a_k/2) * prod_{j<k} sin^2(a_j/2)     (k = 1..n-1)
//   d_n = prod_{j=1}^{n-1} sin^2(a_j/2)
//
// The map covers the full simplex bijectively up to a measure-zero set.

#include <span>
#include <utility>

namespace buresnum {

// d.size() must be angles.size() + 1
void angles_to_eigenvalues(std::span<const double> angles, std::span<double> d);

// |det d(d_1..d_{n-1}) / d(a_1..a_{n-1})|
double angle_jacobian(std::span<const double> angles);

// (prod_i d_i)^(-1/2) * angle_jacobian, with the cancellation done
// analytically:  prod_k sin(a_k/2)^(n-1-k).  Finite on the whole box.
double reduced_weight(std::span<const double> angles);

// Region of angle space where d_1 >= d_2 >= ... >= d_n.  The constraint
// chain is  a_{n-1} <= pi/2  and  a_k <= 2*arccot(cos(a_{k+1}/2)).
// upper_bound_next maps an angle to the bound it imposes on its
// predecessor; it is increasing with f(0) = pi/2 and f(pi) = pi.
double upper_bound_next(double angle);

// Bounds for iterated integration over the ordered region.  Level 0 is the
// outermost coordinate and corresponds to a_{n-1}; each deeper level is the
// preceding angle index.  `outer` holds the already-fixed levels 0..level-1.
std::pair<double, double> ordered_region_bounds(int level, std::span<const double> outer);

// Convert level-ordered coordinates (as produced by the iterated
// integrator over ordered_region_bounds) to the natural angle order
// a_1..a_{n-1}.  coords.size() == angles.size().
void levels_to_angles(std::span<const double> coords, std::span<double> angles);

// Map u in [0,1]^(n-1) onto the ordered region (natural angle order out).
// Returns the local box volume scale, i.e. the Jacobian of the map.
double unit_cube_to_region(std::span<const double> u, std::span<double> angles);

}  // namespace buresnum
