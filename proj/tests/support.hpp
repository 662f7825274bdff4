#pragma once

// Independent reference implementations used to cross-check the library.
// Everything here is deliberately written from first principles (plain index
// arithmetic, straightforward iterations) rather than reusing library code.

#include <array>
#include <cstdint>

#include "bhacs/acs.hpp"
#include "bhacs/energy.hpp"
#include "bhacs/fields.hpp"
#include "bhacs/metric.hpp"

namespace bhacs::test {

// Matrix square root of an SPD matrix by the Denman-Beavers iteration.
Mat4 db_sqrt(const Mat4& a, int iters = 100);

// sqrt(id - e) by the binomial series sum_l C(1/2,l) (-e)^l; accurate when
// ||e|| is well below 1.
Mat4 binomial_sqrt(const Mat4& e, int terms = 60);

// Energies recomputed with explicit nested loops and no shared stencil code.
double naive_e2(const EndoField& f, const MetricField& m);
double naive_e1(const EndoField& f, const MetricField& m);

// Central-difference slope of t -> e2(retract(j, s, t)) at t = 0.
double fd_slope_e2(const CompatibleJField& j, const TangentField& s, const MetricField& m,
                   double t);

// Topological degree of the sphere-valued map behind J = L_n restricted to
// the (a,b) coordinate plane through the given transverse indices, computed
// from summed solid angles of spherical triangles.
double solid_angle_degree(const CompatibleJField& j, int a, int b,
                          const std::array<int, 4>& base);

// Unit imaginary part n of J = L_n at a point (columns of the left
// multiplication matrix).
std::array<double, 3> sphere_point(const Mat4& j);

}  // namespace bhacs::test
