#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace cmbp {

/// 4-point Lagrange interpolation of a table sampled at x_j = x0 + j*dx.
/// The stencil is clamped at the table ends; x outside the table range
/// evaluates the clamped end polynomial (callers keep x in range).
double cubic_interp(std::span<const double> v, double x0, double dx, double x);

/// First derivative of a uniformly sampled table. 4th-order centered stencil
/// in the interior, one-sided 5-point stencils at the two nodes on each end.
std::vector<double> deriv1_table(std::span<const double> v, double dx);

/// Second derivative at node j via the 5-point centered stencil.
/// Requires 2 <= j <= n-3.
double second_deriv_node(std::span<const double> v, std::size_t j, double dx);

/// Second derivative at an arbitrary abscissa: the 5-point node values are
/// interpolated cubically. Requires x0 + 3*dx <= x <= x0 + (n-4)*dx.
/// Throws OutOfValidRange otherwise.
double second_deriv(std::span<const double> v, double x0, double dx, double x);

}  // namespace cmbp
