#pragma once

#include <span>
#include <vector>

// Dense helpers for the small systems in this project (moment order
// N <= 7, WENO stencil solves, coefficient interpolation).  Matrices are
// row-major n x n in a flat array.

namespace mnt {

/// In-place lower Cholesky factorization of a symmetric matrix.
/// Only the lower triangle of `a` is referenced/written.
/// Returns false if a nonpositive pivot is met (matrix not positive
/// definite); contents are unspecified in that case.
bool cholesky_factor(std::span<double> a, int n);

/// Solve L L^T x = b given the factor from cholesky_factor; x overwrites b.
void cholesky_solve(std::span<const double> l, int n, std::span<double> b);

/// Solve a general small system by partial-pivot LU; a and b are destroyed,
/// x overwrites b.  Returns false on (numerical) singularity.
bool lu_solve(std::span<double> a, int n, std::span<double> b);

double dot(std::span<const double> x, std::span<const double> y);
double norm2(std::span<const double> x);
double norm1(std::span<const double> x);

} // namespace mnt
