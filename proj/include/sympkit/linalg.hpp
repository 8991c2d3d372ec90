// linalg.hpp — small-matrix numerical helpers: ranks, kernels, principal angles
#pragma once

#include "sympkit/types.hpp"

#include <vector>

namespace sympkit {

double frob(const Matrix& a);

bool all_finite(const Matrix& a);

/// (A + A*)/2
Matrix hermitian_part(const Matrix& a);

double hermitian_residual(const Matrix& a);

/// Eigenvalues of a Hermitian matrix, ascending. The input is symmetrized first.
RealVector hermitian_eigenvalues(const Matrix& a);

double min_eigenvalue(const Matrix& hermitian);
double max_eigenvalue(const Matrix& hermitian);

/// Rank/kernel/range split of a Hermitian PSD matrix using a relative
/// eigenvalue cutoff rel_tol * max|eigenvalue|.
struct HermitianRank {
    RealVector eigenvalues;  // ascending
    int rank{0};
    Matrix kernel;           // orthonormal columns spanning the numerical kernel
    Matrix range;            // orthonormal columns spanning the numerical range
};
HermitianRank hermitian_rank(const Matrix& a, double rel_tol);

/// Numerical rank of a general matrix via singular values with relative cutoff.
int numerical_rank(const Matrix& a, double rel_tol);

/// Orthonormal basis of the column space of a general matrix.
Matrix range_basis(const Matrix& a, double rel_tol);

/// Largest principal angle (radians) between the column spans of two matrices
/// with orthonormal columns. Two empty spans are at angle zero; spans of
/// different dimension are reported at pi/2.
double max_principal_angle(const Matrix& u, const Matrix& v);

/// Minimum-norm least-squares solve A x = b.
Matrix lstsq(const Matrix& a, const Matrix& b);

/// Orthonormal basis of the null space of a general matrix (relative cutoff).
Matrix null_space(const Matrix& a, double rel_tol);

/// Moore-Penrose pseudoinverse of a Hermitian PSD matrix.
Matrix hermitian_pinv(const Matrix& a, double rel_tol);

} // namespace sympkit
