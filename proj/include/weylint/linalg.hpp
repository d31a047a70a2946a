#pragma once

#include <Eigen/Dense>

#include <complex>
#include <vector>

namespace weylint {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;
using CMat = Eigen::MatrixXcd;

/// Real 2n x 2n image of a complex n x n matrix X + iY: [[X, -Y], [Y, X]].
Mat realify(const CMat& z);

/// Inverse of realify; reads the upper-left and lower-left blocks.
CMat complexify(const Mat& m);

/// Complex structure J = realify(i I_n).
Mat complex_structure(Eigen::Index n);

inline double trace_product(const Mat& x, const Mat& y)
{
    return x.cwiseProduct(y.transpose()).sum();
}

/// Frobenius inner product trace(X Y^T).
inline double frobenius_dot(const Mat& x, const Mat& y)
{
    return x.cwiseProduct(y).sum();
}

inline Mat bracket(const Mat& x, const Mat& y)
{
    return x * y - y * x;
}

/// Dense matrix exponential (scaling and squaring with Pade approximant).
Mat expm(const Mat& x);

/// Exponential of a symmetric matrix through its eigendecomposition.
Mat expm_symmetric(const Mat& x);

/// Frechet derivative of exp at X in direction E, via the block identity
/// exp([[X, E], [0, X]]) = [[e^X, L(X,E)], [0, e^X]].
Mat expm_frechet(const Mat& x, const Mat& e);

/// Principal logarithm of a symmetric positive definite matrix.
Mat logm_spd(const Mat& x);

/// Orthonormal basis (columns) of the null space of A; singular values
/// below tol * max(1, sigma_max) count as zero.
Mat null_space(const Mat& a, double tol);

/// Orthonormal basis for the column span of A.
Mat column_span(const Mat& a, double tol);

/// Flattens a matrix column-major into a vector.
inline Vec flatten(const Mat& m)
{
    return Eigen::Map<const Vec>(m.data(), m.size());
}

inline Mat unflatten(const Vec& v, Eigen::Index rows)
{
    return Eigen::Map<const Mat>(v.data(), rows, v.size() / rows);
}

/// Modified Gram-Schmidt with one re-orthogonalization pass under the
/// Frobenius inner product. Vectors whose residual norm drops below tol are
/// discarded, so the result spans the same space as the input.
std::vector<Mat> orthonormalize(const std::vector<Mat>& vectors, double tol = 1e-10);

/// Relative Frobenius residual ||a - b|| / max(1, ||b||).
double relative_residual(const Mat& a, const Mat& b);

} // namespace weylint
