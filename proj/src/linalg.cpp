#include "weylint/linalg.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>

namespace weylint {

Mat realify(const CMat& z)
{
    const auto n = z.rows();
    Mat m(2 * n, 2 * n);
    m.topLeftCorner(n, n) = z.real();
    m.topRightCorner(n, n) = -z.imag();
    m.bottomLeftCorner(n, n) = z.imag();
    m.bottomRightCorner(n, n) = z.real();
    return m;
}

CMat complexify(const Mat& m)
{
    const auto n = m.rows() / 2;
    CMat z(n, n);
    z.real() = m.topLeftCorner(n, n);
    z.imag() = m.bottomLeftCorner(n, n);
    return z;
}

Mat complex_structure(Eigen::Index n)
{
    return realify(CMat::Identity(n, n) * std::complex<double>(0.0, 1.0));
}

Mat expm(const Mat& x)
{
    return x.exp();
}

Mat expm_symmetric(const Mat& x)
{
    Eigen::SelfAdjointEigenSolver<Mat> es(x);
    const Vec ev = es.eigenvalues().array().exp();
    return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().transpose();
}

Mat expm_frechet(const Mat& x, const Mat& e)
{
    const auto n = x.rows();
    Mat block = Mat::Zero(2 * n, 2 * n);
    block.topLeftCorner(n, n) = x;
    block.bottomRightCorner(n, n) = x;
    block.topRightCorner(n, n) = e;
    const Mat eb = block.exp();
    return eb.topRightCorner(n, n);
}

Mat logm_spd(const Mat& x)
{
    Eigen::SelfAdjointEigenSolver<Mat> es(x);
    const Vec ev = es.eigenvalues().array().log();
    return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().transpose();
}

Mat null_space(const Mat& a, double tol)
{
    if (a.rows() == 0)
        return Mat::Identity(a.cols(), a.cols());
    Eigen::JacobiSVD<Mat> svd(a, Eigen::ComputeFullV);
    const Vec& s = svd.singularValues();
    const double scale = std::max(1.0, s.size() > 0 ? s(0) : 0.0);
    Eigen::Index rank = 0;
    for (Eigen::Index i = 0; i < s.size(); ++i)
        if (s(i) > tol * scale)
            ++rank;
    return svd.matrixV().rightCols(a.cols() - rank);
}

Mat column_span(const Mat& a, double tol)
{
    if (a.cols() == 0)
        return Mat(a.rows(), 0);
    Eigen::JacobiSVD<Mat> svd(a, Eigen::ComputeThinU);
    const Vec& s = svd.singularValues();
    const double scale = std::max(1.0, s(0));
    Eigen::Index rank = 0;
    for (Eigen::Index i = 0; i < s.size(); ++i)
        if (s(i) > tol * scale)
            ++rank;
    return svd.matrixU().leftCols(rank);
}

std::vector<Mat> orthonormalize(const std::vector<Mat>& vectors, double tol)
{
    std::vector<Mat> out;
    for (const Mat& v : vectors) {
        Mat w = v;
        for (int pass = 0; pass < 2; ++pass)
            for (const Mat& q : out)
                w -= frobenius_dot(q, w) * q;
        const double nrm = w.norm();
        if (nrm > tol * std::max(1.0, v.norm()))
            out.push_back(w / nrm);
    }
    return out;
}

double relative_residual(const Mat& a, const Mat& b)
{
    return (a - b).norm() / std::max(1.0, b.norm());
}

} // namespace weylint
