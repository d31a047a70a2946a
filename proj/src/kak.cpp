#include "weylint/kak.hpp"

#include "weylint/errors.hpp"

#include <cmath>
#include <limits>

namespace weylint {

namespace {

constexpr double kMembershipTol = 1e-8;
constexpr double kWallTol = 1e-12;

// Nearest orthogonal matrix with determinant +1 (polar factor).
Mat nearest_rotation(const Mat& x)
{
    Eigen::JacobiSVD<Mat> svd(x, Eigen::ComputeFullU | Eigen::ComputeFullV);
    Mat u = svd.matrixU();
    const Mat v = svd.matrixV();
    if ((u * v.transpose()).determinant() < 0.0)
        u.col(u.cols() - 1) *= -1.0;
    return u * v.transpose();
}

// Rotation in SO(n) whose first column is the unit vector u (n >= 2).
Mat rotation_with_first_column(const Vec& u)
{
    const auto n = u.size();
    Eigen::HouseholderQR<Mat> qr{Mat(u)};
    Mat q = qr.householderQ() * Mat::Identity(n, n);
    if (q.col(0).dot(u) < 0.0)
        q.col(0) *= -1.0;
    if (q.determinant() < 0.0)
        q.col(n - 1) *= -1.0;
    return q;
}

KAKFactors decompose_matrix_family(const LieData& lie, const Mat& g)
{
    const GroupFamily& family = lie.family;
    KAKFactors f;
    if (family.tag() == FamilyTag::GLComplex) {
        Eigen::JacobiSVD<CMat> svd(complexify(g), Eigen::ComputeFullU | Eigen::ComputeFullV);
        const Vec logs = svd.singularValues().array().log();
        f.k1 = realify(svd.matrixU());
        f.k2 = realify(svd.matrixV());
        f.h = lie.a_coordinates(realify(CMat(logs.cast<std::complex<double>>().asDiagonal())));
        return f;
    }
    Eigen::JacobiSVD<Mat> svd(g, Eigen::ComputeFullU | Eigen::ComputeFullV);
    Mat u = svd.matrixU();
    Mat v = svd.matrixV();
    if (family.tag() == FamilyTag::SLReal && u.determinant() < 0.0) {
        u.col(u.cols() - 1) *= -1.0;
        v.col(v.cols() - 1) *= -1.0;
    }
    const Vec logs = svd.singularValues().array().log();
    f.k1 = u;
    f.k2 = v;
    f.h = lie.a_coordinates(Mat(logs.asDiagonal()));
    return f;
}

KAKFactors decompose_lorentz(const LieData& lie, const Mat& g)
{
    const int n = lie.family.n();
    const int size = n + 1;
    KAKFactors f;
    f.h.resize(1);
    const double boost_scale = std::sqrt(2.0);
    if (n == 1) {
        f.k1 = Mat::Identity(2, 2);
        f.k2 = Mat::Identity(2, 2);
        f.h(0) = boost_scale * std::asinh(g(1, 0));
        return f;
    }
    const Vec column = g.col(0).tail(n);
    const double sinh_t = column.norm();
    const double t = std::asinh(sinh_t);
    Vec u = Vec::Zero(n);
    u(0) = 1.0;
    if (sinh_t > 0.0)
        u = column / sinh_t;
    Mat k1 = Mat::Identity(size, size);
    k1.bottomRightCorner(n, n) = rotation_with_first_column(u);

    Mat boost_inv = Mat::Identity(size, size);
    boost_inv(0, 0) = boost_inv(1, 1) = std::cosh(t);
    boost_inv(0, 1) = boost_inv(1, 0) = -sinh_t;
    // k2 = g^T k1 exp(-H); lies in K up to rounding.
    const Mat raw = g.transpose() * k1 * boost_inv;
    Mat k2 = Mat::Identity(size, size);
    k2.bottomRightCorner(n, n) = nearest_rotation(raw.bottomRightCorner(n, n));
    f.k1 = k1;
    f.k2 = k2;
    f.h(0) = boost_scale * t;
    return f;
}

} // namespace

Mat exp_a(const LieData& lie, const Vec& h)
{
    const Mat x = lie.a_element(h);
    const Mat off = x - Mat(x.diagonal().asDiagonal());
    if (off.cwiseAbs().maxCoeff() == 0.0)
        return Mat(x.diagonal().array().exp().matrix().asDiagonal());
    return expm_symmetric(x);
}

KAKFactors kak_decompose(const LieData& lie, const Mat& g)
{
    const double residual = lie.family.group_residual(g);
    if (!(residual < kMembershipTol))
        throw DomainError("matrix is not an element of " + lie.family.name() +
                          " (membership residual " + std::to_string(residual) + ")");
    KAKFactors f = lie.family.tag() == FamilyTag::LorentzSO0 ? decompose_lorentz(lie, g)
                                                              : decompose_matrix_family(lie, g);
    if (!in_closed_chamber(lie.roots, f.h, 1e-10))
        throw InternalError("KAK output outside the positive chamber for " + lie.family.name());
    const Regularity reg = regularity(lie.roots, f.h);
    if (lie.roots.positive_count() > 0 && reg.margin < kWallTol) {
        f.ill_conditioned = true;
        f.warning = "H lies on a chamber wall; k-factors are not unique";
    }
    return f;
}

Mat recompose(const LieData& lie, const KAKFactors& factors)
{
    return factors.k1 * exp_a(lie, factors.h) * factors.k2.transpose();
}

ChamberReduction chamber_reduce(const RootSystem& roots, const Vec& h)
{
    for (std::size_t i = 0; i < roots.weyl_elements.size(); ++i) {
        Vec w = roots.weyl_elements[i] * h;
        if (in_closed_chamber(roots, w))
            return {i, std::move(w)};
    }
    throw InternalError("no Weyl element maps H into the positive chamber");
}

bool in_closed_chamber(const RootSystem& roots, const Vec& h, double tol)
{
    const double scale = std::max(1.0, h.cwiseAbs().maxCoeff());
    for (std::size_t p = 0; p < roots.positive_count(); ++p)
        if (roots.positive_value(p, h) < -tol * scale)
            return false;
    return true;
}

Regularity regularity(const RootSystem& roots, const Vec& h)
{
    double margin = std::numeric_limits<double>::infinity();
    for (std::size_t p = 0; p < roots.positive_count(); ++p)
        margin = std::min(margin, std::abs(roots.positive_value(p, h)));
    if (roots.positive_count() == 0)
        return {true, margin};
    return {margin > 1e-10, margin};
}

Mat random_group_element(const GroupFamily& family, Rng& rng, double scale)
{
    std::normal_distribution<double> normal;
    Vec c(family.dim_g());
    for (Eigen::Index i = 0; i < c.size(); ++i)
        c(i) = normal(rng);
    return expm(scale * family.from_coordinates(c));
}

} // namespace weylint
