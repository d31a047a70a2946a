#include "weylint/family.hpp"

#include "weylint/errors.hpp"

#include <cmath>
#include <limits>

namespace weylint {

namespace {

Mat unit(int size, int i, int j)
{
    Mat e = Mat::Zero(size, size);
    e(i, j) = 1.0;
    return e;
}

Mat normalized(const Mat& x)
{
    return x / x.norm();
}

// Skew-symmetric generators E_ij - E_ji over index range [lo, hi).
void push_rotations(std::vector<Mat>& out, int size, int lo, int hi)
{
    for (int i = lo; i < hi; ++i)
        for (int j = i + 1; j < hi; ++j)
            out.push_back(normalized(unit(size, i, j) - unit(size, j, i)));
}

void push_offdiag_symmetric(std::vector<Mat>& out, int n)
{
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            out.push_back(normalized(unit(n, i, j) + unit(n, j, i)));
}

// Orthonormal basis of traceless diagonal matrices whose first element has
// strictly decreasing entries, so every e_i - e_j (i < j) is positive on it.
std::vector<Mat> traceless_diagonal_basis(int n)
{
    std::vector<Mat> candidates;
    Mat rho = Mat::Zero(n, n);
    for (int i = 0; i < n; ++i)
        rho(i, i) = (n - 1) - 2.0 * i;
    candidates.push_back(rho);
    for (int i = 0; i + 1 < n; ++i)
        candidates.push_back(unit(n, i, i) - unit(n, i + 1, i + 1));
    return orthonormalize(candidates);
}

std::vector<Mat> complex_rotation_basis(int n)
{
    using C = std::complex<double>;
    const C im(0.0, 1.0);
    std::vector<Mat> out;
    for (int j = 0; j < n; ++j) {
        CMat z = CMat::Zero(n, n);
        z(j, j) = im;
        out.push_back(normalized(realify(z)));
    }
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            CMat z = CMat::Zero(n, n);
            z(i, j) = 1.0;
            z(j, i) = -1.0;
            out.push_back(normalized(realify(z)));
            z(i, j) = im;
            z(j, i) = im;
            out.push_back(normalized(realify(z)));
        }
    return out;
}

std::vector<Mat> complex_hermitian_basis(int n)
{
    using C = std::complex<double>;
    const C im(0.0, 1.0);
    std::vector<Mat> out;
    for (int j = 0; j < n; ++j) {
        CMat z = CMat::Zero(n, n);
        z(j, j) = 1.0;
        out.push_back(normalized(realify(z)));
    }
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            CMat z = CMat::Zero(n, n);
            z(i, j) = 1.0;
            z(j, i) = 1.0;
            out.push_back(normalized(realify(z)));
            z(i, j) = im;
            z(j, i) = -im;
            out.push_back(normalized(realify(z)));
        }
    return out;
}

} // namespace

std::string_view to_string(FamilyTag tag)
{
    switch (tag) {
    case FamilyTag::GLReal:
        return "GL-real";
    case FamilyTag::SLReal:
        return "SL-real";
    case FamilyTag::GLComplex:
        return "GL-complex-as-real";
    case FamilyTag::LorentzSO0:
        return "LorentzSO0";
    }
    return "unknown";
}

FamilyTag parse_family_tag(std::string_view name)
{
    for (FamilyTag tag : all_family_tags())
        if (to_string(tag) == name)
            return tag;
    throw ConfigurationError("unsupported family tag '" + std::string(name) + "'");
}

const std::vector<FamilyTag>& all_family_tags()
{
    static const std::vector<FamilyTag> tags{FamilyTag::GLReal, FamilyTag::SLReal, FamilyTag::GLComplex,
                                             FamilyTag::LorentzSO0};
    return tags;
}

GroupFamily::GroupFamily(FamilyTag tag, int n, std::vector<Mat> basis_k, std::vector<Mat> basis_p)
    : tag_(tag)
    , n_(n)
    , size_(0)
    , basis_k_(std::move(basis_k))
    , basis_p_(std::move(basis_p))
{
    switch (tag_) {
    case FamilyTag::GLReal:
    case FamilyTag::SLReal:
        size_ = n_;
        break;
    case FamilyTag::GLComplex:
        size_ = 2 * n_;
        break;
    case FamilyTag::LorentzSO0:
        size_ = n_ + 1;
        break;
    }
    basis_ = basis_k_;
    basis_.insert(basis_.end(), basis_p_.begin(), basis_p_.end());
    frame_.resize(static_cast<Eigen::Index>(basis_.size()), static_cast<Eigen::Index>(size_) * size_);
    for (std::size_t i = 0; i < basis_.size(); ++i)
        frame_.row(static_cast<Eigen::Index>(i)) = flatten(basis_[i]).transpose();
}

std::string GroupFamily::name() const
{
    return std::string(to_string(tag_)) + "(" + std::to_string(n_) + ")";
}

Vec GroupFamily::coordinates(const Mat& x) const
{
    require_shape(x);
    return frame_ * flatten(x);
}

Mat GroupFamily::from_coordinates(const Vec& c) const
{
    if (c.size() != frame_.rows())
        throw DomainError("coordinate vector has wrong dimension for " + name());
    return unflatten(frame_.transpose() * c, size_);
}

void GroupFamily::require_shape(const Mat& x) const
{
    if (x.rows() != size_ || x.cols() != size_)
        throw DomainError("matrix of shape " + std::to_string(x.rows()) + "x" + std::to_string(x.cols()) +
                          " does not match " + name() + " (" + std::to_string(size_) + "x" +
                          std::to_string(size_) + ")");
}

double GroupFamily::algebra_residual(const Mat& x) const
{
    require_shape(x);
    switch (tag_) {
    case FamilyTag::GLReal:
        return x.allFinite() ? 0.0 : std::numeric_limits<double>::infinity();
    case FamilyTag::SLReal:
        return std::abs(x.trace());
    case FamilyTag::GLComplex: {
        const Mat j = complex_structure(n_);
        return (x * j - j * x).norm();
    }
    case FamilyTag::LorentzSO0: {
        const Mat eta = minkowski_metric(n_);
        return (x.transpose() * eta + eta * x).norm();
    }
    }
    return std::numeric_limits<double>::infinity();
}

void GroupFamily::require_algebra(const Mat& x, double tol) const
{
    const double r = algebra_residual(x);
    if (!(r <= tol * std::max(1.0, x.norm())))
        throw DomainError("matrix is not in the Lie algebra of " + name() + " (residual " + std::to_string(r) + ")");
}

double GroupFamily::group_residual(const Mat& g) const
{
    require_shape(g);
    constexpr double inf = std::numeric_limits<double>::infinity();
    if (!g.allFinite())
        return inf;
    const double det = g.determinant();
    const double scale = std::pow(std::max(g.norm(), 1e-300), static_cast<double>(size_));
    if (std::abs(det) <= 1e-14 * scale)
        return inf;
    switch (tag_) {
    case FamilyTag::GLReal:
        return 0.0;
    case FamilyTag::SLReal:
        return std::abs(det - 1.0);
    case FamilyTag::GLComplex: {
        const Mat j = complex_structure(n_);
        return (g * j - j * g).norm() / std::max(1.0, g.norm());
    }
    case FamilyTag::LorentzSO0: {
        const Mat eta = minkowski_metric(n_);
        double r = (g.transpose() * eta * g - eta).norm() / std::max(1.0, g.squaredNorm());
        r += std::abs(det - 1.0);
        if (g(0, 0) < 0.0)
            r += 1.0 + std::abs(g(0, 0));
        return r;
    }
    }
    return inf;
}

double GroupFamily::compact_residual(const Mat& k) const
{
    require_shape(k);
    const Mat id = Mat::Identity(size_, size_);
    double r = (k.transpose() * k - id).norm();
    switch (tag_) {
    case FamilyTag::GLReal:
        break;
    case FamilyTag::SLReal:
        r += std::abs(k.determinant() - 1.0);
        break;
    case FamilyTag::GLComplex: {
        const Mat j = complex_structure(n_);
        r += (k * j - j * k).norm();
        break;
    }
    case FamilyTag::LorentzSO0:
        r += std::abs(k.determinant() - 1.0) + std::abs(k(0, 0) - 1.0);
        r += k.row(0).tail(n_).norm() + k.col(0).tail(n_).norm();
        break;
    }
    return r;
}

GroupFamily make_family(FamilyTag tag, int n)
{
    std::vector<Mat> k;
    std::vector<Mat> p;
    switch (tag) {
    case FamilyTag::GLReal:
        if (n < 2)
            throw ConfigurationError("GL-real requires n >= 2");
        push_rotations(k, n, 0, n);
        for (int i = 0; i < n; ++i)
            p.push_back(unit(n, i, i));
        push_offdiag_symmetric(p, n);
        break;
    case FamilyTag::SLReal:
        if (n < 2)
            throw ConfigurationError("SL-real requires n >= 2");
        push_rotations(k, n, 0, n);
        p = traceless_diagonal_basis(n);
        push_offdiag_symmetric(p, n);
        break;
    case FamilyTag::GLComplex:
        if (n < 2)
            throw ConfigurationError("GL-complex-as-real requires n >= 2");
        k = complex_rotation_basis(n);
        p = complex_hermitian_basis(n);
        break;
    case FamilyTag::LorentzSO0:
        if (n < 1)
            throw ConfigurationError("LorentzSO0 requires n >= 1");
        push_rotations(k, n + 1, 1, n + 1);
        for (int i = 1; i <= n; ++i)
            p.push_back(normalized(unit(n + 1, 0, i) + unit(n + 1, i, 0)));
        break;
    }
    return GroupFamily(tag, n, std::move(k), std::move(p));
}

Mat cartan_involution(const GroupFamily& family, const Mat& x)
{
    family.require_algebra(x);
    return -x.transpose();
}

double bilinear_form(const GroupFamily& family, const Mat& x, const Mat& y)
{
    family.require_shape(x);
    family.require_shape(y);
    return trace_product(x, y);
}

CartanParts cartan_split(const GroupFamily& family, const Mat& x)
{
    const Mat tx = cartan_involution(family, x);
    return {0.5 * (x + tx), 0.5 * (x - tx)};
}

Mat minkowski_metric(int n)
{
    Mat eta = Mat::Identity(n + 1, n + 1);
    eta(0, 0) = -1.0;
    return eta;
}

} // namespace weylint
