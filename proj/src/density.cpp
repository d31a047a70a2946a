#include "weylint/density.hpp"

#include "weylint/errors.hpp"
#include "weylint/kak.hpp"

#include <cmath>
#include <limits>

namespace weylint {

namespace {

// Ad(exp(-H)) X = a^{-1} X a.
Mat ad_inverse(const Mat& a_inv, const Mat& a, const Mat& x)
{
    return a_inv * x * a;
}

struct Codomain
{
    std::vector<Mat> vectors;
    std::vector<std::string> labels;
};

std::string root_label(std::size_t p, std::size_t j)
{
    return std::to_string(p) + "," + std::to_string(j);
}

double condition_number(const Mat& m)
{
    Eigen::JacobiSVD<Mat> svd(m);
    const Vec& s = svd.singularValues();
    if (s.size() == 0)
        return 1.0;
    return s(s.size() - 1) > 0.0 ? s(0) / s(s.size() - 1) : std::numeric_limits<double>::infinity();
}

} // namespace

std::string_view to_string(JacobianMode mode)
{
    switch (mode) {
    case JacobianMode::Exact:
        return "exact";
    case JacobianMode::DropRoot:
        return "drop-root";
    case JacobianMode::Linear:
        return "linear";
    }
    return "exact";
}

JacobianMode parse_jacobian_mode(std::string_view name)
{
    for (JacobianMode m : {JacobianMode::Exact, JacobianMode::DropRoot, JacobianMode::Linear})
        if (to_string(m) == name)
            return m;
    throw ConfigurationError("unknown jacobian mode '" + std::string(name) + "'");
}

double log_jacobian(const RootSystem& roots, const Vec& h, JacobianMode mode)
{
    double sum = 0.0;
    const std::size_t first = mode == JacobianMode::DropRoot ? 1 : 0;
    for (std::size_t p = first; p < roots.positive_count(); ++p) {
        const double x = std::abs(roots.positive_value(p, h));
        if (x == 0.0)
            return -std::numeric_limits<double>::infinity();
        // log sinh x = x + log((1 - e^{-2x}) / 2), stable for large x.
        const double term = mode == JacobianMode::Linear ? std::log(x) : x + std::log(-std::expm1(-2.0 * x) / 2.0);
        sum += roots.positive(p).multiplicity * term;
    }
    return sum;
}

double jacobian(const RootSystem& roots, const Vec& h, JacobianMode mode)
{
    return std::exp(log_jacobian(roots, h, mode));
}

PsiMatrix psi_matrix(const LieData& lie, const Vec& h)
{
    const CartanFrame& frame = lie.frame;
    const Mat a = exp_a(lie, h);
    const Mat a_inv = exp_a(lie, -h);

    Codomain codomain;
    for (std::size_t i = 0; i < frame.basis_m.size(); ++i) {
        codomain.vectors.push_back(frame.basis_m[i]);
        codomain.labels.push_back("eta[" + std::to_string(i) + "]");
    }
    std::vector<Mat> plus;
    std::vector<Mat> minus;
    std::vector<std::string> root_labels;
    for (std::size_t p = 0; p < frame.root_vectors.size(); ++p)
        for (std::size_t j = 0; j < frame.root_vectors[p].size(); ++j) {
            const RootSplit split = root_space_split(lie.family, frame, p, j);
            plus.push_back(split.plus);
            minus.push_back(split.minus);
            root_labels.push_back(root_label(p, j));
        }
    for (std::size_t i = 0; i < plus.size(); ++i) {
        codomain.vectors.push_back(plus[i]);
        codomain.labels.push_back("xi+[" + root_labels[i] + "]");
    }
    for (std::size_t i = 0; i < minus.size(); ++i) {
        codomain.vectors.push_back(minus[i]);
        codomain.labels.push_back("xi-[" + root_labels[i] + "]");
    }

    PsiMatrix psi;
    psi.codomain_labels = codomain.labels;
    const auto dim = static_cast<Eigen::Index>(codomain.vectors.size());
    psi.entries = Mat::Zero(dim, dim);
    const Mat zero = Mat::Zero(a.rows(), a.cols());

    auto column = [&](Eigen::Index col, const Mat& zeta1, const Mat& zeta2, std::string label) {
        const Mat image = ad_inverse(a_inv, a, zeta1) - zeta2;
        Mat rest = image;
        for (Eigen::Index r = 0; r < dim; ++r) {
            const Mat& e = codomain.vectors[static_cast<std::size_t>(r)];
            const double c = frobenius_dot(image, e) / e.squaredNorm();
            psi.entries(r, col) = c;
            rest -= c * e;
        }
        psi.expansion_residual = std::max(psi.expansion_residual, rest.norm());
        psi.domain_labels.push_back(std::move(label));
    };

    Eigen::Index col = 0;
    for (std::size_t i = 0; i < frame.basis_m.size(); ++i)
        column(col++, frame.basis_m[i], zero, "(eta[" + std::to_string(i) + "],0)");
    for (std::size_t i = 0; i < plus.size(); ++i)
        column(col++, plus[i], zero, "(xi+[" + root_labels[i] + "],0)");
    for (std::size_t i = 0; i < plus.size(); ++i)
        column(col++, zero, plus[i], "(0,xi+[" + root_labels[i] + "])");
    return psi;
}

PsiDetCheck psi_det_check(const LieData& lie, const Vec& h)
{
    if (!regularity(lie.roots, h).regular)
        throw SingularityError("psi_det_check requires a regular element of A");
    PsiDetCheck out;
    const PsiMatrix psi = psi_matrix(lie, h);
    out.det_abs = psi.entries.rows() == 0 ? 1.0 : std::abs(psi.entries.determinant());
    out.jac = jacobian(lie.roots, h);
    out.ratio = out.det_abs / out.jac;
    return out;
}

AdCoefficients ad_action_coefficients(const LieData& lie, const Vec& h, std::size_t p, std::size_t j)
{
    const RootSplit split = root_space_split(lie.family, lie.frame, p, j);
    const Mat image = ad_inverse(exp_a(lie, -h), exp_a(lie, h), split.plus);
    AdCoefficients out;
    out.c_plus = frobenius_dot(image, split.plus) / split.plus.squaredNorm();
    out.c_minus = frobenius_dot(image, split.minus) / split.minus.squaredNorm();
    out.other = (image - out.c_plus * split.plus - out.c_minus * split.minus).norm();
    return out;
}

Transversality transversality(const LieData& lie, const Vec& h)
{
    const GroupFamily& family = lie.family;
    const CartanFrame& frame = lie.frame;
    const Eigen::Index dg = family.dim_g();

    std::vector<Mat> basis = frame.basis_a;
    basis.insert(basis.end(), frame.basis_m.begin(), frame.basis_m.end());
    basis.insert(basis.end(), frame.basis_l.begin(), frame.basis_l.end());
    basis.insert(basis.end(), frame.basis_b.begin(), frame.basis_b.end());

    const Mat a = exp_a(lie, h);
    const Mat a_inv = exp_a(lie, -h);
    std::vector<Mat> images = frame.basis_a;
    for (const Mat& eta : frame.basis_m)
        images.push_back(eta);
    for (const Mat& l : frame.basis_l) {
        images.push_back(ad_inverse(a_inv, a, l));
        images.push_back(-l);
    }

    auto to_matrix = [&](const std::vector<Mat>& vs) {
        Mat m(dg, static_cast<Eigen::Index>(vs.size()));
        for (std::size_t i = 0; i < vs.size(); ++i)
            m.col(static_cast<Eigen::Index>(i)) = family.coordinates(vs[i]);
        return m;
    };
    Transversality t;
    t.basis_condition = condition_number(to_matrix(basis));
    t.image_condition = condition_number(to_matrix(images));
    return t;
}

} // namespace weylint
