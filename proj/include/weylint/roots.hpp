#pragma once

#include "weylint/family.hpp"

#include <cstdint>
#include <vector>

namespace weylint {

/// Orthonormal bases for the pieces of g = m + l + a + b. Elements of k-side
/// bases are orthonormal under -B, p-side under +B.
struct CartanFrame
{
    std::vector<Mat> basis_k;
    std::vector<Mat> basis_p;
    std::vector<Mat> basis_a;
    std::vector<Mat> basis_m;
    std::vector<Mat> basis_l;
    std::vector<Mat> basis_b;
    /// root_vectors[p] = orthonormal basis xi_{lambda,1..beta} of g_lambda for
    /// the p-th positive root.
    std::vector<std::vector<Mat>> root_vectors;
};

struct Root
{
    /// lambda(H_i) for the basis H_i of a.
    Vec coords;
    int multiplicity = 0;
    bool positive = false;
    /// Orthonormal basis of the root space g_lambda.
    std::vector<Mat> space;
};

struct RootSystem
{
    /// Positive roots first (lexicographically descending), then their
    /// negatives in the same order.
    std::vector<Root> roots;
    std::vector<int> positive_roots;
    /// Orthogonal maps on a-coordinates; identity first.
    std::vector<Mat> weyl_elements;
    int weyl_order = 1;
    int rank = 0;

    const Root& positive(std::size_t p) const { return roots[static_cast<std::size_t>(positive_roots[p])]; }
    std::size_t positive_count() const { return positive_roots.size(); }
    /// lambda(H) for the p-th positive root.
    double positive_value(std::size_t p, const Vec& h) const { return positive(p).coords.dot(h); }
    int multiplicity_sum() const;
};

/// Orthonormal basis of the chosen maximal abelian subspace a of p.
std::vector<Mat> maximal_abelian(const GroupFamily& family);

/// Frame with k, p, a filled in; the rest is populated by centralizer_m and
/// restricted_roots.
CartanFrame initial_frame(const GroupFamily& family);

/// Joint eigendecomposition of {ad(H_i)} on g. Fills frame.root_vectors,
/// frame.basis_l and frame.basis_b. Throws DegeneracyError when eigenvalue
/// clusters cannot be separated cleanly.
RootSystem restricted_roots(const GroupFamily& family, CartanFrame& frame);

struct RootSplit
{
    Mat plus;  ///< xi + theta xi, in l
    Mat minus; ///< xi - theta xi, in b
};

/// The pair xi_{lambda,j} +/- theta xi_{lambda,j} for the p-th positive root.
RootSplit root_space_split(const GroupFamily& family, const CartanFrame& frame, std::size_t p, std::size_t j);

/// Orthonormal basis of m = Z_k(a).
std::vector<Mat> centralizer_m(const GroupFamily& family, const CartanFrame& frame);

struct WeylGroup
{
    std::vector<Mat> elements;
    int order = 1;
};

/// Closure of the root reflections. Throws InternalError past 10^6 elements.
WeylGroup weyl_group(const RootSystem& roots);

/// Max residuals of the root-space structure properties.
struct StructureReport
{
    double decomposition = 0;   ///< g = g_0 + sum g_lambda (Gram of eigenbasis)
    double bracket = 0;         ///< [g_lambda, g_gamma] in g_{lambda+gamma}
    double orthogonality = 0;   ///< B(g_lambda, g_gamma) = 0 unless lambda + gamma = 0
    double theta_swap = 0;      ///< theta g_lambda = g_{-lambda}
    double theta_norm = 0;      ///< | ||proj_{-lambda} theta xi|| - 1 |
    double zero_space = 0;      ///< g_0 = a + m orthogonally
    int pairs = 0;

    double max_residual() const;
};

StructureReport structure_checks(const GroupFamily& family, const CartanFrame& frame, const RootSystem& roots,
                                 int pairs = 200, std::uint64_t seed = 1);

/// Family, frame and roots built together.
struct LieData
{
    GroupFamily family;
    CartanFrame frame;
    RootSystem roots;

    int dim_a() const { return static_cast<int>(frame.basis_a.size()); }
    /// sum_i h_i H_i.
    Mat a_element(const Vec& h) const;
    /// Coordinates of an element of a in basis_a.
    Vec a_coordinates(const Mat& x) const;
};

LieData build_lie_data(FamilyTag tag, int n);

/// Matrix of ad(X) acting on frame coordinates of g.
Mat ad_matrix(const GroupFamily& family, const Mat& x);

} // namespace weylint
