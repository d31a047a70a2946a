#pragma once

#include "weylint/rng.hpp"
#include "weylint/roots.hpp"

#include <string>

namespace weylint {

/// g = k1 exp(H) k2^{-1}, H given by coordinates in basis_a.
struct KAKFactors
{
    Mat k1;
    Vec h;
    Mat k2;
    /// Set when H lies within 1e-12 of a wall; k-factors are then only
    /// determined up to a larger subgroup.
    bool ill_conditioned = false;
    std::string warning;
};

/// Computes the KAK factorization with H in the closed positive chamber.
/// Throws DomainError when g is not in G.
KAKFactors kak_decompose(const LieData& lie, const Mat& g);

Mat recompose(const LieData& lie, const KAKFactors& factors);

/// exp(sum h_i H_i) in closed form (diagonal or symmetric a).
Mat exp_a(const LieData& lie, const Vec& h);

struct ChamberReduction
{
    std::size_t weyl_index = 0;
    Vec h;
};

/// First Weyl element (in enumeration order) moving H into the closed
/// positive chamber.
ChamberReduction chamber_reduce(const RootSystem& roots, const Vec& h);

bool in_closed_chamber(const RootSystem& roots, const Vec& h, double tol = 1e-12);

struct Regularity
{
    bool regular = false;
    double margin = 0.0;
};

/// regular iff min over positive roots of |lambda(H)| exceeds 1e-10.
Regularity regularity(const RootSystem& roots, const Vec& h);

/// exp(scale * X) for X standard Gaussian in the orthonormal frame of g.
Mat random_group_element(const GroupFamily& family, Rng& rng, double scale);

} // namespace weylint
