#pragma once

#include "weylint/roots.hpp"

#include <string>
#include <vector>

namespace weylint {

/// Exact is the product of |sinh lambda(H)|^beta. The other two modes are
/// deliberately wrong densities used as negative controls.
enum class JacobianMode { Exact, DropRoot, Linear };

std::string_view to_string(JacobianMode mode);
JacobianMode parse_jacobian_mode(std::string_view name);

/// sum over positive roots of beta * log|sinh lambda(H)|; -infinity when some
/// lambda(H) vanishes exactly.
double log_jacobian(const RootSystem& roots, const Vec& h, JacobianMode mode = JacobianMode::Exact);

/// exp(log_jacobian), with the constant C = 1. Zero on the singular set.
double jacobian(const RootSystem& roots, const Vec& h, JacobianMode mode = JacobianMode::Exact);

/// Matrix of (zeta1, zeta2) -> Ad(a^{-1}) zeta1 - zeta2 from the basis
/// {(eta_i, 0), (xi+_{lambda,j}, 0), (0, xi+_{lambda,j})} of the tangent space
/// of (K x K)/M to the basis {eta_i, xi+_{lambda,j}, xi-_{lambda,j}} of the
/// left-translated tangent space of the orbit through a = exp(H).
struct PsiMatrix
{
    Mat entries;
    std::vector<std::string> domain_labels;
    std::vector<std::string> codomain_labels;
    /// Largest norm of an image vector's component outside the codomain span.
    double expansion_residual = 0.0;
};

PsiMatrix psi_matrix(const LieData& lie, const Vec& h);

struct PsiDetCheck
{
    double det_abs = 0.0;
    double jac = 0.0;
    double ratio = 0.0;
};

/// |det Psi| against jacobian(H); throws SingularityError for irregular H.
PsiDetCheck psi_det_check(const LieData& lie, const Vec& h);

struct AdCoefficients
{
    double c_plus = 0.0;
    double c_minus = 0.0;
    /// Norm of everything in Ad(a^{-1}) xi+ outside span{xi+, xi-}.
    double other = 0.0;
};

/// Expansion of Ad(exp(-H)) xi+_{lambda,j} for the p-th positive root,
/// computed by explicit conjugation.
AdCoefficients ad_action_coefficients(const LieData& lie, const Vec& h, std::size_t p, std::size_t j);

struct Transversality
{
    /// Condition number of basis_a joined with the orthonormalized codomain
    /// basis of Psi.
    double basis_condition = 0.0;
    /// Condition number of basis_a joined with the actual images of Psi.
    double image_condition = 0.0;
};

Transversality transversality(const LieData& lie, const Vec& h);

} // namespace weylint
