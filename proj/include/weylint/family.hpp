#pragma once

#include "weylint/linalg.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace weylint {

enum class FamilyTag { GLReal, SLReal, GLComplex, LorentzSO0 };

std::string_view to_string(FamilyTag tag);

/// Accepts the canonical names "GL-real", "SL-real", "GL-complex-as-real",
/// "LorentzSO0". Throws ConfigurationError otherwise.
FamilyTag parse_family_tag(std::string_view name);

const std::vector<FamilyTag>& all_family_tags();

/// A concrete reductive matrix group (G, K, theta, B) in a fixed real
/// representation.
///
/// The algebra carries an orthonormal frame: basis_k() is orthonormal under
/// -B, basis_p() under +B, with B(X, Y) = trace(XY). Since theta(X) = -X^T,
/// the combined frame is orthonormal for the Frobenius product trace(X Y^T),
/// which is the positive form -B(X, theta Y). Coordinates are taken in this
/// frame, k-part first.
class GroupFamily
{
public:
    GroupFamily(FamilyTag tag, int n, std::vector<Mat> basis_k, std::vector<Mat> basis_p);

    FamilyTag tag() const { return tag_; }
    int n() const { return n_; }
    /// Size of the real matrices representing G.
    int matrix_size() const { return size_; }
    int dim_g() const { return static_cast<int>(basis_k_.size() + basis_p_.size()); }
    int dim_k() const { return static_cast<int>(basis_k_.size()); }
    int dim_p() const { return static_cast<int>(basis_p_.size()); }

    /// "SL-real(2)" style label.
    std::string name() const;

    const std::vector<Mat>& basis_k() const { return basis_k_; }
    const std::vector<Mat>& basis_p() const { return basis_p_; }
    /// Full frame, k-part then p-part.
    const std::vector<Mat>& basis() const { return basis_; }

    /// Rows are the flattened frame elements; coordinates(X) = F vec(X).
    const Mat& frame_matrix() const { return frame_; }
    Vec coordinates(const Mat& x) const;
    Mat from_coordinates(const Vec& c) const;

    /// Distance of X from the algebra (0 for members). Throws DomainError on
    /// shape mismatch.
    double algebra_residual(const Mat& x) const;
    /// Membership residual for G (infinite for singular matrices).
    double group_residual(const Mat& g) const;
    /// Membership residual for the maximal compact subgroup K.
    double compact_residual(const Mat& k) const;

    void require_shape(const Mat& x) const;
    void require_algebra(const Mat& x, double tol = 1e-8) const;

private:
    FamilyTag tag_;
    int n_;
    int size_;
    std::vector<Mat> basis_k_;
    std::vector<Mat> basis_p_;
    std::vector<Mat> basis_;
    Mat frame_;
};

/// Builds the descriptor and its orthonormal frame. Requires n >= 2 for the
/// matrix families and n >= 1 for LorentzSO0 (SO_0(1, n)).
GroupFamily make_family(FamilyTag tag, int n);

/// theta(X) = -X^T (conjugate transpose after realification).
Mat cartan_involution(const GroupFamily& family, const Mat& x);

/// B(X, Y) = trace(XY) in the real representation.
double bilinear_form(const GroupFamily& family, const Mat& x, const Mat& y);

struct CartanParts
{
    Mat k;
    Mat p;
};

CartanParts cartan_split(const GroupFamily& family, const Mat& x);

/// Minkowski metric diag(-1, 1, ..., 1) of size n + 1.
Mat minkowski_metric(int n);

/// A group element together with its inverse, which every sampler in the
/// library produces cheaply.
struct GroupPoint
{
    Mat g;
    Mat g_inv;
};

} // namespace weylint
