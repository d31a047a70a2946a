#pragma once

#include "weylint/integrand.hpp"
#include "weylint/rng.hpp"
#include "weylint/roots.hpp"

#include <cstdint>
#include <iosfwd>
#include <span>
#include <utility>
#include <vector>

namespace weylint {

// ---------------------------------------------------------------------------
// Haar sampling on K and on the centralizer M
// ---------------------------------------------------------------------------

/// Haar-distributed element of K: QR of a Gaussian matrix with the diagonal
/// of R normalized to be positive (phases for the unitary case).
Mat haar_sample_compact(const GroupFamily& family, Rng& rng);

/// Random element of M = Z_K(a) (sign/phase diagonals, or a rotation fixing
/// the boost plane for the Lorentz family).
Mat haar_sample_centralizer(const LieData& lie, Rng& rng);

// ---------------------------------------------------------------------------
// Quadrature over the positive chamber
// ---------------------------------------------------------------------------

using Bounds = std::vector<std::pair<double, double>>;

/// Gauss-Legendre nodes and weights on [-1, 1].
std::pair<Vec, Vec> gauss_legendre(int order);

enum class QuadratureLayout {
    /// Tensor grid on a box in a-coordinates, nodes outside the chamber dropped.
    FilteredBox,
    /// Tensor grid in (simple-root values, center coordinates); every node is
    /// inside the chamber and the integrand has no kink at the walls.
    Cone
};

std::string_view to_string(QuadratureLayout layout);
QuadratureLayout parse_quadrature_layout(std::string_view name);

struct ChamberQuadrature
{
    std::vector<Vec> nodes; ///< a-coordinates
    std::vector<double> weights;
    Bounds truncation; ///< per grid coordinate
    int order = 0;
    QuadratureLayout layout = QuadratureLayout::FilteredBox;

    double total_weight() const;
};

/// Filtered tensor-product Gauss-Legendre grid on a box in a-coordinates.
/// Throws ConfigurationError for an empty node set or bad bounds.
ChamberQuadrature chamber_quadrature(const RootSystem& roots, const Bounds& box, int order);

/// Linear coordinates adapted to the chamber: H = coweights * s + center * z,
/// with s_i = alpha_i(H) for the simple roots alpha_i.
struct ConeCoordinates
{
    std::vector<int> simple_roots; ///< indices into roots.roots
    Mat coweights;                 ///< rank x (#simple)
    Mat center;                    ///< rank x (rank - #simple), orthonormal
    double jacobian = 1.0;         ///< |det [coweights center]|

    int simple_count() const { return static_cast<int>(coweights.cols()); }
    int center_count() const { return static_cast<int>(center.cols()); }
    Vec to_a(const Vec& s, const Vec& z) const;
};

ConeCoordinates cone_coordinates(const RootSystem& roots);

/// Tensor Gauss-Legendre grid on s in [0, root_extent]^{#simple} x
/// z in [-center_extent, center_extent]^{#center}.
ChamberQuadrature cone_quadrature(const RootSystem& roots, double root_extent, double center_extent, int order);

/// Symmetric box [-t, t]^rank, or [0, t] for a rank-one chamber.
Bounds symmetric_box(const RootSystem& roots, double t);

// ---------------------------------------------------------------------------
// Charts and the left-invariant volume on G
// ---------------------------------------------------------------------------

/// g = exp(sum_k x_k Y_k) exp(sum_p x_p P_p) for the k- and p-parts of x in
/// the orthonormal frame.
Mat chart(const GroupFamily& family, const Vec& x);

/// |det| of the frame coordinates of g^{-1} dg/dx_i, i.e. the density of the
/// left-invariant Riemannian volume of the +/-B metric in chart coordinates.
/// Uses exact Frechet derivatives of exp. Throws RangeError when non-finite.
double chart_volume_density(const GroupFamily& family, const Vec& x);

/// Same density with central finite differences of the chart.
double chart_volume_density_fd(const GroupFamily& family, const Vec& x, double step = 1e-6);

/// Same density for the translated chart x -> g0 chart(x).
double translated_chart_density_fd(const GroupFamily& family, const Mat& g0, const Vec& x, double step = 1e-6);

/// Density of the polar chart (k, P) -> k exp(P) at P = sum x_p P_p, per unit
/// Riemannian volume of K. Uses the spectral form of the exp derivative.
double polar_density(const GroupFamily& family, const Vec& xp);

// ---------------------------------------------------------------------------
// Direct Monte Carlo over G
// ---------------------------------------------------------------------------

struct Estimate
{
    double value = 0.0;
    double std_error = 0.0;
    double ess = 0.0;
    bool poor_proposal = false;
};

struct DirectParams
{
    std::size_t samples = 100000;
    /// Standard deviation of the Gaussian proposal on p-coordinates.
    double scale = 0.45;
    std::uint64_t seed = 1;
};

/// Importance-sampling estimates of int_G f dg / vol(K) for every function,
/// using one shared sample set: k Haar on K, P Gaussian on p, weight
/// f(k e^P) polar_density(P) / q(P). Reproducible for a fixed seed.
std::vector<Estimate> mc_direct_integrals(const GroupFamily& family, std::span<const TestFunction> functions,
                                          const DirectParams& params);

Estimate mc_direct_integral(const GroupFamily& family, const TestFunction& f, const DirectParams& params);

/// p-coordinates of log of the positive factor in the polar decomposition.
Vec polar_coordinates(const GroupFamily& family, const Mat& g);

/// Gaussian proposal density at p-coordinates xp.
double proposal_density(const Vec& xp, double scale);

// ---------------------------------------------------------------------------
// CSV export
// ---------------------------------------------------------------------------

void write_quadrature_csv(std::ostream& os, const ChamberQuadrature& quad);

/// One row per direct sample: p-coordinates, proposal density, chart density.
void write_direct_samples_csv(std::ostream& os, const GroupFamily& family, const DirectParams& params);

/// Runs fn(chunk) for chunk in [0, count) on a pool of worker threads.
void parallel_chunks(std::size_t count, const std::function<void(std::size_t)>& fn);

} // namespace weylint
