#pragma once

#include "weylint/density.hpp"
#include "weylint/integrand.hpp"
#include "weylint/measure.hpp"

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace weylint {

/// Monte Carlo mean of f(k1 exp(H) k2^{-1}) over independent Haar pairs, i.e.
/// the orbit integral with the invariant measure on (K x K)/M normalized to
/// mass one. Class-like functions are evaluated once, exactly.
Estimate orbit_average(const LieData& lie, const TestFunction& f, const Vec& h, std::size_t samples, Rng& rng);

/// Shared-sample variant for several functions.
std::vector<Estimate> orbit_averages(const LieData& lie, std::span<const TestFunction> functions, const Vec& h,
                                     std::size_t samples, Rng& rng);

struct ReducedParams
{
    std::size_t orbit_samples = 10000;
    std::uint64_t seed = 1;
    JacobianMode mode = JacobianMode::Exact;
};

/// sum_nodes w * orbit_average(H) * J(H), with J taken with C = 1. Node n uses
/// rng stream n of the seed, so results do not depend on thread scheduling.
std::vector<Estimate> reduced_integrals(const LieData& lie, std::span<const TestFunction> functions,
                                        const ChamberQuadrature& quadrature, const ReducedParams& params);

Estimate reduced_integral(const LieData& lie, const TestFunction& f, const ChamberQuadrature& quadrature,
                          const ReducedParams& params);

struct Calibration
{
    double c = 0.0;
    double sigma = 0.0;
    Estimate direct;
    Estimate reduced;
};

/// C = direct / reduced with first-order error propagation. Throws
/// CalibrationError when the reduced value is consistent with zero.
Calibration calibrate_from(const Estimate& direct, const Estimate& reduced);

Calibration calibrate(const LieData& lie, const TestFunction& f_ref, const DirectParams& direct,
                      const ChamberQuadrature& quadrature, const ReducedParams& reduced);

/// Extent used for both the root and the center coordinates of the default
/// cone quadrature: grown in steps of 0.25 until the calibrator times J on the
/// boundary of the region is below 1e-12 of its interior maximum.
double default_truncation(const LieData& lie);

struct VerifyParams
{
    std::size_t direct_samples = 1000000;
    std::size_t orbit_samples = 10000;
    int order = 32;
    /// Truncation extent; default_truncation() when unset.
    std::optional<double> truncation;
    double proposal_scale = 0.45;
    std::uint64_t seed = 20240611;
    QuadratureLayout layout = QuadratureLayout::Cone;
    JacobianMode mode = JacobianMode::Exact;
    double threshold = 3.0;
    double relative_floor = 0.02;
};

struct FunctionResult
{
    std::string name;
    FunctionKind kind = FunctionKind::Generic;
    bool calibrator = false;
    Estimate direct;
    Estimate reduced;
    double ratio = 0.0;
    /// (direct - C reduced) / sigma_combined
    double z = 0.0;
    /// Same difference over max(sigma_combined, floor * |direct| / threshold);
    /// agreement is decided on this one.
    double z_floored = 0.0;
    double relative_difference = 0.0;
    bool agrees = false;
};

struct InvariantCheck
{
    std::string name;
    double value = 0.0;
    double tolerance = 0.0;
    bool passed = false;
};

struct VerificationReport
{
    std::string family;
    int n = 0;
    VerifyParams params;
    double truncation = 0.0;
    std::size_t quadrature_nodes = 0;
    double c = 0.0;
    double sigma_c = 0.0;
    std::vector<FunctionResult> functions;
    std::vector<InvariantCheck> invariants;
    std::vector<std::string> warnings;
    bool degraded = false;
    bool passed = false;
};

ChamberQuadrature make_quadrature(const LieData& lie, QuadratureLayout layout, double truncation, int order);

/// Calibrates on the first class-like function of the suite and scores every
/// other function against direct = C * reduced. Needs the calibrator plus at
/// least two further functions.
VerificationReport verify(const LieData& lie, std::span<const TestFunction> suite, const VerifyParams& params);

} // namespace weylint
