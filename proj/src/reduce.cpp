#include "weylint/reduce.hpp"

#include "weylint/errors.hpp"
#include "weylint/kak.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace weylint {

namespace {

constexpr std::uint64_t kDirectSalt = 0xD1B54A32D192ED03ULL;
constexpr std::uint64_t kReducedSalt = 0x8CB92BA72F3D8DD7ULL;
constexpr std::uint64_t kCheckSalt = 0x52DCE729DA3ED6F5ULL;

bool any_generic(std::span<const TestFunction> functions)
{
    return std::any_of(functions.begin(), functions.end(),
                       [](const TestFunction& f) { return f.kind == FunctionKind::Generic; });
}

// log of f0(exp H) * J(H).
double log_calibrator_weight(const LieData& lie, const Vec& h)
{
    const double lj = log_jacobian(lie.roots, h);
    return -exp_a(lie, 2.0 * h).trace() - exp_a(lie, -2.0 * h).trace() + lj;
}

} // namespace

std::vector<Estimate> orbit_averages(const LieData& lie, std::span<const TestFunction> functions, const Vec& h,
                                     std::size_t samples, Rng& rng)
{
    const Mat a = exp_a(lie, h);
    const Mat a_inv = exp_a(lie, -h);
    const GroupPoint center{a, a_inv};
    const std::size_t nf = functions.size();
    std::vector<Estimate> out(nf);
    std::vector<double> sum(nf, 0.0);
    std::vector<double> sum_sq(nf, 0.0);
    for (std::size_t f = 0; f < nf; ++f)
        if (functions[f].kind == FunctionKind::ClassLike) {
            out[f].value = functions[f](center);
            out[f].ess = static_cast<double>(samples);
        }
    if (!any_generic(functions))
        return out;
    if (samples < 100)
        throw ConfigurationError("orbit averages need at least 100 samples");

    for (std::size_t s = 0; s < samples; ++s) {
        const Mat k1 = haar_sample_compact(lie.family, rng);
        const Mat k2 = haar_sample_compact(lie.family, rng);
        const GroupPoint point{k1 * a * k2.transpose(), k2 * a_inv * k1.transpose()};
        for (std::size_t f = 0; f < nf; ++f) {
            if (functions[f].kind == FunctionKind::ClassLike)
                continue;
            const double y = functions[f](point);
            sum[f] += y;
            sum_sq[f] += y * y;
        }
    }
    const double n = static_cast<double>(samples);
    for (std::size_t f = 0; f < nf; ++f) {
        if (functions[f].kind == FunctionKind::ClassLike)
            continue;
        const double mean = sum[f] / n;
        const double var = std::max(0.0, (sum_sq[f] - n * mean * mean) / (n - 1.0));
        out[f].value = mean;
        out[f].std_error = std::sqrt(var / n);
        out[f].ess = n;
    }
    return out;
}

Estimate orbit_average(const LieData& lie, const TestFunction& f, const Vec& h, std::size_t samples, Rng& rng)
{
    return orbit_averages(lie, std::span<const TestFunction>(&f, 1), h, samples, rng).front();
}

std::vector<Estimate> reduced_integrals(const LieData& lie, std::span<const TestFunction> functions,
                                        const ChamberQuadrature& quadrature, const ReducedParams& params)
{
    if (quadrature.nodes.empty() || quadrature.nodes.size() != quadrature.weights.size())
        throw ConfigurationError("quadrature has no nodes");
    for (const Vec& h : quadrature.nodes) {
        if (h.size() != lie.dim_a())
            throw ConfigurationError("quadrature nodes do not match the rank of " + lie.family.name());
        if (!in_closed_chamber(lie.roots, h, 1e-12))
            throw ConfigurationError("quadrature node outside the positive chamber");
    }
    const std::size_t nodes = quadrature.nodes.size();
    const std::size_t nf = functions.size();
    std::vector<std::vector<Estimate>> per_node(nodes);
    std::vector<double> jac(nodes);

    parallel_chunks(nodes, [&](std::size_t node) {
        Rng rng = make_stream(params.seed, node);
        const Vec& h = quadrature.nodes[node];
        jac[node] = jacobian(lie.roots, h, params.mode);
        per_node[node] = orbit_averages(lie, functions, h, params.orbit_samples, rng);
    });

    std::vector<Estimate> out(nf);
    for (std::size_t f = 0; f < nf; ++f) {
        double value = 0.0;
        double var = 0.0;
        for (std::size_t node = 0; node < nodes; ++node) {
            const double w = quadrature.weights[node] * jac[node];
            value += w * per_node[node][f].value;
            var += w * w * per_node[node][f].std_error * per_node[node][f].std_error;
        }
        out[f].value = value;
        out[f].std_error = std::sqrt(var);
        out[f].ess = static_cast<double>(params.orbit_samples);
    }
    return out;
}

Estimate reduced_integral(const LieData& lie, const TestFunction& f, const ChamberQuadrature& quadrature,
                          const ReducedParams& params)
{
    return reduced_integrals(lie, std::span<const TestFunction>(&f, 1), quadrature, params).front();
}

Calibration calibrate_from(const Estimate& direct, const Estimate& reduced)
{
    if (reduced.value == 0.0 || std::abs(reduced.value) <= 3.0 * reduced.std_error)
        throw CalibrationError("reduced integral of the calibration function is consistent with zero");
    Calibration cal;
    cal.direct = direct;
    cal.reduced = reduced;
    cal.c = direct.value / reduced.value;
    const double rel_r = reduced.std_error / reduced.value;
    const double abs_d = direct.std_error / reduced.value;
    cal.sigma = std::sqrt(abs_d * abs_d + cal.c * cal.c * rel_r * rel_r);
    return cal;
}

Calibration calibrate(const LieData& lie, const TestFunction& f_ref, const DirectParams& direct,
                      const ChamberQuadrature& quadrature, const ReducedParams& reduced)
{
    if (f_ref.kind != FunctionKind::ClassLike)
        throw ConfigurationError("calibration function must be class-like");
    return calibrate_from(mc_direct_integral(lie.family, f_ref, direct), reduced_integral(lie, f_ref, quadrature, reduced));
}

double default_truncation(const LieData& lie)
{
    const ConeCoordinates cc = cone_coordinates(lie.roots);
    const int s = cc.simple_count();
    const int c = cc.center_count();
    const int dim = s + c;
    constexpr int grid = 9;
    for (double tau = 0.5; tau <= 20.0; tau += 0.25) {
        double interior = -std::numeric_limits<double>::infinity();
        double boundary = -std::numeric_limits<double>::infinity();
        std::vector<int> idx(static_cast<std::size_t>(dim), 0);
        Vec y(dim);
        while (true) {
            bool on_face = false;
            for (int d = 0; d < dim; ++d) {
                const double t = static_cast<double>(idx[static_cast<std::size_t>(d)]) / (grid - 1);
                y(d) = d < s ? tau * t : tau * (2.0 * t - 1.0);
                const bool outer = d < s ? idx[static_cast<std::size_t>(d)] == grid - 1
                                         : idx[static_cast<std::size_t>(d)] == 0 ||
                                               idx[static_cast<std::size_t>(d)] == grid - 1;
                on_face = on_face || outer;
            }
            const double v = log_calibrator_weight(lie, cc.to_a(y.head(s), y.tail(c)));
            interior = std::max(interior, v);
            if (on_face)
                boundary = std::max(boundary, v);
            int d = 0;
            while (d < dim && ++idx[static_cast<std::size_t>(d)] == grid)
                idx[static_cast<std::size_t>(d++)] = 0;
            if (d == dim)
                break;
        }
        if (boundary - interior < std::log(1e-12))
            return tau;
    }
    throw ConfigurationError("could not find a truncation for " + lie.family.name());
}

ChamberQuadrature make_quadrature(const LieData& lie, QuadratureLayout layout, double truncation, int order)
{
    if (layout == QuadratureLayout::Cone)
        return cone_quadrature(lie.roots, truncation, truncation, order);
    return chamber_quadrature(lie.roots, symmetric_box(lie.roots, truncation), order);
}

VerificationReport verify(const LieData& lie, std::span<const TestFunction> suite, const VerifyParams& params)
{
    const auto calibrator = std::find_if(suite.begin(), suite.end(),
                                         [](const TestFunction& f) { return f.kind == FunctionKind::ClassLike; });
    if (calibrator == suite.end())
        throw ConfigurationError("verification suite needs a class-like calibration function");
    if (suite.size() < 3)
        throw ConfigurationError("verification suite needs at least two functions besides the calibrator");
    const auto cal_index = static_cast<std::size_t>(calibrator - suite.begin());

    VerificationReport report;
    report.family = std::string(to_string(lie.family.tag()));
    report.n = lie.family.n();
    report.params = params;
    report.truncation = params.truncation ? *params.truncation : default_truncation(lie);

    const ChamberQuadrature quad = make_quadrature(lie, params.layout, report.truncation, params.order);
    report.quadrature_nodes = quad.nodes.size();

    const DirectParams dp{params.direct_samples, params.proposal_scale, splitmix64(params.seed ^ kDirectSalt)};
    const ReducedParams rp{params.orbit_samples, splitmix64(params.seed ^ kReducedSalt), params.mode};
    const std::vector<Estimate> direct = mc_direct_integrals(lie.family, suite, dp);
    const std::vector<Estimate> reduced = reduced_integrals(lie, suite, quad, rp);

    const Calibration cal = calibrate_from(direct[cal_index], reduced[cal_index]);
    report.c = cal.c;
    report.sigma_c = cal.sigma;

    bool all_agree = true;
    for (std::size_t i = 0; i < suite.size(); ++i) {
        FunctionResult r;
        r.name = suite[i].name;
        r.kind = suite[i].kind;
        r.calibrator = i == cal_index;
        r.direct = direct[i];
        r.reduced = reduced[i];
        r.ratio = reduced[i].value != 0.0 ? direct[i].value / reduced[i].value : 0.0;
        const double diff = direct[i].value - cal.c * reduced[i].value;
        if (!r.calibrator) {
            const double sc = cal.c * reduced[i].std_error;
            const double sr = reduced[i].value * cal.sigma;
            const double combined = std::sqrt(direct[i].std_error * direct[i].std_error + sc * sc + sr * sr);
            const double floor = params.relative_floor * std::abs(direct[i].value) / params.threshold;
            const double eff = std::max(combined, floor);
            r.z_floored = eff > 0.0 ? diff / eff : 0.0;
            r.z = combined > 0.0 ? diff / combined : 0.0;
        }
        r.relative_difference = direct[i].value != 0.0 ? diff / direct[i].value : 0.0;
        r.agrees = std::abs(r.z_floored) < params.threshold;
        all_agree = all_agree && r.agrees;
        if (direct[i].poor_proposal) {
            report.degraded = true;
            report.warnings.push_back("poor proposal for " + r.name + " (effective sample size " +
                                      std::to_string(direct[i].ess) + ")");
        }
        report.functions.push_back(std::move(r));
    }

    const StructureReport sr = structure_checks(lie.family, lie.frame, lie.roots, 200, params.seed);
    report.invariants.push_back({"structure", sr.max_residual(), 1e-12, sr.max_residual() < 1e-12});

    Rng rng = make_stream(params.seed, kCheckSalt);
    std::normal_distribution<double> normal;
    double worst = 0.0;
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (int t = 0; t < 10; ++t) {
        Vec h(lie.dim_a());
        for (Eigen::Index i = 0; i < h.size(); ++i)
            h(i) = normal(rng);
        if (!regularity(lie.roots, h).regular)
            continue;
        const PsiDetCheck pc = psi_det_check(lie, h);
        worst = std::max(worst, std::abs(pc.ratio - 1.0));
        lo = std::min(lo, pc.ratio);
        hi = std::max(hi, pc.ratio);
    }
    report.invariants.push_back({"psi-determinant", worst, 1e-8, worst < 1e-8});
    const double spread = hi >= lo ? hi - lo : 0.0;
    report.invariants.push_back({"psi-ratio-spread", spread, 1e-8, spread < 1e-8});

    const bool invariants_ok = std::all_of(report.invariants.begin(), report.invariants.end(),
                                           [](const InvariantCheck& c) { return c.passed; });
    report.passed = all_agree && invariants_ok && !report.degraded;
    return report;
}

} // namespace weylint
