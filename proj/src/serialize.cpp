#include "weylint/serialize.hpp"

#include "weylint/errors.hpp"

#include <ostream>

namespace weylint {

using nlohmann::json;

json matrix_to_json(const Mat& m)
{
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j)
            row.push_back(m(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

Mat matrix_from_json(const json& rows, bool interleaved_complex)
{
    if (!rows.is_array() || rows.empty())
        throw ConfigurationError("matrix must be a non-empty JSON array of rows");
    const auto n = static_cast<Eigen::Index>(rows.size());
    const Eigen::Index width = interleaved_complex ? 2 * n : n;
    Mat real(n, width);
    for (Eigen::Index i = 0; i < n; ++i) {
        const json& row = rows[static_cast<std::size_t>(i)];
        if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != width)
            throw ConfigurationError("matrix row " + std::to_string(i) + " must have " + std::to_string(width) +
                                     " entries");
        for (Eigen::Index j = 0; j < width; ++j) {
            const json& v = row[static_cast<std::size_t>(j)];
            if (!v.is_number())
                throw ConfigurationError("matrix entries must be numbers");
            real(i, j) = v.get<double>();
        }
    }
    if (!interleaved_complex)
        return real;
    CMat z(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j)
            z(i, j) = {real(i, 2 * j), real(i, 2 * j + 1)};
    return realify(z);
}

json roots_to_json(const LieData& lie)
{
    json roots = json::array();
    for (const Root& r : lie.roots.roots) {
        json coords = json::array();
        for (Eigen::Index i = 0; i < r.coords.size(); ++i)
            coords.push_back(r.coords(i));
        roots.push_back({{"coords", coords}, {"multiplicity", r.multiplicity}, {"positive", r.positive}});
    }
    const CartanFrame& f = lie.frame;
    return {{"schema", kSchemaVersion},
            {"family", std::string(to_string(lie.family.tag()))},
            {"n", lie.family.n()},
            {"roots", roots},
            {"positive_count", lie.roots.positive_count()},
            {"weyl_order", lie.roots.weyl_order},
            {"dims",
             {{"g", lie.family.dim_g()},
              {"k", f.basis_k.size()},
              {"p", f.basis_p.size()},
              {"a", f.basis_a.size()},
              {"m", f.basis_m.size()},
              {"l", f.basis_l.size()},
              {"b", f.basis_b.size()}}}};
}

json kak_to_json(const LieData& lie, const KAKFactors& factors, double residual)
{
    json h = json::array();
    for (Eigen::Index i = 0; i < factors.h.size(); ++i)
        h.push_back(factors.h(i));
    json out{{"schema", kSchemaVersion},
             {"family", std::string(to_string(lie.family.tag()))},
             {"n", lie.family.n()},
             {"k1", matrix_to_json(factors.k1)},
             {"H", h},
             {"k2", matrix_to_json(factors.k2)},
             {"residual", residual}};
    if (factors.ill_conditioned)
        out["warning"] = factors.warning;
    return out;
}

json families_to_json(int max_n)
{
    json rows = json::array();
    for (FamilyTag tag : all_family_tags()) {
        const int lo = tag == FamilyTag::LorentzSO0 ? 1 : 2;
        for (int n = lo; n <= max_n; ++n) {
            const GroupFamily f = make_family(tag, n);
            rows.push_back({{"family", std::string(to_string(tag))},
                            {"n", n},
                            {"matrix_size", f.matrix_size()},
                            {"d_G", f.dim_g()},
                            {"d_K", f.dim_k()}});
        }
    }
    return {{"schema", kSchemaVersion}, {"families", rows}};
}

namespace {

json estimate_to_json(const Estimate& e)
{
    return {{"value", e.value}, {"sigma", e.std_error}, {"ess", e.ess}, {"poor_proposal", e.poor_proposal}};
}

} // namespace

json report_to_json(const VerificationReport& report)
{
    const VerifyParams& p = report.params;
    json functions = json::array();
    for (const FunctionResult& r : report.functions)
        functions.push_back({{"name", r.name},
                             {"kind", std::string(to_string(r.kind))},
                             {"calibrator", r.calibrator},
                             {"direct", estimate_to_json(r.direct)},
                             {"reduced", estimate_to_json(r.reduced)},
                             {"ratio", r.ratio},
                             {"z", r.z},
                             {"z_floored", r.z_floored},
                             {"relative_difference", r.relative_difference},
                             {"agrees", r.agrees}});
    json invariants = json::array();
    for (const InvariantCheck& c : report.invariants)
        invariants.push_back(
            {{"name", c.name}, {"value", c.value}, {"tolerance", c.tolerance}, {"passed", c.passed}});
    return {{"schema", kSchemaVersion},
            {"family", report.family},
            {"n", report.n},
            {"config",
             {{"seed", p.seed},
              {"direct_samples", p.direct_samples},
              {"orbit_samples", p.orbit_samples},
              {"order", p.order},
              {"truncation", report.truncation},
              {"quadrature_layout", std::string(to_string(p.layout))},
              {"quadrature_nodes", report.quadrature_nodes},
              {"proposal_scale", p.proposal_scale},
              {"jacobian_mode", std::string(to_string(p.mode))},
              {"threshold", p.threshold},
              {"relative_floor", p.relative_floor},
              {"orbit_measure", "probability"}}},
            {"calibration", {{"C", report.c}, {"sigma_C", report.sigma_c}}},
            {"functions", functions},
            {"invariants", invariants},
            {"warnings", report.warnings},
            {"degraded", report.degraded},
            {"passed", report.passed}};
}

void write_report_csv(std::ostream& os, const VerificationReport& report)
{
    os << "function,kind,direct,sigma_d,reduced,sigma_r,C,z\n";
    os.precision(17);
    for (const FunctionResult& r : report.functions)
        os << r.name << "," << to_string(r.kind) << "," << r.direct.value << "," << r.direct.std_error << ","
           << r.reduced.value << "," << r.reduced.std_error << "," << report.c << "," << r.z << "\n";
}

} // namespace weylint
