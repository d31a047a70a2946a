#include "weylint/cli.hpp"

#include "weylint/density.hpp"
#include "weylint/errors.hpp"
#include "weylint/kak.hpp"
#include "weylint/reduce.hpp"
#include "weylint/serialize.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

namespace weylint::cli {

namespace {

using nlohmann::json;

struct RunConfig
{
    std::string family = "SL-real";
    int n = 2;
    std::uint64_t seed = 20240611;
    std::size_t samples = 1000000;
    std::size_t orbit_samples = 10000;
    int order = 32;
    double trunc = 0.0;
    double scale = 0.45;
    std::string layout = "cone";
    std::string corrupt = "exact";
    std::string format = "json";
    std::string out;
    std::string matrix;
    std::vector<double> h;
    std::string quadrature_csv;
    std::string samples_csv;
};

void add_family_options(CLI::App* app, RunConfig& cfg)
{
    app->add_option("--family", cfg.family, "GL-real | SL-real | GL-complex-as-real | LorentzSO0")
        ->capture_default_str();
    app->add_option("--n", cfg.n, "matrix size (spatial dimension for LorentzSO0)")->capture_default_str();
}

void add_format_options(CLI::App* app, RunConfig& cfg)
{
    app->add_option("--format", cfg.format, "output format")->check(CLI::IsMember({"json", "csv"}))
        ->capture_default_str();
    app->add_option("--out", cfg.out, "output path (stdout when omitted)");
}

void emit(const std::string& text, const RunConfig& cfg, std::ostream& out)
{
    if (cfg.out.empty()) {
        out << text;
        return;
    }
    std::ofstream file(cfg.out, std::ios::binary);
    if (!file)
        throw ConfigurationError("cannot write " + cfg.out);
    file << text;
}

std::string dump(const json& j)
{
    return j.dump(2) + "\n";
}

int cmd_families(const RunConfig& cfg, std::ostream& out)
{
    const json listing = families_to_json(std::max(cfg.n, 2));
    json rows = json::array();
    for (const json& row : listing["families"])
        if (cfg.family.empty() || row["family"] == cfg.family)
            rows.push_back(row);
    if (cfg.format == "csv") {
        std::ostringstream os;
        os << "family,n,matrix_size,d_G,d_K\n";
        for (const json& row : rows)
            os << row["family"].get<std::string>() << "," << row["n"] << "," << row["matrix_size"] << ","
               << row["d_G"] << "," << row["d_K"] << "\n";
        emit(os.str(), cfg, out);
    } else {
        emit(dump({{"schema", kSchemaVersion}, {"families", rows}}), cfg, out);
    }
    return kOk;
}

int cmd_roots(const RunConfig& cfg, std::ostream& out)
{
    const LieData lie = build_lie_data(parse_family_tag(cfg.family), cfg.n);
    emit(dump(roots_to_json(lie)), cfg, out);
    return kOk;
}

int cmd_kak(const RunConfig& cfg, std::ostream& out)
{
    const LieData lie = build_lie_data(parse_family_tag(cfg.family), cfg.n);
    json rows;
    if (cfg.matrix == "-") {
        rows = json::parse(std::cin);
    } else {
        std::ifstream file(cfg.matrix);
        if (!file)
            throw ConfigurationError("cannot read matrix file '" + cfg.matrix + "'");
        rows = json::parse(file);
    }
    const Mat g = matrix_from_json(rows, lie.family.tag() == FamilyTag::GLComplex);
    lie.family.require_shape(g);
    const KAKFactors f = kak_decompose(lie, g);
    const double residual = (recompose(lie, f) - g).norm() / g.norm();
    emit(dump(kak_to_json(lie, f, residual)), cfg, out);
    return kOk;
}

int cmd_density(const RunConfig& cfg, std::ostream& out)
{
    const LieData lie = build_lie_data(parse_family_tag(cfg.family), cfg.n);
    if (static_cast<int>(cfg.h.size()) != lie.dim_a())
        throw ConfigurationError("--H needs " + std::to_string(lie.dim_a()) + " coordinates for " +
                                 lie.family.name());
    const Vec h = Eigen::Map<const Vec>(cfg.h.data(), static_cast<Eigen::Index>(cfg.h.size()));
    const double lj = log_jacobian(lie.roots, h);
    json j{{"schema", kSchemaVersion},
           {"family", cfg.family},
           {"n", cfg.n},
           {"H", cfg.h},
           {"logJ", std::isfinite(lj) ? json(lj) : json("-inf")},
           {"J", jacobian(lie.roots, h)}};
    const Regularity reg = regularity(lie.roots, h);
    j["regular"] = reg.regular;
    if (reg.regular) {
        const PsiDetCheck pc = psi_det_check(lie, h);
        j["psiDet"] = pc.det_abs;
        j["ratio"] = pc.ratio;
    } else {
        const PsiMatrix psi = psi_matrix(lie, h);
        j["psiDet"] = psi.entries.rows() == 0 ? 1.0 : std::abs(psi.entries.determinant());
        j["ratio"] = nullptr;
    }
    emit(dump(j), cfg, out);
    return kOk;
}

std::string strip_json_suffix(const std::string& path)
{
    const std::string suffix = ".json";
    if (path.size() > suffix.size() && path.compare(path.size() - suffix.size(), suffix.size(), suffix) == 0)
        return path.substr(0, path.size() - suffix.size());
    return path;
}

int cmd_verify(const RunConfig& cfg, std::ostream& out, std::ostream& err)
{
    const LieData lie = build_lie_data(parse_family_tag(cfg.family), cfg.n);
    VerifyParams p;
    p.direct_samples = cfg.samples;
    p.orbit_samples = cfg.orbit_samples;
    p.order = cfg.order;
    if (cfg.trunc > 0.0)
        p.truncation = cfg.trunc;
    p.proposal_scale = cfg.scale;
    p.seed = cfg.seed;
    p.layout = parse_quadrature_layout(cfg.layout);
    p.mode = parse_jacobian_mode(cfg.corrupt);

    const std::vector<TestFunction> suite = standard_suite();
    const VerificationReport report = verify(lie, suite, p);
    const std::string json_text = dump(report_to_json(report));
    std::ostringstream csv;
    write_report_csv(csv, report);

    if (!cfg.out.empty()) {
        const std::string stem = strip_json_suffix(cfg.out);
        std::ofstream(stem + ".json", std::ios::binary) << json_text;
        std::ofstream(stem + ".csv", std::ios::binary) << csv.str();
    }
    out << (cfg.format == "csv" ? csv.str() : json_text);

    if (!cfg.quadrature_csv.empty()) {
        std::ofstream file(cfg.quadrature_csv, std::ios::binary);
        write_quadrature_csv(file, make_quadrature(lie, p.layout, report.truncation, p.order));
    }
    if (!cfg.samples_csv.empty()) {
        std::ofstream file(cfg.samples_csv, std::ios::binary);
        write_direct_samples_csv(file, lie.family, {p.direct_samples, p.proposal_scale, p.seed});
    }

    if (report.passed)
        return kOk;
    for (const FunctionResult& r : report.functions)
        if (!r.agrees)
            err << "verify: " << r.name << " disagrees (z = " << r.z << ")\n";
    for (const InvariantCheck& c : report.invariants)
        if (!c.passed)
            err << "verify: invariant " << c.name << " failed (" << c.value << " >= " << c.tolerance << ")\n";
    for (const std::string& w : report.warnings)
        err << "verify: degraded: " << w << "\n";
    return kVerificationFailed;
}

} // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Reduced KAK integration on reductive matrix groups"};
    app.require_subcommand(1);
    RunConfig cfg;

    CLI::App* families = app.add_subcommand("families", "list supported group families");
    families->add_option("--family", cfg.family, "only rows of this family");
    families->add_option("--n", cfg.n, "largest size listed")->capture_default_str();
    add_format_options(families, cfg);

    CLI::App* roots = app.add_subcommand("roots", "restricted root system as JSON");
    add_family_options(roots, cfg);
    roots->add_option("--out", cfg.out, "output path (stdout when omitted)");

    CLI::App* kak = app.add_subcommand("kak", "KAK factors of a matrix");
    add_family_options(kak, cfg);
    kak->add_option("matrix", cfg.matrix, "JSON file with an array of rows ('-' for stdin)")->required();
    kak->add_option("--out", cfg.out, "output path (stdout when omitted)");

    CLI::App* density = app.add_subcommand("density", "log Jacobian and Psi determinant at H");
    add_family_options(density, cfg);
    density->add_option("--H", cfg.h, "a-coordinates of H")->required()->delimiter(',');
    density->add_option("--out", cfg.out, "output path (stdout when omitted)");

    CLI::App* verify_cmd = app.add_subcommand("verify", "direct vs reduced integration");
    add_family_options(verify_cmd, cfg);
    verify_cmd->add_option("--seed", cfg.seed, "master seed")->capture_default_str();
    verify_cmd->add_option("--samples", cfg.samples, "direct Monte Carlo samples")->capture_default_str();
    verify_cmd->add_option("--orbit-samples", cfg.orbit_samples, "Haar pairs per quadrature node")
        ->capture_default_str();
    verify_cmd->add_option("--order", cfg.order, "Gauss-Legendre points per axis")->capture_default_str();
    verify_cmd->add_option("--trunc", cfg.trunc, "truncation extent (automatic when 0)")->capture_default_str();
    verify_cmd->add_option("--scale", cfg.scale, "proposal standard deviation")->capture_default_str();
    verify_cmd->add_option("--layout", cfg.layout, "quadrature layout")
        ->check(CLI::IsMember({"cone", "filtered-box"}))
        ->capture_default_str();
    verify_cmd->add_option("--corrupt-jacobian", cfg.corrupt, "negative control: drop-root | linear")
        ->check(CLI::IsMember({"exact", "drop-root", "linear"}))
        ->capture_default_str();
    verify_cmd->add_option("--quadrature-csv", cfg.quadrature_csv, "export quadrature nodes");
    verify_cmd->add_option("--samples-csv", cfg.samples_csv, "export direct samples");
    add_format_options(verify_cmd, cfg);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err) == 0 ? kOk : kUsageError;
    }

    try {
        if (families->parsed()) {
            if (families->count("--family") == 0)
                cfg.family.clear();
            if (families->count("--n") == 0)
                cfg.n = 5;
            return cmd_families(cfg, out);
        }
        if (roots->parsed())
            return cmd_roots(cfg, out);
        if (kak->parsed())
            return cmd_kak(cfg, out);
        if (density->parsed())
            return cmd_density(cfg, out);
        return cmd_verify(cfg, out, err);
    } catch (const DomainError& e) {
        err << "error: " << e.what() << "\n";
        return kDomainError;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kUsageError;
    } catch (const nlohmann::json::exception& e) {
        err << "error: invalid JSON input: " << e.what() << "\n";
        return kUsageError;
    }
}

} // namespace weylint::cli
