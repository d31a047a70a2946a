#include "weylint/cli.hpp"
#include "weylint/kak.hpp"
#include "weylint/serialize.hpp"

#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

using namespace weylint;
using nlohmann::json;

namespace {

struct Result
{
    int code;
    std::string out;
    std::string err;
};

Result run_cli(std::vector<std::string> args)
{
    args.insert(args.begin(), "weylint");
    std::vector<const char*> argv;
    for (const std::string& a : args)
        argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::filesystem::path scratch(const std::string& name)
{
    const auto dir = std::filesystem::temp_directory_path() / "weylint-tests";
    std::filesystem::create_directories(dir);
    return dir / name;
}

std::string slurp(const std::filesystem::path& p)
{
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_matrix(const std::filesystem::path& p, const Mat& m)
{
    std::ofstream(p) << matrix_to_json(m).dump();
}

} // namespace

TEST_SUITE("cli")
{
    TEST_CASE("families listing")
    {
        const Result r = run_cli({"families"});
        REQUIRE(r.code == cli::kOk);
        const json j = json::parse(r.out);
        CHECK(j["schema"] == 1);
        std::set<std::string> names;
        for (const json& row : j["families"]) {
            names.insert(row["family"]);
            const int n = row["n"];
            if (row["family"] == "GL-real")
                CHECK(row["d_G"] == n * n);
            if (row["family"] == "LorentzSO0")
                CHECK(row["d_G"] == n * (n + 1) / 2);
        }
        CHECK(names.size() == 4);

        const Result only = run_cli({"families", "--family", "LorentzSO0", "--format", "csv"});
        REQUIRE(only.code == cli::kOk);
        CHECK(only.out.rfind("family,n,matrix_size,d_G,d_K\n", 0) == 0);
        CHECK(only.out.find("GL-real") == std::string::npos);
    }

    TEST_CASE("roots subcommand")
    {
        const json gl3 = json::parse(run_cli({"roots", "--family", "GL-real", "--n", "3"}).out);
        CHECK(gl3["positive_count"] == 3);
        CHECK(gl3["weyl_order"] == 6);
        CHECK(gl3["schema"] == 1);
        CHECK(gl3["dims"]["g"] == 9);

        const json sl2 = json::parse(run_cli({"roots", "--family", "SL-real", "--n", "2"}).out);
        CHECK(sl2["positive_count"] == 1);

        const json glc2 = json::parse(run_cli({"roots", "--family", "GL-complex-as-real", "--n", "2"}).out);
        CHECK(glc2["roots"][0]["multiplicity"] == 2);
        CHECK(glc2["dims"]["m"] == 2);

        const Result bad = run_cli({"roots", "--family", "GL-real", "--n", "1"});
        CHECK(bad.code == cli::kUsageError);
        CHECK_FALSE(bad.err.empty());
        CHECK(run_cli({"roots", "--family", "Sp"}).code == cli::kUsageError);
    }

    TEST_CASE("kak subcommand")
    {
        const auto id = scratch("identity.json");
        write_matrix(id, Mat::Identity(2, 2));
        const Result r = run_cli({"kak", "--family", "SL-real", "--n", "2", id.string()});
        REQUIRE(r.code == cli::kOk);
        const json j = json::parse(r.out);
        CHECK(std::abs(j["H"][0].get<double>()) < 1e-12);

        const auto diag = scratch("diag.json");
        Mat d = Mat::Zero(2, 2);
        d(0, 0) = std::exp(1.0);
        d(1, 1) = std::exp(-1.0);
        write_matrix(diag, d);
        const json jd = json::parse(run_cli({"kak", "--family", "SL-real", "--n", "2", diag.string()}).out);
        CHECK(jd["H"][0].get<double>() == doctest::Approx(std::sqrt(2.0)));

        // the chamber representative of diag(e^-1, e)
        Mat flipped = Mat::Zero(2, 2);
        flipped(0, 0) = std::exp(-1.0);
        flipped(1, 1) = std::exp(1.0);
        write_matrix(diag, flipped);
        const json jf = json::parse(run_cli({"kak", "--family", "SL-real", "--n", "2", diag.string()}).out);
        CHECK(jf["H"][0].get<double>() == doctest::Approx(std::sqrt(2.0)));

        const auto rnd = scratch("random.json");
        const GroupFamily so13 = make_family(FamilyTag::LorentzSO0, 3);
        Rng rng(3);
        write_matrix(rnd, random_group_element(so13, rng, 1.5));
        const json jr = json::parse(run_cli({"kak", "--family", "LorentzSO0", "--n", "3", rnd.string()}).out);
        CHECK(jr["residual"].get<double>() < 1e-10);

        write_matrix(rnd, 2.0 * Mat::Identity(2, 2));
        CHECK(run_cli({"kak", "--family", "SL-real", "--n", "2", rnd.string()}).code == cli::kDomainError);
        CHECK(run_cli({"kak", "--family", "SL-real", "--n", "2", "/nonexistent/m.json"}).code == cli::kUsageError);
        std::ofstream(rnd) << "[[1, 2], [3";
        CHECK(run_cli({"kak", "--family", "SL-real", "--n", "2", rnd.string()}).code == cli::kUsageError);
    }

    TEST_CASE("complex matrices are read as re/im pairs")
    {
        json rows = json::array({json::array({1.0, 0.0, 0.0, 2.0}), json::array({0.0, -1.0, 3.0, 0.0})});
        const Mat m = matrix_from_json(rows, true);
        REQUIRE(m.rows() == 4);
        CHECK(m(0, 0) == 1.0);
        CHECK(m(0, 1) == 0.0);
        CHECK(m(2, 1) == 2.0);  // imaginary part of entry (0, 1)
        CHECK(m(0, 3) == -2.0);
        CHECK(m(3, 0) == -1.0); // imaginary part of entry (1, 0)
        CHECK((matrix_from_json(matrix_to_json(m), false) - m).norm() == 0.0);
    }

    TEST_CASE("density subcommand")
    {
        const Result r = run_cli({"density", "--family", "GL-real", "--n", "2", "--H", "1,0"});
        REQUIRE(r.code == cli::kOk);
        const json j = json::parse(r.out);
        CHECK(j["logJ"].get<double>() == doctest::Approx(std::log(std::sinh(1.0))));
        CHECK(j["psiDet"].get<double>() == doctest::Approx(std::sinh(1.0)));
        CHECK(j["ratio"].get<double>() == doctest::Approx(1.0));

        const json wall = json::parse(run_cli({"density", "--family", "GL-real", "--n", "2", "--H", "1,1"}).out);
        CHECK(wall["logJ"] == "-inf");
        CHECK(wall["ratio"].is_null());
        CHECK(run_cli({"density", "--family", "GL-real", "--n", "2", "--H", "1"}).code == cli::kUsageError);
    }

    TEST_CASE("verify subcommand")
    {
        const auto a = scratch("run-a");
        const auto b = scratch("run-b");
        const Result ra = run_cli({"verify", "--family", "SL-real", "--n", "2", "--samples", "100000", "--out",
                                   a.string()});
        CHECK(ra.code == cli::kOk);
        const Result rb = run_cli({"verify", "--family", "SL-real", "--n", "2", "--samples", "100000", "--out",
                                   b.string() + ".json"});
        CHECK(rb.code == cli::kOk);
        CHECK(slurp(a.string() + ".json") == slurp(b.string() + ".json"));
        CHECK(slurp(a.string() + ".csv") == slurp(b.string() + ".csv"));
        CHECK(ra.out == rb.out);

        const json report = json::parse(slurp(a.string() + ".json"));
        CHECK(report["schema"] == 1);
        CHECK(report["passed"] == true);
        CHECK(report["config"]["seed"] == 20240611);
        const std::string csv = slurp(a.string() + ".csv");
        CHECK(csv.rfind("function,kind,direct,sigma_d,reduced,sigma_r,C,z\n", 0) == 0);
        CHECK(std::count(csv.begin(), csv.end(), '\n') == 4);

        const Result bad = run_cli({"verify", "--family", "SL-real", "--n", "2", "--corrupt-jacobian", "drop-root"});
        CHECK(bad.code == cli::kVerificationFailed);
        CHECK(bad.err.find("disagrees") != std::string::npos);

        CHECK(run_cli({"verify", "--layout", "sparse"}).code == cli::kUsageError);
        CHECK(run_cli({"verify", "--samples", "10"}).code == cli::kUsageError);
        CHECK(run_cli({}).code == cli::kUsageError);
        CHECK(run_cli({"--help"}).code == cli::kOk);
    }

    TEST_CASE("verify exports quadrature and samples")
    {
        const auto q = scratch("quad.csv");
        const auto s = scratch("samples.csv");
        const Result r = run_cli({"verify", "--family", "GL-real", "--n", "2", "--samples", "2000", "--orbit-samples",
                                  "200", "--order", "8", "--quadrature-csv", q.string(), "--samples-csv", s.string(),
                                  "--format", "csv"});
        CHECK(r.out.rfind("function,", 0) == 0);
        const std::string quad = slurp(q);
        CHECK(std::count(quad.begin(), quad.end(), '\n') == 1 + 64);
        const std::string samples = slurp(s);
        CHECK(std::count(samples.begin(), samples.end(), '\n') == 2001);
    }
}
