#include "oracles.hpp"

#include "weylint/errors.hpp"
#include "weylint/integrand.hpp"
#include "weylint/kak.hpp"
#include "weylint/measure.hpp"

#include <doctest.h>

#include <atomic>
#include <cmath>
#include <numbers>
#include <sstream>

using namespace weylint;

namespace {

double ks_statistic(std::vector<double> a, std::vector<double> b)
{
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    std::size_t i = 0, j = 0;
    double d = 0.0;
    while (i < a.size() && j < b.size()) {
        const double x = std::min(a[i], b[j]);
        while (i < a.size() && a[i] <= x)
            ++i;
        while (j < b.size() && b[j] <= x)
            ++j;
        d = std::max(d, std::abs(static_cast<double>(i) / a.size() - static_cast<double>(j) / b.size()));
    }
    return d;
}

struct Moments
{
    double mean = 0, err = 0;
};

Moments moments(const std::vector<double>& x)
{
    double s = 0, s2 = 0;
    for (double v : x) {
        s += v;
        s2 += v * v;
    }
    const double n = static_cast<double>(x.size());
    const double m = s / n;
    return {m, std::sqrt((s2 / n - m * m) / n)};
}

TestFunction constant(double c, FunctionKind kind = FunctionKind::ClassLike)
{
    return {"const", kind, [c](const GroupPoint&) { return c; }};
}

} // namespace

TEST_SUITE("measure")
{
    TEST_CASE("Haar samples lie in K")
    {
        for (FamilyTag tag : all_family_tags()) {
            const GroupFamily f = make_family(tag, 3);
            Rng rng(1);
            for (int i = 0; i < 200; ++i) {
                const Mat k = haar_sample_compact(f, rng);
                CHECK((k.transpose() * k - Mat::Identity(k.rows(), k.cols())).norm() < 1e-12);
                CHECK(f.compact_residual(k) < 1e-12);
            }
        }
    }

    TEST_CASE("Haar moments")
    {
        const std::size_t samples = 100000;
        for (FamilyTag tag : {FamilyTag::GLReal, FamilyTag::SLReal, FamilyTag::GLComplex}) {
            const int n = 3;
            const GroupFamily f = make_family(tag, n);
            Rng rng(31);
            std::vector<double> first, second;
            for (std::size_t s = 0; s < samples; ++s) {
                const Mat k = haar_sample_compact(f, rng);
                first.push_back(k(0, 0));
                // |k_11|^2, complex entries for the unitary case
                const double sq = tag == FamilyTag::GLComplex ? k(0, 0) * k(0, 0) + k(n, 0) * k(n, 0)
                                                                : k(0, 0) * k(0, 0);
                second.push_back(sq);
            }
            const Moments m1 = moments(first);
            const Moments m2 = moments(second);
            CHECK_MESSAGE(std::abs(m1.mean) < 4 * m1.err, f.name());
            CHECK_MESSAGE(std::abs(m2.mean - 1.0 / n) < 4 * m2.err, f.name());
        }
    }

    TEST_CASE("Haar invariance under left translation")
    {
        const std::size_t samples = 100000;
        for (FamilyTag tag : all_family_tags()) {
            const GroupFamily f = make_family(tag, 3);
            Rng rng(77);
            const Mat k0 = haar_sample_compact(f, rng);
            std::vector<double> plain, moved;
            for (std::size_t s = 0; s < samples; ++s)
                plain.push_back(haar_sample_compact(f, rng).trace());
            for (std::size_t s = 0; s < samples; ++s)
                moved.push_back((k0 * haar_sample_compact(f, rng)).trace());
            // two-sample critical value at the 1% level
            const double critical = 1.628 * std::sqrt(2.0 / samples);
            CHECK_MESSAGE(ks_statistic(plain, moved) < critical, f.name());
        }
    }

    TEST_CASE("centralizer samples fix a")
    {
        for (FamilyTag tag : all_family_tags()) {
            const LieData lie = build_lie_data(tag, 3);
            Rng rng(5);
            for (int i = 0; i < 20; ++i) {
                const Mat u = haar_sample_centralizer(lie, rng);
                CHECK(lie.family.compact_residual(u) < 1e-12);
                for (const Mat& h : lie.frame.basis_a)
                    CHECK((u * h * u.transpose() - h).norm() < 1e-12);
            }
        }
    }

    TEST_CASE("Gauss-Legendre rule")
    {
        for (int order : {2, 5, 16, 32, 64}) {
            const auto [x, w] = gauss_legendre(order);
            CHECK(w.sum() == doctest::Approx(2.0).epsilon(1e-14));
            for (int deg = 0; deg <= 2 * order - 1; deg += 3) {
                double q = 0.0;
                for (int i = 0; i < order; ++i)
                    q += w(i) * std::pow(x(i), deg);
                const double exact = deg % 2 == 1 ? 0.0 : 2.0 / (deg + 1);
                CHECK(std::abs(q - exact) < 1e-13);
            }
        }
        CHECK_THROWS_AS(gauss_legendre(0), ConfigurationError);
    }

    TEST_CASE("rank-one chamber uses the plain rule")
    {
        const LieData sl2 = build_lie_data(FamilyTag::SLReal, 2);
        const double t = 2.5;
        const ChamberQuadrature q = chamber_quadrature(sl2.roots, {{0.0, t}}, 12);
        const auto [x, w] = gauss_legendre(12);
        REQUIRE(q.nodes.size() == 12);
        for (int i = 0; i < 12; ++i) {
            CHECK(q.nodes[static_cast<std::size_t>(i)](0) == doctest::Approx(t / 2 * (x(i) + 1)));
            CHECK(q.weights[static_cast<std::size_t>(i)] == doctest::Approx(t / 2 * w(i)));
        }
        CHECK(q.total_weight() == doctest::Approx(t));
        CHECK_THROWS_AS(chamber_quadrature(sl2.roots, {{0.0, t}}, 1), ConfigurationError);
        CHECK_THROWS_AS(chamber_quadrature(sl2.roots, {{-3.0, -1.0}}, 8), ConfigurationError);
    }

    TEST_CASE("chamber volume is 1/d of the box")
    {
        const LieData gl2 = build_lie_data(FamilyTag::GLReal, 2);
        const double t = 2.0;
        const ChamberQuadrature q = chamber_quadrature(gl2.roots, symmetric_box(gl2.roots, t), 32);
        const double box = 4 * t * t;
        CHECK(std::abs(q.total_weight() - box / 2) < 0.01 * box / 2);
        const auto [frac, err] = oracle::chamber_fraction(gl2.roots, t, 200000, 3);
        CHECK(std::abs(frac - 0.5) < 4 * err);
        CHECK(std::abs(q.total_weight() - frac * box) < 0.01 * box / 2 + 4 * err * box);
    }

    TEST_CASE("Gaussian over the chamber against hit-or-miss Monte Carlo")
    {
        // The filtered box is only checked where its grid is Weyl-symmetric;
        // elsewhere the wall cuts between nodes and the rule converges slowly.
        for (auto [tag, n] : {std::pair{FamilyTag::GLReal, 2}, std::pair{FamilyTag::GLReal, 3},
                              std::pair{FamilyTag::SLReal, 3}}) {
            const LieData lie = build_lie_data(tag, n);
            const int r = lie.dim_a();
            const double t = 5.0;
            auto gauss = [](const Vec& h) { return std::exp(-h.squaredNorm()); };

            std::mt19937_64 rng(99);
            std::uniform_real_distribution<double> u(-t, t);
            const std::size_t samples = 1000000;
            double s = 0, s2 = 0;
            Vec h(r);
            for (std::size_t i = 0; i < samples; ++i) {
                for (auto& x : h)
                    x = u(rng);
                const double v = in_closed_chamber(lie.roots, h, 0.0) ? gauss(h) : 0.0;
                s += v;
                s2 += v * v;
            }
            const double vol = std::pow(2 * t, r);
            const double mean = s / samples;
            const double mc = vol * mean;
            const double err = vol * std::sqrt((s2 / samples - mean * mean) / samples);

            std::vector<ChamberQuadrature> rules{cone_quadrature(lie.roots, t, t, 24)};
            if (tag == FamilyTag::GLReal)
                rules.push_back(chamber_quadrature(lie.roots, symmetric_box(lie.roots, t), 24));
            for (const ChamberQuadrature& q : rules) {
                double quad = 0.0;
                for (std::size_t i = 0; i < q.nodes.size(); ++i)
                    quad += q.weights[i] * gauss(q.nodes[i]);
                CHECK_MESSAGE(std::abs(quad - mc) < 3 * err, lie.family.name(), " ", to_string(q.layout));
            }
            // exact value: the Gaussian is Weyl-invariant, so it is 1/d of its full integral
            const double exact = std::pow(std::numbers::pi, r / 2.0) / lie.roots.weyl_order;
            // root values reach 2t on the part of the chamber where the Gaussian matters
            const ChamberQuadrature cone = cone_quadrature(lie.roots, 2 * t, t, 32);
            double quad = 0.0;
            for (std::size_t i = 0; i < cone.nodes.size(); ++i)
                quad += cone.weights[i] * gauss(cone.nodes[i]);
            CHECK(quad == doctest::Approx(exact).epsilon(1e-8));
        }
    }

    TEST_CASE("cone coordinates")
    {
        for (FamilyTag tag : all_family_tags()) {
            const LieData lie = build_lie_data(tag, 3);
            const ConeCoordinates cc = cone_coordinates(lie.roots);
            CHECK(cc.simple_count() + cc.center_count() == lie.dim_a());
            const ChamberQuadrature q = cone_quadrature(lie.roots, 2.0, 1.0, 6);
            for (const Vec& h : q.nodes)
                CHECK(in_closed_chamber(lie.roots, h));
            const Vec s = Vec::LinSpaced(cc.simple_count(), 0.3, 1.1);
            const Vec z = Vec::Constant(cc.center_count(), 0.4);
            const Vec h = cc.to_a(s, z);
            for (int i = 0; i < cc.simple_count(); ++i)
                CHECK(lie.roots.roots[static_cast<std::size_t>(cc.simple_roots[static_cast<std::size_t>(i)])]
                          .coords.dot(h) == doctest::Approx(s(i)));
        }
        CHECK(parse_quadrature_layout("cone") == QuadratureLayout::Cone);
        CHECK(parse_quadrature_layout("filtered-box") == QuadratureLayout::FilteredBox);
        CHECK_THROWS_AS(parse_quadrature_layout("sparse"), ConfigurationError);
    }

    TEST_CASE("chart at the origin and membership")
    {
        for (FamilyTag tag : all_family_tags()) {
            const GroupFamily f = make_family(tag, 2);
            const Vec zero = Vec::Zero(f.dim_g());
            CHECK((chart(f, zero) - Mat::Identity(f.matrix_size(), f.matrix_size())).norm() == 0.0);
            CHECK(chart_volume_density(f, zero) == doctest::Approx(1.0).epsilon(1e-14));
            CHECK(polar_density(f, Vec::Zero(f.dim_p())) == doctest::Approx(1.0).epsilon(1e-14));
            std::mt19937_64 rng(3);
            std::normal_distribution<double> normal(0.0, 0.7);
            for (int i = 0; i < 20; ++i) {
                Vec x(f.dim_g());
                for (auto& v : x)
                    v = normal(rng);
                CHECK(f.group_residual(chart(f, x)) < 1e-8);
            }
        }
        const GroupFamily sl2 = make_family(FamilyTag::SLReal, 2);
        CHECK_THROWS_AS(chart(sl2, Vec::Zero(2)), DomainError);
    }

    TEST_CASE("chart density: exact derivative, finite differences, translation")
    {
        std::mt19937_64 rng(12);
        std::normal_distribution<double> normal(0.0, 0.6);
        for (FamilyTag tag : all_family_tags()) {
            const GroupFamily f = make_family(tag, 2);
            Rng grng(4);
            const Mat g0 = random_group_element(f, grng, 0.8);
            for (int i = 0; i < 5; ++i) {
                Vec x(f.dim_g());
                for (auto& v : x)
                    v = normal(rng);
                const double d = chart_volume_density(f, x);
                CHECK(d > 0.0);
                CHECK(std::abs(chart_volume_density_fd(f, x) - d) < 1e-6 * d);
                CHECK(std::abs(translated_chart_density_fd(f, g0, x) - d) < 1e-4 * d);
            }
        }
    }

    TEST_CASE("polar density matches the chart density on p")
    {
        // At x_k = 0 both charts have the same partial derivatives.
        for (FamilyTag tag : all_family_tags()) {
            const GroupFamily f = make_family(tag, 2);
            std::mt19937_64 rng(6);
            std::normal_distribution<double> normal(0.0, 0.5);
            Vec xp(f.dim_p());
            for (auto& v : xp)
                v = normal(rng);
            Vec x = Vec::Zero(f.dim_g());
            x.tail(f.dim_p()) = xp;
            CHECK(polar_density(f, xp) == doctest::Approx(chart_volume_density(f, x)).epsilon(1e-10));
        }
    }

    TEST_CASE("direct Monte Carlo basics")
    {
        const GroupFamily sl2 = make_family(FamilyTag::SLReal, 2);
        const Estimate zero = mc_direct_integral(sl2, constant(0.0), {2000, 0.45, 1});
        CHECK(zero.value == 0.0);
        CHECK(zero.std_error == 0.0);

        const double scale = 0.45;
        TestFunction ratio{"q/D", FunctionKind::Generic, [&](const GroupPoint& p) {
                               const Vec xp = polar_coordinates(sl2, p.g);
                               return proposal_density(xp, scale) / polar_density(sl2, xp);
                           }};
        const Estimate one = mc_direct_integral(sl2, ratio, {5000, scale, 3});
        CHECK(std::abs(one.value - 1.0) < std::max(3 * one.std_error, 1e-9));

        const TestFunction f0 = gaussian_calibrator();
        const Estimate a = mc_direct_integral(sl2, f0, {100000, scale, 1});
        const Estimate b = mc_direct_integral(sl2, f0, {100000, scale, 2});
        CHECK(a.value > 0.0);
        CHECK(std::isfinite(a.value));
        CHECK(std::abs(a.value - b.value) < 3 * std::hypot(a.std_error, b.std_error));
        CHECK_FALSE(a.poor_proposal);

        CHECK_THROWS_AS(mc_direct_integral(sl2, f0, {999, scale, 1}), ConfigurationError);
        CHECK_THROWS_AS(mc_direct_integral(sl2, f0, {2000, 0.0, 1}), ConfigurationError);
    }

    TEST_CASE("poor proposals are flagged")
    {
        const GroupFamily gl2 = make_family(FamilyTag::GLReal, 2);
        TestFunction spike{"spike", FunctionKind::Generic, [](const GroupPoint& p) {
                               return std::exp(-200.0 * (p.g - Mat::Identity(2, 2)).squaredNorm());
                           }};
        const Estimate e = mc_direct_integral(gl2, spike, {10000, 3.0, 1});
        CHECK(e.poor_proposal);
    }

    TEST_CASE("direct estimates are deterministic per seed")
    {
        const GroupFamily gl2 = make_family(FamilyTag::GLReal, 2);
        const std::vector<TestFunction> suite = standard_suite();
        const auto a = mc_direct_integrals(gl2, suite, {20000, 0.45, 9});
        const auto b = mc_direct_integrals(gl2, suite, {20000, 0.45, 9});
        for (std::size_t i = 0; i < suite.size(); ++i) {
            CHECK(a[i].value == b[i].value);
            CHECK(a[i].std_error == b[i].std_error);
            CHECK(mc_direct_integral(gl2, suite[i], {20000, 0.45, 9}).value == a[i].value);
        }
    }

    TEST_CASE("left translation invariance of the direct integral")
    {
        for (FamilyTag tag : {FamilyTag::SLReal, FamilyTag::GLReal, FamilyTag::LorentzSO0}) {
            const GroupFamily f = make_family(tag, 2);
            Rng rng(8);
            const Mat g0 = random_group_element(f, rng, 0.5);
            const TestFunction f1 = entry_weighted();
            const Estimate a = mc_direct_integral(f, f1, {200000, 0.45, 1});
            const Estimate b = mc_direct_integral(f, left_translated(f1, g0), {200000, 0.45, 2});
            CHECK_MESSAGE(std::abs(a.value - b.value) < 3 * std::hypot(a.std_error, b.std_error), f.name());
        }
    }

    TEST_CASE("GL-real(2) against the entrywise Haar density")
    {
        // Independent estimator: entries of g drawn from N(0, s^2) and weighted
        // by |det g|^{-2}, the classical Haar density on GL(2, R). Both
        // estimators compute the same integral up to one normalizing constant,
        // so the ratio f1/f0 must agree.
        const GroupFamily gl2 = make_family(FamilyTag::GLReal, 2);
        const TestFunction f0 = gaussian_calibrator();
        const TestFunction f1 = entry_weighted();
        const std::size_t samples = 100000;
        const double s = 0.8;
        std::mt19937_64 rng(2024);
        std::normal_distribution<double> normal(0.0, s);
        double a0 = 0, a1 = 0;
        std::vector<double> w0(samples), w1(samples);
        for (std::size_t i = 0; i < samples; ++i) {
            Mat g(2, 2);
            for (int j = 0; j < 4; ++j)
                g(j) = normal(rng);
            const double det = g.determinant();
            const GroupPoint p{g, g.inverse()};
            const double q = std::exp(-g.squaredNorm() / (2 * s * s)) / std::pow(2 * std::numbers::pi * s * s, 2);
            const double w = 1.0 / (det * det * q);
            w0[i] = w * f0(p);
            w1[i] = w * f1(p);
            a0 += w0[i];
            a1 += w1[i];
        }
        a0 /= samples;
        a1 /= samples;
        const double rho = a1 / a0;
        double var = 0.0;
        for (std::size_t i = 0; i < samples; ++i) {
            const double d = w1[i] - rho * w0[i];
            var += d * d;
        }
        const double sigma_rho = std::sqrt(var / samples / samples) / a0;

        // the polar estimator on f1 - rho f0 must be zero
        const TestFunction diff = linear_combination(1.0, f1, -rho, f0);
        const std::vector<TestFunction> fs{diff, f0};
        const auto est = mc_direct_integrals(gl2, fs, {samples, 0.45, 5});
        const double sigma = std::hypot(est[0].std_error, est[1].value * sigma_rho);
        CHECK(std::abs(est[0].value) < 3 * sigma);
    }

    TEST_CASE("CSV export and chunked execution")
    {
        const LieData gl2 = build_lie_data(FamilyTag::GLReal, 2);
        const ChamberQuadrature q = cone_quadrature(gl2.roots, 2.0, 2.0, 4);
        std::ostringstream os;
        write_quadrature_csv(os, q);
        const std::string text = os.str();
        CHECK(text.rfind("h0,h1,weight\n", 0) == 0);
        CHECK(std::count(text.begin(), text.end(), '\n') == 1 + 16);

        std::ostringstream ds;
        write_direct_samples_csv(ds, gl2.family, {1000, 0.45, 1});
        const std::string dtext = ds.str();
        CHECK(std::count(dtext.begin(), dtext.end(), '\n') == 1001);

        std::vector<std::atomic<int>> hits(37);
        parallel_chunks(hits.size(), [&](std::size_t i) { hits[i]++; });
        for (const auto& h : hits)
            CHECK(h.load() == 1);
    }
}
