#include "weylint/measure.hpp"

#include "weylint/errors.hpp"
#include "weylint/kak.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numbers>
#include <ostream>
#include <thread>

namespace weylint {

namespace {

constexpr std::size_t kChunk = 4096;

Mat haar_orthogonal(int n, Rng& rng)
{
    std::normal_distribution<double> normal;
    Mat a(n, n);
    for (Eigen::Index j = 0; j < n; ++j)
        for (Eigen::Index i = 0; i < n; ++i)
            a(i, j) = normal(rng);
    Eigen::HouseholderQR<Mat> qr(a);
    Mat q = qr.householderQ() * Mat::Identity(n, n);
    const Mat& r = qr.matrixQR();
    for (Eigen::Index i = 0; i < n; ++i)
        if (r(i, i) < 0.0)
            q.col(i) *= -1.0;
    return q;
}

Mat haar_special_orthogonal(int n, Rng& rng)
{
    Mat q = haar_orthogonal(n, rng);
    if (q.determinant() < 0.0)
        q.col(0) *= -1.0;
    return q;
}

CMat haar_unitary(int n, Rng& rng)
{
    std::normal_distribution<double> normal;
    CMat a(n, n);
    for (Eigen::Index j = 0; j < n; ++j)
        for (Eigen::Index i = 0; i < n; ++i) {
            const double re = normal(rng);
            const double im = normal(rng);
            a(i, j) = {re, im};
        }
    Eigen::HouseholderQR<CMat> qr(a);
    CMat q = qr.householderQ() * CMat::Identity(n, n);
    const CMat& r = qr.matrixQR();
    for (Eigen::Index i = 0; i < n; ++i) {
        const std::complex<double> d = r(i, i);
        const double mag = std::abs(d);
        if (mag > 0.0)
            q.col(i) *= d / mag;
    }
    return q;
}

Mat block_rotation(int size, int offset, const Mat& r)
{
    Mat k = Mat::Identity(size, size);
    k.bottomRightCorner(size - offset, size - offset) = r;
    return k;
}

// -expm1(-d)/d, the divided difference of 1 - e^{-x} at 0 and d.
double phi(double d)
{
    if (std::abs(d) < 1e-8)
        return 1.0 - 0.5 * d;
    return -std::expm1(-d) / d;
}

Mat p_element(const GroupFamily& family, const Vec& xp)
{
    Mat x = Mat::Zero(family.matrix_size(), family.matrix_size());
    for (std::size_t i = 0; i < family.basis_p().size(); ++i)
        x += xp(static_cast<Eigen::Index>(i)) * family.basis_p()[i];
    return x;
}

Mat k_element(const GroupFamily& family, const Vec& xk)
{
    Mat x = Mat::Zero(family.matrix_size(), family.matrix_size());
    for (std::size_t i = 0; i < family.basis_k().size(); ++i)
        x += xk(static_cast<Eigen::Index>(i)) * family.basis_k()[i];
    return x;
}

double abs_det_or_throw(const Mat& c)
{
    const double d = c.rows() == 0 ? 1.0 : std::abs(c.determinant());
    if (!std::isfinite(d))
        throw RangeError("chart volume density is not finite");
    return d;
}

struct PolarSample
{
    Mat g;
    Mat g_inv;
    double density = 0.0;
};

// exp(P), exp(-P) and the polar density, sharing one eigendecomposition.
PolarSample polar_sample(const GroupFamily& family, const Mat& k, const Vec& xp)
{
    const Mat p = p_element(family, xp);
    Eigen::SelfAdjointEigenSolver<Mat> es(p);
    const Vec& lam = es.eigenvalues();
    const Mat& v = es.eigenvectors();
    const auto n = p.rows();

    const Mat ep = v * lam.array().exp().matrix().asDiagonal() * v.transpose();
    const Mat ep_inv = v * (-lam.array()).exp().matrix().asDiagonal() * v.transpose();

    Mat wk(n, n);
    Mat wp(n, n);
    for (Eigen::Index b = 0; b < n; ++b)
        for (Eigen::Index a = 0; a < n; ++a) {
            const double d = lam(a) - lam(b);
            wk(a, b) = std::exp(-d);
            wp(a, b) = phi(d);
        }

    // Rotated frame: row j is vec(V^T E_j V). In these coordinates
    // g^{-1} dg is a Hadamard product with wk (k-directions) or wp (p-directions).
    const auto& basis = family.basis();
    const auto dg = static_cast<Eigen::Index>(basis.size());
    const auto dk = static_cast<Eigen::Index>(family.basis_k().size());
    Mat t(dg, n * n);
    for (Eigen::Index j = 0; j < dg; ++j) {
        const Mat rotated = v.transpose() * basis[static_cast<std::size_t>(j)] * v;
        t.row(j) = flatten(rotated).transpose();
    }
    Mat scaled = t;
    const Vec wk_flat = flatten(wk);
    const Vec wp_flat = flatten(wp);
    for (Eigen::Index j = 0; j < dg; ++j) {
        if (j < dk)
            scaled.row(j) = scaled.row(j).cwiseProduct(wk_flat.transpose());
        else
            scaled.row(j) = scaled.row(j).cwiseProduct(wp_flat.transpose());
    }
    const Mat c = t * scaled.transpose();

    PolarSample s;
    s.density = abs_det_or_throw(c);
    s.g = k * ep;
    s.g_inv = ep_inv * k.transpose();
    return s;
}

} // namespace

Mat haar_sample_compact(const GroupFamily& family, Rng& rng)
{
    const int n = family.n();
    switch (family.tag()) {
    case FamilyTag::GLReal:
        return haar_orthogonal(n, rng);
    case FamilyTag::SLReal:
        return haar_special_orthogonal(n, rng);
    case FamilyTag::GLComplex:
        return realify(haar_unitary(n, rng));
    case FamilyTag::LorentzSO0:
        if (n == 1)
            return Mat::Identity(2, 2);
        return block_rotation(n + 1, 1, haar_special_orthogonal(n, rng));
    }
    throw InternalError("unhandled family tag");
}

Mat haar_sample_centralizer(const LieData& lie, Rng& rng)
{
    const GroupFamily& family = lie.family;
    const int n = family.n();
    std::bernoulli_distribution coin;
    switch (family.tag()) {
    case FamilyTag::GLReal:
    case FamilyTag::SLReal: {
        Vec signs(n);
        for (int i = 0; i < n; ++i)
            signs(i) = coin(rng) ? -1.0 : 1.0;
        if (family.tag() == FamilyTag::SLReal && signs.prod() < 0.0)
            signs(n - 1) *= -1.0;
        return Mat(signs.asDiagonal());
    }
    case FamilyTag::GLComplex: {
        std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
        CMat d = CMat::Zero(n, n);
        for (int i = 0; i < n; ++i)
            d(i, i) = std::polar(1.0, angle(rng));
        return realify(d);
    }
    case FamilyTag::LorentzSO0:
        if (n <= 2)
            return Mat::Identity(n + 1, n + 1);
        return block_rotation(n + 1, 2, haar_special_orthogonal(n - 1, rng));
    }
    throw InternalError("unhandled family tag");
}

std::pair<Vec, Vec> gauss_legendre(int order)
{
    if (order < 1)
        throw ConfigurationError("quadrature order must be positive");
    Vec x(order);
    Vec w(order);
    const int half = (order + 1) / 2;
    for (int i = 0; i < half; ++i) {
        double z = std::cos(std::numbers::pi * (i + 0.75) / (order + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0;
            double p1 = 0.0;
            for (int j = 1; j <= order; ++j) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j - 1.0) * z * p1 - (j - 1.0) * p2) / j;
            }
            dp = order * (z * p0 - p1) / (z * z - 1.0);
            const double dz = p0 / dp;
            z -= dz;
            if (std::abs(dz) < 1e-16)
                break;
        }
        x(i) = -z;
        x(order - 1 - i) = z;
        w(i) = w(order - 1 - i) = 2.0 / ((1.0 - z * z) * dp * dp);
    }
    return {x, w};
}

std::string_view to_string(QuadratureLayout layout)
{
    return layout == QuadratureLayout::Cone ? "cone" : "filtered-box";
}

QuadratureLayout parse_quadrature_layout(std::string_view name)
{
    if (name == "cone")
        return QuadratureLayout::Cone;
    if (name == "filtered-box")
        return QuadratureLayout::FilteredBox;
    throw ConfigurationError("unknown quadrature layout '" + std::string(name) + "'");
}

double ChamberQuadrature::total_weight() const
{
    double s = 0.0;
    for (double w : weights)
        s += w;
    return s;
}

namespace {

// Visits every node of the tensor grid on `bounds` as (point, weight).
template <typename Fn>
void tensor_grid(const Bounds& bounds, int order, Fn&& fn)
{
    const auto [x, w] = gauss_legendre(order);
    const std::size_t dim = bounds.size();
    std::vector<int> idx(dim, 0);
    Vec point(static_cast<Eigen::Index>(dim));
    while (true) {
        double weight = 1.0;
        for (std::size_t d = 0; d < dim; ++d) {
            const auto [lo, hi] = bounds[d];
            const double half = 0.5 * (hi - lo);
            point(static_cast<Eigen::Index>(d)) = lo + half * (x(idx[d]) + 1.0);
            weight *= half * w(idx[d]);
        }
        fn(point, weight);
        std::size_t d = 0;
        while (d < dim && ++idx[d] == order)
            idx[d++] = 0;
        if (d == dim)
            break;
    }
}

void check_bounds(const Bounds& bounds, std::size_t dim, int order)
{
    if (order < 2)
        throw ConfigurationError("quadrature order must be at least 2");
    if (bounds.size() != dim)
        throw ConfigurationError("truncation has " + std::to_string(bounds.size()) + " coordinates, expected " +
                                 std::to_string(dim));
    for (const auto& [lo, hi] : bounds)
        if (!std::isfinite(lo) || !std::isfinite(hi) || !(hi > lo))
            throw ConfigurationError("truncation bounds must be finite with lo < hi");
}

} // namespace

ChamberQuadrature chamber_quadrature(const RootSystem& roots, const Bounds& box, int order)
{
    check_bounds(box, static_cast<std::size_t>(roots.rank), order);
    ChamberQuadrature q;
    q.truncation = box;
    q.order = order;
    q.layout = QuadratureLayout::FilteredBox;
    tensor_grid(box, order, [&](const Vec& h, double w) {
        const double tol = 1e-12 * std::max(1.0, h.norm());
        bool on_wall = false;
        for (std::size_t p = 0; p < roots.positive_count(); ++p) {
            const double v = roots.positive_value(p, h);
            if (v < -tol)
                return;
            on_wall = on_wall || v <= tol;
        }
        // a wall node is shared by |Stab_W(H)| chambers
        if (on_wall) {
            int stab = 0;
            for (const Mat& el : roots.weyl_elements)
                stab += (el * h - h).norm() <= tol ? 1 : 0;
            w /= std::max(stab, 1);
        }
        q.nodes.push_back(h);
        q.weights.push_back(w);
    });
    if (q.nodes.empty())
        throw ConfigurationError("truncation box does not meet the positive chamber");
    return q;
}

Vec ConeCoordinates::to_a(const Vec& s, const Vec& z) const
{
    Vec h = Vec::Zero(coweights.rows());
    if (s.size() > 0)
        h += coweights * s;
    if (z.size() > 0)
        h += center * z;
    return h;
}

ConeCoordinates cone_coordinates(const RootSystem& roots)
{
    ConeCoordinates cc;
    const Eigen::Index r = roots.rank;
    for (std::size_t p = 0; p < roots.positive_count(); ++p) {
        const Vec& c = roots.positive(p).coords;
        bool decomposable = false;
        for (std::size_t q = 0; q < roots.positive_count() && !decomposable; ++q)
            for (std::size_t s = 0; s < roots.positive_count() && !decomposable; ++s)
                decomposable =
                    (roots.positive(q).coords + roots.positive(s).coords - c).cwiseAbs().maxCoeff() < 1e-8;
        if (!decomposable)
            cc.simple_roots.push_back(roots.positive_roots[p]);
    }
    const auto s = static_cast<Eigen::Index>(cc.simple_roots.size());
    Mat a(s, r);
    for (Eigen::Index i = 0; i < s; ++i)
        a.row(i) = roots.roots[static_cast<std::size_t>(cc.simple_roots[static_cast<std::size_t>(i)])].coords.transpose();
    cc.coweights = s > 0 ? Mat(a.transpose() * (a * a.transpose()).inverse()) : Mat(r, 0);
    cc.center = null_space(a, 1e-10);
    if (cc.coweights.cols() + cc.center.cols() != r)
        throw InternalError("simple roots do not form a basis of the semisimple part");
    Mat full(r, r);
    full << cc.coweights, cc.center;
    cc.jacobian = std::abs(full.determinant());
    return cc;
}

ChamberQuadrature cone_quadrature(const RootSystem& roots, double root_extent, double center_extent, int order)
{
    const ConeCoordinates cc = cone_coordinates(roots);
    Bounds bounds;
    for (int i = 0; i < cc.simple_count(); ++i)
        bounds.emplace_back(0.0, root_extent);
    for (int i = 0; i < cc.center_count(); ++i)
        bounds.emplace_back(-center_extent, center_extent);
    check_bounds(bounds, bounds.size(), order);
    ChamberQuadrature q;
    q.truncation = bounds;
    q.order = order;
    q.layout = QuadratureLayout::Cone;
    const Eigen::Index s = cc.simple_count();
    const Eigen::Index c = cc.center_count();
    tensor_grid(bounds, order, [&](const Vec& y, double w) {
        q.nodes.push_back(cc.to_a(y.head(s), y.tail(c)));
        q.weights.push_back(w * cc.jacobian);
    });
    return q;
}

Bounds symmetric_box(const RootSystem& roots, double t)
{
    if (roots.rank == 1 && roots.positive_count() > 0)
        return {{0.0, t}};
    return Bounds(static_cast<std::size_t>(roots.rank), {-t, t});
}

Mat chart(const GroupFamily& family, const Vec& x)
{
    if (x.size() != family.dim_g())
        throw DomainError("chart point has wrong dimension for " + family.name());
    const Eigen::Index dk = family.dim_k();
    const Mat g = expm(k_element(family, x.head(dk))) * expm_symmetric(p_element(family, x.tail(family.dim_p())));
    if (!g.allFinite())
        throw RangeError("chart overflow");
    return g;
}

double chart_volume_density(const GroupFamily& family, const Vec& x)
{
    if (x.size() != family.dim_g())
        throw DomainError("chart point has wrong dimension for " + family.name());
    const Eigen::Index dk = family.dim_k();
    const Mat xk = k_element(family, x.head(dk));
    const Mat xp = p_element(family, x.tail(family.dim_p()));
    const Mat ek_inv = expm(-xk);
    const Mat ep = expm_symmetric(xp);
    const Mat ep_inv = expm_symmetric(-xp);
    Mat c(family.dim_g(), family.dim_g());
    for (Eigen::Index i = 0; i < family.dim_g(); ++i) {
        Mat v;
        if (i < dk)
            v = ep_inv * ek_inv * expm_frechet(xk, family.basis_k()[static_cast<std::size_t>(i)]) * ep;
        else
            v = ep_inv * expm_frechet(xp, family.basis_p()[static_cast<std::size_t>(i - dk)]);
        c.col(i) = family.coordinates(v);
    }
    return abs_det_or_throw(c);
}

double translated_chart_density_fd(const GroupFamily& family, const Mat& g0, const Vec& x, double step)
{
    const Mat g = g0 * chart(family, x);
    const Mat g_inv = g.inverse();
    Mat c(family.dim_g(), family.dim_g());
    for (Eigen::Index i = 0; i < family.dim_g(); ++i) {
        Vec xp = x;
        Vec xm = x;
        xp(i) += step;
        xm(i) -= step;
        const Mat dg = (g0 * chart(family, xp) - g0 * chart(family, xm)) / (2.0 * step);
        c.col(i) = family.coordinates(g_inv * dg);
    }
    return abs_det_or_throw(c);
}

double chart_volume_density_fd(const GroupFamily& family, const Vec& x, double step)
{
    const auto size = family.matrix_size();
    return translated_chart_density_fd(family, Mat::Identity(size, size), x, step);
}

double polar_density(const GroupFamily& family, const Vec& xp)
{
    const auto size = family.matrix_size();
    return polar_sample(family, Mat::Identity(size, size), xp).density;
}

Vec polar_coordinates(const GroupFamily& family, const Mat& g)
{
    const Mat p = 0.5 * logm_spd(g.transpose() * g);
    Vec xp(family.dim_p());
    for (std::size_t i = 0; i < family.basis_p().size(); ++i)
        xp(static_cast<Eigen::Index>(i)) = frobenius_dot(p, family.basis_p()[i]);
    return xp;
}

double proposal_density(const Vec& xp, double scale)
{
    const double norm = std::pow(2.0 * std::numbers::pi * scale * scale, -0.5 * static_cast<double>(xp.size()));
    return norm * std::exp(-0.5 * xp.squaredNorm() / (scale * scale));
}

void parallel_chunks(std::size_t count, const std::function<void(std::size_t)>& fn)
{
    const std::size_t workers = std::min<std::size_t>(std::max(1u, std::thread::hardware_concurrency()), count);
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i)
            fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < count; i = next++)
                fn(i);
        });
    for (auto& t : pool)
        t.join();
}

namespace {

struct Moments
{
    double sum = 0.0;
    double sum_sq = 0.0;
    double sum_abs = 0.0;
};

Estimate finish(const Moments& m, std::size_t n)
{
    Estimate e;
    const double dn = static_cast<double>(n);
    e.value = m.sum / dn;
    const double var = n > 1 ? std::max(0.0, (m.sum_sq - dn * e.value * e.value) / (dn - 1.0)) : 0.0;
    e.std_error = std::sqrt(var / dn);
    e.ess = m.sum_sq > 0.0 ? m.sum_abs * m.sum_abs / m.sum_sq : dn;
    e.poor_proposal = e.ess < dn / 100.0;
    return e;
}

} // namespace

std::vector<Estimate> mc_direct_integrals(const GroupFamily& family, std::span<const TestFunction> functions,
                                          const DirectParams& params)
{
    if (params.samples < 1000)
        throw ConfigurationError("direct integration needs at least 1000 samples");
    if (!(params.scale > 0.0))
        throw ConfigurationError("proposal scale must be positive");
    const std::size_t nf = functions.size();
    const std::size_t chunks = (params.samples + kChunk - 1) / kChunk;
    std::vector<std::vector<Moments>> partial(chunks, std::vector<Moments>(nf));
    const Eigen::Index dp = family.dim_p();

    parallel_chunks(chunks, [&](std::size_t chunk) {
        Rng rng = make_stream(params.seed, chunk);
        std::normal_distribution<double> normal;
        const std::size_t begin = chunk * kChunk;
        const std::size_t end = std::min(params.samples, begin + kChunk);
        auto& acc = partial[chunk];
        Vec xp(dp);
        for (std::size_t s = begin; s < end; ++s) {
            const Mat k = haar_sample_compact(family, rng);
            for (Eigen::Index i = 0; i < dp; ++i)
                xp(i) = params.scale * normal(rng);
            const PolarSample ps = polar_sample(family, k, xp);
            const double ratio = ps.density / proposal_density(xp, params.scale);
            const GroupPoint point{ps.g, ps.g_inv};
            for (std::size_t f = 0; f < nf; ++f) {
                const double y = functions[f](point) * ratio;
                acc[f].sum += y;
                acc[f].sum_sq += y * y;
                acc[f].sum_abs += std::abs(y);
            }
        }
    });

    std::vector<Estimate> out;
    for (std::size_t f = 0; f < nf; ++f) {
        Moments total;
        for (const auto& chunk : partial) {
            total.sum += chunk[f].sum;
            total.sum_sq += chunk[f].sum_sq;
            total.sum_abs += chunk[f].sum_abs;
        }
        out.push_back(finish(total, params.samples));
    }
    return out;
}

Estimate mc_direct_integral(const GroupFamily& family, const TestFunction& f, const DirectParams& params)
{
    return mc_direct_integrals(family, std::span<const TestFunction>(&f, 1), params).front();
}

void write_quadrature_csv(std::ostream& os, const ChamberQuadrature& quad)
{
    const auto rank = quad.nodes.empty() ? 0 : quad.nodes.front().size();
    for (Eigen::Index i = 0; i < rank; ++i)
        os << "h" << i << ",";
    os << "weight\n";
    os.precision(17);
    for (std::size_t n = 0; n < quad.nodes.size(); ++n) {
        for (Eigen::Index i = 0; i < rank; ++i)
            os << quad.nodes[n](i) << ",";
        os << quad.weights[n] << "\n";
    }
}

void write_direct_samples_csv(std::ostream& os, const GroupFamily& family, const DirectParams& params)
{
    const Eigen::Index dp = family.dim_p();
    for (Eigen::Index i = 0; i < dp; ++i)
        os << "x" << i << ",";
    os << "proposal_density,chart_density\n";
    os.precision(17);
    const std::size_t chunks = (params.samples + kChunk - 1) / kChunk;
    Vec xp(dp);
    for (std::size_t chunk = 0; chunk < chunks; ++chunk) {
        Rng rng = make_stream(params.seed, chunk);
        std::normal_distribution<double> normal;
        const std::size_t end = std::min(params.samples, (chunk + 1) * kChunk);
        for (std::size_t s = chunk * kChunk; s < end; ++s) {
            haar_sample_compact(family, rng);
            for (Eigen::Index i = 0; i < dp; ++i)
                xp(i) = params.scale * normal(rng);
            for (Eigen::Index i = 0; i < dp; ++i)
                os << xp(i) << ",";
            os << proposal_density(xp, params.scale) << "," << polar_density(family, xp) << "\n";
        }
    }
}

} // namespace weylint
