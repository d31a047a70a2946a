#include "weylint/roots.hpp"

#include "weylint/errors.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

namespace weylint {

namespace {

constexpr double kClusterTol = 1e-8;
constexpr double kAmbiguityTol = 1e-6;
constexpr std::size_t kWeylBound = 1000000;

int dim_a_for(const GroupFamily& family)
{
    switch (family.tag()) {
    case FamilyTag::GLReal:
    case FamilyTag::GLComplex:
        return family.n();
    case FamilyTag::SLReal:
        return family.n() - 1;
    case FamilyTag::LorentzSO0:
        return 1;
    }
    return 0;
}

// Largest-magnitude entry made positive, so the basis is reproducible.
Mat fix_sign(const Mat& x)
{
    Eigen::Index r = 0;
    Eigen::Index c = 0;
    x.cwiseAbs().maxCoeff(&r, &c);
    return x(r, c) < 0.0 ? Mat(-x) : x;
}

bool lex_positive(const Vec& c)
{
    for (Eigen::Index i = 0; i < c.size(); ++i) {
        if (c(i) > kClusterTol)
            return true;
        if (c(i) < -kClusterTol)
            return false;
    }
    return false;
}

bool lex_greater(const Vec& a, const Vec& b)
{
    for (Eigen::Index i = 0; i < a.size(); ++i) {
        if (a(i) > b(i) + kClusterTol)
            return true;
        if (a(i) < b(i) - kClusterTol)
            return false;
    }
    return false;
}

double projector_distance(const Mat& q1, const Mat& q2)
{
    return (q1 * q1.transpose() - q2 * q2.transpose()).norm();
}

} // namespace

int RootSystem::multiplicity_sum() const
{
    int s = 0;
    for (int idx : positive_roots)
        s += roots[static_cast<std::size_t>(idx)].multiplicity;
    return s;
}

Mat ad_matrix(const GroupFamily& family, const Mat& x)
{
    const auto& basis = family.basis();
    Mat ad(family.dim_g(), family.dim_g());
    for (std::size_t j = 0; j < basis.size(); ++j)
        ad.col(static_cast<Eigen::Index>(j)) = family.coordinates(bracket(x, basis[j]));
    return ad;
}

std::vector<Mat> maximal_abelian(const GroupFamily& family)
{
    const auto& p = family.basis_p();
    const int r = dim_a_for(family);
    std::vector<Mat> a(p.begin(), p.begin() + r);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = i + 1; j < a.size(); ++j)
            if (bracket(a[i], a[j]).norm() > 1e-13)
                throw InternalError("basis of a is not abelian for " + family.name());
    return a;
}

CartanFrame initial_frame(const GroupFamily& family)
{
    CartanFrame frame;
    frame.basis_k = family.basis_k();
    frame.basis_p = family.basis_p();
    frame.basis_a = maximal_abelian(family);
    return frame;
}

std::vector<Mat> centralizer_m(const GroupFamily& family, const CartanFrame& frame)
{
    const auto dk = static_cast<Eigen::Index>(frame.basis_k.size());
    if (dk == 0)
        return {};
    const auto r = static_cast<Eigen::Index>(frame.basis_a.size());
    const Eigen::Index dg = family.dim_g();
    Mat stacked(r * dg, dk);
    for (Eigen::Index i = 0; i < r; ++i)
        for (Eigen::Index j = 0; j < dk; ++j)
            stacked.block(i * dg, j, dg, 1) =
                family.coordinates(bracket(frame.basis_a[static_cast<std::size_t>(i)],
                                           frame.basis_k[static_cast<std::size_t>(j)]));
    const Mat kernel = null_space(stacked, 1e-10);
    std::vector<Mat> m;
    for (Eigen::Index c = 0; c < kernel.cols(); ++c) {
        Mat x = Mat::Zero(family.matrix_size(), family.matrix_size());
        for (Eigen::Index j = 0; j < dk; ++j)
            x += kernel(j, c) * frame.basis_k[static_cast<std::size_t>(j)];
        m.push_back(x);
    }
    m = orthonormalize(m);
    for (auto& x : m)
        x = fix_sign(x);
    return m;
}

RootSystem restricted_roots(const GroupFamily& family, CartanFrame& frame)
{
    const auto r = static_cast<Eigen::Index>(frame.basis_a.size());
    if (r == 0)
        throw ConfigurationError("frame has no basis of a");

    std::vector<Mat> ads;
    Mat generic = Mat::Zero(family.dim_g(), family.dim_g());
    for (Eigen::Index i = 0; i < r; ++i) {
        ads.push_back(ad_matrix(family, frame.basis_a[static_cast<std::size_t>(i)]));
        generic += ads.back() / (static_cast<double>(i + 1) + std::sqrt(2.0));
    }
    if ((generic - generic.transpose()).norm() > 1e-10)
        throw InternalError("ad(H) is not self-adjoint in the frame of " + family.name());

    Eigen::SelfAdjointEigenSolver<Mat> es(generic);
    const Vec& ev = es.eigenvalues();
    const Mat& vecs = es.eigenvectors();

    std::vector<std::pair<Eigen::Index, Eigen::Index>> clusters;
    Eigen::Index start = 0;
    for (Eigen::Index i = 1; i <= ev.size(); ++i) {
        if (i < ev.size()) {
            const double gap = ev(i) - ev(i - 1);
            if (gap <= kClusterTol)
                continue;
            if (gap <= kAmbiguityTol) {
                std::ostringstream os;
                os << "ambiguous eigenvalue cluster for " << family.name() << ": " << ev(i - 1) << " vs " << ev(i)
                   << " (gap " << gap << ")";
                throw DegeneracyError(os.str());
            }
        }
        clusters.emplace_back(start, i - start);
        start = i;
    }

    std::vector<Root> positives;
    std::vector<Root> negatives;
    for (const auto& [first, count] : clusters) {
        const Mat v = vecs.middleCols(first, count);
        Vec coords(r);
        for (Eigen::Index i = 0; i < r; ++i) {
            const auto& a = ads[static_cast<std::size_t>(i)];
            coords(i) = (v.transpose() * a * v).trace() / static_cast<double>(count);
            const double joint = (a * v - coords(i) * v).norm();
            if (joint > kClusterTol) {
                std::ostringstream os;
                os << "eigenspace of the generic element is not a joint eigenspace for " << family.name()
                   << " (direction " << i << ", residual " << joint << ")";
                throw DegeneracyError(os.str());
            }
        }
        if (coords.cwiseAbs().maxCoeff() <= kClusterTol)
            continue;
        Root root;
        root.coords = coords;
        root.multiplicity = static_cast<int>(count);
        root.positive = lex_positive(coords);
        for (Eigen::Index c = 0; c < count; ++c)
            root.space.push_back(fix_sign(family.from_coordinates(v.col(c))));
        (root.positive ? positives : negatives).push_back(std::move(root));
    }

    std::sort(positives.begin(), positives.end(),
              [](const Root& x, const Root& y) { return lex_greater(x.coords, y.coords); });

    RootSystem rs;
    rs.rank = static_cast<int>(r);
    for (const Root& pos : positives) {
        rs.positive_roots.push_back(static_cast<int>(rs.roots.size()));
        rs.roots.push_back(pos);
    }
    for (const Root& pos : positives) {
        auto it = std::find_if(negatives.begin(), negatives.end(), [&](const Root& neg) {
            return (neg.coords + pos.coords).cwiseAbs().maxCoeff() <= kClusterTol;
        });
        if (it == negatives.end() || it->multiplicity != pos.multiplicity)
            throw InternalError("root without matching negative in " + family.name());
        rs.roots.push_back(*it);
    }
    if (rs.roots.size() != positives.size() + negatives.size())
        throw InternalError("unpaired negative root in " + family.name());

    frame.root_vectors.clear();
    frame.basis_l.clear();
    frame.basis_b.clear();
    const double s = 1.0 / std::sqrt(2.0);
    for (const Root& pos : positives) {
        frame.root_vectors.push_back(pos.space);
        for (const Mat& xi : pos.space) {
            const Mat theta_xi = -xi.transpose();
            frame.basis_l.push_back(s * (xi + theta_xi));
            frame.basis_b.push_back(s * (xi - theta_xi));
        }
    }

    const WeylGroup w = weyl_group(rs);
    rs.weyl_elements = w.elements;
    rs.weyl_order = w.order;
    return rs;
}

RootSplit root_space_split(const GroupFamily& family, const CartanFrame& frame, std::size_t p, std::size_t j)
{
    if (p >= frame.root_vectors.size() || j >= frame.root_vectors[p].size())
        throw ConfigurationError("root vector index out of range");
    const Mat& xi = frame.root_vectors[p][j];
    const Mat theta_xi = cartan_involution(family, xi);
    return {xi + theta_xi, xi - theta_xi};
}

WeylGroup weyl_group(const RootSystem& roots)
{
    const Eigen::Index r = roots.rank;
    std::vector<Mat> reflections;
    for (int idx : roots.positive_roots) {
        const Vec& c = roots.roots[static_cast<std::size_t>(idx)].coords;
        reflections.push_back(Mat::Identity(r, r) - 2.0 * c * c.transpose() / c.squaredNorm());
    }
    WeylGroup w;
    w.elements.push_back(Mat::Identity(r, r));
    auto known = [&](const Mat& m) {
        return std::any_of(w.elements.begin(), w.elements.end(),
                           [&](const Mat& e) { return (e - m).cwiseAbs().maxCoeff() < 1e-9; });
    };
    for (std::size_t head = 0; head < w.elements.size(); ++head) {
        for (const Mat& s : reflections) {
            Mat next = s * w.elements[head];
            if (!known(next)) {
                w.elements.push_back(std::move(next));
                if (w.elements.size() > kWeylBound)
                    throw InternalError("Weyl group closure exceeded safety bound");
            }
        }
    }
    w.order = static_cast<int>(w.elements.size());
    return w;
}

double StructureReport::max_residual() const
{
    return std::max({decomposition, bracket, orthogonality, theta_swap, theta_norm, zero_space});
}

StructureReport structure_checks(const GroupFamily& family, const CartanFrame& frame, const RootSystem& roots,
                                 int pairs, std::uint64_t seed)
{
    StructureReport report;
    report.pairs = pairs;
    const Eigen::Index dg = family.dim_g();
    const auto r = static_cast<Eigen::Index>(frame.basis_a.size());

    struct Space
    {
        Vec coords;
        std::vector<Mat> basis;
    };
    std::vector<Space> spaces;
    {
        Space zero{Vec::Zero(r), frame.basis_a};
        zero.basis.insert(zero.basis.end(), frame.basis_m.begin(), frame.basis_m.end());
        spaces.push_back(std::move(zero));
    }
    for (const Root& root : roots.roots)
        spaces.push_back({root.coords, root.space});

    // (i) root-space decomposition.
    std::vector<Vec> cols;
    for (const auto& sp : spaces)
        for (const Mat& x : sp.basis)
            cols.push_back(family.coordinates(x));
    Mat q(dg, static_cast<Eigen::Index>(cols.size()));
    for (std::size_t i = 0; i < cols.size(); ++i)
        q.col(static_cast<Eigen::Index>(i)) = cols[i];
    if (q.cols() != dg)
        report.decomposition = std::abs(static_cast<double>(q.cols() - dg));
    else
        report.decomposition = (q.transpose() * q - Mat::Identity(dg, dg)).norm();

    // (ii) brackets and orthogonality on sampled pairs.
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> pick_space(0, spaces.size() - 1);
    for (int t = 0; t < pairs; ++t) {
        const std::size_t s1 = pick_space(rng);
        const std::size_t s2 = pick_space(rng);
        const auto& sp1 = spaces[s1];
        const auto& sp2 = spaces[s2];
        if (sp1.basis.empty() || sp2.basis.empty())
            continue;
        const Mat& x = sp1.basis[std::uniform_int_distribution<std::size_t>(0, sp1.basis.size() - 1)(rng)];
        const Mat& y = sp2.basis[std::uniform_int_distribution<std::size_t>(0, sp2.basis.size() - 1)(rng)];
        const Mat z = bracket(x, y);
        const Vec sum = sp1.coords + sp2.coords;
        for (Eigen::Index i = 0; i < r; ++i) {
            const Mat& h = frame.basis_a[static_cast<std::size_t>(i)];
            report.bracket = std::max(report.bracket, (bracket(h, z) - sum(i) * z).norm());
        }
        if (sum.cwiseAbs().maxCoeff() > kClusterTol)
            report.orthogonality = std::max(report.orthogonality, std::abs(trace_product(x, y)));
        if (s1 != s2)
            report.orthogonality = std::max(report.orthogonality, std::abs(frobenius_dot(x, y)));
    }

    // (iii) theta swaps g_lambda and g_{-lambda}.
    for (const Root& root : roots.roots) {
        const auto neg = std::find_if(roots.roots.begin(), roots.roots.end(), [&](const Root& o) {
            return (o.coords + root.coords).cwiseAbs().maxCoeff() <= kClusterTol;
        });
        if (neg == roots.roots.end()) {
            report.theta_swap = std::max(report.theta_swap, 1.0);
            continue;
        }
        for (const Mat& xi : root.space) {
            const Mat theta_xi = -xi.transpose();
            Mat proj = Mat::Zero(xi.rows(), xi.cols());
            for (const Mat& e : neg->space)
                proj += frobenius_dot(theta_xi, e) * e;
            report.theta_swap = std::max(report.theta_swap, (theta_xi - proj).norm());
            report.theta_norm = std::max(report.theta_norm, std::abs(proj.norm() - 1.0));
        }
    }

    // (iv) g_0 = a + m orthogonally.
    Mat stacked(r * dg, dg);
    for (Eigen::Index i = 0; i < r; ++i)
        stacked.middleRows(i * dg, dg) = ad_matrix(family, frame.basis_a[static_cast<std::size_t>(i)]);
    const Mat kernel = null_space(stacked, 1e-10);
    Mat am(dg, static_cast<Eigen::Index>(spaces[0].basis.size()));
    for (std::size_t i = 0; i < spaces[0].basis.size(); ++i)
        am.col(static_cast<Eigen::Index>(i)) = family.coordinates(spaces[0].basis[i]);
    if (kernel.cols() != am.cols())
        report.zero_space = std::abs(static_cast<double>(kernel.cols() - am.cols()));
    else
        report.zero_space = projector_distance(kernel, am) + (am.transpose() * am - Mat::Identity(am.cols(), am.cols())).norm();
    return report;
}

Mat LieData::a_element(const Vec& h) const
{
    Mat x = Mat::Zero(family.matrix_size(), family.matrix_size());
    for (std::size_t i = 0; i < frame.basis_a.size(); ++i)
        x += h(static_cast<Eigen::Index>(i)) * frame.basis_a[i];
    return x;
}

Vec LieData::a_coordinates(const Mat& x) const
{
    Vec h(dim_a());
    for (std::size_t i = 0; i < frame.basis_a.size(); ++i)
        h(static_cast<Eigen::Index>(i)) = frobenius_dot(x, frame.basis_a[i]);
    return h;
}

LieData build_lie_data(FamilyTag tag, int n)
{
    GroupFamily family = make_family(tag, n);
    CartanFrame frame = initial_frame(family);
    frame.basis_m = centralizer_m(family, frame);
    RootSystem roots = restricted_roots(family, frame);
    return {std::move(family), std::move(frame), std::move(roots)};
}

} // namespace weylint
