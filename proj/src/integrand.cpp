#include "weylint/integrand.hpp"

#include <cmath>

namespace weylint {

namespace {

double gaussian_weight(const GroupPoint& p)
{
    return std::exp(-p.g.squaredNorm() - p.g_inv.squaredNorm());
}

} // namespace

std::string_view to_string(FunctionKind kind)
{
    return kind == FunctionKind::ClassLike ? "class-like" : "generic";
}

TestFunction gaussian_calibrator()
{
    return {"f0", FunctionKind::ClassLike, gaussian_weight};
}

TestFunction entry_weighted()
{
    return {"f1", FunctionKind::Generic,
            [](const GroupPoint& p) { return gaussian_weight(p) * (1.0 + p.g(0, 0) * p.g(0, 0)); }};
}

TestFunction trace_tilted()
{
    return {"f2", FunctionKind::Generic,
            [](const GroupPoint& p) { return gaussian_weight(p) * std::exp(p.g.trace() / 4.0); }};
}

std::vector<TestFunction> standard_suite()
{
    return {gaussian_calibrator(), entry_weighted(), trace_tilted()};
}

TestFunction linear_combination(double alpha, const TestFunction& f, double beta, const TestFunction& h)
{
    const bool class_like = f.kind == FunctionKind::ClassLike && h.kind == FunctionKind::ClassLike;
    return {"(" + std::to_string(alpha) + "*" + f.name + "+" + std::to_string(beta) + "*" + h.name + ")",
            class_like ? FunctionKind::ClassLike : FunctionKind::Generic,
            [alpha, beta, f, h](const GroupPoint& p) { return alpha * f(p) + beta * h(p); }};
}

TestFunction left_translated(const TestFunction& f, const Mat& g0)
{
    const Mat g0_inv = g0.inverse();
    return {f.name + "@g0", FunctionKind::Generic, [f, g0, g0_inv](const GroupPoint& p) {
                return f(GroupPoint{g0 * p.g, p.g_inv * g0_inv});
            }};
}

} // namespace weylint
