#pragma once

#include "weylint/family.hpp"

#include <functional>
#include <string>
#include <vector>

namespace weylint {

enum class FunctionKind { ClassLike, Generic };

std::string_view to_string(FunctionKind kind);

/// An integrand on G. Every function shipped here is bounded by
/// c * exp(-alpha (||g||_F^2 + ||g^{-1}||_F^2)) for some alpha > 0, which puts
/// it in L^1 of every supported family. ClassLike functions are invariant
/// under g -> k1 g k2 for k1, k2 in K.
struct TestFunction
{
    std::string name;
    FunctionKind kind = FunctionKind::Generic;
    std::function<double(const GroupPoint&)> eval;

    double operator()(const GroupPoint& p) const { return eval(p); }
};

/// f0 = exp(-||g||^2 - ||g^{-1}||^2).
TestFunction gaussian_calibrator();

/// f1 = f0 * (1 + g_11^2).
TestFunction entry_weighted();

/// f2 = f0 * exp(trace(g) / 4).
TestFunction trace_tilted();

/// {f0, f1, f2}.
std::vector<TestFunction> standard_suite();

/// alpha f + beta h; class-like only when both are.
TestFunction linear_combination(double alpha, const TestFunction& f, double beta, const TestFunction& h);

/// g -> f(g0 g).
TestFunction left_translated(const TestFunction& f, const Mat& g0);

} // namespace weylint
