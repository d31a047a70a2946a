#pragma once

#include "weylint/kak.hpp"
#include "weylint/reduce.hpp"

#include <json.hpp>

#include <iosfwd>
#include <string>

namespace weylint {

/// Version of every JSON document emitted by the library and CLI.
inline constexpr int kSchemaVersion = 1;

nlohmann::json matrix_to_json(const Mat& m);

/// JSON array of row arrays. With `interleaved_complex`, each row holds
/// re/im pairs and the result is the realification of the complex matrix.
Mat matrix_from_json(const nlohmann::json& rows, bool interleaved_complex);

/// {schema, family, n, roots: [{coords, multiplicity, positive}], weyl_order,
///  dims: {g, k, p, a, m, l, b}}
nlohmann::json roots_to_json(const LieData& lie);

nlohmann::json kak_to_json(const LieData& lie, const KAKFactors& factors, double residual);

nlohmann::json families_to_json(int max_n);

nlohmann::json report_to_json(const VerificationReport& report);

/// One row per test function: name, direct, sigma_d, reduced, sigma_r, C, z.
void write_report_csv(std::ostream& os, const VerificationReport& report);

} // namespace weylint
