#pragma once

#include <json.hpp>

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "coqm/core.hpp"
#include "coqm/counterexample.hpp"
#include "coqm/minimax.hpp"
#include "coqm/piecewise_poly.hpp"
#include "coqm/polynomial.hpp"
#include "coqm/splines.hpp"
#include "coqm/trig_poly.hpp"

namespace coqm {

using Json = nlohmann::json;

/// 64-bit FNV-1a of `text`.
[[nodiscard]] std::uint64_t fnv1a64(std::string_view text);
/// FNV-1a as 16 lowercase hex digits.
[[nodiscard]] std::string fnv1a_hex(std::string_view text);
/// FNV-1a of the compact dump of `j` (object keys are sorted, so this is canonical).
[[nodiscard]] std::string content_hash(const Json& j);

[[nodiscard]] Json to_json(const Interval& I);
[[nodiscard]] Json to_json(const SignChangeSet& Y);
[[nodiscard]] Json to_json(const GridSpec& g);
[[nodiscard]] Json to_json(const Polynomiald& p);
[[nodiscard]] Json to_json(const PiecewisePolyd& pp);
[[nodiscard]] Json to_json(const TrigPolyd& T);

[[nodiscard]] Polynomiald polynomial_from_json(const Json& j);
[[nodiscard]] PiecewisePolyd piecewise_from_json(const Json& j);
[[nodiscard]] TrigPolyd trig_from_json(const Json& j);
[[nodiscard]] SignChangeSet sign_change_set_from_json(const Json& j);

/// Spline artifacts: parameters, pieces of the function (and, for smooth splines, the
/// mollifier grid), plus a "content_hash" over everything else.
[[nodiscard]] Json to_json(const IdealSpline& E);
[[nodiscard]] Json to_json(const SmoothSpline& E);
[[nodiscard]] Json to_json(const ScaledSpline& f);

/// Result summary, trigonometric coefficients and the free polynomial part.
[[nodiscard]] Json to_json(const ApproxResult& r);

[[nodiscard]] Json to_json(const ConstantsLedger& L);
/// Reads a ledger; the identities are re-derived and checked (ValidationError on mismatch).
[[nodiscard]] ConstantsLedger ledger_from_json(const Json& j, const MollifierTable& M);

/// Plans keep n_k and b_k exact: integers and rationals as decimal strings.
[[nodiscard]] Json to_json(const RecursionPlan& plan);
[[nodiscard]] RecursionPlan plan_from_json(const Json& j);
[[nodiscard]] Json to_json(const std::vector<PlanCheckItem>& items);

/// Reads a whole file / writes `j` pretty-printed (creating parent directories).
[[nodiscard]] Json read_json_file(const std::string& path);
void write_json_file(const std::string& path, const Json& j);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace coqm
