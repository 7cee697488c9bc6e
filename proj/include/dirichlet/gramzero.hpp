#pragma once

// Generalized Gram points theta(g_m, chi) = m pi and critical-line zeros of
// Z(t, chi).

#include <functional>
#include <vector>

#include "dirichlet/characters.hpp"
#include "dirichlet/mpnum.hpp"
#include "json.hpp"

namespace dirichlet {

struct GramEntry {
  long m = 0;
  Real value;
  Real residual;  // |theta(g_m) - m pi|
};

struct GramTable {
  std::int64_t d = 0;
  int digits = 0;
  std::vector<GramEntry> entries;
};

struct ZeroEntry {
  long m = 0;  // 1-based
  Real value;
  int achieved_digits = 0;
};

struct ZeroTable {
  std::int64_t d = 0;
  int digits = 0;
  std::vector<ZeroEntry> entries;
};

/// Location of the minimum of theta(t, chi) on t >= 0 (0 when theta is
/// increasing from the start). Gram points are taken on [t*, inf).
double theta_turning_point(const RealPrimitiveCharacter& chi);

/// Root of f in [lo, hi] to about target_digits significant digits. Starts
/// with a few bisections, then runs the secant method, bisecting whenever a
/// secant step leaves the current bracket. Throws DomainError unless
/// f(lo) f(hi) <= 0.
Real refine_root(const std::function<Real(const Real&)>& f, const Real& lo, const Real& hi,
                 int target_digits, const PrecisionContext& ctx);

/// g_m: the root of theta(t) = m pi on [t*, inf). Throws PrecisionFault if the
/// bracket cannot be established or the residual check fails.
Real gram_point(const RealPrimitiveCharacter& chi, long m, const PrecisionContext& ctx);

GramTable gram_table(const RealPrimitiveCharacter& chi, long count, const PrecisionContext& ctx);

/// First `count` sign-change zeros of Z(t, chi) on t > 0, found by scanning
/// Gram blocks at 30 digits and polished to digits - 20 digits.
ZeroTable find_zeros(const RealPrimitiveCharacter& chi, long count, const PrecisionContext& ctx);

nlohmann::json to_json(const GramTable& table);
GramTable gram_table_from_json(const nlohmann::json& j);
nlohmann::json to_json(const ZeroTable& table);
ZeroTable zero_table_from_json(const nlohmann::json& j);

}  // namespace dirichlet
