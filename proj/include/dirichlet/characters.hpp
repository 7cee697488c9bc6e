#pragma once

// Real primitive Dirichlet characters, realised as Kronecker symbols (d/.)
// for fundamental discriminants d.

#include <cstdint>
#include <vector>

#include "dirichlet/mpnum.hpp"
#include "json.hpp"

namespace dirichlet {

/// Kronecker symbol (d/n), defined for every integer pair.
int kronecker_symbol(std::int64_t d, std::int64_t n);

/// d == 1 (mod 4) squarefree, or d = 4m with m == 2, 3 (mod 4) squarefree.
bool is_fundamental_discriminant(std::int64_t d);

class RealPrimitiveCharacter {
 public:
  /// Throws std::invalid_argument unless d is a fundamental discriminant with
  /// |d| >= 3.
  static RealPrimitiveCharacter from_discriminant(std::int64_t d);

  std::int64_t discriminant() const noexcept { return d_; }
  std::int64_t modulus() const noexcept { return q_; }
  /// 0 for even characters (chi(-1) = 1), 1 for odd ones.
  int parity() const noexcept { return a_; }
  const std::vector<int>& values() const noexcept { return values_; }

  /// chi(n), extended to all integers by periodicity.
  int operator()(std::int64_t n) const noexcept {
    const std::int64_t r = n % q_;
    return values_[static_cast<std::size_t>(r < 0 ? r + q_ : r)];
  }

 private:
  RealPrimitiveCharacter(std::int64_t d, std::vector<int> values, int parity);

  std::int64_t d_;
  std::int64_t q_;
  int a_;
  std::vector<int> values_;
};

/// tau(chi) = sum_{n=1}^{q} chi(n) e^{2 pi i n / q}.
Complex gauss_sum(const RealPrimitiveCharacter& chi, const PrecisionContext& ctx);

/// epsilon(chi) = tau(chi) / (i^a sqrt(q)).
Complex epsilon_factor(const RealPrimitiveCharacter& chi, const PrecisionContext& ctx);

/// Smallest quasi-period found by brute force; equals q for primitive chi.
std::int64_t conductor(const RealPrimitiveCharacter& chi);

nlohmann::json to_json(const RealPrimitiveCharacter& chi);
RealPrimitiveCharacter character_from_json(const nlohmann::json& j);

}  // namespace dirichlet
