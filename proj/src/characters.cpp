#include "dirichlet/characters.hpp"

#include <numeric>
#include <stdexcept>
#include <string>

namespace dirichlet {

namespace {

// (-1)^((a^2 - 1)/8) indexed by a mod 8.
constexpr int kTwoTable[8] = {0, 1, 0, -1, 0, -1, 0, 1};

bool is_squarefree(std::int64_t m) {
  if (m < 0) m = -m;
  if (m == 0) return false;
  for (std::int64_t p = 2; p * p <= m; ++p) {
    if (m % (p * p) == 0) return false;
  }
  return true;
}

std::int64_t floor_mod(std::int64_t a, std::int64_t m) {
  const std::int64_t r = a % m;
  return r < 0 ? r + m : r;
}

}  // namespace

// Cohen, "A Course in Computational Algebraic Number Theory", Alg. 1.4.10.
int kronecker_symbol(std::int64_t a, std::int64_t b) {
  if (b == 0) return (a == 1 || a == -1) ? 1 : 0;
  if (a % 2 == 0 && b % 2 == 0) return 0;

  int v = 0;
  while (b % 2 == 0) {
    b /= 2;
    ++v;
  }
  int k = (v % 2 == 0) ? 1 : kTwoTable[a & 7];
  if (b < 0) {
    b = -b;
    if (a < 0) k = -k;
  }

  // b is odd and positive from here on.
  for (;;) {
    if (a == 0) return b > 1 ? 0 : k;
    v = 0;
    while (a % 2 == 0) {
      a /= 2;
      ++v;
    }
    if (v % 2 == 1) k *= kTwoTable[b & 7];
    if (a & b & 2) k = -k;  // both == 3 (mod 4)
    const std::int64_t r = a < 0 ? -a : a;
    a = b % r;
    b = r;
  }
}

bool is_fundamental_discriminant(std::int64_t d) {
  if (d == 0 || d == 1) return false;
  const std::int64_t r = floor_mod(d, 4);
  if (r == 1) return is_squarefree(d);
  if (r == 0) {
    const std::int64_t m = d / 4;
    const std::int64_t rm = floor_mod(m, 4);
    return (rm == 2 || rm == 3) && is_squarefree(m);
  }
  return false;
}

RealPrimitiveCharacter::RealPrimitiveCharacter(std::int64_t d, std::vector<int> values, int parity)
    : d_(d), q_(d < 0 ? -d : d), a_(parity), values_(std::move(values)) {}

RealPrimitiveCharacter RealPrimitiveCharacter::from_discriminant(std::int64_t d) {
  if (!is_fundamental_discriminant(d)) {
    throw std::invalid_argument("d = " + std::to_string(d) +
                                " is not a fundamental discriminant (need d = 1 mod 4 "
                                "squarefree, or d = 4m with m = 2,3 mod 4 squarefree)");
  }
  const std::int64_t q = d < 0 ? -d : d;
  if (q < 3) throw std::invalid_argument("modulus must be at least 3");
  std::vector<int> values(static_cast<std::size_t>(q));
  for (std::int64_t n = 0; n < q; ++n) values[n] = kronecker_symbol(d, n);
  const int parity = values[q - 1] == 1 ? 0 : 1;
  return RealPrimitiveCharacter(d, std::move(values), parity);
}

Complex gauss_sum(const RealPrimitiveCharacter& chi, const PrecisionContext& ctx) {
  const std::int64_t q = chi.modulus();
  const Real two_pi_over_q = pi(ctx) * 2L / static_cast<long>(q);
  Complex sum(ctx);
  Real s(ctx.bits());
  Real c(ctx.bits());
  for (std::int64_t n = 1; n <= q; ++n) {
    const int v = chi(n);
    if (v == 0) continue;
    sin_cos(two_pi_over_q * static_cast<long>(n), s, c);
    if (v > 0) {
      sum.re += c;
      sum.im += s;
    } else {
      sum.re -= c;
      sum.im -= s;
    }
  }
  return sum;
}

Complex epsilon_factor(const RealPrimitiveCharacter& chi, const PrecisionContext& ctx) {
  const Complex tau = gauss_sum(chi, ctx);
  const Real root_q = sqrt(Real(static_cast<long>(chi.modulus()), ctx.bits()));
  // Divide by i^a: i^0 = 1, 1/i = -i.
  Complex r = tau / root_q;
  if (chi.parity() == 1) r = Complex{r.im, -r.re};
  return r;
}

std::int64_t conductor(const RealPrimitiveCharacter& chi) {
  const std::int64_t q = chi.modulus();
  for (std::int64_t period = 1; period < q; ++period) {
    if (q % period != 0) continue;
    bool quasi = true;
    for (std::int64_t m = 1; m <= q && quasi; ++m) {
      if (std::gcd(m, q) != 1) continue;
      for (std::int64_t n = m + period; n <= m + q; n += period) {
        if (std::gcd(n, q) == 1 && chi(n) != chi(m)) {
          quasi = false;
          break;
        }
      }
    }
    if (quasi) return period;
  }
  return q;
}

nlohmann::json to_json(const RealPrimitiveCharacter& chi) {
  return {{"d", chi.discriminant()},
          {"q", chi.modulus()},
          {"a", chi.parity()},
          {"values", chi.values()}};
}

RealPrimitiveCharacter character_from_json(const nlohmann::json& j) {
  auto chi = RealPrimitiveCharacter::from_discriminant(j.at("d").get<std::int64_t>());
  if (j.contains("values") && j.at("values").get<std::vector<int>>() != chi.values()) {
    throw std::invalid_argument("character JSON values disagree with its discriminant");
  }
  return chi;
}

}  // namespace dirichlet
