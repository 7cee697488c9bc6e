#pragma once

// Arbitrary-precision real/complex scalars on top of MPFR, plus the few
// special functions the L-function code needs (log-gamma, exp, log, n^-s).

#include <mpfr.h>

#include <compare>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace dirichlet {

/// Number of bits needed to carry `digits` significant decimal digits.
mpfr_prec_t digits_to_bits(double digits);

/// Working precision shared by every arbitrary-precision computation.
///
/// `digits` is the number of decimal digits results are reported to. Values
/// are carried internally with kGuardDigits extra digits, so rounding losses
/// in elementary operations stay far below 10^-digits.
class PrecisionContext {
 public:
  static constexpr int kDefaultDigits = 120;
  static constexpr int kMinDigits = 30;
  static constexpr int kGuardDigits = 15;

  explicit PrecisionContext(int digits = kDefaultDigits);

  int digits() const noexcept { return digits_; }
  mpfr_prec_t bits() const noexcept { return bits_; }
  /// Bits for digits + guard + extra_digits; used by routines that lose a
  /// known number of digits to cancellation.
  mpfr_prec_t bits_with_extra(double extra_digits) const;

  PrecisionContext with_digits(int digits) const { return PrecisionContext(digits); }

  friend bool operator==(const PrecisionContext& a, const PrecisionContext& b) {
    return a.digits_ == b.digits_;
  }

 private:
  int digits_;
  mpfr_prec_t bits_;
};

class Real {
 public:
  Real();
  explicit Real(mpfr_prec_t bits);
  explicit Real(const PrecisionContext& ctx) : Real(ctx.bits()) {}
  Real(long value, mpfr_prec_t bits);
  Real(double value, mpfr_prec_t bits);
  Real(const Real& other, mpfr_prec_t bits);  // rounded copy

  static Real from_string(std::string_view text, mpfr_prec_t bits);

  Real(const Real& other);
  Real(Real&& other) noexcept;
  Real& operator=(const Real& other);
  Real& operator=(Real&& other) noexcept;
  ~Real();

  mpfr_ptr get() noexcept { return value_; }
  mpfr_srcptr get() const noexcept { return value_; }
  mpfr_prec_t precision() const noexcept { return mpfr_get_prec(value_); }

  /// Scientific notation with `digits` significant digits, e.g. "3.14e+00".
  std::string to_string(int digits) const;
  double to_double() const { return mpfr_get_d(value_, MPFR_RNDN); }
  /// floor(log10|x|) style magnitude; -infinity-like large negative for zero.
  double log10_abs() const;

  bool is_zero() const noexcept { return mpfr_zero_p(value_) != 0; }
  bool is_finite() const noexcept { return mpfr_number_p(value_) != 0; }
  int sign() const noexcept { return mpfr_sgn(value_); }

  Real& operator+=(const Real& rhs);
  Real& operator-=(const Real& rhs);
  Real& operator*=(const Real& rhs);
  Real& operator/=(const Real& rhs);
  Real& operator+=(long rhs);
  Real& operator-=(long rhs);
  Real& operator*=(long rhs);
  Real& operator/=(long rhs);
  Real operator-() const;

 private:
  mpfr_t value_;
};

Real operator+(const Real& a, const Real& b);
Real operator-(const Real& a, const Real& b);
Real operator*(const Real& a, const Real& b);
Real operator/(const Real& a, const Real& b);
Real operator+(const Real& a, long b);
Real operator-(const Real& a, long b);
Real operator*(const Real& a, long b);
Real operator/(const Real& a, long b);
Real operator+(long a, const Real& b);
Real operator-(long a, const Real& b);
Real operator*(long a, const Real& b);
Real operator/(long a, const Real& b);

std::partial_ordering operator<=>(const Real& a, const Real& b);
bool operator==(const Real& a, const Real& b);
std::partial_ordering operator<=>(const Real& a, long b);
bool operator==(const Real& a, long b);

Real abs(const Real& x);
Real sqrt(const Real& x);
Real exp(const Real& x);
Real log(const Real& x);
Real sin(const Real& x);
Real cos(const Real& x);
void sin_cos(const Real& x, Real& s, Real& c);
Real atan2(const Real& y, const Real& x);
Real min(const Real& a, const Real& b);
Real max(const Real& a, const Real& b);
/// 10^e at the given precision.
Real pow10(long e, mpfr_prec_t bits);

Real pi(const PrecisionContext& ctx);
Real pi(mpfr_prec_t bits);

struct Complex {
  Real re;
  Real im;

  Complex() = default;
  explicit Complex(mpfr_prec_t bits) : re(bits), im(bits) {}
  explicit Complex(const PrecisionContext& ctx) : Complex(ctx.bits()) {}
  Complex(Real re_part, Real im_part) : re(std::move(re_part)), im(std::move(im_part)) {}

  mpfr_prec_t precision() const { return std::max(re.precision(), im.precision()); }
  Complex conj() const { return {re, -im}; }

  Complex& operator+=(const Complex& rhs);
  Complex& operator-=(const Complex& rhs);
  Complex& operator*=(const Complex& rhs);
  Complex& operator/=(const Complex& rhs);
  Complex& operator*=(const Real& rhs);
  Complex operator-() const { return {-re, -im}; }
};

Complex operator+(const Complex& a, const Complex& b);
Complex operator-(const Complex& a, const Complex& b);
Complex operator*(const Complex& a, const Complex& b);
Complex operator/(const Complex& a, const Complex& b);
Complex operator*(const Complex& a, const Real& b);
Complex operator*(const Real& a, const Complex& b);
Complex operator/(const Complex& a, const Real& b);
Complex operator+(const Complex& a, const Real& b);
Complex operator-(const Complex& a, const Real& b);

Real abs(const Complex& z);
Real arg(const Complex& z);

/// e^{i theta}.
Complex exp_i(const Real& theta, const PrecisionContext& ctx);
Complex exp(const Complex& z);
/// Principal branch; throws DomainError at z = 0.
Complex complex_log(const Complex& z, const PrecisionContext& ctx);

/// Principal-branch log Gamma(z) for Re(z) > 0, continuous along vertical
/// lines. The argument is shifted right until Stirling's series converges to
/// the working precision, then the shift is undone with one product log.
Complex log_gamma(const Complex& z, const PrecisionContext& ctx);

/// n^{-s} = exp(-s log n).
Complex pow_int_neg_s(unsigned long n, const Complex& s, const PrecisionContext& ctx);

/// Immutable snapshot of log(1), ..., log(n_max) at `bits` (index 0 unused).
/// Snapshots are cached per precision and grown geometrically.
std::shared_ptr<const std::vector<Real>> log_table(unsigned long n_max, mpfr_prec_t bits);

/// B_{2j}/(2j)! for j = 1..count at `bits`, from the exact rational cache.
std::shared_ptr<const std::vector<Real>> bernoulli_over_factorial(int count, mpfr_prec_t bits);

// Decimal-string serialization. Strings carry `digits` significant digits.
nlohmann::json to_json(const Real& x, int digits);
nlohmann::json to_json(const Complex& z, int digits);
Real real_from_json(const nlohmann::json& j, mpfr_prec_t bits);
Complex complex_from_json(const nlohmann::json& j, mpfr_prec_t bits);

}  // namespace dirichlet
