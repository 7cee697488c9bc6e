#include "dirichlet/mpnum.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

#include "dirichlet/bernoulli.hpp"
#include "dirichlet/errors.hpp"

namespace dirichlet {

namespace {

constexpr mpfr_rnd_t kRnd = MPFR_RNDN;
constexpr double kLog2Of10 = 3.32192809488736234787;

mpfr_prec_t max_prec(const Real& a, const Real& b) {
  return std::max(a.precision(), b.precision());
}

}  // namespace

mpfr_prec_t digits_to_bits(double digits) {
  return static_cast<mpfr_prec_t>(std::ceil(digits * kLog2Of10)) + 8;
}

// ---------------------------------------------------------------------------
// PrecisionContext

PrecisionContext::PrecisionContext(int digits) : digits_(digits) {
  if (digits < kMinDigits) {
    throw std::invalid_argument("precision below " + std::to_string(kMinDigits) +
                                " digits: " + std::to_string(digits));
  }
  bits_ = digits_to_bits(digits + kGuardDigits);
}

mpfr_prec_t PrecisionContext::bits_with_extra(double extra_digits) const {
  return digits_to_bits(digits_ + kGuardDigits + std::max(0.0, extra_digits));
}

// ---------------------------------------------------------------------------
// Real

Real::Real() : Real(mpfr_prec_t{64}) {}

Real::Real(mpfr_prec_t bits) {
  mpfr_init2(value_, bits);
  mpfr_set_zero(value_, 1);
}

Real::Real(long value, mpfr_prec_t bits) {
  mpfr_init2(value_, bits);
  mpfr_set_si(value_, value, kRnd);
}

Real::Real(double value, mpfr_prec_t bits) {
  mpfr_init2(value_, bits);
  mpfr_set_d(value_, value, kRnd);
}

Real::Real(const Real& other, mpfr_prec_t bits) {
  mpfr_init2(value_, bits);
  mpfr_set(value_, other.value_, kRnd);
}

Real Real::from_string(std::string_view text, mpfr_prec_t bits) {
  Real r(bits);
  const std::string owned(text);
  if (owned.empty() || mpfr_set_str(r.value_, owned.c_str(), 10, kRnd) != 0) {
    throw std::invalid_argument("not a decimal number: '" + owned + "'");
  }
  return r;
}

Real::Real(const Real& other) {
  mpfr_init2(value_, other.precision());
  mpfr_set(value_, other.value_, kRnd);
}

// A moved-from Real holds a null limb pointer and may only be destroyed or
// assigned to.
Real::Real(Real&& other) noexcept {
  value_[0] = other.value_[0];
  other.value_[0]._mpfr_d = nullptr;
}

Real& Real::operator=(const Real& other) {
  if (this == &other) return *this;
  if (value_[0]._mpfr_d == nullptr) {
    mpfr_init2(value_, other.precision());
  } else if (precision() != other.precision()) {
    mpfr_set_prec(value_, other.precision());
  }
  mpfr_set(value_, other.value_, kRnd);
  return *this;
}

Real& Real::operator=(Real&& other) noexcept {
  std::swap(value_[0], other.value_[0]);
  return *this;
}

Real::~Real() {
  if (value_[0]._mpfr_d != nullptr) mpfr_clear(value_);
}

std::string Real::to_string(int digits) const {
  char* buffer = nullptr;
  mpfr_asprintf(&buffer, "%.*Re", std::max(0, digits - 1), value_);
  std::string out(buffer);
  mpfr_free_str(buffer);
  return out;
}

double Real::log10_abs() const {
  if (is_zero()) return -1e300;
  long e = 0;
  const double m = mpfr_get_d_2exp(&e, value_, kRnd);
  return std::log10(std::fabs(m)) + static_cast<double>(e) * std::log10(2.0);
}

Real& Real::operator+=(const Real& rhs) {
  if (rhs.precision() > precision()) mpfr_prec_round(value_, rhs.precision(), kRnd);
  mpfr_add(value_, value_, rhs.value_, kRnd);
  return *this;
}

Real& Real::operator-=(const Real& rhs) {
  if (rhs.precision() > precision()) mpfr_prec_round(value_, rhs.precision(), kRnd);
  mpfr_sub(value_, value_, rhs.value_, kRnd);
  return *this;
}

Real& Real::operator*=(const Real& rhs) {
  if (rhs.precision() > precision()) mpfr_prec_round(value_, rhs.precision(), kRnd);
  mpfr_mul(value_, value_, rhs.value_, kRnd);
  return *this;
}

Real& Real::operator/=(const Real& rhs) {
  if (rhs.precision() > precision()) mpfr_prec_round(value_, rhs.precision(), kRnd);
  mpfr_div(value_, value_, rhs.value_, kRnd);
  return *this;
}

Real& Real::operator+=(long rhs) {
  mpfr_add_si(value_, value_, rhs, kRnd);
  return *this;
}

Real& Real::operator-=(long rhs) {
  mpfr_sub_si(value_, value_, rhs, kRnd);
  return *this;
}

Real& Real::operator*=(long rhs) {
  mpfr_mul_si(value_, value_, rhs, kRnd);
  return *this;
}

Real& Real::operator/=(long rhs) {
  mpfr_div_si(value_, value_, rhs, kRnd);
  return *this;
}

Real Real::operator-() const {
  Real r(precision());
  mpfr_neg(r.value_, value_, kRnd);
  return r;
}

Real operator+(const Real& a, const Real& b) {
  Real r(max_prec(a, b));
  mpfr_add(r.get(), a.get(), b.get(), kRnd);
  return r;
}

Real operator-(const Real& a, const Real& b) {
  Real r(max_prec(a, b));
  mpfr_sub(r.get(), a.get(), b.get(), kRnd);
  return r;
}

Real operator*(const Real& a, const Real& b) {
  Real r(max_prec(a, b));
  mpfr_mul(r.get(), a.get(), b.get(), kRnd);
  return r;
}

Real operator/(const Real& a, const Real& b) {
  Real r(max_prec(a, b));
  mpfr_div(r.get(), a.get(), b.get(), kRnd);
  return r;
}

Real operator+(const Real& a, long b) {
  Real r(a.precision());
  mpfr_add_si(r.get(), a.get(), b, kRnd);
  return r;
}

Real operator-(const Real& a, long b) {
  Real r(a.precision());
  mpfr_sub_si(r.get(), a.get(), b, kRnd);
  return r;
}

Real operator*(const Real& a, long b) {
  Real r(a.precision());
  mpfr_mul_si(r.get(), a.get(), b, kRnd);
  return r;
}

Real operator/(const Real& a, long b) {
  Real r(a.precision());
  mpfr_div_si(r.get(), a.get(), b, kRnd);
  return r;
}

Real operator+(long a, const Real& b) { return b + a; }
Real operator*(long a, const Real& b) { return b * a; }

Real operator-(long a, const Real& b) {
  Real r(b.precision());
  mpfr_si_sub(r.get(), a, b.get(), kRnd);
  return r;
}

Real operator/(long a, const Real& b) {
  Real r(b.precision());
  mpfr_si_div(r.get(), a, b.get(), kRnd);
  return r;
}

std::partial_ordering operator<=>(const Real& a, const Real& b) {
  if (mpfr_unordered_p(a.get(), b.get())) return std::partial_ordering::unordered;
  const int c = mpfr_cmp(a.get(), b.get());
  return c < 0 ? std::partial_ordering::less
               : (c > 0 ? std::partial_ordering::greater : std::partial_ordering::equivalent);
}

bool operator==(const Real& a, const Real& b) { return mpfr_equal_p(a.get(), b.get()) != 0; }

std::partial_ordering operator<=>(const Real& a, long b) {
  if (mpfr_nan_p(a.get())) return std::partial_ordering::unordered;
  const int c = mpfr_cmp_si(a.get(), b);
  return c < 0 ? std::partial_ordering::less
               : (c > 0 ? std::partial_ordering::greater : std::partial_ordering::equivalent);
}

bool operator==(const Real& a, long b) {
  return !mpfr_nan_p(a.get()) && mpfr_cmp_si(a.get(), b) == 0;
}

Real abs(const Real& x) {
  Real r(x.precision());
  mpfr_abs(r.get(), x.get(), kRnd);
  return r;
}

Real sqrt(const Real& x) {
  Real r(x.precision());
  mpfr_sqrt(r.get(), x.get(), kRnd);
  return r;
}

Real exp(const Real& x) {
  Real r(x.precision());
  mpfr_exp(r.get(), x.get(), kRnd);
  return r;
}

Real log(const Real& x) {
  Real r(x.precision());
  mpfr_log(r.get(), x.get(), kRnd);
  return r;
}

Real sin(const Real& x) {
  Real r(x.precision());
  mpfr_sin(r.get(), x.get(), kRnd);
  return r;
}

Real cos(const Real& x) {
  Real r(x.precision());
  mpfr_cos(r.get(), x.get(), kRnd);
  return r;
}

void sin_cos(const Real& x, Real& s, Real& c) {
  if (s.precision() < x.precision()) s = Real(x.precision());
  if (c.precision() < x.precision()) c = Real(x.precision());
  mpfr_sin_cos(s.get(), c.get(), x.get(), kRnd);
}

Real atan2(const Real& y, const Real& x) {
  Real r(max_prec(y, x));
  mpfr_atan2(r.get(), y.get(), x.get(), kRnd);
  return r;
}

Real min(const Real& a, const Real& b) { return a <= b ? a : b; }
Real max(const Real& a, const Real& b) { return a >= b ? a : b; }

Real pow10(long e, mpfr_prec_t bits) {
  Real r(bits);
  mpfr_ui_pow_ui(r.get(), 10, static_cast<unsigned long>(std::labs(e)), kRnd);
  if (e < 0) mpfr_ui_div(r.get(), 1, r.get(), kRnd);
  return r;
}

Real pi(mpfr_prec_t bits) {
  Real r(bits);
  mpfr_const_pi(r.get(), kRnd);
  return r;
}

Real pi(const PrecisionContext& ctx) { return pi(ctx.bits()); }

// ---------------------------------------------------------------------------
// Complex

Complex& Complex::operator+=(const Complex& rhs) {
  re += rhs.re;
  im += rhs.im;
  return *this;
}

Complex& Complex::operator-=(const Complex& rhs) {
  re -= rhs.re;
  im -= rhs.im;
  return *this;
}

Complex& Complex::operator*=(const Complex& rhs) {
  *this = *this * rhs;
  return *this;
}

Complex& Complex::operator/=(const Complex& rhs) {
  *this = *this / rhs;
  return *this;
}

Complex& Complex::operator*=(const Real& rhs) {
  re *= rhs;
  im *= rhs;
  return *this;
}

Complex operator+(const Complex& a, const Complex& b) { return {a.re + b.re, a.im + b.im}; }
Complex operator-(const Complex& a, const Complex& b) { return {a.re - b.re, a.im - b.im}; }

Complex operator*(const Complex& a, const Complex& b) {
  const mpfr_prec_t p = std::max(a.precision(), b.precision());
  Complex r(p);
  Real t(p);
  mpfr_mul(r.re.get(), a.re.get(), b.re.get(), kRnd);
  mpfr_mul(t.get(), a.im.get(), b.im.get(), kRnd);
  mpfr_sub(r.re.get(), r.re.get(), t.get(), kRnd);
  mpfr_mul(r.im.get(), a.re.get(), b.im.get(), kRnd);
  mpfr_mul(t.get(), a.im.get(), b.re.get(), kRnd);
  mpfr_add(r.im.get(), r.im.get(), t.get(), kRnd);
  return r;
}

Complex operator/(const Complex& a, const Complex& b) {
  const Real denom = b.re * b.re + b.im * b.im;
  if (denom.is_zero()) throw DomainError("complex division by zero");
  return {(a.re * b.re + a.im * b.im) / denom, (a.im * b.re - a.re * b.im) / denom};
}

Complex operator*(const Complex& a, const Real& b) { return {a.re * b, a.im * b}; }
Complex operator*(const Real& a, const Complex& b) { return {a * b.re, a * b.im}; }
Complex operator/(const Complex& a, const Real& b) { return {a.re / b, a.im / b}; }
Complex operator+(const Complex& a, const Real& b) { return {a.re + b, a.im}; }
Complex operator-(const Complex& a, const Real& b) { return {a.re - b, a.im}; }

Real abs(const Complex& z) {
  Real r(z.precision());
  mpfr_hypot(r.get(), z.re.get(), z.im.get(), kRnd);
  return r;
}

Real arg(const Complex& z) { return atan2(z.im, z.re); }

Complex exp_i(const Real& theta, const PrecisionContext& ctx) {
  Complex r(std::max(ctx.bits(), theta.precision()));
  mpfr_sin_cos(r.im.get(), r.re.get(), theta.get(), kRnd);
  return r;
}

Complex exp(const Complex& z) {
  const mpfr_prec_t p = z.precision();
  Complex r(p);
  Real m(p);
  mpfr_exp(m.get(), z.re.get(), kRnd);
  mpfr_sin_cos(r.im.get(), r.re.get(), z.im.get(), kRnd);
  r.re *= m;
  r.im *= m;
  return r;
}

Complex complex_log(const Complex& z, const PrecisionContext& ctx) {
  if (z.re.is_zero() && z.im.is_zero()) throw DomainError("log of zero");
  const mpfr_prec_t p = std::max(ctx.bits(), z.precision());
  Complex r(p);
  mpfr_hypot(r.re.get(), z.re.get(), z.im.get(), kRnd);
  mpfr_log(r.re.get(), r.re.get(), kRnd);
  mpfr_atan2(r.im.get(), z.im.get(), z.re.get(), kRnd);
  return r;
}

// ---------------------------------------------------------------------------
// Cached tables

std::shared_ptr<const std::vector<Real>> log_table(unsigned long n_max, mpfr_prec_t bits) {
  static std::mutex mutex;
  static std::map<mpfr_prec_t, std::shared_ptr<const std::vector<Real>>> cache;

  std::lock_guard lock(mutex);
  auto& slot = cache[bits];
  if (slot && slot->size() > n_max) return slot;

  const std::size_t old_size = slot ? slot->size() : 1;
  const std::size_t new_size = std::max<std::size_t>(n_max + 1, 2 * old_size);
  auto grown = std::make_shared<std::vector<Real>>();
  grown->reserve(new_size);
  if (slot) {
    grown->assign(slot->begin(), slot->end());
  } else {
    grown->emplace_back(bits);  // index 0 placeholder
  }
  for (std::size_t n = grown->size(); n < new_size; ++n) {
    Real v(bits);
    mpfr_log_ui(v.get(), n, kRnd);
    grown->push_back(std::move(v));
  }
  slot = std::move(grown);
  return slot;
}

std::shared_ptr<const std::vector<Real>> bernoulli_over_factorial(int count, mpfr_prec_t bits) {
  static std::mutex mutex;
  static std::map<mpfr_prec_t, std::shared_ptr<const std::vector<Real>>> cache;

  {
    std::lock_guard lock(mutex);
    auto it = cache.find(bits);
    if (it != cache.end() && static_cast<int>(it->second->size()) >= count) return it->second;
  }
  const int n = std::max(count, 32);
  const auto b = bernoulli_even(n);
  auto values = std::make_shared<std::vector<Real>>();
  values->reserve(n);
  mpz_class factorial = 1;
  for (int j = 1; j <= n; ++j) {
    factorial *= (2 * j - 1) * (2 * j);
    mpq_class c = b[j - 1] / factorial;
    Real v(bits);
    mpfr_set_q(v.get(), c.get_mpq_t(), kRnd);
    values->push_back(std::move(v));
  }
  std::lock_guard lock(mutex);
  auto& slot = cache[bits];
  if (!slot || slot->size() < values->size()) slot = std::move(values);
  return slot;
}

namespace {

// B_{2j} / (2j (2j-1)), the Stirling-series coefficients.
std::shared_ptr<const std::vector<Real>> stirling_coefficients(int count, mpfr_prec_t bits) {
  static std::mutex mutex;
  static std::map<mpfr_prec_t, std::shared_ptr<const std::vector<Real>>> cache;

  {
    std::lock_guard lock(mutex);
    auto it = cache.find(bits);
    if (it != cache.end() && static_cast<int>(it->second->size()) >= count) return it->second;
  }
  const auto b = bernoulli_even(count);
  auto values = std::make_shared<std::vector<Real>>();
  values->reserve(count);
  for (int j = 1; j <= count; ++j) {
    mpq_class c = b[j - 1] / mpq_class(2 * j * (2 * j - 1));
    Real v(bits);
    mpfr_set_q(v.get(), c.get_mpq_t(), kRnd);
    values->push_back(std::move(v));
  }
  std::lock_guard lock(mutex);
  auto& slot = cache[bits];
  if (!slot || slot->size() < values->size()) slot = std::move(values);
  return slot;
}

}  // namespace

// ---------------------------------------------------------------------------
// Special functions

Complex log_gamma(const Complex& z, const PrecisionContext& ctx) {
  if (z.re <= 0L) {
    throw DomainError("log_gamma requires Re(z) > 0, got Re(z) = " + z.re.to_string(10));
  }
  const double target_digits = ctx.digits() + PrecisionContext::kGuardDigits + 5;
  const mpfr_prec_t bits = ctx.bits_with_extra(10);

  // Stirling's remainder near its optimal truncation is about exp(-2 pi |w|),
  // so |w| >= 0.4 * target_digits leaves a comfortable margin.
  const double r_min = 0.4 * target_digits + 8.0;
  const double x = z.re.to_double();
  const double y = z.im.to_double();
  long shift = 0;
  if (x * x + y * y < r_min * r_min) {
    shift = static_cast<long>(std::ceil(std::sqrt(std::max(0.0, r_min * r_min - y * y)) - x));
    shift = std::max(0L, shift);
  }

  const Complex zp{Real(z.re, bits), Real(z.im, bits)};
  Complex w = zp;
  w.re += shift;

  const Complex log_w = complex_log(w, PrecisionContext(ctx.digits() + 10));
  Real half(1L, bits);
  half /= 2;
  Complex result = (w - half) * log_w - w;
  {
    Real two_pi = pi(bits) * 2L;
    result.re += log(two_pi) / 2L;
  }

  // Asymptotic series sum_j B_2j / (2j(2j-1) w^(2j-1)).
  const Real eps = pow10(-static_cast<long>(std::ceil(target_digits)), bits);
  const Complex inv = Complex{Real(1L, bits), Real(bits)} / w;
  const Complex inv2 = inv * inv;
  Complex power = inv;
  int capacity = 64;
  auto coeffs = stirling_coefficients(capacity, bits);
  Real previous_mag(bits);
  for (int j = 1;; ++j) {
    if (j > capacity) {
      capacity *= 2;
      coeffs = stirling_coefficients(capacity, bits);
    }
    Complex term = power * (*coeffs)[j - 1];
    const Real mag = abs(term);
    result += term;
    if (mag < eps) break;
    if (j > 2 && mag > previous_mag) {
      throw PrecisionFault("Stirling series diverged before reaching working precision");
    }
    previous_mag = mag;
    power *= inv2;
  }

  if (shift > 0) {
    // log Gamma(z) = log Gamma(z + shift) - sum_{j < shift} log(z + j); the sum
    // is taken as one log of the product, with the 2 pi branch count fixed
    // from a double-precision sum of the individual arguments.
    Complex product = zp;
    double arg_sum = std::atan2(y, x);
    for (long j = 1; j < shift; ++j) {
      Complex factor = zp;
      factor.re += j;
      product *= factor;
      arg_sum += std::atan2(y, x + static_cast<double>(j));
    }
    Complex log_product = complex_log(product, PrecisionContext(ctx.digits() + 10));
    const double two_pi = 2.0 * std::acos(-1.0);
    const long winding = std::lround((arg_sum - log_product.im.to_double()) / two_pi);
    if (winding != 0) log_product.im += pi(bits) * (2L * winding);
    result -= log_product;
  }

  return {Real(result.re, ctx.bits()), Real(result.im, ctx.bits())};
}

Complex pow_int_neg_s(unsigned long n, const Complex& s, const PrecisionContext& ctx) {
  if (n == 0) throw DomainError("pow_int_neg_s requires n >= 1");
  const mpfr_prec_t bits = std::max(ctx.bits(), s.precision());
  Real log_n(bits);
  mpfr_log_ui(log_n.get(), n, kRnd);
  Real magnitude = exp(-(s.re * log_n));
  Real angle = -(s.im * log_n);
  Complex r(bits);
  mpfr_sin_cos(r.im.get(), r.re.get(), angle.get(), kRnd);
  r.re *= magnitude;
  r.im *= magnitude;
  return r;
}

// ---------------------------------------------------------------------------
// Serialization

nlohmann::json to_json(const Real& x, int digits) { return x.to_string(digits); }

nlohmann::json to_json(const Complex& z, int digits) {
  return {{"re", z.re.to_string(digits)}, {"im", z.im.to_string(digits)}};
}

Real real_from_json(const nlohmann::json& j, mpfr_prec_t bits) {
  return Real::from_string(j.get<std::string>(), bits);
}

Complex complex_from_json(const nlohmann::json& j, mpfr_prec_t bits) {
  return {real_from_json(j.at("re"), bits), real_from_json(j.at("im"), bits)};
}

}  // namespace dirichlet
