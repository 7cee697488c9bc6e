#include "dirichlet/lref.hpp"

#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

#include "dirichlet/errors.hpp"

namespace dirichlet {

namespace {

constexpr mpfr_rnd_t kRnd = MPFR_RNDN;

struct Residue {
  long r;
  int weight;
};

struct ProgressionSum {
  Complex value;
  double magnitude;  // sum of |terms| in the direct part, for cancellation estimates
  double extra_digits;
};

// (e^z - 1) / z, accurate for small |z|.
Complex expm1_over(const Complex& z, mpfr_prec_t bits, const Real& eps) {
  if (abs(z) < Real(0.5, bits)) {
    Complex sum{Real(1L, bits), Real(bits)};
    Complex term = sum;
    for (long k = 2; k < 100000; ++k) {
      term = term * z / Real(k, bits);
      sum += term;
      if (abs(term) < eps) break;
    }
    return sum;
  }
  Complex e = exp(z);
  e.re -= 1L;
  return e / z;
}

// sum_r weight_r * sum_{j >= 0} (j q + r)^{-s} by Euler-Maclaurin with shift K
// (in units of q). If the weights sum to zero the 1/(s-1) pole terms are
// combined analytically so s = 1 is allowed.
ProgressionSum progression_sum(const Complex& s, long q, const std::vector<Residue>& residues,
                               const PrecisionContext& ctx) {
  const int target = ctx.digits() + PrecisionContext::kGuardDigits;
  const double sigma_d = s.re.to_double();
  const double t_d = s.im.to_double();
  const double abs_s = std::hypot(sigma_d, t_d);
  const long K = std::max<long>(target, static_cast<long>(std::ceil(abs_s)));
  const unsigned long n_max = static_cast<unsigned long>(K * q + q);

  // Terms grow like n^{-sigma}; carry enough extra digits to absorb the
  // cancellation against an L-value of ordinary size.
  const double extra = std::max(0.0, -sigma_d) * std::log10(static_cast<double>(n_max)) + 3.0;
  const mpfr_prec_t bits = ctx.bits_with_extra(extra);

  const Complex sp{Real(s.re, bits), Real(s.im, bits)};
  const auto logs = log_table(n_max, bits);

  int weight_sum = 0;
  std::vector<int> weight_of(static_cast<std::size_t>(q) + 1, 0);
  for (const auto& [r, w] : residues) {
    weight_of[static_cast<std::size_t>(r % q)] += w;
    weight_sum += w;
  }

  Real half(1L, bits);
  half /= 2;
  const bool on_half_line = sp.re == half;

  // Direct part: n = j q + r for j < K.
  Real acc_re(bits), acc_im(bits), mag(bits), angle(bits), sn(bits), cs(bits), tmp(bits);
  double magnitude = 0.0;
  for (unsigned long n = 1; n <= static_cast<unsigned long>(K * q); ++n) {
    const int w = weight_of[n % static_cast<unsigned long>(q)];
    if (w == 0) continue;
    const Real& ln = (*logs)[n];
    if (on_half_line) {
      mpfr_sqrt_ui(mag.get(), n, kRnd);
      mpfr_ui_div(mag.get(), 1, mag.get(), kRnd);
    } else {
      mpfr_mul(mag.get(), sp.re.get(), ln.get(), kRnd);
      mpfr_neg(mag.get(), mag.get(), kRnd);
      mpfr_exp(mag.get(), mag.get(), kRnd);
    }
    if (w != 1) mpfr_mul_si(mag.get(), mag.get(), w, kRnd);
    mpfr_mul(angle.get(), sp.im.get(), ln.get(), kRnd);
    mpfr_sin_cos(sn.get(), cs.get(), angle.get(), kRnd);
    mpfr_mul(tmp.get(), mag.get(), cs.get(), kRnd);
    mpfr_add(acc_re.get(), acc_re.get(), tmp.get(), kRnd);
    mpfr_mul(tmp.get(), mag.get(), sn.get(), kRnd);
    mpfr_sub(acc_im.get(), acc_im.get(), tmp.get(), kRnd);
    magnitude += std::fabs(mpfr_get_d(mag.get(), kRnd));
  }
  Complex total{acc_re, acc_im};

  const Real eps = pow10(-(target + 5), bits);
  const Real q_real(q, bits);
  Complex s_minus_1 = sp;
  s_minus_1.re -= 1L;

  // Bernoulli coefficients, grown on demand.
  int capacity = std::max(64, target);
  auto coeffs = bernoulli_over_factorial(capacity, bits);

  for (long r = 1; r <= q; ++r) {
    const int w = weight_of[static_cast<std::size_t>(r % q)];
    if (w == 0) continue;
    const unsigned long u = static_cast<unsigned long>(K * q + r);
    const Real& ln_u = (*logs)[u];
    const Real u_real(static_cast<long>(u), bits);

    // w_u = u^{-s}
    Complex wu(bits);
    {
      Real m = exp(-(sp.re * ln_u));
      Real a = sp.im * ln_u;
      mpfr_sin_cos(wu.im.get(), wu.re.get(), a.get(), kRnd);
      wu.re *= m;
      wu.im *= m;
      wu.im = -wu.im;
    }

    Complex tail(bits);
    // Integral term u^{1-s} / (q (s-1)).
    if (weight_sum == 0) {
      const Complex z = (-s_minus_1) * ln_u;
      tail = expm1_over(z, bits, eps) * (-(ln_u / q_real));
    } else {
      tail = (wu * u_real) / (s_minus_1 * q_real);
    }
    // Boundary term.
    tail += wu * half;

    // Bernoulli tail: C_i (s)_{2i-1} (q/u)^{2i-1} u^{-s}.
    const Real v = q_real / u_real;
    const Real v2 = v * v;
    Complex power = sp * wu * v;
    Real previous(bits);
    bool converged = false;
    for (int i = 1; i < 100000; ++i) {
      if (i > capacity) {
        capacity *= 2;
        coeffs = bernoulli_over_factorial(capacity, bits);
      }
      const Complex term = power * (*coeffs)[i - 1];
      tail += term;
      const Real term_mag = abs(term);
      // Remainder after truncating here is bounded by
      // 4 |T_i| |s + 2i + 1| / (sigma + 2i + 1) once sigma + 2i + 1 > 0.
      const double denom = sigma_d + 2.0 * i + 1.0;
      if (denom > 0.5) {
        Complex shifted = sp;
        shifted.re += 2L * i + 1;
        const Real bound = term_mag * abs(shifted) * 4L / Real(denom, bits);
        if (bound < eps) {
          converged = true;
          break;
        }
      }
      if (i > 4 && term_mag > previous && term_mag > eps) {
        throw PrecisionFault("Euler-Maclaurin tail diverged; shift too small");
      }
      previous = term_mag;
      Complex a = sp;
      a.re += 2L * i - 1;
      Complex b = sp;
      b.re += 2L * i;
      power = power * a * b * v2;
    }
    if (!converged) throw PrecisionFault("Euler-Maclaurin tail did not converge");
    if (w != 1) tail *= Real(static_cast<long>(w), bits);
    total += tail;
  }
  return {std::move(total), magnitude, extra};
}

int achieved_digits_from(const PrecisionContext& ctx, double magnitude, double extra) {
  const double available = ctx.digits() + PrecisionContext::kGuardDigits + extra;
  const double loss = std::log10(std::max(1.0, magnitude)) + 2.0;
  return std::min(ctx.digits(), static_cast<int>(std::floor(available - loss)));
}

// log Gamma(z) on any z off the poles, branch irrelevant (only exponentiated).
Complex log_gamma_any(const Complex& z, const PrecisionContext& ctx) {
  if (z.re > 0L) return log_gamma(z, ctx);
  const long shift = static_cast<long>(std::floor(-z.re.to_double())) + 1;
  Complex w = z;
  w.re += shift;
  Complex result = log_gamma(w, ctx);
  Complex product = z;
  for (long j = 1; j < shift; ++j) {
    Complex f = z;
    f.re += j;
    product *= f;
  }
  if (product.re.is_zero() && product.im.is_zero()) {
    throw DomainError("Gamma pole at a non-positive integer");
  }
  return result - complex_log(product, ctx);
}

}  // namespace

Complex hurwitz_zeta(const Complex& s, long numerator, long denominator,
                     const PrecisionContext& ctx) {
  if (denominator <= 0 || numerator <= 0 || numerator > denominator) {
    throw DomainError("hurwitz_zeta requires x in (0, 1]");
  }
  if (s.re == 1L && s.im.is_zero()) throw DomainError("hurwitz_zeta has a pole at s = 1");
  const std::vector<Residue> residues{{numerator, 1}};
  ProgressionSum sum = progression_sum(s, denominator, residues, ctx);
  // zeta(s, r/q) = q^s sum_j (j q + r)^{-s}
  const mpfr_prec_t bits = sum.value.precision();
  const Real ln_q = log(Real(denominator, bits));
  Complex q_pow_s = exp(Complex{Real(s.re, bits), Real(s.im, bits)} * ln_q);
  Complex r = sum.value * q_pow_s;
  return {Real(r.re, ctx.bits()), Real(r.im, ctx.bits())};
}

LValue l_value(const RealPrimitiveCharacter& chi, const Complex& s, const PrecisionContext& ctx) {
  std::vector<Residue> residues;
  for (long r = 1; r <= chi.modulus(); ++r) {
    const int v = chi(r);
    if (v != 0) residues.push_back({r, v});
  }
  ProgressionSum sum = progression_sum(s, chi.modulus(), residues, ctx);
  LValue out;
  out.s = s;
  out.value = {Real(sum.value.re, ctx.bits()), Real(sum.value.im, ctx.bits())};
  out.achieved_digits = achieved_digits_from(ctx, sum.magnitude, sum.extra_digits);
  return out;
}

Real theta(const RealPrimitiveCharacter& chi, const Real& t, const PrecisionContext& ctx) {
  const mpfr_prec_t bits = ctx.bits();
  Real c(1L, bits);
  c /= 4;
  if (chi.parity() == 1) c += Real(1L, bits) / 2L;
  const Complex z{c, Real(t, bits) / 2L};
  const Complex lg = log_gamma(z, ctx);
  Real result = lg.im;
  result += Real(t, bits) / 2L * log(Real(static_cast<long>(chi.modulus()), bits) / pi(bits));
  // (i/2) log epsilon contributes -arg(epsilon)/2 to the real part.
  const Complex log_eps = complex_log(epsilon_factor(chi, ctx), ctx);
  result -= log_eps.im / 2L;
  return result;
}

Complex rotated_l(const RealPrimitiveCharacter& chi, const Real& t, const PrecisionContext& ctx) {
  const mpfr_prec_t bits = ctx.bits();
  Real half(1L, bits);
  half /= 2;
  const LValue l = l_value(chi, Complex{half, Real(t, bits)}, ctx);
  return exp_i(theta(chi, t, ctx), ctx) * l.value;
}

Real hardy_z(const RealPrimitiveCharacter& chi, const Real& t, const PrecisionContext& ctx) {
  Complex z = rotated_l(chi, t, ctx);
  const Real tolerance = pow10(-(ctx.digits() - 20), ctx.bits());
  if (abs(z.im) > tolerance) {
    throw PrecisionFault("Hardy Z imaginary part " + z.im.to_string(6) + " at t = " +
                         t.to_string(20) + " exceeds tolerance");
  }
  return z.re;
}

Complex completed_l(const RealPrimitiveCharacter& chi, const Complex& s,
                    const PrecisionContext& ctx) {
  const mpfr_prec_t bits = ctx.bits();
  Complex half_shift = s;
  half_shift.re += static_cast<long>(chi.parity());
  half_shift = half_shift / Real(2L, bits);
  const Real log_q_over_pi = log(Real(static_cast<long>(chi.modulus()), bits) / pi(bits));
  Complex log_factor = half_shift * log_q_over_pi + log_gamma_any(half_shift, ctx);
  return exp(log_factor) * l_value(chi, s, ctx).value;
}

Real functional_equation_residual(const RealPrimitiveCharacter& chi, const Complex& s,
                                  const PrecisionContext& ctx) {
  const mpfr_prec_t bits = ctx.bits();
  const Complex reflected{Real(1L, bits) - s.re, -s.im};
  const Complex lhs = completed_l(chi, s, ctx);
  const Complex rhs = epsilon_factor(chi, ctx) * completed_l(chi, reflected, ctx);
  return abs(lhs - rhs);
}

}  // namespace dirichlet
