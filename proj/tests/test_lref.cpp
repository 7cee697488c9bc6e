#include <random>

#include "dirichlet/errors.hpp"
#include "dirichlet/lref.hpp"
#include "doctest.h"

using namespace dirichlet;

namespace {

Real tol(const PrecisionContext& ctx, int loss) { return pow10(-(ctx.digits() - loss), ctx.bits()); }

Real real(const char* text, const PrecisionContext& ctx) { return Real::from_string(text, ctx.bits()); }

Complex make(const char* re, const char* im, const PrecisionContext& ctx) {
  return {real(re, ctx), real(im, ctx)};
}

const auto chi3 = RealPrimitiveCharacter::from_discriminant(-3);
const auto chi4 = RealPrimitiveCharacter::from_discriminant(-4);

}  // namespace

// Reference values below come from an independent arbitrary-precision library
// at 80 digits.

TEST_CASE("L-values against reference values") {
  const PrecisionContext ctx(70);

  const LValue a = l_value(chi4, make("3", "0", ctx), ctx);
  CHECK(abs(a.value.re - real("0.9689461462593693804836348458469186000695402676839096154420168157439498", ctx)) <=
        tol(ctx, 10));
  CHECK(abs(a.value.im) <= tol(ctx, 10));
  CHECK(a.achieved_digits >= ctx.digits() - 5);

  const LValue b = l_value(chi3, make("0.5", "10", ctx), ctx);
  const Complex b_ref =
      make("1.2599706904371294111949545236567937664672517577268822595119819591959341",
           "-0.08807963451014806174057637309201640622983211408168436546638874519844298", ctx);
  CHECK(abs(b.value - b_ref) <= tol(ctx, 10));

  const LValue c = l_value(chi4, make("-2", "30", ctx), ctx);
  const Complex c_ref =
      make("-1418.1380768778170936696957750738402111283892584294059546358361636353521",
           "-724.16764418735527074016305482354658835174628846164021623300865729043707", ctx);
  CHECK(abs(c.value - c_ref) <= tol(ctx, 6));
}

TEST_CASE("L-value at 1/2 + 100i for chi_3") {
  const PrecisionContext ctx(50);
  const LValue v = l_value(chi3, make("0.5", "100", ctx), ctx);
  const Complex ref = make("0.867140361744374384858954209662799019494672410364630143944224",
                           "0.938850706901973459382738196739079471558157860700134282551026", ctx);
  CHECK(abs(v.value - ref) <= tol(ctx, 10));
}

TEST_CASE("closed forms at s = 1 and s = 0") {
  const PrecisionContext ctx(60);
  const Complex one = make("1", "0", ctx);
  const Complex zero = make("0", "0", ctx);
  CHECK(abs(l_value(chi4, one, ctx).value.re - pi(ctx) / 4L) <= tol(ctx, 10));
  const Real l13 = pi(ctx) / (sqrt(Real(3L, ctx.bits())) * 3L);
  CHECK(abs(l_value(chi3, one, ctx).value.re - l13) <= tol(ctx, 10));
  // L(0, chi) = -(1/q) sum_a chi(a) a.
  CHECK(abs(l_value(chi4, zero, ctx).value.re - Real(1L, ctx.bits()) / 2L) <= tol(ctx, 10));
  CHECK(abs(l_value(chi3, zero, ctx).value.re - Real(1L, ctx.bits()) / 3L) <= tol(ctx, 10));
}

TEST_CASE("Hurwitz zeta") {
  const PrecisionContext ctx(70);
  const Complex three = make("3", "0", ctx);
  const Complex sum = hurwitz_zeta(three, 1, 4, ctx) + hurwitz_zeta(three, 3, 4, ctx);
  CHECK(abs(sum.re - real("67.315186576937279982385337044641199482839232371067937380367207099142939", ctx)) <=
        tol(ctx, 8));

  const Complex z = hurwitz_zeta(make("0.5", "20", ctx), 1, 3, ctx);
  const Complex z_ref =
      make("-1.2238056696598250529660105587451349495700137131974411573822743184315399",
           "1.7457171518805355228197528546233064576450488432747871700065790050190820", ctx);
  CHECK(abs(z - z_ref) <= tol(ctx, 10));

  const Real pi2_6 = pi(ctx) * pi(ctx) / 6L;
  CHECK(abs(hurwitz_zeta(make("2", "0", ctx), 1, 1, ctx).re - pi2_6) <= tol(ctx, 10));

  CHECK_THROWS_AS(hurwitz_zeta(make("1", "0", ctx), 1, 2, ctx), DomainError);
  CHECK_THROWS_AS(hurwitz_zeta(three, 0, 2, ctx), DomainError);
  CHECK_THROWS_AS(hurwitz_zeta(three, 3, 2, ctx), DomainError);
}

TEST_CASE("theta against reference values") {
  const PrecisionContext ctx(50);
  CHECK(abs(theta(chi4, real("10", ctx), ctx) -
            real("4.64979557270698340107528528465376863306383854848326568196837", ctx)) <= tol(ctx, 10));
  CHECK(abs(theta(chi3, real("100", ctx), ctx) -
            real("143.688177828590152504861051805694851821990339947687257769152", ctx)) <= tol(ctx, 10));
  CHECK(abs(theta(chi4, real("0.5", ctx), ctx) -
            real("-0.198041429641187970140822382624769211666191393888423048920406", ctx)) <= tol(ctx, 10));
}

TEST_CASE("Hardy Z vanishes at known zeros") {
  const PrecisionContext ctx(50);
  const char* zeros4[] = {"6.0209489046975966549025115216120858688640339630061961583473",
                          "10.2437703041665545521377574791099590248641524476746701237853",
                          "12.9880980123124225074531097895629937649719849973389907770158",
                          "16.3426071045872221949768614834561499393506877714541279148645",
                          "18.2919931961235348385260042775906994281853648402153645305637"};
  for (const char* g : zeros4) CHECK(abs(hardy_z(chi4, real(g, ctx), ctx)) <= tol(ctx, 8));

  const char* zeros3[] = {"8.03973715568146668171362321417296580279301026738606142727089",
                          "11.249206207772935249705025678863214648695926793224650696375",
                          "15.704619176721625565165550880432780758204802873046652662849"};
  for (const char* g : zeros3) CHECK(abs(hardy_z(chi3, real(g, ctx), ctx)) <= tol(ctx, 8));

  // Z changes sign across each simple zero.
  const Real left = hardy_z(chi4, real("6.0", ctx), ctx);
  const Real right = hardy_z(chi4, real("6.05", ctx), ctx);
  CHECK(left.sign() * right.sign() < 0);
}

TEST_CASE("rotated L is real on the critical line") {
  const PrecisionContext ctx(40);
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> dist(0.0, 200.0);
  for (int i = 0; i < 10; ++i) {
    const Real t(dist(rng), ctx.bits());
    for (const auto* chi : {&chi3, &chi4}) {
      const Complex z = rotated_l(*chi, t, ctx);
      CHECK(abs(z.im) <= tol(ctx, 20));
    }
  }
}

TEST_CASE("functional equation on random points") {
  const PrecisionContext ctx(50);
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> re(-3.0, 4.0);
  std::uniform_real_distribution<double> im(-60.0, 60.0);
  for (const std::int64_t d : {-3, -4, 5, 8, -7}) {
    const auto chi = RealPrimitiveCharacter::from_discriminant(d);
    for (int i = 0; i < 4; ++i) {
      const Complex s{Real(re(rng), ctx.bits()), Real(im(rng), ctx.bits())};
      const Real scale = abs(completed_l(chi, s, ctx));
      const Real residual = functional_equation_residual(chi, s, ctx);
      CHECK(residual <= tol(ctx, 15) * max(scale, Real(1L, ctx.bits())));
    }
  }
}

TEST_CASE("precision consistency") {
  const PrecisionContext lo(40);
  const PrecisionContext hi(90);
  const Complex s = make("0.25", "77.5", hi);
  const Complex a = l_value(chi4, s, lo).value;
  const Complex b = l_value(chi4, s, hi).value;
  CHECK(abs(a - b) <= tol(lo, 8));
}
