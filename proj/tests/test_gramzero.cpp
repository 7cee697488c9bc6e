#include "dirichlet/errors.hpp"
#include "dirichlet/gramzero.hpp"
#include "dirichlet/lref.hpp"
#include "doctest.h"

using namespace dirichlet;

namespace {

Real tol(const PrecisionContext& ctx, int loss) { return pow10(-(ctx.digits() - loss), ctx.bits()); }

Real real(const char* text, const PrecisionContext& ctx) { return Real::from_string(text, ctx.bits()); }

const auto chi3 = RealPrimitiveCharacter::from_discriminant(-3);
const auto chi4 = RealPrimitiveCharacter::from_discriminant(-4);

}  // namespace

TEST_CASE("refine_root on elementary functions") {
  const PrecisionContext ctx(50);
  auto linear = [&](const Real& t) { return t - 2L; };
  CHECK(abs(refine_root(linear, Real(0L, ctx.bits()), Real(4L, ctx.bits()), 45, ctx) - 2L) <=
        tol(ctx, 5));

  auto s = [](const Real& t) { return sin(t); };
  CHECK(abs(refine_root(s, Real(3L, ctx.bits()), Real(4L, ctx.bits()), 45, ctx) - pi(ctx)) <=
        tol(ctx, 6));

  // Endpoint order does not matter.
  CHECK(abs(refine_root(s, Real(4L, ctx.bits()), Real(3L, ctx.bits()), 45, ctx) - pi(ctx)) <=
        tol(ctx, 6));

  CHECK_THROWS_AS(refine_root(linear, Real(3L, ctx.bits()), Real(4L, ctx.bits()), 45, ctx),
                  DomainError);
}

TEST_CASE("refine_root on theta - pi agrees with gram_point") {
  const PrecisionContext ctx(50);
  auto f = [&](const Real& t) { return theta(chi4, t, ctx) - pi(ctx); };
  const Real root = refine_root(f, Real(5L, ctx.bits()), Real(10L, ctx.bits()), 50, ctx);
  CHECK(abs(root - gram_point(chi4, 1, ctx)) <= tol(ctx, 10));
}

TEST_CASE("theta turning point") {
  // theta'(0) < 0 for these characters, so theta dips below zero first.
  CHECK(theta_turning_point(chi4) > 1.0);
  CHECK(theta_turning_point(chi4) < 2.5);
  CHECK(theta_turning_point(chi3) > 1.5);
  CHECK(theta_turning_point(chi3) < 3.0);
  // For larger moduli theta increases from t = 0.
  CHECK(theta_turning_point(RealPrimitiveCharacter::from_discriminant(-23)) == 0.0);
}

// Reference Gram points: roots of theta(t) = m pi from an independent
// arbitrary-precision library (60 digits).
TEST_CASE("Gram points against reference values") {
  const PrecisionContext ctx(50);
  CHECK(abs(gram_point(chi4, 0, ctx) -
            real("3.36970437505636432453656659392104054725092315199927841525728", ctx)) <= tol(ctx, 10));
  CHECK(abs(gram_point(chi4, 1, ctx) -
            real("8.28555699793001598800830208980751565679311999945215414618749", ctx)) <= tol(ctx, 10));
  CHECK(abs(gram_point(chi4, 699, ctx) -
            real("832.741196811240812837354628663619743064235000396353643467062", ctx)) <= tol(ctx, 8));
  CHECK(abs(gram_point(chi3, 0, ctx) -
            real("4.83011276019027117955513489857399101630913219376344860594073", ctx)) <= tol(ctx, 10));
  CHECK(abs(gram_point(chi3, 498, ctx) -
            real("658.483487274144245853863330390167424415968246752547308381248", ctx)) <= tol(ctx, 8));
}

TEST_CASE("Gram point for a character with monotone theta") {
  const PrecisionContext ctx(40);
  const auto chi = RealPrimitiveCharacter::from_discriminant(-23);
  CHECK(gram_point(chi, 0, ctx).is_zero());
  const Real g1 = gram_point(chi, 1, ctx);
  CHECK(abs(theta(chi, g1, ctx) - pi(ctx)) <= tol(ctx, 20));
}

TEST_CASE("Gram table invariants") {
  const PrecisionContext ctx(40);
  const GramTable table = gram_table(chi3, 40, ctx);
  REQUIRE(table.entries.size() == 40);
  for (std::size_t i = 0; i < table.entries.size(); ++i) {
    const auto& e = table.entries[i];
    CHECK(e.m == static_cast<long>(i));
    CHECK(e.residual <= tol(ctx, 20));
    CHECK(abs(theta(chi3, e.value, ctx) - pi(ctx) * e.m) <= tol(ctx, 20));
    if (i > 0) CHECK(e.value > table.entries[i - 1].value);
  }
  CHECK_THROWS_AS(gram_table(chi3, 0, ctx), std::invalid_argument);
  CHECK_THROWS_AS(gram_point(chi3, -1, ctx), std::invalid_argument);
}

TEST_CASE("Gram points are stable under a precision increase") {
  const PrecisionContext ctx(40);
  const PrecisionContext hi(80);
  for (const long m : {0L, 7L, 150L}) {
    CHECK(abs(gram_point(chi4, m, ctx) - gram_point(chi4, m, hi)) <= tol(ctx, 25));
  }
}

TEST_CASE("zeros of L(s, chi_4)") {
  const PrecisionContext ctx(50);
  const ZeroTable zeros = find_zeros(chi4, 50, ctx);
  REQUIRE(zeros.entries.size() == 50);
  CHECK(abs(zeros.entries[0].value - real("6.020948904697596654902511521612085868864", ctx)) <=
        pow10(-39, ctx.bits()));
  CHECK(abs(zeros.entries[49].value - real("98.75530041575452766860397355623373667249", ctx)) <=
        pow10(-37, ctx.bits()));

  for (std::size_t i = 0; i < zeros.entries.size(); ++i) {
    const auto& e = zeros.entries[i];
    CHECK(e.m == static_cast<long>(i + 1));
    CHECK(e.achieved_digits == ctx.digits() - 20);
    if (i > 0) CHECK(e.value > zeros.entries[i - 1].value);
    const Real delta = pow10(-(e.achieved_digits - 5), ctx.bits());
    const Real left = hardy_z(chi4, e.value - delta, ctx);
    const Real right = hardy_z(chi4, e.value + delta, ctx);
    CHECK(left.sign() * right.sign() < 0);
  }
}

TEST_CASE("zeros of L(s, chi_3) and Gram interlacing count") {
  const PrecisionContext ctx(40);
  const ZeroTable zeros = find_zeros(chi3, 12, ctx);
  CHECK(abs(zeros.entries[0].value - real("8.03973715568146668171362321417296580279", ctx)) <=
        tol(ctx, 15));
  CHECK(abs(zeros.entries[1].value - real("11.249206207772935249705025678863214648695", ctx)) <=
        tol(ctx, 15));
  CHECK(abs(zeros.entries[2].value - real("15.704619176721625565165550880432780758204", ctx)) <=
        tol(ctx, 15));

  // Fine-grid sign changes on [g_0, g_10] match the table entries in that range.
  const PrecisionContext scan(30);
  const Real g0 = gram_point(chi3, 0, scan);
  const Real g10 = gram_point(chi3, 10, scan);
  int changes = 0;
  Real previous = hardy_z(chi3, g0, scan);
  const int steps = 400;
  for (int i = 1; i <= steps; ++i) {
    const Real t = g0 + (g10 - g0) * static_cast<long>(i) / static_cast<long>(steps);
    const Real z = hardy_z(chi3, t, scan);
    if (z.sign() * previous.sign() < 0) ++changes;
    previous = z;
  }
  int in_range = 0;
  for (const auto& e : zeros.entries) {
    if (e.value > Real(g0, ctx.bits()) && e.value < Real(g10, ctx.bits())) ++in_range;
  }
  CHECK(changes == in_range);
}

TEST_CASE("table json round trip") {
  const PrecisionContext ctx(40);
  const GramTable g = gram_table(chi4, 3, ctx);
  const GramTable g2 = gram_table_from_json(to_json(g));
  REQUIRE(g2.entries.size() == 3);
  CHECK(g2.d == -4);
  CHECK(abs(g2.entries[2].value - g.entries[2].value) <= tol(ctx, 2));

  const ZeroTable z = find_zeros(chi4, 2, ctx);
  const ZeroTable z2 = zero_table_from_json(to_json(z));
  CHECK(z2.entries[1].achieved_digits == z.entries[1].achieved_digits);
  CHECK(to_json(z2).dump() == to_json(z).dump());
}
