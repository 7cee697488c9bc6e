#include "dirichlet/gramzero.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <string>

#include "dirichlet/errors.hpp"
#include "dirichlet/lref.hpp"

namespace dirichlet {

namespace {

constexpr int kScanDigits = 30;
constexpr int kWarmupBisections = 4;
constexpr int kMaxRootIterations = 400;
constexpr int kMaxSubdivision = 1024;

// Inverse of theta(t) ~ (t/2) log(q t / (2 pi e)) + (a/2 - 1/4) pi/2 in double.
double asymptotic_gram_seed(const RealPrimitiveCharacter& chi, long m) {
  const double q = static_cast<double>(chi.modulus());
  const double pi = std::numbers::pi;
  const double offset = (chi.parity() / 2.0 - 0.25) * pi / 2.0;
  auto h = [&](double t) { return t / 2.0 * std::log(q * t / (2.0 * pi * std::numbers::e)) + offset - m * pi; };
  double lo = 2.0 * pi / q;
  if (h(lo) >= 0.0) return lo;
  double hi = 2.0 * lo;
  while (h(hi) < 0.0) hi *= 2.0;
  for (int i = 0; i < 200 && hi - lo > 1e-12 * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    (h(mid) < 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

double compute_turning_point(const RealPrimitiveCharacter& chi) {
  const PrecisionContext ctx(kScanDigits);
  auto th = [&](double t) { return theta(chi, Real(t, ctx.bits()), ctx).to_double(); };
  const double golden = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = 0.0;
  double b = 4.0 * std::numbers::pi / static_cast<double>(chi.modulus()) + 4.0;
  double c = b - golden * (b - a);
  double d = a + golden * (b - a);
  double fc = th(c);
  double fd = th(d);
  for (int i = 0; i < 80 && b - a > 1e-12; ++i) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - golden * (b - a);
      fc = th(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + golden * (b - a);
      fd = th(d);
    }
  }
  const double t = 0.5 * (a + b);
  return t < 1e-6 ? 0.0 : t;
}

bool same_sign(const Real& a, const Real& b) { return a.sign() * b.sign() > 0; }

// Expand [lo, hi] (clamped below at floor) until f(lo) < 0 < f(hi), assuming f
// increasing.
void bracket_increasing(const std::function<Real(const Real&)>& f, Real& lo, Real& hi,
                        const Real& floor, const Real& step) {
  Real width = step;
  for (int i = 0; f(lo).sign() > 0; ++i) {
    if (lo == floor || i > 60) throw PrecisionFault("cannot bracket Gram point from below");
    lo = max(floor, lo - width);
    width *= 2L;
  }
  width = step;
  for (int i = 0; f(hi).sign() < 0; ++i) {
    if (i > 60) throw PrecisionFault("cannot bracket Gram point from above");
    hi += width;
    width *= 2L;
  }
}

// Narrow bracket [x - delta, x + delta] around a low-precision root, widened
// until f changes sign on it.
std::pair<Real, Real> narrow_bracket(const std::function<Real(const Real&)>& f, const Real& x,
                                     const PrecisionContext& ctx) {
  Real delta = max(abs(x), Real(1L, ctx.bits())) * pow10(-22, ctx.bits());
  for (int attempt = 0; attempt < 8; ++attempt) {
    Real lo = x - delta;
    Real hi = x + delta;
    const Real flo = f(lo);
    const Real fhi = f(hi);
    if (flo.is_zero() || fhi.is_zero() || !same_sign(flo, fhi)) return {std::move(lo), std::move(hi)};
    delta *= 1000L;
  }
  throw PrecisionFault("lost the sign change while raising precision at t = " + x.to_string(25));
}

Real gram_point_impl(const RealPrimitiveCharacter& chi, long m, double turning,
                     const PrecisionContext& ctx) {
  if (m < 0) throw std::invalid_argument("Gram index must be non-negative");
  if (m == 0 && turning == 0.0) return Real(ctx.bits());

  const PrecisionContext scan(kScanDigits);
  const Real target_lo = pi(scan) * m;
  auto f_lo = [&](const Real& t) { return theta(chi, t, scan) - target_lo; };

  const Real floor(turning, scan.bits());
  const double seed = std::max(turning, asymptotic_gram_seed(chi, m));
  Real lo = max(floor, Real(seed - 0.5, scan.bits()));
  Real hi(seed + 0.5, scan.bits());
  bracket_increasing(f_lo, lo, hi, floor, Real(1L, scan.bits()));
  Real x = refine_root(f_lo, lo, hi, kScanDigits - 5, scan);

  const Real target = pi(ctx) * m;
  auto f = [&](const Real& t) { return theta(chi, t, ctx) - target; };
  if (ctx.digits() > kScanDigits) {
    const Real x_full(x, ctx.bits());
    auto [a, b] = narrow_bracket(f, x_full, ctx);
    x = refine_root(f, a, b, ctx.digits(), ctx);
  }
  if (abs(f(x)) > pow10(-(ctx.digits() - 20), ctx.bits())) {
    throw PrecisionFault("Gram point residual too large at m = " + std::to_string(m));
  }
  return x;
}

struct Bracket {
  Real lo;
  Real hi;
};

void collect_sign_changes(const std::vector<Real>& ts, const std::vector<Real>& zs,
                          std::vector<Bracket>& out) {
  for (std::size_t i = 0; i + 1 < ts.size(); ++i) {
    if (zs[i].sign() * zs[i + 1].sign() < 0) out.push_back({ts[i], ts[i + 1]});
  }
}

}  // namespace

double theta_turning_point(const RealPrimitiveCharacter& chi) {
  static std::mutex mutex;
  static std::map<std::int64_t, double> cache;
  {
    std::lock_guard lock(mutex);
    auto it = cache.find(chi.discriminant());
    if (it != cache.end()) return it->second;
  }
  const double t = compute_turning_point(chi);
  std::lock_guard lock(mutex);
  cache[chi.discriminant()] = t;
  return t;
}

Real refine_root(const std::function<Real(const Real&)>& f, const Real& lo, const Real& hi,
                 int target_digits, const PrecisionContext& ctx) {
  const mpfr_prec_t bits = ctx.bits();
  Real a(lo, bits);
  Real b(hi, bits);
  if (a > b) std::swap(a, b);
  Real fa = f(a);
  Real fb = f(b);
  if (fa.is_zero()) return a;
  if (fb.is_zero()) return b;
  if (same_sign(fa, fb)) throw DomainError("refine_root: f does not change sign on the bracket");

  const Real tol = pow10(-target_digits, bits) * max(Real(1L, bits), max(abs(a), abs(b)));

  for (int i = 0; i < kWarmupBisections && b - a > tol; ++i) {
    Real mid = (a + b) / 2L;
    Real fm = f(mid);
    if (fm.is_zero()) return mid;
    if (same_sign(fm, fa)) {
      a = std::move(mid);
      fa = std::move(fm);
    } else {
      b = std::move(mid);
      fb = std::move(fm);
    }
  }

  Real x0 = a, f0 = fa, x1 = b, f1 = fb;
  for (int iter = 0; iter < kMaxRootIterations; ++iter) {
    if (b - a <= tol) return (a + b) / 2L;
    Real x2(bits);
    const Real df = f1 - f0;
    if (!df.is_zero()) x2 = x1 - f1 * (x1 - x0) / df;
    if (df.is_zero() || !(x2 > a && x2 < b)) x2 = (a + b) / 2L;
    Real f2 = f(x2);
    if (f2.is_zero()) return x2;
    const Real step = abs(x2 - x1);
    if (same_sign(f2, fa)) {
      a = x2;
      fa = f2;
    } else {
      b = x2;
      fb = f2;
    }
    x0 = std::move(x1);
    f0 = std::move(f1);
    x1 = std::move(x2);
    f1 = std::move(f2);
    if (step <= tol) return x1;
  }
  throw PrecisionFault("refine_root did not converge");
}

Real gram_point(const RealPrimitiveCharacter& chi, long m, const PrecisionContext& ctx) {
  return gram_point_impl(chi, m, theta_turning_point(chi), ctx);
}

GramTable gram_table(const RealPrimitiveCharacter& chi, long count, const PrecisionContext& ctx) {
  if (count < 1) throw std::invalid_argument("Gram table needs at least one entry");
  const double turning = theta_turning_point(chi);
  GramTable table;
  table.d = chi.discriminant();
  table.digits = ctx.digits();
  table.entries.reserve(static_cast<std::size_t>(count));
  for (long m = 0; m < count; ++m) {
    Real g = gram_point_impl(chi, m, turning, ctx);
    Real residual = abs(theta(chi, g, ctx) - pi(ctx) * m);
    if (!table.entries.empty() && !(g > table.entries.back().value)) {
      throw PrecisionFault("Gram points not increasing at m = " + std::to_string(m));
    }
    table.entries.push_back({m, std::move(g), std::move(residual)});
  }
  return table;
}

ZeroTable find_zeros(const RealPrimitiveCharacter& chi, long count, const PrecisionContext& ctx) {
  if (count < 1) throw std::invalid_argument("zero table needs at least one entry");
  const PrecisionContext scan(kScanDigits);
  const double turning = theta_turning_point(chi);
  auto z_scan = [&](const Real& t) { return hardy_z(chi, t, scan); };

  // Block scan: between two good anchors with Gram indices i < j there should
  // be j - i sign changes. A Gram point is good when (-1)^m Z(g_m) > 0; t = 0
  // serves as an anchor with index 0.
  std::vector<Bracket> brackets;
  Real anchor_t(scan.bits());
  Real anchor_z = z_scan(anchor_t);
  long anchor_index = 0;
  long m = 0;
  while (static_cast<long>(brackets.size()) < count) {
    std::vector<Real> ts{anchor_t};
    std::vector<Real> zs{anchor_z};
    long index = m;
    for (;;) {
      Real g = gram_point_impl(chi, m, turning, scan);
      Real z = z_scan(g);
      index = m++;
      const bool good = (index % 2 == 0 ? z.sign() : -z.sign()) > 0;
      ts.push_back(std::move(g));
      zs.push_back(std::move(z));
      if (good) break;
      if (ts.size() > 256) throw PrecisionFault("no good Gram point found in 256 consecutive points");
    }
    const std::size_t expected = static_cast<std::size_t>(index - anchor_index);

    std::vector<Bracket> found;
    collect_sign_changes(ts, zs, found);
    for (int parts = 16; found.size() < expected; parts *= 2) {
      if (parts > kMaxSubdivision) {
        throw PrecisionFault("expected " + std::to_string(expected) + " sign changes between t = " +
                             ts.front().to_string(12) + " and " + ts.back().to_string(12) +
                             ", found " + std::to_string(found.size()));
      }
      std::vector<Real> fine_t;
      std::vector<Real> fine_z;
      for (std::size_t i = 0; i + 1 < ts.size(); ++i) {
        const Real width = (ts[i + 1] - ts[i]) / static_cast<long>(parts);
        fine_t.push_back(ts[i]);
        fine_z.push_back(zs[i]);
        for (int p = 1; p < parts; ++p) {
          Real t = ts[i] + width * static_cast<long>(p);
          fine_z.push_back(z_scan(t));
          fine_t.push_back(std::move(t));
        }
      }
      fine_t.push_back(ts.back());
      fine_z.push_back(zs.back());
      found.clear();
      collect_sign_changes(fine_t, fine_z, found);
    }
    for (auto& b : found) brackets.push_back(std::move(b));
    anchor_t = ts.back();
    anchor_z = zs.back();
    anchor_index = index;
  }

  ZeroTable table;
  table.d = chi.discriminant();
  table.digits = ctx.digits();
  const int achieved = ctx.digits() - 20;
  auto z_full = [&](const Real& t) { return hardy_z(chi, t, ctx); };
  for (long i = 0; i < count; ++i) {
    const Bracket& br = brackets[static_cast<std::size_t>(i)];
    Real x = refine_root(z_scan, br.lo, br.hi, kScanDigits - 5, scan);
    if (ctx.digits() > kScanDigits) {
      const Real x_full(x, ctx.bits());
      auto [a, b] = narrow_bracket(z_full, x_full, ctx);
      x = refine_root(z_full, a, b, achieved, ctx);
    }
    if (!table.entries.empty() && !(x > table.entries.back().value)) {
      throw PrecisionFault("zero ordinates not increasing at m = " + std::to_string(i + 1));
    }
    table.entries.push_back({i + 1, std::move(x), achieved});
  }
  return table;
}

nlohmann::json to_json(const GramTable& table) {
  nlohmann::json entries = nlohmann::json::array();
  for (const auto& e : table.entries) {
    entries.push_back({{"m", e.m},
                       {"value", to_json(e.value, table.digits)},
                       {"residual", to_json(e.residual, 6)}});
  }
  return {{"d", table.d}, {"digits", table.digits}, {"entries", std::move(entries)}};
}

GramTable gram_table_from_json(const nlohmann::json& j) {
  GramTable table;
  table.d = j.at("d").get<std::int64_t>();
  table.digits = j.at("digits").get<int>();
  const mpfr_prec_t bits = PrecisionContext(table.digits).bits();
  for (const auto& e : j.at("entries")) {
    table.entries.push_back({e.at("m").get<long>(), real_from_json(e.at("value"), bits),
                             real_from_json(e.at("residual"), bits)});
  }
  return table;
}

nlohmann::json to_json(const ZeroTable& table) {
  nlohmann::json entries = nlohmann::json::array();
  for (const auto& e : table.entries) {
    entries.push_back({{"m", e.m},
                       {"value", to_json(e.value, table.digits)},
                       {"achieved_digits", e.achieved_digits}});
  }
  return {{"d", table.d}, {"digits", table.digits}, {"entries", std::move(entries)}};
}

ZeroTable zero_table_from_json(const nlohmann::json& j) {
  ZeroTable table;
  table.d = j.at("d").get<std::int64_t>();
  table.digits = j.at("digits").get<int>();
  const mpfr_prec_t bits = PrecisionContext(table.digits).bits();
  for (const auto& e : j.at("entries")) {
    table.entries.push_back({e.at("m").get<long>(), real_from_json(e.at("value"), bits),
                             e.at("achieved_digits").get<int>()});
  }
  return table;
}

}  // namespace dirichlet
