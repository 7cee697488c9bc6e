// Acceptance runner: one PASS/FAIL line per criterion. `--only N` restricts
// the run to criterion N; `--cache-dir` shares Gram and zero tables between
// runs (same layout as the CLI cache).

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "dirichlet/characters.hpp"
#include "dirichlet/cli.hpp"
#include "dirichlet/errors.hpp"
#include "dirichlet/gramzero.hpp"
#include "dirichlet/interp.hpp"
#include "dirichlet/lasso.hpp"
#include "dirichlet/lref.hpp"
#include "dirichlet/solve.hpp"

using namespace dirichlet;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string sci(const Real& x, int digits = 3) { return x.to_string(digits); }

Real real(const std::string& text, const PrecisionContext& ctx) { return Real::from_string(text, ctx.bits()); }

// A printed decimal matches when it is the truncation or the rounding of x to
// the printed number of decimals.
bool matches_printed(const Real& x, const std::string& printed, const PrecisionContext& ctx) {
  const auto dot = printed.find('.');
  const long places = dot == std::string::npos ? 0 : static_cast<long>(printed.size() - dot - 1);
  const Real p = real(printed, ctx);
  const Real ulp = pow10(-places, ctx.bits());
  const bool truncated = p <= x && x < p + ulp;
  const bool rounded = abs(x - p) <= ulp / 2L;
  return truncated || rounded;
}

Outcome criterion1() {
  const PrecisionContext ctx(60);
  const Real bound = pow10(-(ctx.digits() - 10), ctx.bits());
  int characters = 0;
  Real worst_tau(ctx.bits()), worst_eps(ctx.bits());
  std::string failure;
  for (std::int64_t d = -200; d <= 200; ++d) {
    if (d > -3 && d < 3) continue;
    if (!is_fundamental_discriminant(d)) continue;
    ++characters;
    const auto chi = RealPrimitiveCharacter::from_discriminant(d);
    const std::int64_t q = chi.modulus();
    const std::int64_t limit = 10 * q;
    for (std::int64_t n = 1; n <= limit && failure.empty(); ++n) {
      const int v = kronecker_symbol(d, n);
      if (chi(n) != v) failure = "table mismatch d=" + std::to_string(d) + " n=" + std::to_string(n);
      if (kronecker_symbol(d, n + q) != v) failure = "period d=" + std::to_string(d) + " n=" + std::to_string(n);
      if ((std::gcd(n, q) > 1) != (v == 0)) failure = "gcd d=" + std::to_string(d) + " n=" + std::to_string(n);
      for (std::int64_t m = 1; m * n <= limit; ++m) {
        if (kronecker_symbol(d, m * n) != kronecker_symbol(d, m) * v) {
          failure = "multiplicativity d=" + std::to_string(d) + " m=" + std::to_string(m) + " n=" + std::to_string(n);
          break;
        }
      }
    }
    const Real tau_err = abs(abs(gauss_sum(chi, ctx)) - sqrt(Real(static_cast<long>(q), ctx.bits())));
    const Complex eps = epsilon_factor(chi, ctx);
    const Real eps_err = abs(Complex{eps.re - 1L, eps.im});
    worst_tau = max(worst_tau, tau_err);
    worst_eps = max(worst_eps, eps_err);
    if (!failure.empty()) break;
  }
  Outcome o;
  o.pass = failure.empty() && worst_tau <= bound && worst_eps <= bound;
  o.detail = std::to_string(characters) + " characters; max ||tau|-sqrt q| = " + sci(worst_tau) +
             ", max |eps-1| = " + sci(worst_eps) + " (bound " + sci(bound, 1) + ")" +
             (failure.empty() ? "" : "; " + failure);
  return o;
}

Outcome criterion2() {
  const PrecisionContext ctx(120);
  const Real bound = pow10(-(ctx.digits() - 20), ctx.bits());
  std::mt19937_64 rng(20260101);
  std::uniform_real_distribution<double> re(-5.0, 5.0), im(-300.0, 300.0);
  Real worst(ctx.bits());
  int count = 0;
  for (const std::int64_t d : {-3, -4}) {
    const auto chi = RealPrimitiveCharacter::from_discriminant(d);
    for (int i = 0; i < 50; ++i) {
      const Complex s{Real(re(rng), ctx.bits()), Real(im(rng), ctx.bits())};
      // Relative to |xi(s)|, which is far stricter than the absolute residual
      // once |Im s| is large.
      const Real rel = functional_equation_residual(chi, s, ctx) / abs(completed_l(chi, s, ctx));
      worst = max(worst, rel);
      ++count;
    }
  }
  return {worst <= bound, std::to_string(count) + " points; max relative residual " + sci(worst) + " (bound " +
                              sci(bound, 1) + ")"};
}

Outcome criterion3(const TableCache& cache) {
  const PrecisionContext ctx(120);
  struct Anchor {
    std::int64_t d;
    long m;
    const char* printed;
  };
  const std::vector<Anchor> anchors{
      {-4, 0, "3.3697"}, {-4, 699, "831.7394"}, {-3, 0, "4.8301"}, {-3, 499, "658.4834"}, {-3, 699, "871.5669"}};
  bool pass = true;
  std::ostringstream detail;
  for (const std::int64_t d : {-4, -3}) {
    const auto chi = RealPrimitiveCharacter::from_discriminant(d);
    const GramTable table = cached_gram_table(chi, 700, ctx, cache);
    for (const auto& a : anchors) {
      if (a.d != d) continue;
      const Real& g = table.entries[static_cast<std::size_t>(a.m)].value;
      const bool ok = matches_printed(g, a.printed, ctx);
      pass = pass && ok;
      detail << "\n    d=" << d << " g_" << a.m << " = " << g.to_string(12) << " vs " << a.printed
             << (ok ? " ok" : " MISMATCH");
      if (!ok && a.m > 0) {
        const Real& prev = table.entries[static_cast<std::size_t>(a.m - 1)].value;
        detail << "; g_" << (a.m - 1) << " = " << prev.to_string(12)
               << (matches_printed(prev, a.printed, ctx) ? " matches the printed value" : "");
      }
    }
  }
  return {pass, "Gram anchors with theta(g_m) = m pi" + detail.str()};
}

Outcome criterion4(const TableCache& cache) {
  const PrecisionContext ctx(120);
  struct Anchor {
    std::int64_t d;
    long m;
    const char* printed;
  };
  const std::vector<Anchor> anchors{
      {-4, 1, "6.020948"}, {-4, 450, "628.824833"}, {-3, 1, "8.039737"}, {-3, 470, "660.877547"},
      {-3, 636, "870.903928"}};
  bool pass = true;
  std::ostringstream detail;
  // Tables run past the printed ordinates so a mislabelled anchor can be
  // located by value.
  for (const auto& [d, count] : std::vector<std::pair<std::int64_t, long>>{{-4, 510}, {-3, 700}}) {
    const auto chi = RealPrimitiveCharacter::from_discriminant(d);
    const ZeroTable table = cached_zero_table(chi, count, ctx, cache);
    for (const auto& a : anchors) {
      if (a.d != d) continue;
      const Real& g = table.entries[static_cast<std::size_t>(a.m - 1)].value;
      const bool ok = matches_printed(g, a.printed, ctx);
      pass = pass && ok;
      detail << "\n    d=" << d << " gamma_" << a.m << " = " << g.to_string(14) << " vs " << a.printed
             << (ok ? " ok" : " MISMATCH");
      if (ok) continue;
      for (std::size_t j = 0; j < table.entries.size(); ++j) {
        if (matches_printed(table.entries[j].value, a.printed, ctx)) {
          detail << "; the printed value is gamma_" << table.entries[j].m;
        }
      }
    }
  }
  return {pass, "zero anchors" + detail.str()};
}

Outcome criterion5(const TableCache& cache) {
  RunConfig c;
  c.d = -4;
  c.method = NodeMethod::gram_imag;
  c.M = 500;
  c.k = 2;
  c.digits = 250;
  c.solver = SolverMethod::lu;
  const BuildOutcome built = build_approximant(c, cache);
  const PrecisionContext ctx(c.digits);
  const auto chi = RealPrimitiveCharacter::from_discriminant(c.d);
  const auto rows = error_table(built.approximant, chi, standard_error_points(ctx), ctx);

  const Real anchor_bound = pow10(-60, ctx.bits());
  const Real bound = pow10(-25, ctx.bits());
  bool pass = built.report.converged;
  std::ostringstream detail;
  detail << "F_" << built.approximant.coefficients.size() << " residual " << sci(built.report.relative_residual);
  for (const auto& r : rows) {
    const bool anchor = r.s.re == Real(0.5, ctx.bits()) && r.s.im == 100L;
    const bool ok = r.error <= (anchor ? anchor_bound : bound);
    pass = pass && ok;
    detail << "\n    s = " << r.s.re.to_double() << " + " << r.s.im.to_double() << "i  |L-F| = " << sci(r.error, 6)
           << (ok ? "" : " EXCEEDS") << (anchor ? " (bound 1e-60)" : "");
  }
  return {pass, detail.str()};
}

Outcome criterion6(const TableCache& cache) {
  const PrecisionContext ctx(150);
  const auto chi = RealPrimitiveCharacter::from_discriminant(-4);
  const ZeroTable reference = cached_zero_table(chi, 150, ctx, cache);
  std::vector<Real> nodes;
  for (long m = 0; m < 100; ++m) nodes.push_back(reference.entries[static_cast<std::size_t>(m)].value);
  const InterpolationSystem system = build_system_full(chi, nodes, 1, ctx);
  const SolveResult result = lu_solve(system.a, system.b, ctx);
  const Approximant f = assemble_approximant(system, result.x, chi, ctx);
  const auto found = discover_from_reference(f, reference, 101, 150, ctx);

  const Real bound = pow10(-10, ctx.bits());
  int converged = 0, within = 0;
  Real worst(ctx.bits());
  for (const auto& z : found) {
    converged += z.converged ? 1 : 0;
    const Real off = abs(*z.offset);
    worst = max(worst, off);
    within += off <= bound ? 1 : 0;
  }
  const bool pass = found.size() == 50 && converged == 50 && within == 50;
  return {pass, std::to_string(converged) + "/50 seeds converged, " + std::to_string(within) +
                    " within 1e-10; worst offset " + sci(worst)};
}

Outcome criterion7(const TableCache& cache) {
  const PrecisionContext ctx(150);
  const auto chi = RealPrimitiveCharacter::from_discriminant(-3);
  const GramTable gram = cached_gram_table(chi, 200, ctx, cache);
  std::vector<Real> nodes;
  for (const auto& e : gram.entries) nodes.push_back(e.value);
  const InterpolationSystem system = build_system_gram(chi, nodes, 2, ctx);
  const SolveResult result = lu_solve(system.a, system.b, ctx);
  const Approximant f = assemble_approximant(system, result.x, chi, ctx);
  const ZeroTable reference = cached_zero_table(chi, 220, ctx, cache);
  const auto found = discover_in_gram_intervals(f, chi, gram, &reference, ctx);

  const Real bound = pow10(-8, ctx.bits());
  int within = 0;
  Real worst(ctx.bits());
  for (const auto& z : found) {
    if (!z.converged || !z.offset) continue;
    const Real off = abs(*z.offset);
    if (off <= bound) {
      ++within;
      worst = max(worst, off);
    }
  }
  return {within >= 180, std::to_string(found.size()) + " zeros found in [g_0, g_199], " + std::to_string(within) +
                             " within 1e-8 of the reference (need 180); worst such offset " + sci(worst)};
}

Outcome criterion8() {
  const PrecisionContext ctx(80);
  const std::vector<double> tols{1e-20, 1e-30, 1e-40, 1e-50, 1e-60};
  std::mt19937_64 rng(8080);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  int agree = 0, residual_ok = 0, converged = 0;
  std::string failures;
  for (int i = 0; i < 50; ++i) {
    const std::size_t n = 5 + static_cast<std::size_t>(i * 37 % 96);
    const double tol = tols[static_cast<std::size_t>(i) % tols.size()];
    // Random entries scaled by 1/sqrt(n) around 2 I: a well-conditioned
    // nonsymmetric family, so the LU solution is a valid reference.
    Matrix a(n, n, ctx.bits());
    const Real scale = Real(1L, ctx.bits()) / sqrt(Real(static_cast<long>(n), ctx.bits()));
    for (std::size_t r = 0; r < n; ++r) {
      for (std::size_t col = 0; col < n; ++col) a(r, col) = Real(dist(rng), ctx.bits()) * scale;
      a(r, r) += 2L;
    }
    std::vector<Real> b;
    for (std::size_t r = 0; r < n; ++r) b.emplace_back(dist(rng), ctx.bits());

    const SolveResult g = gmres_solve(a, b, SolveOptions{SolverMethod::gmres, tol, 1000}, ctx);
    const SolveResult l = lu_solve(a, b, ctx);
    Real diff(ctx.bits()), size(ctx.bits());
    for (std::size_t r = 0; r < n; ++r) {
      diff = max(diff, abs(g.x[r] - l.x[r]));
      size = max(size, abs(l.x[r]));
    }
    const Real t(tol, ctx.bits());
    const bool a_ok = diff / size <= t * 100L;
    const bool r_ok = g.report.converged && residual_norm(a, g.x, b, ctx) <= t * Real(1.01, ctx.bits());
    converged += g.report.converged ? 1 : 0;
    agree += a_ok ? 1 : 0;
    residual_ok += r_ok ? 1 : 0;
    if (!a_ok || !r_ok) failures += " #" + std::to_string(i) + "(n=" + std::to_string(n) + ")";
  }
  return {agree == 50 && residual_ok == 50 && converged == 50,
          std::to_string(converged) + "/50 converged, " + std::to_string(agree) + "/50 agree within 100 tol, " +
              std::to_string(residual_ok) + "/50 recomputed residual <= 1.01 tol (tol 1e-20..1e-60, max_iter 1000)" +
              failures};
}

Outcome criterion9() {
  bool pass = true;
  std::ostringstream detail;
  for (const std::int64_t d : {-4, -3}) {
    const auto chi = RealPrimitiveCharacter::from_discriminant(d);
    const auto ex = run_lasso_experiment(chi);
    const auto control = run_lasso_experiment(chi, 100, 60, 7);
    pass = pass && ex.check.confirmed;
    detail << "\n    q=" << chi.modulus() << ": max non-coprime vanish-lambda " << ex.check.max_noncoprime_vanish
           << " < min coprime " << ex.check.min_coprime_vanish << (ex.check.confirmed ? " partition" : " NO PARTITION")
           << "; shuffled control " << (control.check.confirmed ? "partition (unexpected)" : "no partition");
  }
  return {pass, "non-coprime features vanish first along the lambda path" + detail.str()};
}

Outcome criterion10(const TableCache& cache) {
  const PrecisionContext ctx(120);
  const auto chi = RealPrimitiveCharacter::from_discriminant(-4);
  const ZeroTable zeros = cached_zero_table(chi, 50, ctx, cache);
  std::vector<Real> nodes;
  for (const auto& e : zeros.entries) nodes.push_back(e.value);
  const Complex rho1{Real(0.5, ctx.bits()), zeros.entries[0].value};
  // Midway between the first two zeros, off every node.
  const Complex mid{Real(0.5, ctx.bits()), (zeros.entries[0].value + zeros.entries[1].value) / 2L};
  const Real l_mid = abs(l_value(chi, mid, ctx).value);

  std::ostringstream detail;
  Real at_rho1(ctx.bits());
  for (const bool coprime : {false, true}) {
    const InterpolationSystem system = build_system_full(chi, nodes, 1, ctx, coprime);
    try {
      const SolveResult result = lu_solve(system.a, system.b, ctx);
      const Approximant f = assemble_approximant(system, result.x, chi, ctx);
      const Real v = abs(evaluate(f, rho1, ctx));
      const Real e = abs(evaluate(f, mid, ctx) - l_value(chi, mid, ctx).value);
      if (!coprime) at_rho1 = v;
      detail << "\n    " << (coprime ? "coprime I:   " : "I = 1..101: ") << "|F(rho_1)| = " << sci(v)
             << ", |F-L| midway rho_1..rho_2 = " << sci(e) << " (|L| there " << sci(l_mid) << ")";
    } catch (const SolverError& e) {
      detail << "\n    " << (coprime ? "coprime I" : "I = 1..101") << ": solve failed: " << e.what();
      if (!coprime) at_rho1 = Real(1L, ctx.bits());
    }
  }
  return {at_rho1 > Real(0.1, ctx.bits()), "unconstrained index set, d=-4, M=50, k=1" + detail.str()};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance criteria"};
  int only = 0;
  std::string cache_dir;
  app.add_option("--only", only, "run a single criterion (1-10)")->check(CLI::Range(0, 10));
  app.add_option("--cache-dir", cache_dir, "Gram/zero table cache");
  CLI11_PARSE(app, argc, argv);
  const TableCache cache(cache_dir);

  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"character layer exactness", criterion1},
      {"reference L functional equation", criterion2},
      {"Gram point anchors", [&] { return criterion3(cache); }},
      {"zero anchors", [&] { return criterion4(cache); }},
      {"Gram-method approximation errors", [&] { return criterion5(cache); }},
      {"zeros-method discovery from reference seeds", [&] { return criterion6(cache); }},
      {"Gram-method discovery", [&] { return criterion7(cache); }},
      {"GMRES vs LU", criterion8},
      {"lasso coprime partition", criterion9},
      {"unconstrained interpolation failure mode", [&] { return criterion10(cache); }},
  };

  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i + 1);
    if (only != 0 && only != id) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("criterion %2d %s: %s [%.1fs]\n  %s\n", id, o.pass ? "PASS" : "FAIL", criteria[i].first.c_str(), secs,
                o.detail.c_str());
    std::fflush(stdout);
    failed += o.pass ? 0 : 1;
  }
  return failed == 0 ? 0 : 1;
}
