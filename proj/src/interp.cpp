#include "dirichlet/interp.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "dirichlet/errors.hpp"
#include "dirichlet/lref.hpp"

namespace dirichlet {

namespace {

constexpr mpfr_rnd_t kRnd = MPFR_RNDN;

// Fills re/im with Re, Im of n^{-1/2 - i x} = n^{-1/2} (cos(x log n) - i sin(x log n)).
void critical_power(unsigned long n, const Real& x, const Real& log_n, Real& re, Real& im,
                    Real& scratch) {
  mpfr_mul(scratch.get(), x.get(), log_n.get(), kRnd);
  mpfr_sin_cos(im.get(), re.get(), scratch.get(), kRnd);
  mpfr_sqrt_ui(scratch.get(), n, kRnd);
  mpfr_div(re.get(), re.get(), scratch.get(), kRnd);
  mpfr_div(im.get(), im.get(), scratch.get(), kRnd);
  mpfr_neg(im.get(), im.get(), kRnd);
}

InterpolationSystem build_system(const RealPrimitiveCharacter& chi, const std::vector<Real>& nodes,
                                 int k, NodeMethod method, const PrecisionContext& ctx,
                                 bool coprime_constraint) {
  if (nodes.empty()) throw std::invalid_argument("at least one interpolation node is required");
  InterpolationSystem sys;
  sys.method = method;
  sys.scheme = make_index_scheme(chi.modulus(), static_cast<long>(nodes.size()), k, method,
                                 coprime_constraint);
  const mpfr_prec_t bits = ctx.bits();
  for (const Real& x : nodes) sys.nodes.emplace_back(x, bits);

  const std::vector<long> free = sys.scheme.free_indices();
  const std::size_t m_count = nodes.size();
  const std::size_t rows = method == NodeMethod::full_zeros ? 2 * m_count : m_count;
  if (free.size() != rows) {
    throw std::invalid_argument("index scheme does not give a square system: " +
                                std::to_string(free.size()) + " unknowns for " + std::to_string(rows) +
                                " conditions");
  }
  sys.a = Matrix(rows, rows, bits);
  sys.b.assign(rows, Real(bits));

  const auto logs = log_table(static_cast<unsigned long>(sys.scheme.indices.back()), bits);
  Real re(bits), im(bits), scratch(bits);
  for (std::size_t m = 0; m < m_count; ++m) {
    const Real& x = sys.nodes[m];
    const std::size_t im_row = method == NodeMethod::full_zeros ? m_count + m : m;
    for (std::size_t c = 0; c < free.size(); ++c) {
      const auto n = static_cast<unsigned long>(free[c]);
      critical_power(n, x, (*logs)[n], re, im, scratch);
      if (method == NodeMethod::full_zeros) mpfr_set(sys.a(m, c).get(), re.get(), kRnd);
      mpfr_set(sys.a(im_row, c).get(), im.get(), kRnd);
    }
    for (const long nj : sys.scheme.fixed) {
      const int v = chi(nj);
      if (v == 0) continue;
      const auto n = static_cast<unsigned long>(nj);
      critical_power(n, x, (*logs)[n], re, im, scratch);
      if (v > 0) {
        if (method == NodeMethod::full_zeros) sys.b[m] -= re;
        sys.b[im_row] -= im;
      } else {
        if (method == NodeMethod::full_zeros) sys.b[m] += re;
        sys.b[im_row] += im;
      }
    }
  }
  return sys;
}

// Sum a_n n^{-s}, optionally also -sum a_n log(n) n^{-s}.
void accumulate(const Approximant& f, const Complex& s, const PrecisionContext& ctx, Complex& value,
                Complex* derivative) {
  const mpfr_prec_t bits = ctx.bits();
  value = Complex(bits);
  if (derivative) *derivative = Complex(bits);
  if (f.coefficients.empty()) return;
  const auto logs = log_table(static_cast<unsigned long>(f.coefficients.back().first), bits);
  const Real sigma(s.re, bits);
  const Real t(s.im, bits);
  Real mag(bits), angle(bits), sn(bits), cs(bits), term_re(bits), term_im(bits);
  for (const auto& [n, a] : f.coefficients) {
    if (a.is_zero()) continue;
    const Real& ln = (*logs)[static_cast<std::size_t>(n)];
    mpfr_mul(mag.get(), sigma.get(), ln.get(), kRnd);
    mpfr_neg(mag.get(), mag.get(), kRnd);
    mpfr_exp(mag.get(), mag.get(), kRnd);
    mpfr_mul(mag.get(), mag.get(), a.get(), kRnd);
    mpfr_mul(angle.get(), t.get(), ln.get(), kRnd);
    mpfr_sin_cos(sn.get(), cs.get(), angle.get(), kRnd);
    mpfr_mul(term_re.get(), mag.get(), cs.get(), kRnd);
    mpfr_mul(term_im.get(), mag.get(), sn.get(), kRnd);
    mpfr_neg(term_im.get(), term_im.get(), kRnd);
    mpfr_add(value.re.get(), value.re.get(), term_re.get(), kRnd);
    mpfr_add(value.im.get(), value.im.get(), term_im.get(), kRnd);
    if (derivative) {
      mpfr_mul(term_re.get(), term_re.get(), ln.get(), kRnd);
      mpfr_mul(term_im.get(), term_im.get(), ln.get(), kRnd);
      mpfr_sub(derivative->re.get(), derivative->re.get(), term_re.get(), kRnd);
      mpfr_sub(derivative->im.get(), derivative->im.get(), term_im.get(), kRnd);
    }
  }
}

Complex critical_point(const Real& t, mpfr_prec_t bits) {
  Real half(1L, bits);
  half /= 2L;
  return {std::move(half), Real(t, bits)};
}

// Nearest reference entry by ordinate; entries are sorted.
const ZeroEntry* nearest_reference(const ZeroTable& reference, const Real& t) {
  if (reference.entries.empty()) return nullptr;
  auto it = std::lower_bound(reference.entries.begin(), reference.entries.end(), t,
                             [](const ZeroEntry& e, const Real& v) { return e.value < v; });
  if (it == reference.entries.end()) return &reference.entries.back();
  if (it == reference.entries.begin()) return &*it;
  auto prev = std::prev(it);
  return abs(it->value - t) < abs(prev->value - t) ? &*it : &*prev;
}

void attach_reference(DiscoveredZero& z, const ZeroEntry& ref, mpfr_prec_t bits) {
  z.reference_index = ref.m;
  z.label = "rho_" + std::to_string(ref.m);
  z.offset = z.s - critical_point(ref.value, bits);
}

}  // namespace

std::string to_string(NodeMethod method) {
  return method == NodeMethod::full_zeros ? "full_zeros" : "gram_imag";
}

NodeMethod node_method_from_string(const std::string& name) {
  if (name == "full_zeros" || name == "zeros") return NodeMethod::full_zeros;
  if (name == "gram_imag" || name == "gram") return NodeMethod::gram_imag;
  throw std::invalid_argument("unknown method '" + name + "' (expected zeros or gram)");
}

std::vector<long> coprime_indices(std::int64_t q, long count) {
  if (q < 3) throw std::invalid_argument("modulus must be at least 3");
  if (count < 1) throw std::invalid_argument("need at least one index");
  std::vector<long> out;
  out.reserve(static_cast<std::size_t>(count));
  for (long n = 1; static_cast<long>(out.size()) < count; ++n) {
    if (std::gcd(static_cast<std::int64_t>(n), q) == 1) out.push_back(n);
  }
  return out;
}

IndexScheme make_index_scheme(std::int64_t q, long nodes, int k, NodeMethod method,
                              bool coprime_constraint) {
  if (nodes < 1) throw std::invalid_argument("M must be at least 1");
  if (method == NodeMethod::full_zeros && k < 1) {
    throw std::invalid_argument("the zeros method needs k >= 1 (k = 0 gives a homogeneous system)");
  }
  if (method == NodeMethod::gram_imag && k < 2) {
    throw std::invalid_argument("the Gram method needs k >= 2 (k = 1 makes the right-hand side vanish)");
  }
  IndexScheme scheme;
  scheme.q = q;
  scheme.k = k;
  scheme.coprime_constraint = coprime_constraint;
  const long count = (method == NodeMethod::full_zeros ? 2 * nodes : nodes) + k;
  if (coprime_constraint) {
    scheme.indices = coprime_indices(q, count);
  } else {
    if (q < 3) throw std::invalid_argument("modulus must be at least 3");
    scheme.indices.resize(static_cast<std::size_t>(count));
    std::iota(scheme.indices.begin(), scheme.indices.end(), 1L);
  }
  scheme.fixed.assign(scheme.indices.begin(), scheme.indices.begin() + k);
  return scheme;
}

InterpolationSystem build_system_full(const RealPrimitiveCharacter& chi,
                                      const std::vector<Real>& zeros, int k,
                                      const PrecisionContext& ctx, bool coprime_constraint) {
  return build_system(chi, zeros, k, NodeMethod::full_zeros, ctx, coprime_constraint);
}

InterpolationSystem build_system_gram(const RealPrimitiveCharacter& chi,
                                      const std::vector<Real>& gram_points, int k,
                                      const PrecisionContext& ctx, bool coprime_constraint) {
  return build_system(chi, gram_points, k, NodeMethod::gram_imag, ctx, coprime_constraint);
}

std::string node_digest(const std::vector<Real>& nodes, int digits) {
  std::uint64_t h = 14695981039346656037ULL;
  for (const Real& x : nodes) {
    for (const char c : x.to_string(digits) + ",") {
      h ^= static_cast<unsigned char>(c);
      h *= 1099511628211ULL;
    }
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

Approximant assemble_approximant(const InterpolationSystem& system, const std::vector<Real>& solution,
                                 const RealPrimitiveCharacter& chi, const PrecisionContext& ctx) {
  const auto free = system.scheme.free_indices();
  if (solution.size() != free.size()) throw std::invalid_argument("solution length does not match system");
  Approximant f;
  f.d = chi.discriminant();
  f.method = system.method;
  f.nodes = static_cast<long>(system.nodes.size());
  f.k = system.scheme.k;
  f.digits = ctx.digits();
  f.coprime_constraint = system.scheme.coprime_constraint;
  f.node_digest = node_digest(system.nodes, ctx.digits());
  for (const long n : system.scheme.fixed) f.coefficients.emplace_back(n, Real(static_cast<long>(chi(n)), ctx.bits()));
  for (std::size_t i = 0; i < free.size(); ++i) f.coefficients.emplace_back(free[i], Real(solution[i], ctx.bits()));
  if (f.coprime_constraint) {
    for (const auto& [n, a] : f.coefficients) {
      if (std::gcd(static_cast<std::int64_t>(n), chi.modulus()) != 1) {
        throw std::logic_error("approximant support contains a non-coprime index");
      }
    }
  }
  return f;
}

Complex evaluate(const Approximant& f, const Complex& s, const PrecisionContext& ctx) {
  Complex value;
  accumulate(f, s, ctx, value, nullptr);
  return value;
}

std::pair<Complex, Complex> evaluate_with_derivative(const Approximant& f, const Complex& s,
                                                     const PrecisionContext& ctx) {
  Complex value;
  Complex derivative;
  accumulate(f, s, ctx, value, &derivative);
  return {std::move(value), std::move(derivative)};
}

std::vector<Real> node_residuals(const Approximant& f, const InterpolationSystem& system,
                                 const PrecisionContext& ctx) {
  std::vector<Real> out;
  out.reserve(system.nodes.size());
  for (const Real& x : system.nodes) {
    const Complex v = evaluate(f, critical_point(x, ctx.bits()), ctx);
    out.push_back(system.method == NodeMethod::full_zeros ? abs(v) : abs(v.im));
  }
  return out;
}

double coefficient_scale(const Approximant& f) {
  double scale = 0.0;
  for (const auto& [n, a] : f.coefficients) scale += std::fabs(a.to_double()) / std::sqrt(static_cast<double>(n));
  return scale;
}

int scan_digits(const Approximant& f) {
  const double scale = std::max(1.0, coefficient_scale(f));
  return std::max(30, static_cast<int>(std::ceil(std::log10(scale))) + 25);
}

std::vector<ErrorRow> error_table(const Approximant& f, const RealPrimitiveCharacter& chi,
                                  const std::vector<Complex>& points, const PrecisionContext& ctx) {
  std::vector<ErrorRow> rows;
  rows.reserve(points.size());
  for (const Complex& s : points) {
    ErrorRow row;
    row.s = s;
    row.l_value = l_value(chi, s, ctx).value;
    row.f_value = evaluate(f, s, ctx);
    row.error = abs(row.l_value - row.f_value);
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<Complex> standard_error_points(const PrecisionContext& ctx) {
  const mpfr_prec_t bits = ctx.bits();
  const long heights[] = {100, 300, 500, 640};
  std::vector<Complex> points;
  auto push = [&](const Real& sigma, long t) { points.push_back({sigma, Real(t, bits)}); };
  const long left[] = {-4, -3, -2, -1};
  const long right[] = {1, 2, 3, 4};
  for (int i = 0; i < 4; ++i) push(Real(left[i], bits), heights[i]);
  for (const long t : heights) push(Real(-1L, bits) / 2L, t);
  for (const long t : heights) push(Real(bits), t);
  for (const long t : heights) push(Real(1L, bits) / 2L, t);
  for (int i = 0; i < 4; ++i) push(Real(right[i], bits), heights[i]);
  return points;
}

DiscoveredZero newton_zero(const Approximant& f, const Complex& s0, const PrecisionContext& ctx,
                           int max_iterations) {
  const mpfr_prec_t bits = ctx.bits();
  DiscoveredZero z;
  z.s = Complex{Real(s0.re, bits), Real(s0.im, bits)};
  const Real tol = pow10(-(ctx.digits() - 25), bits);
  for (int it = 1; it <= max_iterations; ++it) {
    const auto [value, derivative] = evaluate_with_derivative(f, z.s, ctx);
    z.iterations = it;
    if (value.re.is_zero() && value.im.is_zero()) {
      z.converged = true;
      return z;
    }
    if (derivative.re.is_zero() && derivative.im.is_zero()) return z;
    const Complex step = value / derivative;
    z.s -= step;
    if (abs(step) < tol) {
      z.converged = true;
      return z;
    }
  }
  return z;
}

std::vector<DiscoveredZero> discover_from_reference(const Approximant& f, const ZeroTable& reference,
                                                    long first, long last, const PrecisionContext& ctx) {
  std::vector<DiscoveredZero> out;
  for (const ZeroEntry& e : reference.entries) {
    if (e.m < first || e.m > last) continue;
    DiscoveredZero z = newton_zero(f, critical_point(e.value, ctx.bits()), ctx);
    attach_reference(z, e, ctx.bits());
    out.push_back(std::move(z));
  }
  return out;
}

std::vector<DiscoveredZero> discover_in_gram_intervals(const Approximant& f,
                                                       const RealPrimitiveCharacter& chi,
                                                       const GramTable& gram,
                                                       const ZeroTable* reference,
                                                       const PrecisionContext& ctx,
                                                       int subdivisions) {
  if (subdivisions < 1) throw std::invalid_argument("subdivisions must be positive");
  const PrecisionContext scan(std::min(ctx.digits(), scan_digits(f)));
  auto rotated = [&](const Real& t) {
    const Complex v = exp_i(theta(chi, t, scan), scan) * evaluate(f, critical_point(t, scan.bits()), scan);
    return v.re;
  };

  std::vector<Real> ts;
  for (std::size_t i = 0; i + 1 < gram.entries.size(); ++i) {
    const Real a(gram.entries[i].value, scan.bits());
    const Real width = (Real(gram.entries[i + 1].value, scan.bits()) - a) / static_cast<long>(subdivisions);
    for (int p = 0; p < subdivisions; ++p) ts.push_back(a + width * static_cast<long>(p));
  }
  ts.emplace_back(gram.entries.back().value, scan.bits());

  std::vector<DiscoveredZero> out;
  const Real duplicate_tol = pow10(-(ctx.digits() - 30), ctx.bits());
  Real previous = rotated(ts[0]);
  for (std::size_t i = 1; i < ts.size(); ++i) {
    Real current = rotated(ts[i]);
    if (previous.sign() * current.sign() < 0) {
      const Real t0 = refine_root(rotated, ts[i - 1], ts[i], 20, scan);
      DiscoveredZero z = newton_zero(f, critical_point(t0, ctx.bits()), ctx);
      const bool duplicate = !out.empty() && abs(out.back().s - z.s) < duplicate_tol;
      if (!duplicate) {
        z.label = "zero_" + std::to_string(out.size() + 1);
        if (reference) {
          if (const ZeroEntry* ref = nearest_reference(*reference, z.s.im)) attach_reference(z, *ref, ctx.bits());
        }
        out.push_back(std::move(z));
      }
    }
    previous = std::move(current);
  }
  return out;
}

nlohmann::json to_json(const Approximant& f) {
  nlohmann::json coefficients = nlohmann::json::array();
  for (const auto& [n, a] : f.coefficients) coefficients.push_back({{"n", n}, {"value", to_json(a, f.digits)}});
  return {{"d", f.d},
          {"method", to_string(f.method)},
          {"M", f.nodes},
          {"k", f.k},
          {"digits", f.digits},
          {"coprime_constraint", f.coprime_constraint},
          {"node_digest", f.node_digest},
          {"coefficients", std::move(coefficients)}};
}

Approximant approximant_from_json(const nlohmann::json& j) {
  Approximant f;
  f.d = j.at("d").get<std::int64_t>();
  f.method = node_method_from_string(j.at("method").get<std::string>());
  f.nodes = j.at("M").get<long>();
  f.k = j.at("k").get<int>();
  f.digits = j.at("digits").get<int>();
  f.coprime_constraint = j.value("coprime_constraint", true);
  f.node_digest = j.value("node_digest", "");
  const mpfr_prec_t bits = PrecisionContext(f.digits).bits();
  long last = 0;
  for (const auto& c : j.at("coefficients")) {
    const long n = c.at("n").get<long>();
    if (n <= last) throw std::invalid_argument("approximant coefficients must be listed by increasing n");
    last = n;
    f.coefficients.emplace_back(n, real_from_json(c.at("value"), bits));
  }
  return f;
}

std::string coefficients_csv(const Approximant& f) {
  std::ostringstream out;
  out << "n,a_n\n";
  for (const auto& [n, a] : f.coefficients) out << n << ',' << a.to_string(f.digits) << '\n';
  return out.str();
}

}  // namespace dirichlet
