#include "dirichlet/solve.hpp"

#include <stdexcept>

#include "dirichlet/errors.hpp"

namespace dirichlet {

namespace {

constexpr mpfr_rnd_t kRnd = MPFR_RNDN;

void check_shapes(const Matrix& a, const std::vector<Real>& b) {
  if (a.rows() != a.cols()) throw std::invalid_argument("matrix must be square");
  if (a.rows() != b.size()) throw std::invalid_argument("right-hand side size does not match matrix");
  if (a.rows() == 0) throw std::invalid_argument("empty system");
}

Real dot(const std::vector<Real>& u, const std::vector<Real>& v, mpfr_prec_t bits) {
  Real sum(bits);
  for (std::size_t i = 0; i < u.size(); ++i) mpfr_fma(sum.get(), u[i].get(), v[i].get(), sum.get(), kRnd);
  return sum;
}

// w -= c v
void axpy_neg(std::vector<Real>& w, const Real& c, const std::vector<Real>& v) {
  const Real neg = -c;
  for (std::size_t i = 0; i < w.size(); ++i) mpfr_fma(w[i].get(), neg.get(), v[i].get(), w[i].get(), kRnd);
}

}  // namespace

Matrix::Matrix(std::size_t rows, std::size_t cols, mpfr_prec_t bits)
    : rows_(rows), cols_(cols), data_(rows * cols, Real(bits)) {}

std::vector<Real> Matrix::multiply(const std::vector<Real>& x, mpfr_prec_t bits) const {
  if (x.size() != cols_) throw std::invalid_argument("vector size does not match matrix");
  std::vector<Real> y(rows_, Real(bits));
  for (std::size_t i = 0; i < rows_; ++i) {
    mpfr_ptr acc = y[i].get();
    const Real* row = &data_[i * cols_];
    for (std::size_t j = 0; j < cols_; ++j) mpfr_fma(acc, row[j].get(), x[j].get(), acc, kRnd);
  }
  return y;
}

Real Matrix::max_abs() const {
  Real m(64);
  for (const Real& v : data_) {
    if (mpfr_cmpabs(v.get(), m.get()) > 0) m = abs(v);
  }
  return m;
}

std::string to_string(SolverMethod method) { return method == SolverMethod::gmres ? "gmres" : "lu"; }

SolverMethod solver_method_from_string(const std::string& name) {
  if (name == "gmres") return SolverMethod::gmres;
  if (name == "lu") return SolverMethod::lu;
  throw std::invalid_argument("unknown solver '" + name + "' (expected gmres or lu)");
}

Real norm2(const std::vector<Real>& v, mpfr_prec_t bits) { return sqrt(dot(v, v, bits)); }

Real residual_norm(const Matrix& a, const std::vector<Real>& x, const std::vector<Real>& b,
                   const PrecisionContext& ctx) {
  const mpfr_prec_t bits = ctx.bits();
  std::vector<Real> r = a.multiply(x, bits);
  for (std::size_t i = 0; i < r.size(); ++i) mpfr_sub(r[i].get(), b[i].get(), r[i].get(), kRnd);
  const Real nb = norm2(b, bits);
  if (nb.is_zero()) return norm2(r, bits);
  return norm2(r, bits) / nb;
}

SolveResult gmres_solve(const Matrix& a, const std::vector<Real>& b, const SolveOptions& options,
                        const PrecisionContext& ctx) {
  check_shapes(a, b);
  if (!(options.tol > 0.0)) throw std::invalid_argument("tol must be positive");
  if (options.max_iter < 1) throw std::invalid_argument("max_iter must be at least 1");
  const mpfr_prec_t bits = ctx.bits();
  const std::size_t n = a.rows();
  const Real beta = norm2(b, bits);
  if (beta.is_zero()) throw std::invalid_argument("GMRES needs a nonzero right-hand side");
  const Real tol(options.tol, bits);
  const Real breakdown_floor = pow10(-(ctx.digits() + 5), bits) * beta;

  std::vector<std::vector<Real>> basis;
  basis.reserve(n + 1);
  basis.emplace_back(n, Real(bits));
  for (std::size_t i = 0; i < n; ++i) basis[0][i] = b[i] / beta;

  std::vector<std::vector<Real>> r_cols;  // column j holds R(0..j, j)
  std::vector<Real> cs;
  std::vector<Real> sn;
  std::vector<Real> g{beta};

  SolveResult best;
  best.report.method = SolverMethod::gmres;
  best.report.relative_residual = Real(1L, bits);
  best.x.assign(n, Real(bits));

  auto current_solution = [&](std::size_t k) {
    std::vector<Real> y(k, Real(bits));
    for (std::size_t ii = k; ii-- > 0;) {
      Real s = g[ii];
      for (std::size_t jj = ii + 1; jj < k; ++jj) s -= r_cols[jj][ii] * y[jj];
      y[ii] = s / r_cols[ii][ii];
    }
    std::vector<Real> x(n, Real(bits));
    for (std::size_t jj = 0; jj < k; ++jj) {
      for (std::size_t i = 0; i < n; ++i) mpfr_fma(x[i].get(), y[jj].get(), basis[jj][i].get(), x[i].get(), kRnd);
    }
    return x;
  };

  const std::size_t limit = std::min<std::size_t>(n, static_cast<std::size_t>(options.max_iter));
  for (std::size_t j = 0; j < limit; ++j) {
    std::vector<Real> w = a.multiply(basis[j], bits);
    std::vector<Real> h(j + 2, Real(bits));
    for (int pass = 0; pass < 2; ++pass) {
      for (std::size_t i = 0; i <= j; ++i) {
        const Real c = dot(w, basis[i], bits);
        h[i] += c;
        axpy_neg(w, c, basis[i]);
      }
    }
    h[j + 1] = norm2(w, bits);
    const bool breakdown = h[j + 1] <= breakdown_floor;

    for (std::size_t i = 0; i < j; ++i) {
      Real t = cs[i] * h[i] + sn[i] * h[i + 1];
      h[i + 1] = cs[i] * h[i + 1] - sn[i] * h[i];
      h[i] = std::move(t);
    }
    Real radius(bits);
    mpfr_hypot(radius.get(), h[j].get(), h[j + 1].get(), kRnd);
    cs.push_back(h[j] / radius);
    sn.push_back(h[j + 1] / radius);
    h[j] = radius;
    h.resize(j + 1);
    r_cols.push_back(std::move(h));
    g.push_back(-(sn[j] * g[j]));
    g[j] = cs[j] * g[j];

    if (!breakdown) {
      const Real nw = norm2(w, bits);
      for (auto& v : w) v /= nw;
      basis.push_back(std::move(w));
    }

    const Real estimate = abs(g[j + 1]) / beta;
    const bool last = breakdown || j + 1 == limit;
    if (estimate <= tol || last) {
      std::vector<Real> x = current_solution(j + 1);
      Real residual = residual_norm(a, x, b, ctx);
      if (residual < best.report.relative_residual) {
        best.x = std::move(x);
        best.report.relative_residual = std::move(residual);
      }
      best.report.iterations = static_cast<int>(j + 1);
      if (best.report.relative_residual <= tol) {
        best.report.converged = true;
        return best;
      }
      if (breakdown) return best;
    }
  }
  best.report.iterations = static_cast<int>(limit);
  return best;
}

SolveResult lu_solve(const Matrix& a, const std::vector<Real>& b, const PrecisionContext& ctx) {
  check_shapes(a, b);
  const mpfr_prec_t bits = ctx.bits();
  const std::size_t n = a.rows();
  Matrix lu(n, n, bits);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) mpfr_set(lu(i, j).get(), a(i, j).get(), kRnd);
  }
  std::vector<Real> y(n, Real(bits));
  for (std::size_t i = 0; i < n; ++i) mpfr_set(y[i].get(), b[i].get(), kRnd);

  const Real pivot_floor = pow10(-(ctx.digits() - 10), bits) * a.max_abs();
  Real factor(bits);
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    for (std::size_t i = k + 1; i < n; ++i) {
      if (mpfr_cmpabs(lu(i, k).get(), lu(p, k).get()) > 0) p = i;
    }
    if (abs(lu(p, k)) <= pivot_floor) {
      throw SingularMatrix("matrix is numerically singular at column " + std::to_string(k));
    }
    if (p != k) {
      for (std::size_t j = 0; j < n; ++j) mpfr_swap(lu(p, j).get(), lu(k, j).get());
      mpfr_swap(y[p].get(), y[k].get());
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      if (lu(i, k).is_zero()) continue;
      mpfr_div(factor.get(), lu(i, k).get(), lu(k, k).get(), kRnd);
      mpfr_neg(factor.get(), factor.get(), kRnd);
      for (std::size_t j = k + 1; j < n; ++j) {
        mpfr_fma(lu(i, j).get(), factor.get(), lu(k, j).get(), lu(i, j).get(), kRnd);
      }
      mpfr_fma(y[i].get(), factor.get(), y[k].get(), y[i].get(), kRnd);
    }
  }

  std::vector<Real> x(n, Real(bits));
  for (std::size_t i = n; i-- > 0;) {
    Real s = y[i];
    for (std::size_t j = i + 1; j < n; ++j) {
      mpfr_neg(factor.get(), lu(i, j).get(), kRnd);
      mpfr_fma(s.get(), factor.get(), x[j].get(), s.get(), kRnd);
    }
    mpfr_div(x[i].get(), s.get(), lu(i, i).get(), kRnd);
  }

  SolveResult result;
  result.report.method = SolverMethod::lu;
  result.report.iterations = 1;
  result.report.converged = true;
  result.report.relative_residual = residual_norm(a, x, b, ctx);
  result.x = std::move(x);
  return result;
}

SolveResult solve(const Matrix& a, const std::vector<Real>& b, const SolveOptions& options,
                  const PrecisionContext& ctx) {
  return options.method == SolverMethod::gmres ? gmres_solve(a, b, options, ctx) : lu_solve(a, b, ctx);
}

}  // namespace dirichlet
