#pragma once

// Dense arbitrary-precision linear solvers: unrestarted GMRES and partial
// pivoting LU. Both report a relative residual recomputed from the returned x.

#include <string>
#include <vector>

#include "dirichlet/mpnum.hpp"

namespace dirichlet {

class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, mpfr_prec_t bits);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  Real& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const Real& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  /// A x at the given precision.
  std::vector<Real> multiply(const std::vector<Real>& x, mpfr_prec_t bits) const;
  /// max |a_ij|
  Real max_abs() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Real> data_;
};

enum class SolverMethod { gmres, lu };

std::string to_string(SolverMethod method);
/// "gmres" or "lu"; throws std::invalid_argument otherwise.
SolverMethod solver_method_from_string(const std::string& name);

struct SolveOptions {
  SolverMethod method = SolverMethod::lu;
  double tol = 1e-20;  // relative residual target
  int max_iter = 1000;
};

struct SolveReport {
  Real relative_residual;  // ||b - A x|| / ||b||, recomputed
  int iterations = 0;
  SolverMethod method = SolverMethod::lu;
  bool converged = false;
};

struct SolveResult {
  std::vector<Real> x;
  SolveReport report;
};

Real norm2(const std::vector<Real>& v, mpfr_prec_t bits);

/// ||b - A x||_2 / ||b||_2.
Real residual_norm(const Matrix& a, const std::vector<Real>& x, const std::vector<Real>& b,
                   const PrecisionContext& ctx);

/// Full GMRES from x0 = 0 with modified Gram-Schmidt Arnoldi (two passes) and
/// Givens rotations. Once the residual estimate drops below tol the true
/// residual is recomputed; iteration continues while it is still above tol.
/// Returns the best iterate with converged = false after max_iter steps.
SolveResult gmres_solve(const Matrix& a, const std::vector<Real>& b, const SolveOptions& options,
                        const PrecisionContext& ctx);

/// Partial pivoting LU. Throws SingularMatrix when a pivot falls below
/// 10^-(digits-10) max|a_ij|.
SolveResult lu_solve(const Matrix& a, const std::vector<Real>& b, const PrecisionContext& ctx);

/// Dispatch on options.method.
SolveResult solve(const Matrix& a, const std::vector<Real>& b, const SolveOptions& options,
                  const PrecisionContext& ctx);

}  // namespace dirichlet
