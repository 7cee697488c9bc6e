#pragma once

// Finite Dirichlet series approximants F(s) = sum a_n n^{-s} of L(s, chi),
// fitted by interpolation at critical-line zeros or at Gram points.

#include <optional>
#include <string>
#include <vector>

#include "dirichlet/characters.hpp"
#include "dirichlet/gramzero.hpp"
#include "dirichlet/mpnum.hpp"
#include "dirichlet/solve.hpp"
#include "json.hpp"

namespace dirichlet {

/// full_zeros: F(rho_m) = 0 at M zeros, real and imaginary rows (N - k = 2M).
/// gram_imag: Im F(1/2 + i g_m) = 0 at M Gram points (N - k = M, k >= 2).
enum class NodeMethod { full_zeros, gram_imag };

std::string to_string(NodeMethod method);
/// Accepts "full_zeros"/"zeros" and "gram_imag"/"gram".
NodeMethod node_method_from_string(const std::string& name);

/// First N naturals coprime to q, ascending. Throws for q < 3 or N < 1.
std::vector<long> coprime_indices(std::int64_t q, long count);

struct IndexScheme {
  std::int64_t q = 0;
  int k = 0;
  bool coprime_constraint = true;
  std::vector<long> indices;  // I
  std::vector<long> fixed;    // J, the first k entries of I

  long size() const noexcept { return static_cast<long>(indices.size()); }
  /// I \ J
  std::vector<long> free_indices() const { return {indices.begin() + k, indices.end()}; }
};

/// N = 2M + k (full_zeros) or M + k (gram_imag). Without the coprime
/// constraint I is simply 1..N.
IndexScheme make_index_scheme(std::int64_t q, long nodes, int k, NodeMethod method,
                              bool coprime_constraint = true);

struct InterpolationSystem {
  Matrix a;
  std::vector<Real> b;
  IndexScheme scheme;
  std::vector<Real> nodes;
  NodeMethod method = NodeMethod::full_zeros;
};

/// Rows Re(n^{-1/2 - i x_m}) for m = 1..M, then Im(...) for m = 1..M, over the
/// columns n in I \ J; b = -(fixed-column contribution). Requires k >= 1.
InterpolationSystem build_system_full(const RealPrimitiveCharacter& chi,
                                      const std::vector<Real>& zeros, int k,
                                      const PrecisionContext& ctx, bool coprime_constraint = true);

/// Rows Im(n^{-1/2 - i g_m}); requires k >= 2 (k = 1 makes b vanish).
InterpolationSystem build_system_gram(const RealPrimitiveCharacter& chi,
                                      const std::vector<Real>& gram_points, int k,
                                      const PrecisionContext& ctx, bool coprime_constraint = true);

struct Approximant {
  std::int64_t d = 0;
  NodeMethod method = NodeMethod::full_zeros;
  long nodes = 0;  // M
  int k = 0;
  int digits = 0;
  bool coprime_constraint = true;
  std::string node_digest;
  std::vector<std::pair<long, Real>> coefficients;  // ascending n
};

/// FNV-1a hash of the nodes' decimal strings, as 16 hex digits.
std::string node_digest(const std::vector<Real>& nodes, int digits);

/// a_n = chi(n) on J, the solved values on I \ J.
Approximant assemble_approximant(const InterpolationSystem& system, const std::vector<Real>& solution,
                                 const RealPrimitiveCharacter& chi, const PrecisionContext& ctx);

/// sum a_n n^{-s}
Complex evaluate(const Approximant& f, const Complex& s, const PrecisionContext& ctx);
/// F(s) and F'(s) = -sum a_n log(n) n^{-s} in one pass.
std::pair<Complex, Complex> evaluate_with_derivative(const Approximant& f, const Complex& s,
                                                     const PrecisionContext& ctx);

/// full_zeros: |F(1/2 + i x_m)|; gram_imag: |Im F(1/2 + i g_m)|.
std::vector<Real> node_residuals(const Approximant& f, const InterpolationSystem& system,
                                 const PrecisionContext& ctx);

/// sum |a_n| n^{-1/2}, the scale against which F loses digits to cancellation
/// on the critical line.
double coefficient_scale(const Approximant& f);

/// Digits needed to see F to ~25 significant digits on the critical line.
int scan_digits(const Approximant& f);

struct ErrorRow {
  Complex s;
  Complex l_value;
  Complex f_value;
  Real error;
};

std::vector<ErrorRow> error_table(const Approximant& f, const RealPrimitiveCharacter& chi,
                                  const std::vector<Complex>& points, const PrecisionContext& ctx);

/// The 20 standard sample points: left half-plane, Re s = -1/2, Re s = 0, the
/// critical line and the right half-plane at heights 100, 300, 500, 640.
std::vector<Complex> standard_error_points(const PrecisionContext& ctx);

struct DiscoveredZero {
  std::string label;
  Complex s;
  bool converged = false;
  int iterations = 0;
  std::optional<Complex> offset;  // s - (1/2 + i gamma_ref)
  std::optional<long> reference_index;
};

/// Complex Newton on F from s0; stops when the step is below 10^-(digits-25).
DiscoveredZero newton_zero(const Approximant& f, const Complex& s0, const PrecisionContext& ctx,
                           int max_iterations = 100);

/// Validation mode: Newton seeded at reference zeros m = first..last.
std::vector<DiscoveredZero> discover_from_reference(const Approximant& f, const ZeroTable& reference,
                                                    long first, long last, const PrecisionContext& ctx);

/// Discovery mode: sign changes of Re(e^{i theta(t)} F(1/2 + it)) on each Gram
/// interval (split into `subdivisions` pieces), then complex Newton. When a
/// reference table is given each zero is labelled with the nearest reference
/// zero and its offset.
std::vector<DiscoveredZero> discover_in_gram_intervals(const Approximant& f,
                                                       const RealPrimitiveCharacter& chi,
                                                       const GramTable& gram,
                                                       const ZeroTable* reference,
                                                       const PrecisionContext& ctx,
                                                       int subdivisions = 8);

nlohmann::json to_json(const Approximant& f);
Approximant approximant_from_json(const nlohmann::json& j);
/// "n,a_n" rows with a header line.
std::string coefficients_csv(const Approximant& f);

}  // namespace dirichlet
