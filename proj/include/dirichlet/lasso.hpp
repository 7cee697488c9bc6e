#pragma once

// Lasso feature selection over Dirichlet-series coefficients, in double
// precision. Used to decide which coefficients a_n can be pinned to zero.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dirichlet/characters.hpp"
#include "json.hpp"

namespace dirichlet {

struct Design {
  std::size_t rows = 0;
  std::vector<long> indices;             // feature n for each column
  std::vector<std::vector<double>> cols;  // column-major
  std::vector<double> y;
};

/// Rows are [Re, Im] of n^{-s} stacked per sample s = 1/2 + i t; y holds
/// [Re, Im] of L(s, chi) computed at `digits`.
Design build_design(const RealPrimitiveCharacter& chi, const std::vector<double>& heights,
                    const std::vector<long>& indices, int digits = 30);

/// Scales each column to unit Euclidean norm. Throws on a zero column.
void normalize_columns(Design& design);

/// ||X^T y||_inf / rows: the smallest lambda with an all-zero solution.
double lambda_max(const Design& design);

/// `count` log-spaced values from lambda_max down to lambda_max * ratio.
std::vector<double> lambda_grid(const Design& design, int count = 100, double ratio = 1e-6);

struct FeatureReport {
  std::vector<double> lambdas;                  // descending
  std::vector<long> indices;
  std::vector<std::vector<double>> path;        // path[i][j] = beta_j at lambdas[i]
  std::vector<double> vanish_lambda;            // per feature; 0 if never active
  std::vector<int> rank;                        // 1 = most important
  int continuity_flags = 0;
  double threshold = 1e-12;
};

/// Coordinate descent on (1/2 rows) ||y - X beta||^2 + lambda ||beta||_1 along
/// the grid with warm starts. A feature's vanish-lambda is the grid value just
/// above its entry point: for all larger lambda its coefficient is zero.
/// Throws SolverError if a fit needs more than max_sweeps sweeps.
FeatureReport lasso_path(const Design& design, const std::vector<double>& lambdas,
                         double threshold = 1e-12, long max_sweeps = 100000);

struct ConstraintCheck {
  bool confirmed = false;
  double max_noncoprime_vanish = 0.0;
  double min_coprime_vanish = 0.0;
  std::vector<long> violations;  // non-coprime indices ranked above some coprime index
};

/// Confirms the predicate gcd(n, q) > 1 => a_n = 0 when every non-coprime
/// feature vanishes (as lambda grows) before every coprime one.
ConstraintCheck constraint_recommendation(const FeatureReport& report, std::int64_t q);

struct LassoExperiment {
  std::int64_t d = 0;
  long gram_count = 100;
  long features = 60;
  std::size_t samples = 0;
  double t_min = 0.0;
  double t_max = 0.0;
  std::optional<std::uint64_t> shuffle_seed;
  FeatureReport report;
  ConstraintCheck check;
};

/// The standard experiment: 4 x features heights evenly spaced on
/// [g_0, g_gram_count], features n = 1..features. With a shuffle seed the
/// sample rows of y are permuted first (negative control).
LassoExperiment run_lasso_experiment(const RealPrimitiveCharacter& chi, long gram_count = 100,
                                     long features = 60,
                                     std::optional<std::uint64_t> shuffle_seed = std::nullopt);

nlohmann::json to_json(const LassoExperiment& experiment);
/// "index,vanish_lambda,rank" rows.
std::string feature_csv(const FeatureReport& report);

}  // namespace dirichlet
