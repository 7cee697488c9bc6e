#include "dirichlet/lasso.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>

#include "dirichlet/errors.hpp"
#include "dirichlet/gramzero.hpp"
#include "dirichlet/lref.hpp"

namespace dirichlet {

Design build_design(const RealPrimitiveCharacter& chi, const std::vector<double>& heights,
                    const std::vector<long>& indices, int digits) {
  if (heights.empty() || indices.empty()) throw std::invalid_argument("empty lasso design");
  const PrecisionContext ctx(digits);
  Design design;
  design.rows = 2 * heights.size();
  design.indices = indices;
  design.cols.assign(indices.size(), std::vector<double>(design.rows));
  design.y.resize(design.rows);
  const std::size_t half = heights.size();
  for (std::size_t i = 0; i < half; ++i) {
    const double t = heights[i];
    for (std::size_t j = 0; j < indices.size(); ++j) {
      const double n = static_cast<double>(indices[j]);
      const double mag = 1.0 / std::sqrt(n);
      const double phase = t * std::log(n);
      design.cols[j][i] = mag * std::cos(phase);
      design.cols[j][half + i] = -mag * std::sin(phase);
    }
    const Complex s(Real(0.5, ctx.bits()), Real(t, ctx.bits()));
    const LValue l = l_value(chi, s, ctx);
    design.y[i] = l.value.re.to_double();
    design.y[half + i] = l.value.im.to_double();
  }
  return design;
}

void normalize_columns(Design& design) {
  for (auto& col : design.cols) {
    const double norm = std::sqrt(std::inner_product(col.begin(), col.end(), col.begin(), 0.0));
    if (norm == 0.0) throw std::invalid_argument("zero design column");
    for (auto& v : col) v /= norm;
  }
}

double lambda_max(const Design& design) {
  double m = 0.0;
  for (const auto& col : design.cols) {
    m = std::max(m, std::abs(std::inner_product(col.begin(), col.end(), design.y.begin(), 0.0)));
  }
  return m / static_cast<double>(design.rows);
}

std::vector<double> lambda_grid(const Design& design, int count, double ratio) {
  if (count < 2 || !(ratio > 0.0 && ratio < 1.0)) throw std::invalid_argument("bad lambda grid");
  const double top = lambda_max(design);
  std::vector<double> grid(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    grid[static_cast<std::size_t>(i)] = top * std::pow(ratio, static_cast<double>(i) / (count - 1));
  }
  grid.front() = top;
  return grid;
}

namespace {

double soft_threshold(double z, double gamma) {
  if (z > gamma) return z - gamma;
  if (z < -gamma) return z + gamma;
  return 0.0;
}

}  // namespace

FeatureReport lasso_path(const Design& design, const std::vector<double>& lambdas, double threshold,
                         long max_sweeps) {
  const std::size_t p = design.cols.size();
  const double n = static_cast<double>(design.rows);

  // Covariance updates: with unit-norm columns x_j^T r = c_j - (G beta)_j.
  std::vector<double> c(p);
  std::vector<std::vector<double>> gram(p, std::vector<double>(p));
  for (std::size_t j = 0; j < p; ++j) {
    const auto& xj = design.cols[j];
    c[j] = std::inner_product(xj.begin(), xj.end(), design.y.begin(), 0.0);
    for (std::size_t k = 0; k <= j; ++k) {
      const auto& xk = design.cols[k];
      gram[j][k] = gram[k][j] = std::inner_product(xj.begin(), xj.end(), xk.begin(), 0.0);
    }
  }

  FeatureReport report;
  report.lambdas = lambdas;
  report.indices = design.indices;
  report.threshold = threshold;
  std::vector<double> beta(p, 0.0), g_beta(p, 0.0);
  for (const double lambda : lambdas) {
    const double gamma = n * lambda;
    long sweep = 0;
    for (;; ++sweep) {
      if (sweep >= max_sweeps) throw SolverError("lasso coordinate descent did not converge");
      double max_change = 0.0;
      for (std::size_t j = 0; j < p; ++j) {
        const double z = c[j] - g_beta[j] + gram[j][j] * beta[j];
        const double next = soft_threshold(z, gamma) / gram[j][j];
        const double delta = next - beta[j];
        if (delta != 0.0) {
          for (std::size_t k = 0; k < p; ++k) g_beta[k] += delta * gram[k][j];
          beta[j] = next;
          max_change = std::max(max_change, std::abs(delta));
        }
      }
      if (max_change < threshold) break;
    }
    report.path.push_back(beta);
  }

  report.vanish_lambda.assign(p, 0.0);
  for (std::size_t j = 0; j < p; ++j) {
    for (std::size_t i = 0; i < lambdas.size(); ++i) {
      if (report.path[i][j] != 0.0) {
        report.vanish_lambda[j] = i == 0 ? lambdas[0] : lambdas[i - 1];
        break;
      }
    }
  }

  // Ties (typically features never active) are broken by |beta| at the
  // smallest lambda, then by index.
  std::vector<std::size_t> order(p);
  std::iota(order.begin(), order.end(), 0);
  const auto& last = report.path.empty() ? std::vector<double>(p, 0.0) : report.path.back();
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (report.vanish_lambda[a] != report.vanish_lambda[b]) {
      return report.vanish_lambda[a] > report.vanish_lambda[b];
    }
    return std::abs(last[a]) > std::abs(last[b]);
  });
  report.rank.assign(p, 0);
  for (std::size_t r = 0; r < p; ++r) report.rank[order[r]] = static_cast<int>(r + 1);

  // Heuristic path continuity: between adjacent grid points no coefficient
  // should move by more than 10x the relative grid step times the path scale.
  for (std::size_t i = 1; i < report.path.size(); ++i) {
    const double step = lambdas[i - 1] / lambdas[i] - 1.0;
    double scale = 0.0;
    for (const double v : report.path[i]) scale = std::max(scale, std::abs(v));
    for (std::size_t j = 0; j < p; ++j) {
      if (std::abs(report.path[i][j] - report.path[i - 1][j]) > 10.0 * step * scale) {
        ++report.continuity_flags;
      }
    }
  }
  return report;
}

ConstraintCheck constraint_recommendation(const FeatureReport& report, std::int64_t q) {
  ConstraintCheck check;
  check.min_coprime_vanish = INFINITY;
  bool any_coprime = false, any_noncoprime = false;
  for (std::size_t j = 0; j < report.indices.size(); ++j) {
    if (std::gcd(static_cast<std::int64_t>(report.indices[j]), q) > 1) {
      any_noncoprime = true;
      check.max_noncoprime_vanish = std::max(check.max_noncoprime_vanish, report.vanish_lambda[j]);
    } else {
      any_coprime = true;
      check.min_coprime_vanish = std::min(check.min_coprime_vanish, report.vanish_lambda[j]);
    }
  }
  if (!any_coprime || !any_noncoprime) throw std::invalid_argument("need both coprime and non-coprime features");
  for (std::size_t j = 0; j < report.indices.size(); ++j) {
    if (std::gcd(static_cast<std::int64_t>(report.indices[j]), q) > 1 &&
        report.vanish_lambda[j] >= check.min_coprime_vanish) {
      check.violations.push_back(report.indices[j]);
    }
  }
  check.confirmed = check.violations.empty();
  return check;
}

LassoExperiment run_lasso_experiment(const RealPrimitiveCharacter& chi, long gram_count, long features,
                                     std::optional<std::uint64_t> shuffle_seed) {
  if (gram_count < 1 || features < 2) throw std::invalid_argument("bad lasso experiment size");
  const PrecisionContext ctx(30);
  LassoExperiment ex;
  ex.d = chi.discriminant();
  ex.gram_count = gram_count;
  ex.features = features;
  ex.shuffle_seed = shuffle_seed;
  ex.t_min = gram_point(chi, 0, ctx).to_double();
  ex.t_max = gram_point(chi, gram_count, ctx).to_double();
  ex.samples = static_cast<std::size_t>(4 * features);

  std::vector<double> heights(ex.samples);
  for (std::size_t i = 0; i < ex.samples; ++i) {
    heights[i] = ex.t_min + (ex.t_max - ex.t_min) * static_cast<double>(i) / static_cast<double>(ex.samples - 1);
  }
  std::vector<long> indices(static_cast<std::size_t>(features));
  std::iota(indices.begin(), indices.end(), 1L);

  Design design = build_design(chi, heights, indices);
  if (shuffle_seed) {
    // Permute whole samples so each L value keeps its real/imaginary pair.
    std::vector<std::size_t> perm(ex.samples);
    std::iota(perm.begin(), perm.end(), 0);
    std::mt19937_64 rng(*shuffle_seed);
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<double> y(design.rows);
    for (std::size_t i = 0; i < ex.samples; ++i) {
      y[i] = design.y[perm[i]];
      y[ex.samples + i] = design.y[ex.samples + perm[i]];
    }
    design.y = std::move(y);
  }
  normalize_columns(design);
  ex.report = lasso_path(design, lambda_grid(design));
  ex.check = constraint_recommendation(ex.report, chi.modulus());
  return ex;
}

nlohmann::json to_json(const LassoExperiment& ex) {
  nlohmann::json features = nlohmann::json::array();
  for (std::size_t j = 0; j < ex.report.indices.size(); ++j) {
    features.push_back({{"n", ex.report.indices[j]},
                        {"vanish_lambda", ex.report.vanish_lambda[j]},
                        {"rank", ex.report.rank[j]}});
  }
  nlohmann::json j{{"d", ex.d},
                   {"gram_count", ex.gram_count},
                   {"features", ex.features},
                   {"samples", ex.samples},
                   {"t_range", {ex.t_min, ex.t_max}},
                   {"lambda_max", ex.report.lambdas.empty() ? 0.0 : ex.report.lambdas.front()},
                   {"lambda_min", ex.report.lambdas.empty() ? 0.0 : ex.report.lambdas.back()},
                   {"threshold", ex.report.threshold},
                   {"continuity_flags", ex.report.continuity_flags},
                   {"feature_report", features},
                   {"recommendation",
                    {{"predicate", "gcd(n,q)>1 => a_n=0"},
                     {"confirmed", ex.check.confirmed},
                     {"max_noncoprime_vanish_lambda", ex.check.max_noncoprime_vanish},
                     {"min_coprime_vanish_lambda", ex.check.min_coprime_vanish},
                     {"violations", ex.check.violations}}}};
  j["shuffle_seed"] = ex.shuffle_seed ? nlohmann::json(*ex.shuffle_seed) : nlohmann::json(nullptr);
  return j;
}

std::string feature_csv(const FeatureReport& report) {
  std::ostringstream out;
  out.precision(17);
  out << "index,vanish_lambda,rank\n";
  for (std::size_t j = 0; j < report.indices.size(); ++j) {
    out << report.indices[j] << ',' << report.vanish_lambda[j] << ',' << report.rank[j] << '\n';
  }
  return out.str();
}

}  // namespace dirichlet
