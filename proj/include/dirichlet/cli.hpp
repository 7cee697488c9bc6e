#pragma once

// Command-line front end: configuration, the on-disk table cache and the
// subcommands gram, zeros, build, eval-table, discover and lasso.

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "dirichlet/gramzero.hpp"
#include "dirichlet/interp.hpp"
#include "dirichlet/solve.hpp"

namespace dirichlet {

enum ExitCode : int {
  kExitOk = 0,
  kExitNotConverged = 2,
  kExitPrecisionFault = 3,
  kExitBadConfig = 4,
};

struct RunConfig {
  std::int64_t d = -4;
  long M = 100;
  int k = 0;  // 0 selects the method default: 1 for zeros, 2 for gram
  NodeMethod method = NodeMethod::gram_imag;
  int digits = PrecisionContext::kDefaultDigits;
  SolverMethod solver = SolverMethod::lu;
  double tol = 1e-20;
  int max_iter = 1000;
  std::string cache_dir = ".dirichlet-cache";  // empty disables caching
  std::string out;                               // empty writes to stdout
  std::string format = "json";
  bool coprime_constraint = true;

  int effective_k() const { return k != 0 ? k : (method == NodeMethod::full_zeros ? 1 : 2); }
};

/// Throws ConfigError when the configuration violates a module precondition.
void validate(const RunConfig& config);

/// Files named by a hash of their key; writes go to a temporary file in the
/// same directory and are renamed into place.
class TableCache {
 public:
  explicit TableCache(std::filesystem::path dir);

  bool enabled() const { return !dir_.empty(); }
  std::filesystem::path path_for(const std::string& kind, const std::string& key) const;
  std::optional<std::string> read(const std::string& kind, const std::string& key) const;
  void write(const std::string& kind, const std::string& key, const std::string& content) const;

 private:
  std::filesystem::path dir_;
};

/// Atomic replace of `path` with `content`.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

/// Serialized text of the table; cache hits return the stored bytes.
std::string cached_gram_json(const RealPrimitiveCharacter& chi, long count, const PrecisionContext& ctx,
                             const TableCache& cache);
std::string cached_zero_json(const RealPrimitiveCharacter& chi, long count, const PrecisionContext& ctx,
                             const TableCache& cache);
GramTable cached_gram_table(const RealPrimitiveCharacter& chi, long count, const PrecisionContext& ctx,
                            const TableCache& cache);
ZeroTable cached_zero_table(const RealPrimitiveCharacter& chi, long count, const PrecisionContext& ctx,
                            const TableCache& cache);

struct BuildOutcome {
  Approximant approximant;
  SolveReport report;
  bool from_cache = false;
};

/// Nodes from the cache (or computed), interpolation system, solve. Converged
/// results are cached under a key of every field that affects them.
BuildOutcome build_approximant(const RunConfig& config, const TableCache& cache);

nlohmann::json to_json(const SolveReport& report);

/// Parses `args` (without the program name) and runs one subcommand. Errors
/// are reported on `err` and mapped to ExitCode values.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace dirichlet
