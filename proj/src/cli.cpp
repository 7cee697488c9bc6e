#include "dirichlet/cli.hpp"

#include <unistd.h>

#include <cstdio>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "CLI11.hpp"
#include "dirichlet/errors.hpp"
#include "dirichlet/lasso.hpp"
#include "dirichlet/lref.hpp"

namespace dirichlet {

namespace {

std::uint64_t fnv1a(const std::string& text) {
  std::uint64_t h = 1469598103934665603ULL;
  for (const unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string hex16(std::uint64_t v) {
  std::ostringstream s;
  s << std::hex << std::setw(16) << std::setfill('0') << v;
  return s.str();
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read " + path.string());
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string dump(const nlohmann::json& j) { return j.dump(2) + "\n"; }

std::string tol_string(double tol) {
  std::ostringstream s;
  s << std::setprecision(17) << tol;
  return s.str();
}

}  // namespace

void validate(const RunConfig& c) {
  if (!is_fundamental_discriminant(c.d) || (c.d > -3 && c.d < 3)) {
    throw ConfigError("d must be a fundamental discriminant with |d| >= 3");
  }
  if (c.M < 1) throw ConfigError("M must be positive");
  if (c.digits < PrecisionContext::kMinDigits) {
    throw ConfigError("digits must be at least " + std::to_string(PrecisionContext::kMinDigits));
  }
  const int k = c.effective_k();
  if (c.method == NodeMethod::full_zeros && k < 1) throw ConfigError("zeros method needs k >= 1");
  if (c.method == NodeMethod::gram_imag && k < 2) throw ConfigError("gram method needs k >= 2");
  if (!(c.tol > 0.0) || c.max_iter < 1) throw ConfigError("tol and max_iter must be positive");
  if (c.format != "json" && c.format != "csv") throw ConfigError("format must be json or csv");
}

TableCache::TableCache(std::filesystem::path dir) : dir_(std::move(dir)) {}

std::filesystem::path TableCache::path_for(const std::string& kind, const std::string& key) const {
  return dir_ / (kind + "-" + hex16(fnv1a(kind + "|" + key)) + ".json");
}

std::optional<std::string> TableCache::read(const std::string& kind, const std::string& key) const {
  if (!enabled()) return std::nullopt;
  const auto path = path_for(kind, key);
  if (!std::filesystem::exists(path)) return std::nullopt;
  return read_file(path);
}

void TableCache::write(const std::string& kind, const std::string& key, const std::string& content) const {
  if (!enabled()) return;
  std::filesystem::create_directories(dir_);
  write_file_atomic(path_for(kind, key), content);
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
  auto tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigError("cannot write " + tmp.string());
    out << content;
    if (!out.flush()) throw ConfigError("cannot write " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

std::string cached_gram_json(const RealPrimitiveCharacter& chi, long count, const PrecisionContext& ctx,
                             const TableCache& cache) {
  const std::string key = "d=" + std::to_string(chi.discriminant()) + "|M=" + std::to_string(count) +
                          "|digits=" + std::to_string(ctx.digits()) + "|method=gram";
  if (auto hit = cache.read("gram", key)) return *hit;
  const std::string text = dump(to_json(gram_table(chi, count, ctx)));
  cache.write("gram", key, text);
  return text;
}

std::string cached_zero_json(const RealPrimitiveCharacter& chi, long count, const PrecisionContext& ctx,
                             const TableCache& cache) {
  const std::string key = "d=" + std::to_string(chi.discriminant()) + "|M=" + std::to_string(count) +
                          "|digits=" + std::to_string(ctx.digits()) + "|method=zeros";
  if (auto hit = cache.read("zeros", key)) return *hit;
  const std::string text = dump(to_json(find_zeros(chi, count, ctx)));
  cache.write("zeros", key, text);
  return text;
}

GramTable cached_gram_table(const RealPrimitiveCharacter& chi, long count, const PrecisionContext& ctx,
                            const TableCache& cache) {
  return gram_table_from_json(nlohmann::json::parse(cached_gram_json(chi, count, ctx, cache)));
}

ZeroTable cached_zero_table(const RealPrimitiveCharacter& chi, long count, const PrecisionContext& ctx,
                            const TableCache& cache) {
  return zero_table_from_json(nlohmann::json::parse(cached_zero_json(chi, count, ctx, cache)));
}

nlohmann::json to_json(const SolveReport& r) {
  return {{"method", to_string(r.method)},
          {"iterations", r.iterations},
          {"relative_residual", r.relative_residual.to_string(6)},
          {"converged", r.converged}};
}

BuildOutcome build_approximant(const RunConfig& c, const TableCache& cache) {
  validate(c);
  const auto chi = RealPrimitiveCharacter::from_discriminant(c.d);
  const PrecisionContext ctx(c.digits);
  const int k = c.effective_k();

  std::string key = "d=" + std::to_string(c.d) + "|M=" + std::to_string(c.M) + "|k=" + std::to_string(k) +
                    "|digits=" + std::to_string(c.digits) + "|method=" + to_string(c.method) +
                    "|solver=" + to_string(c.solver) + "|coprime=" + (c.coprime_constraint ? "1" : "0");
  if (c.solver == SolverMethod::gmres) key += "|tol=" + tol_string(c.tol) + "|max_iter=" + std::to_string(c.max_iter);

  if (auto hit = cache.read("approximant", key)) {
    const auto j = nlohmann::json::parse(*hit);
    BuildOutcome o;
    o.approximant = approximant_from_json(j);
    const auto& r = j.at("solve_report");
    o.report.method = solver_method_from_string(r.at("method").get<std::string>());
    o.report.iterations = r.at("iterations").get<int>();
    o.report.relative_residual = real_from_json(r.at("relative_residual"), ctx.bits());
    o.report.converged = r.at("converged").get<bool>();
    o.from_cache = true;
    return o;
  }

  std::vector<Real> nodes;
  InterpolationSystem system;
  if (c.method == NodeMethod::gram_imag) {
    for (auto& e : cached_gram_table(chi, c.M, ctx, cache).entries) nodes.push_back(std::move(e.value));
    system = build_system_gram(chi, nodes, k, ctx, c.coprime_constraint);
  } else {
    for (auto& e : cached_zero_table(chi, c.M, ctx, cache).entries) nodes.push_back(std::move(e.value));
    system = build_system_full(chi, nodes, k, ctx, c.coprime_constraint);
  }
  const SolveResult result = solve(system.a, system.b, SolveOptions{c.solver, c.tol, c.max_iter}, ctx);

  BuildOutcome o;
  o.approximant = assemble_approximant(system, result.x, chi, ctx);
  o.report = result.report;
  if (o.report.converged) {
    auto j = to_json(o.approximant);
    j["solve_report"] = to_json(o.report);
    cache.write("approximant", key, dump(j));
  }
  return o;
}

namespace {

void emit(const RunConfig& c, const std::string& text, std::ostream& out) {
  if (c.out.empty()) {
    out << text;
  } else {
    write_file_atomic(c.out, text);
  }
}

std::string digits_csv_value(const Real& x, int digits) { return x.to_string(digits); }

std::vector<Complex> read_points(const std::string& file, const PrecisionContext& ctx) {
  std::istringstream in(read_file(file));
  std::vector<Complex> points;
  std::string line;
  while (std::getline(in, line)) {
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    for (auto& ch : line) {
      if (ch == ',') ch = ' ';
    }
    std::istringstream fields(line);
    std::string re, im;
    if (!(fields >> re)) continue;
    if (!(fields >> im)) throw ConfigError("points file needs 're im' per line: " + line);
    try {
      points.emplace_back(Real::from_string(re, ctx.bits()), Real::from_string(im, ctx.bits()));
    } catch (const std::exception&) {
      throw ConfigError("bad point in points file: " + line);
    }
  }
  if (points.empty()) throw ConfigError("points file is empty");
  return points;
}

std::string zero_csv(const ZeroTable& table) {
  std::string s = "m,gamma\n";
  for (const auto& e : table.entries) s += std::to_string(e.m) + "," + e.value.to_string(table.digits) + "\n";
  return s;
}

std::string gram_csv(const GramTable& table) {
  std::string s = "m,g,residual\n";
  for (const auto& e : table.entries) {
    s += std::to_string(e.m) + "," + e.value.to_string(table.digits) + "," + e.residual.to_string(3) + "\n";
  }
  return s;
}

int cmd_gram(const RunConfig& c, const TableCache& cache, std::ostream& out) {
  validate(c);
  const auto chi = RealPrimitiveCharacter::from_discriminant(c.d);
  const std::string text = cached_gram_json(chi, c.M, PrecisionContext(c.digits), cache);
  emit(c, c.format == "json" ? text : gram_csv(gram_table_from_json(nlohmann::json::parse(text))), out);
  return kExitOk;
}

int cmd_zeros(const RunConfig& c, const TableCache& cache, std::ostream& out) {
  validate(c);
  const auto chi = RealPrimitiveCharacter::from_discriminant(c.d);
  const std::string text = cached_zero_json(chi, c.M, PrecisionContext(c.digits), cache);
  emit(c, c.format == "json" ? text : zero_csv(zero_table_from_json(nlohmann::json::parse(text))), out);
  return kExitOk;
}

int cmd_build(const RunConfig& c, const TableCache& cache, std::ostream& out, std::ostream& err) {
  const BuildOutcome o = build_approximant(c, cache);
  if (c.format == "json") {
    auto j = to_json(o.approximant);
    j["solve_report"] = to_json(o.report);
    emit(c, dump(j), out);
  } else {
    emit(c, coefficients_csv(o.approximant), out);
  }
  err << "solve: " << to_json(o.report).dump() << "\n";
  return o.report.converged ? kExitOk : kExitNotConverged;
}

int cmd_eval_table(const RunConfig& c, const TableCache& cache, const std::string& points_file,
                   std::ostream& out) {
  const BuildOutcome o = build_approximant(c, cache);
  if (!o.report.converged) return kExitNotConverged;
  const auto chi = RealPrimitiveCharacter::from_discriminant(c.d);
  const PrecisionContext ctx(c.digits);
  const auto points = points_file.empty() ? standard_error_points(ctx) : read_points(points_file, ctx);
  const auto rows = error_table(o.approximant, chi, points, ctx);
  if (c.format == "json") {
    nlohmann::json j = nlohmann::json::array();
    for (const auto& r : rows) {
      j.push_back({{"s", to_json(r.s, 17)}, {"error", r.error.to_string(6)}});
    }
    emit(c, dump(j), out);
  } else {
    std::string s = "re_s,im_s,error\n";
    for (const auto& r : rows) {
      s += r.s.re.to_string(17) + "," + r.s.im.to_string(17) + "," + r.error.to_string(6) + "\n";
    }
    emit(c, s, out);
  }
  return kExitOk;
}

struct DiscoverOptions {
  long intervals = 0;  // 0: M for gram nodes, 2M for zero nodes
  long reference = 0;
  bool validate = false;
};

int cmd_discover(const RunConfig& c, const TableCache& cache, const DiscoverOptions& opt, std::ostream& out,
                 std::ostream& err) {
  const BuildOutcome o = build_approximant(c, cache);
  if (!o.report.converged) return kExitNotConverged;
  const auto chi = RealPrimitiveCharacter::from_discriminant(c.d);
  const PrecisionContext ctx(c.digits);
  std::optional<ZeroTable> reference;
  if (opt.reference > 0) reference = cached_zero_table(chi, opt.reference, ctx, cache);

  std::vector<DiscoveredZero> zeros;
  if (opt.validate) {
    if (!reference) throw ConfigError("--validate needs --reference");
    zeros = discover_from_reference(o.approximant, *reference, 1, opt.reference, ctx);
  } else {
    const long intervals = opt.intervals > 0 ? opt.intervals
                                             : (c.method == NodeMethod::gram_imag ? c.M : 2 * c.M);
    const GramTable gram = cached_gram_table(chi, intervals + 1, PrecisionContext(30), cache);
    zeros = discover_in_gram_intervals(o.approximant, chi, gram, reference ? &*reference : nullptr, ctx);
  }

  int failures = 0;
  for (const auto& z : zeros) failures += z.converged ? 0 : 1;
  if (c.format == "json") {
    nlohmann::json j = nlohmann::json::array();
    for (const auto& z : zeros) {
      nlohmann::json row{{"label", z.label},
                         {"s", to_json(z.s, ctx.digits())},
                         {"converged", z.converged},
                         {"iterations", z.iterations}};
      row["offset"] = z.offset ? to_json(*z.offset, 6) : nlohmann::json(nullptr);
      row["reference_index"] = z.reference_index ? nlohmann::json(*z.reference_index) : nlohmann::json(nullptr);
      j.push_back(std::move(row));
    }
    emit(c, dump(j), out);
  } else {
    std::string s = "label,re_s,im_s,converged,iterations,offset_re,offset_im\n";
    for (const auto& z : zeros) {
      s += z.label + "," + digits_csv_value(z.s.re, ctx.digits()) + "," + digits_csv_value(z.s.im, ctx.digits()) +
           "," + (z.converged ? "1" : "0") + "," + std::to_string(z.iterations) + "," +
           (z.offset ? z.offset->re.to_string(6) + "," + z.offset->im.to_string(6) : std::string(",")) + "\n";
    }
    emit(c, s, out);
  }
  err << "discover: " << zeros.size() << " zeros, " << failures << " failed seeds\n";
  for (const auto& z : zeros) {
    if (!z.converged) err << "  no convergence: " << z.label << "\n";
  }
  return kExitOk;
}

int cmd_lasso(const RunConfig& c, long features, std::optional<std::uint64_t> shuffle_seed, std::ostream& out,
              std::ostream& err) {
  if (!is_fundamental_discriminant(c.d) || (c.d > -3 && c.d < 3)) {
    throw ConfigError("d must be a fundamental discriminant with |d| >= 3");
  }
  if (c.format != "json" && c.format != "csv") throw ConfigError("format must be json or csv");
  const auto chi = RealPrimitiveCharacter::from_discriminant(c.d);
  const auto ex = run_lasso_experiment(chi, c.M, features, shuffle_seed);
  emit(c, c.format == "json" ? dump(to_json(ex)) : feature_csv(ex.report), out);
  err << "lasso: predicate gcd(n," << chi.modulus() << ")>1 => a_n=0 "
      << (ex.check.confirmed ? "confirmed" : "not confirmed") << "\n";
  return kExitOk;
}

void add_run_options(CLI::App* app, RunConfig& c, bool solver_options) {
  app->add_option("--d", c.d, "fundamental discriminant")->required();
  app->add_option("--M", c.M, "number of nodes or table length");
  app->add_option("--digits", c.digits, "decimal digits of working precision");
  app->add_option("--cache-dir", c.cache_dir, "table cache directory ('' disables)");
  app->add_option("--out", c.out, "output file (default stdout)");
  app->add_option("--format", c.format, "json or csv");
  if (!solver_options) return;
  app->add_option("--k", c.k, "number of fixed leading coefficients");
  app->add_option_function<std::string>(
      "--method", [&c](const std::string& m) { c.method = node_method_from_string(m); }, "zeros or gram");
  app->add_option_function<std::string>(
      "--solver", [&c](const std::string& s) { c.solver = solver_method_from_string(s); }, "gmres or lu");
  app->add_option("--tol", c.tol, "GMRES relative residual tolerance");
  app->add_option("--max-iter", c.max_iter, "GMRES iteration limit");
  app->add_flag("--no-coprime-constraint", [&c](std::int64_t) { c.coprime_constraint = false; },
                "use indices 1..N (demonstrates the unconstrained failure)");
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Finite Dirichlet series approximants of real primitive L-functions"};
  app.require_subcommand(1);
  RunConfig c;

  auto* gram = app.add_subcommand("gram", "generalized Gram points g_0..g_{M-1}");
  add_run_options(gram, c, false);
  auto* zeros = app.add_subcommand("zeros", "first M critical-line zeros");
  add_run_options(zeros, c, false);
  auto* build = app.add_subcommand("build", "interpolate and solve for the coefficients");
  add_run_options(build, c, true);
  auto* table = app.add_subcommand("eval-table", "|L - F| at sample points");
  add_run_options(table, c, true);
  std::string points_file;
  table->add_option("--points", points_file, "file of 're im' lines (default: standard 20 points)");
  auto* discover = app.add_subcommand("discover", "zeros of the approximant");
  add_run_options(discover, c, true);
  DiscoverOptions dopt;
  discover->add_option("--intervals", dopt.intervals, "Gram intervals to scan");
  discover->add_option("--reference", dopt.reference, "reference zeros used for labels and offsets");
  discover->add_flag("--validate", dopt.validate, "seed Newton at the reference zeros instead of scanning");
  auto* lasso = app.add_subcommand("lasso", "lasso support selection over a_1..a_features");
  add_run_options(lasso, c, false);
  long features = 60;
  std::optional<std::uint64_t> shuffle_seed;
  lasso->add_option("--features", features, "number of coefficients");
  lasso->add_option("--shuffle-seed", shuffle_seed, "permute the response first (control run)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitBadConfig;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kExitBadConfig;
  }

  try {
    const TableCache cache(c.cache_dir);
    if (gram->parsed()) return cmd_gram(c, cache, out);
    if (zeros->parsed()) return cmd_zeros(c, cache, out);
    if (build->parsed()) return cmd_build(c, cache, out, err);
    if (table->parsed()) return cmd_eval_table(c, cache, points_file, out);
    if (discover->parsed()) return cmd_discover(c, cache, dopt, out, err);
    return cmd_lasso(c, features, shuffle_seed, out, err);
  } catch (const SolverError& e) {
    err << "solver error: " << e.what() << "\n";
    return kExitNotConverged;
  } catch (const PrecisionFault& e) {
    err << "precision fault: " << e.what() << "\n";
    return kExitPrecisionFault;
  } catch (const DomainError& e) {
    // Raised inside the pipeline when a bracket or series loses its sign
    // change, i.e. the working precision was not enough.
    err << "precision fault: " << e.what() << "\n";
    return kExitPrecisionFault;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kExitBadConfig;
  }
}

}  // namespace dirichlet
