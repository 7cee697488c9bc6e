#include "dirichlet/bernoulli.hpp"

#include <algorithm>
#include <mutex>

namespace dirichlet {

namespace {

// Tangent numbers T_1, T_3, ..., T_{2n-1} by the in-place integer recurrence
// of Brent and Harvey; O(n^2) big-integer operations.
std::vector<mpz_class> tangent_numbers(int n) {
  std::vector<mpz_class> t(static_cast<std::size_t>(n) + 1);
  if (n == 0) return t;
  t[1] = 1;
  for (int k = 2; k <= n; ++k) t[k] = (k - 1) * t[k - 1];
  for (int k = 2; k <= n; ++k) {
    for (int j = k; j <= n; ++j) {
      t[j] = (j - k) * t[j - 1] + (j - k + 2) * t[j];
    }
  }
  return t;
}

}  // namespace

std::vector<mpq_class> bernoulli_even(int count) {
  static std::mutex mutex;
  static std::vector<mpq_class> cache;

  std::lock_guard lock(mutex);
  if (static_cast<int>(cache.size()) < count) {
    const int n = std::max(count, 2 * static_cast<int>(cache.size()));
    const auto t = tangent_numbers(n);
    std::vector<mpq_class> fresh;
    fresh.reserve(n);
    for (int k = 1; k <= n; ++k) {
      mpz_class four_k;
      mpz_ui_pow_ui(four_k.get_mpz_t(), 4, static_cast<unsigned long>(k));
      mpq_class b(mpz_class(2 * k) * t[k], four_k * (four_k - 1));
      b.canonicalize();
      if (k % 2 == 0) b = -b;
      fresh.push_back(std::move(b));
    }
    cache = std::move(fresh);
  }
  return {cache.begin(), cache.begin() + count};
}

}  // namespace dirichlet
