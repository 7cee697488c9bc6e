#pragma once

#include <gmpxx.h>

#include <vector>

namespace dirichlet {

/// Exact even Bernoulli numbers B_2, B_4, ..., B_{2*count}.
///
/// Computed from tangent numbers with integer-only arithmetic and cached
/// process-wide; the cache only grows.
std::vector<mpq_class> bernoulli_even(int count);

}  // namespace dirichlet
