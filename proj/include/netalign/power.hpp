#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "netalign/align_operator.hpp"
#include "netalign/error.hpp"

namespace netalign {

// Power-iteration baseline: x <- B_hat x / ||B_hat x||_1 from a uniform start
// until ||B_hat x - x||_1 <= tol. The 1-norm renormalization keeps the iterate
// on the simplex against floating-point drift. Returns the iterate whose
// measured residual passed the test.
inline std::vector<double> power_iterate(const AlignOperator& op, double tol,
                                         std::size_t max_iters) {
  const std::size_t dim = op.dim();
  std::vector<double> x(dim, 1.0 / static_cast<double>(dim));
  double residual = std::numeric_limits<double>::infinity();
  for (std::size_t it = 0; it < max_iters; ++it) {
    auto y = op.apply_bhat(x);
    residual = 0.0;
    for (std::size_t i = 0; i < dim; ++i) residual += std::abs(y[i] - x[i]);
    if (residual <= tol) return x;
    const double norm = detail::l1_norm(y);
    if (!(norm > 0.0)) {
      throw numeric_error("power iteration lost all mass", it, residual);
    }
    for (auto& v : y) v /= norm;
    x = std::move(y);
  }
  throw numeric_error("power iteration did not converge", max_iters, residual);
}

}  // namespace netalign
