#pragma once

#include <atomic>
#include <cmath>
#include <cstdint>
#include <limits>
#include <memory>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "netalign/error.hpp"
#include "netalign/graph.hpp"
#include "netalign/similarity.hpp"

namespace netalign {

namespace detail {

inline double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double l2_norm(std::span<const double> a) { return std::sqrt(dot(a, a)); }

inline double l1_norm(std::span<const double> a) {
  double s = 0.0;
  for (double v : a) s += std::abs(v);
  return s;
}

inline double sum(std::span<const double> a) {
  double s = 0.0;
  for (double v : a) s += v;
  return s;
}

}  // namespace detail

// Implicit linear operator E = B_hat - I over the product space of two graphs,
// where B_hat = alpha * Bbar + (1 - alpha) * sbar * 1^T, Bbar is the
// column-normalized Kronecker-product adjacency, and sbar is the 1-normalized
// similarity vector. The sparse part is stored in column-major access order;
// the rank-one part stays symbolic. Product coordinate (u, v) maps to the
// flat index u * target_size + v.
//
// Immutable after construction; all apply kernels are const and safe to run
// concurrently on a shared operator. Kernel counters are atomic.
class AlignOperator {
 public:
  struct TouchStats {
    std::uint64_t gradient_calls = 0;
    std::uint64_t gradient_columns = 0;
    std::uint64_t block_apply_calls = 0;
    std::uint64_t block_apply_columns = 0;
    std::uint64_t full_applies = 0;
    std::uint64_t max_call_columns = 0;  // widest single block-kernel call
  };

  struct Stats {
    std::size_t query_nodes = 0;
    std::size_t target_nodes = 0;
    std::size_t dim = 0;
    std::uint64_t nnz = 0;
    std::size_t zero_degree_columns = 0;
    double min_column_sum = 0.0;  // over Bbar columns with nonzero degree
    double max_column_sum = 0.0;
  };

  std::size_t query_size() const noexcept { return na_; }
  std::size_t target_size() const noexcept { return nb_; }
  std::size_t dim() const noexcept { return dim_; }
  double alpha() const noexcept { return alpha_; }
  bool has_similarity() const noexcept { return !sbar_.empty(); }
  std::span<const double> sbar() const noexcept { return sbar_; }
  std::size_t zero_degree_columns() const noexcept { return zero_degree_columns_; }

  std::size_t flat_index(std::uint32_t u, std::uint32_t v) const {
    return static_cast<std::size_t>(u) * nb_ + v;
  }

  std::uint64_t nnz() const noexcept { return col_ptr_.back(); }

  std::span<const std::uint32_t> column_rows(std::size_t c) const {
    return {row_idx_.data() + col_ptr_[c], row_idx_.data() + col_ptr_[c + 1]};
  }

  // Value shared by every nonzero of Bbar's column c (1/product-degree).
  double column_value(std::size_t c) const { return col_value_[c]; }

  // y = B_hat * x, dense exact result.
  std::vector<double> apply_bhat(std::span<const double> x) const {
    require_dim(x.size());
    counters_->full_applies.fetch_add(1, std::memory_order_relaxed);
    std::vector<double> y(dim_, 0.0);
    scatter_columns(x, y);
    add_rank_one(y, detail::sum(x));
    return y;
  }

  // y = E * x = B_hat * x - x.
  std::vector<double> apply_E(std::span<const double> x) const {
    require_dim(x.size());
    counters_->full_applies.fetch_add(1, std::memory_order_relaxed);
    std::vector<double> y(dim_, 0.0);
    scatter_columns(x, y);
    add_rank_one(y, detail::sum(x));
    for (std::size_t i = 0; i < dim_; ++i) y[i] -= x[i];
    return y;
  }

  // E applied to a vector supported on the given coordinates: touches only
  // those sparse columns plus one dense pass for the rank-one term. The
  // `_into` form reuses the caller's buffer.
  void apply_E_block_into(std::span<const std::uint32_t> indices,
                          std::span<const double> values,
                          std::vector<double>& y) const {
    if (indices.size() != values.size()) {
      throw std::invalid_argument("apply_E_block: index/value size mismatch");
    }
    record_block_call(counters_->block_apply_calls, counters_->block_apply_columns,
                      indices.size());
    y.assign(dim_, 0.0);
    double mass = 0.0;
    for (std::size_t t = 0; t < indices.size(); ++t) {
      const std::size_t c = indices[t];
      if (c >= dim_) throw std::out_of_range("apply_E_block: index out of range");
      mass += values[t];
      const double w = alpha_ * col_value_[c] * values[t];
      if (w == 0.0) continue;
      for (auto r : column_rows(c)) y[r] += w;
    }
    add_rank_one(y, mass);
    for (std::size_t t = 0; t < indices.size(); ++t) y[indices[t]] -= values[t];
  }

  std::vector<double> apply_E_block(std::span<const std::uint32_t> indices,
                                    std::span<const double> values) const {
    std::vector<double> y;
    apply_E_block_into(indices, values, y);
    return y;
  }

  // (E^T p) restricted to the given coordinates: entry t is the inner product
  // of E's column indices[t] with p. Equals the partial gradient of
  // f(x) = 0.5 * ||E x||^2 when p = E x.
  void partial_gradient_into(std::span<const std::uint32_t> indices,
                             std::span<const double> p,
                             std::vector<double>& g) const {
    require_dim(p.size());
    record_block_call(counters_->gradient_calls, counters_->gradient_columns,
                      indices.size());
    const double sdot =
        sbar_.empty() ? 0.0 : (1.0 - alpha_) * detail::dot(sbar_, p);
    g.assign(indices.size(), 0.0);
    for (std::size_t t = 0; t < indices.size(); ++t) {
      const std::size_t c = indices[t];
      if (c >= dim_) throw std::out_of_range("partial_gradient: index out of range");
      double colsum = 0.0;
      for (auto r : column_rows(c)) colsum += p[r];
      g[t] = alpha_ * col_value_[c] * colsum + sdot - p[c];
    }
  }

  std::vector<double> partial_gradient(std::span<const std::uint32_t> indices,
                                       std::span<const double> p) const {
    std::vector<double> g;
    partial_gradient_into(indices, p, g);
    return g;
  }

  Stats stats() const {
    Stats s;
    s.query_nodes = na_;
    s.target_nodes = nb_;
    s.dim = dim_;
    s.nnz = nnz();
    s.zero_degree_columns = zero_degree_columns_;
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < dim_; ++c) {
      if (col_value_[c] == 0.0) continue;
      double cs = 0.0;
      for (std::size_t k = col_ptr_[c]; k < col_ptr_[c + 1]; ++k) cs += col_value_[c];
      lo = std::min(lo, cs);
      hi = std::max(hi, cs);
    }
    if (lo > hi) lo = hi = 0.0;  // every column dangling
    s.min_column_sum = lo;
    s.max_column_sum = hi;
    return s;
  }

  // Key-value text report of operator statistics.
  std::string diagnostic_report() const {
    const Stats s = stats();
    std::ostringstream out;
    out << "query_nodes: " << s.query_nodes << '\n'
        << "target_nodes: " << s.target_nodes << '\n'
        << "dim: " << s.dim << '\n'
        << "alpha: " << alpha_ << '\n'
        << "nnz: " << s.nnz << '\n'
        << "zero_degree_columns: " << s.zero_degree_columns << '\n'
        << "column_sum_min: " << s.min_column_sum << '\n'
        << "column_sum_max: " << s.max_column_sum << '\n';
    return out.str();
  }

  TouchStats touch_stats() const {
    TouchStats t;
    t.gradient_calls = counters_->gradient_calls.load(std::memory_order_relaxed);
    t.gradient_columns = counters_->gradient_columns.load(std::memory_order_relaxed);
    t.block_apply_calls = counters_->block_apply_calls.load(std::memory_order_relaxed);
    t.block_apply_columns =
        counters_->block_apply_columns.load(std::memory_order_relaxed);
    t.full_applies = counters_->full_applies.load(std::memory_order_relaxed);
    t.max_call_columns = counters_->max_call_columns.load(std::memory_order_relaxed);
    return t;
  }

  void reset_touch_stats() const {
    counters_->gradient_calls.store(0, std::memory_order_relaxed);
    counters_->gradient_columns.store(0, std::memory_order_relaxed);
    counters_->block_apply_calls.store(0, std::memory_order_relaxed);
    counters_->block_apply_columns.store(0, std::memory_order_relaxed);
    counters_->full_applies.store(0, std::memory_order_relaxed);
    counters_->max_call_columns.store(0, std::memory_order_relaxed);
  }

  friend AlignOperator build_operator(const Graph& query, const Graph& target,
                                      const SimilarityTable& sim, double alpha);

 private:
  AlignOperator() = default;

  void require_dim(std::size_t got) const {
    if (got != dim_) {
      throw std::invalid_argument("vector length " + std::to_string(got) +
                                  " does not match operator dim " +
                                  std::to_string(dim_));
    }
  }

  void scatter_columns(std::span<const double> x, std::vector<double>& y) const {
    if (alpha_ == 0.0) return;
    for (std::size_t c = 0; c < dim_; ++c) {
      const double w = alpha_ * col_value_[c] * x[c];
      if (w == 0.0) continue;
      for (auto r : column_rows(c)) y[r] += w;
    }
  }

  void add_rank_one(std::vector<double>& y, double mass) const {
    if (sbar_.empty() || mass == 0.0) return;
    const double w = (1.0 - alpha_) * mass;
    for (std::size_t i = 0; i < dim_; ++i) y[i] += w * sbar_[i];
  }

  struct Counters {
    std::atomic<std::uint64_t> gradient_calls{0};
    std::atomic<std::uint64_t> gradient_columns{0};
    std::atomic<std::uint64_t> block_apply_calls{0};
    std::atomic<std::uint64_t> block_apply_columns{0};
    std::atomic<std::uint64_t> full_applies{0};
    std::atomic<std::uint64_t> max_call_columns{0};
  };

  void record_block_call(std::atomic<std::uint64_t>& calls,
                         std::atomic<std::uint64_t>& columns,
                         std::size_t width) const {
    calls.fetch_add(1, std::memory_order_relaxed);
    columns.fetch_add(width, std::memory_order_relaxed);
    auto& mx = counters_->max_call_columns;
    std::uint64_t cur = mx.load(std::memory_order_relaxed);
    while (cur < width && !mx.compare_exchange_weak(cur, width, std::memory_order_relaxed)) {
    }
  }

  std::size_t na_ = 0;
  std::size_t nb_ = 0;
  std::size_t dim_ = 0;
  double alpha_ = 1.0;
  std::vector<std::uint64_t> col_ptr_;
  std::vector<std::uint32_t> row_idx_;
  std::vector<double> col_value_;  // 1/product-degree per column, 0 if dangling
  std::vector<double> sbar_;       // empty iff alpha == 1
  std::size_t zero_degree_columns_ = 0;
  std::unique_ptr<Counters> counters_ = std::make_unique<Counters>();
};

// Builds the operator for a graph pair. With alpha = 1 both graphs must be
// connected and non-bipartite (the random walk must be ergodic); with
// alpha < 1 the similarity total must be positive. Zero-degree product
// columns are fatal at alpha = 1 and are counted (their Bbar column treated
// as zero) otherwise.
inline AlignOperator build_operator(const Graph& query, const Graph& target,
                                    const SimilarityTable& sim, double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    throw config_error("alpha must lie in [0, 1]");
  }
  const std::size_t na = query.node_count();
  const std::size_t nb = target.node_count();
  if (na == 0 || nb == 0) throw validation_error("graphs must be non-empty");
  if (nb != 0 && na > std::numeric_limits<std::uint32_t>::max() / nb) {
    throw config_error("product dimension overflows 32-bit indexing");
  }
  const std::size_t dim = na * nb;

  if (alpha == 1.0) {
    const auto report = validate_pair(query, target);
    auto fail = [](const char* side, const char* what) {
      throw validation_error(std::string(side) + " graph is " + what +
                             "; alpha = 1 requires connected, non-bipartite inputs");
    };
    if (!report.query.connected) fail("query", "not connected");
    if (!report.target.connected) fail("target", "not connected");
    if (report.query.bipartite) fail("query", "a bipartite graph");
    if (report.target.bipartite) fail("target", "a bipartite graph");
  } else if (!(sim.total() > 0.0)) {
    throw validation_error(
        "similarity table must have positive total when alpha < 1");
  }

  AlignOperator op;
  op.na_ = na;
  op.nb_ = nb;
  op.dim_ = dim;
  op.alpha_ = alpha;

  op.col_ptr_.assign(dim + 1, 0);
  op.col_value_.assign(dim, 0.0);
  std::string offenders;
  std::size_t offender_count = 0;
  for (std::uint32_t u = 0; u < na; ++u) {
    const std::uint64_t du = query.degree(u);
    for (std::uint32_t v = 0; v < nb; ++v) {
      const std::uint64_t cnt = du * target.degree(v);
      const std::size_t c = op.flat_index(u, v);
      op.col_ptr_[c + 1] = cnt;
      if (cnt == 0) {
        ++op.zero_degree_columns_;
        if (alpha == 1.0 && offender_count < 5) {
          offenders += " (" + query.label(u) + ", " + target.label(v) + ")";
          ++offender_count;
        }
      } else {
        op.col_value_[c] = 1.0 / static_cast<double>(cnt);
      }
    }
  }
  if (alpha == 1.0 && op.zero_degree_columns_ > 0) {
    throw validation_error("zero-degree product columns with alpha = 1:" + offenders);
  }
  for (std::size_t c = 0; c < dim; ++c) op.col_ptr_[c + 1] += op.col_ptr_[c];

  op.row_idx_.resize(op.col_ptr_.back());
  for (std::uint32_t u = 0; u < na; ++u) {
    for (std::uint32_t v = 0; v < nb; ++v) {
      std::size_t k = op.col_ptr_[op.flat_index(u, v)];
      for (auto a : query.neighbors(u)) {
        const std::size_t base = static_cast<std::size_t>(a) * nb;
        for (auto b : target.neighbors(v)) {
          op.row_idx_[k++] = static_cast<std::uint32_t>(base + b);
        }
      }
    }
  }

  if (alpha < 1.0) {
    op.sbar_.assign(dim, 0.0);
    const double total = sim.total();
    for (const auto& [key, score] : sim.entries()) {
      op.sbar_[op.flat_index(key.first, key.second)] = score / total;
    }
  }
  return op;
}

}  // namespace netalign
