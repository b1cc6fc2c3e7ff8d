#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "netalign/align_operator.hpp"
#include "netalign/error.hpp"
#include "netalign/partition.hpp"
#include "netalign/rng.hpp"

namespace netalign {

// Stochastic block-coordinate Frank-Wolfe for min 0.5*||E x||^2 over the unit
// simplex. Each iteration draws a random block, takes the partial gradient
// there, moves block mass onto the best single coordinate (the closed-form
// block linear-minimization oracle), and steps with the exact quadratic line
// search. The residual p = E x is tracked incrementally so one iteration
// touches only the chosen block's sparse columns plus O(dim) rank-one work.

enum class StoppingRule {
  prose,    // ||p|| <= xi * ||x||
  literal,  // p^T p < xi * ||x||
};

struct SolverConfig {
  std::size_t blocks = 10;        // n
  double xi = 0.1;                // stopping threshold
  std::size_t max_iters = 100000;
  std::uint64_t seed = 0;
  std::size_t refresh_every = 1000;  // exact p recompute period; 0 disables
  bool repartition = true;           // fresh random partition each iteration
  StoppingRule stopping = StoppingRule::prose;
  bool collect_trace = true;
};

struct TraceRecord {
  std::size_t k = 0;
  std::size_t block_id = 0;
  std::size_t block_size = 0;
  double gamma = 0.0;
  double objective = 0.0;  // 0.5*||p||^2 after the step
  double residual = 0.0;   // ||p|| before the step, as seen by the stop test
  double lmo_value = 0.0;  // grad_i^T (s - x) = p^T q - p^T p, always <= 0
};

struct SolveResult {
  std::vector<double> x;
  std::size_t iterations = 0;  // completed update steps == trace length
  bool converged = false;
  bool stalled = false;         // ended on `blocks` consecutive zero steps
  double final_residual = 0.0;  // freshly recomputed ||E x||
  std::vector<TraceRecord> trace;
};

struct InitVector {
  std::vector<double> x;
  std::size_t block_id = 0;
};

// Feasible sparse start: picks a random block and spreads the unit mass
// uniformly over it (1/|block|, which is n/dim when the sizes divide evenly).
inline InitVector init_x(const BlockPartition& partition, Rng& rng) {
  InitVector out;
  out.block_id = rng.index(partition.block_count());
  const auto idx = partition.block(out.block_id);
  out.x.assign(partition.dim(), 0.0);
  const double v = 1.0 / static_cast<double>(idx.size());
  for (auto c : idx) out.x[c] = v;
  return out;
}

inline InitVector init_x(std::size_t dim, std::size_t blocks, Rng& rng) {
  return init_x(BlockPartition(dim, blocks, rng), rng);
}

struct LmoResult {
  std::uint32_t j = 0;          // receiving coordinate (global index)
  double mass = 0.0;            // L, total x-mass of the block
  std::vector<double> s_block;  // candidate restricted to the block: mass at j
};

// Closed-form block LMO over the simplex: s = x - U_i x + L e_j with j the
// block coordinate of smallest partial gradient. `indices` must be sorted
// ascending; ties therefore resolve to the smallest coordinate index.
inline LmoResult block_lmo(std::span<const double> x,
                           std::span<const double> grad_block,
                           std::span<const std::uint32_t> indices) {
  if (indices.empty()) throw std::invalid_argument("block_lmo: empty block");
  if (grad_block.size() != indices.size()) {
    throw std::invalid_argument("block_lmo: gradient/index size mismatch");
  }
  LmoResult r;
  double mass = 0.0;
  std::size_t best = 0;
  for (std::size_t t = 0; t < indices.size(); ++t) {
    mass += x[indices[t]];
    if (grad_block[t] < grad_block[best]) best = t;
  }
  r.j = indices[best];
  r.mass = mass;
  r.s_block.assign(indices.size(), 0.0);
  r.s_block[best] = mass;
  return r;
}

// Exact minimizer of the quadratic 0.5*||p + g(q - p)||^2 over g in [0, 1].
inline double optimal_step(double pp, double pq, double qq) {
  const double denom = pp - 2.0 * pq + qq;  // ||p - q||^2
  if (!(denom > 1e-18)) return 0.0;         // s == x, nothing to move
  const double gamma_hat = (pp - pq) / denom;
  if (gamma_hat <= 0.0) return 0.0;
  return gamma_hat < 1.0 ? gamma_hat : 1.0;
}

// q = E s for the candidate s, via one block-sparse apply of (L e_j - U_i x).
inline std::vector<double> compute_q(std::span<const double> p,
                                     const AlignOperator& op,
                                     std::span<const std::uint32_t> indices,
                                     double mass, std::uint32_t j,
                                     std::span<const double> x_block) {
  std::vector<double> diff(indices.size());
  for (std::size_t t = 0; t < indices.size(); ++t) {
    diff[t] = (indices[t] == j ? mass : 0.0) - x_block[t];
  }
  auto q = op.apply_E_block(indices, diff);
  for (std::size_t r = 0; r < q.size(); ++r) q[r] += p[r];
  return q;
}

// p <- p + gamma * E(s - x), the incremental residual update.
inline void update_p(std::vector<double>& p, double gamma, const AlignOperator& op,
                     std::span<const std::uint32_t> indices,
                     std::span<const double> s_block,
                     std::span<const double> x_block) {
  if (gamma == 0.0) return;
  std::vector<double> diff(indices.size());
  for (std::size_t t = 0; t < indices.size(); ++t) diff[t] = s_block[t] - x_block[t];
  const auto d = op.apply_E_block(indices, diff);
  for (std::size_t r = 0; r < p.size(); ++r) p[r] += gamma * d[r];
}

// Per-iteration snapshot handed to an observer; spans are valid only during
// the callback. x and p are post-step, x_prev_block holds the block's values
// before the step (outside the block x did not change).
struct IterationView {
  std::size_t k = 0;
  std::size_t block_id = 0;
  std::span<const std::uint32_t> indices;
  std::uint32_t j = 0;
  double mass = 0.0;
  double gamma = 0.0;
  double objective = 0.0;
  double residual = 0.0;
  double lmo_value = 0.0;
  bool refreshed = false;  // p was exactly recomputed at the top of this iteration
  std::span<const double> x;
  std::span<const double> p;
  std::span<const double> q;
  std::span<const double> s_block;
  std::span<const double> x_prev_block;
};

using SolveObserver = std::function<void(const IterationView&)>;

inline SolveResult solve(const AlignOperator& op, const SolverConfig& cfg,
                         const SolveObserver& observer = {}) {
  const std::size_t dim = op.dim();
  if (cfg.blocks < 1 || cfg.blocks > dim) {
    throw config_error("block count must lie in [1, dim]");
  }
  if (!(cfg.xi > 0.0)) throw config_error("xi must be positive");
  if (cfg.max_iters < 1) throw config_error("max_iters must be at least 1");

  Rng rng(cfg.seed);
  SolveResult result;
  std::vector<double> x;
  std::vector<double> p;
  BlockPartition partition(dim, cfg.blocks, rng);
  std::size_t zero_steps = 0;

  // Workspace reused across iterations.
  std::vector<double> grad;
  std::vector<double> x_block;
  std::vector<double> diff;
  std::vector<double> d;
  std::vector<double> q(dim);

  const auto stop_hit = [&](double pp, double pnorm, double xnorm) {
    return cfg.stopping == StoppingRule::prose ? pnorm <= cfg.xi * xnorm
                                               : pp < cfg.xi * xnorm;
  };

  for (std::size_t k = 0; k < cfg.max_iters; ++k) {
    if (k > 0 && cfg.repartition) {
      partition.reshuffle(rng);
    }
    const std::size_t i = rng.index(partition.block_count());
    const auto indices = partition.block(i);
    bool refreshed = false;

    if (k == 0) {
      x.assign(dim, 0.0);
      const double v0 = 1.0 / static_cast<double>(indices.size());
      for (auto c : indices) x[c] = v0;
      x_block.assign(indices.size(), v0);
      op.apply_E_block_into(indices, x_block, p);  // x is supported on this block
    } else if (cfg.refresh_every > 0 && k % cfg.refresh_every == 0) {
      p = op.apply_E(x);
      refreshed = true;
    }

    double pp = detail::dot(p, p);
    double pnorm = std::sqrt(pp);
    const double xnorm = detail::l2_norm(x);
    if (stop_hit(pp, pnorm, xnorm)) {
      // Confirm on an exactly recomputed residual before declaring success.
      p = op.apply_E(x);
      refreshed = true;
      pp = detail::dot(p, p);
      pnorm = std::sqrt(pp);
      if (stop_hit(pp, pnorm, xnorm)) {
        result.converged = true;
        result.final_residual = pnorm;
        result.iterations = k;
        result.x = std::move(x);
        return result;
      }
    }

    op.partial_gradient_into(indices, p, grad);
    const auto lmo = block_lmo(x, grad, indices);
    x_block.resize(indices.size());
    for (std::size_t t = 0; t < indices.size(); ++t) x_block[t] = x[indices[t]];

    // d = E(s - x); on the block s - x is L e_j - U_i x, so q = p + d and the
    // tracked update p += gamma*d reuse the same block-sparse apply.
    diff.resize(indices.size());
    for (std::size_t t = 0; t < indices.size(); ++t) {
      diff[t] = lmo.s_block[t] - x_block[t];
    }
    op.apply_E_block_into(indices, diff, d);
    for (std::size_t r = 0; r < dim; ++r) q[r] = p[r] + d[r];

    const double pq = detail::dot(p, q);
    const double qq = detail::dot(q, q);
    const double gamma = optimal_step(pp, pq, qq);
    const double lmo_value = pq - pp;

    if (gamma != 0.0) {
      for (auto c : indices) x[c] *= (1.0 - gamma);
      x[lmo.j] += gamma * lmo.mass;
      for (std::size_t r = 0; r < dim; ++r) p[r] += gamma * d[r];
      zero_steps = 0;
    } else {
      ++zero_steps;
    }

    const double objective = 0.5 * detail::dot(p, p);
    if (!std::isfinite(objective) || !std::isfinite(gamma)) {
      throw numeric_error("non-finite solver state", k, pnorm);
    }
    result.iterations = k + 1;
    if (cfg.collect_trace) {
      result.trace.push_back(
          {k, i, indices.size(), gamma, objective, pnorm, lmo_value});
    }
    if (observer) {
      IterationView view;
      view.k = k;
      view.block_id = i;
      view.indices = indices;
      view.j = lmo.j;
      view.mass = lmo.mass;
      view.gamma = gamma;
      view.objective = objective;
      view.residual = pnorm;
      view.lmo_value = lmo_value;
      view.refreshed = refreshed;
      view.x = x;
      view.p = p;
      view.q = q;
      view.s_block = lmo.s_block;
      view.x_prev_block = x_block;
      observer(view);
    }

    // A full round of zero steps means no block offers descent; confirm with
    // an exact residual and stop rather than spin.
    if (zero_steps >= cfg.blocks) {
      p = op.apply_E(x);
      const double fpp = detail::dot(p, p);
      const double fnorm = std::sqrt(fpp);
      result.stalled = true;
      result.converged = stop_hit(fpp, fnorm, detail::l2_norm(x));
      result.final_residual = fnorm;
      result.x = std::move(x);
      return result;
    }
  }

  const auto fresh = op.apply_E(x);
  result.converged = false;
  result.final_residual = detail::l2_norm(fresh);
  result.x = std::move(x);
  return result;
}

}  // namespace netalign
