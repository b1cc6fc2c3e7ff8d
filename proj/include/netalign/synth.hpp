#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "netalign/error.hpp"
#include "netalign/graph.hpp"
#include "netalign/rng.hpp"
#include "netalign/similarity.hpp"

namespace netalign {

struct SynthConfig {
  std::size_t query_size = 6;
  std::size_t target_size = 50;
  double edge_prob = 0.1;  // background density on top of the odd spanning cycle
  double bias = 49.0;      // planted pairs score 1 + bias, background 1
  double noise = 0.0;      // adds U[0, noise) to every similarity entry
  std::uint64_t seed = 0;
};

// A benchmark instance with known ground truth: the query is a connected
// induced subgraph of the target, and the similarity table favors the true
// pairs. truth[i] = (query node i, its target image).
struct PlantedInstance {
  Graph query;
  Graph target;
  SimilarityTable sim;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> truth;
};

// Target = random spanning cycle (plus a chord closing an odd cycle when the
// node count is even) with Erdos-Renyi edges on top, so it is always
// connected and non-bipartite. The query is grown as a random connected
// induced subgraph.
inline PlantedInstance make_planted(const SynthConfig& cfg) {
  if (cfg.target_size < 3) {
    throw config_error("target needs at least 3 nodes to carry an odd cycle");
  }
  if (cfg.query_size < 1 || cfg.query_size > cfg.target_size) {
    throw config_error("query size must lie in [1, target size]");
  }
  if (!(cfg.edge_prob >= 0.0 && cfg.edge_prob <= 1.0)) {
    throw config_error("edge probability must lie in [0, 1]");
  }
  if (!(cfg.noise >= 0.0)) throw config_error("noise must be nonnegative");
  if (!(cfg.bias >= 0.0)) throw config_error("bias must be nonnegative");

  Rng rng(cfg.seed);
  const auto nt = static_cast<std::uint32_t>(cfg.target_size);
  const auto nq = static_cast<std::uint32_t>(cfg.query_size);

  std::set<std::pair<std::uint32_t, std::uint32_t>> edge_set;
  auto add_edge = [&](std::uint32_t a, std::uint32_t b) {
    edge_set.emplace(std::min(a, b), std::max(a, b));
  };

  std::vector<std::uint32_t> order(nt);
  for (std::uint32_t i = 0; i < nt; ++i) order[i] = i;
  rng.shuffle(order);
  for (std::uint32_t i = 0; i < nt; ++i) add_edge(order[i], order[(i + 1) % nt]);
  if (nt % 2 == 0) add_edge(order[0], order[2]);  // triangle keeps the odd cycle

  for (std::uint32_t u = 0; u < nt; ++u) {
    for (std::uint32_t v = u + 1; v < nt; ++v) {
      if (rng.real01() < cfg.edge_prob) add_edge(u, v);
    }
  }

  std::vector<std::string> target_labels(nt);
  for (std::uint32_t v = 0; v < nt; ++v) target_labels[v] = "t" + std::to_string(v);
  std::vector<std::pair<std::uint32_t, std::uint32_t>> target_edges(edge_set.begin(),
                                                                    edge_set.end());
  Graph target(std::move(target_labels), std::move(target_edges));

  // Grow a connected node set; the induced subgraph is the query.
  std::vector<std::uint32_t> chosen;
  std::vector<char> in_chosen(nt, 0);
  {
    const auto start = static_cast<std::uint32_t>(rng.index(nt));
    chosen.push_back(start);
    in_chosen[start] = 1;
    while (chosen.size() < nq) {
      std::vector<std::uint32_t> frontier;
      for (auto u : chosen) {
        for (auto v : target.neighbors(u)) {
          if (!in_chosen[v]) frontier.push_back(v);
        }
      }
      const auto pick = frontier[rng.index(frontier.size())];
      chosen.push_back(pick);
      in_chosen[pick] = 1;
    }
  }

  std::vector<std::string> query_labels(nq);
  for (std::uint32_t i = 0; i < nq; ++i) query_labels[i] = "q" + std::to_string(i);
  std::vector<std::pair<std::uint32_t, std::uint32_t>> query_edges;
  for (std::uint32_t i = 0; i < nq; ++i) {
    for (std::uint32_t j = i + 1; j < nq; ++j) {
      if (target.has_edge(chosen[i], chosen[j])) query_edges.emplace_back(i, j);
    }
  }
  Graph query(std::move(query_labels), std::move(query_edges));

  PlantedInstance inst{std::move(query), std::move(target), SimilarityTable{}, {}};
  for (std::uint32_t i = 0; i < nq; ++i) inst.truth.emplace_back(i, chosen[i]);
  for (std::uint32_t i = 0; i < nq; ++i) {
    for (std::uint32_t v = 0; v < nt; ++v) {
      double score = 1.0 + (chosen[i] == v ? cfg.bias : 0.0);
      if (cfg.noise > 0.0) score += cfg.noise * rng.real01();
      inst.sim.set(i, v, score);
    }
  }
  return inst;
}

}  // namespace netalign
