#pragma once

#include <cstdint>
#include <cstdio>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "netalign/graph.hpp"

namespace netalign {

struct MatchPair {
  std::uint32_t query = 0;
  std::uint32_t target = 0;
  double score = 0.0;
};

// One-to-one node correspondence, pairs in descending score order.
struct Matching {
  std::vector<MatchPair> pairs;
  double coverage = 0.0;  // matched fraction of query nodes
};

// Greedy read-out of the score vector seen as a query_nodes x target_nodes
// matrix: repeatedly take the globally largest remaining positive entry and
// retire its row and column. Ties go to the smallest (row, column) pair.
inline Matching extract_matching(std::span<const double> x, std::size_t query_nodes,
                                 std::size_t target_nodes) {
  if (x.size() != query_nodes * target_nodes) {
    throw std::invalid_argument("extract_matching: score vector has wrong length");
  }
  Matching m;
  std::vector<char> row_done(query_nodes, 0);
  std::vector<char> col_done(target_nodes, 0);
  while (m.pairs.size() < query_nodes) {
    double best = 0.0;
    std::size_t bq = 0;
    std::size_t bt = 0;
    bool found = false;
    for (std::size_t q = 0; q < query_nodes; ++q) {
      if (row_done[q]) continue;
      const std::size_t base = q * target_nodes;
      for (std::size_t t = 0; t < target_nodes; ++t) {
        if (col_done[t]) continue;
        const double v = x[base + t];
        if (v > best) {  // strict: first hit keeps the smallest (q, t)
          best = v;
          bq = q;
          bt = t;
          found = true;
        }
      }
    }
    if (!found) break;
    m.pairs.push_back({static_cast<std::uint32_t>(bq),
                       static_cast<std::uint32_t>(bt), best});
    row_done[bq] = 1;
    col_done[bt] = 1;
  }
  m.coverage = query_nodes == 0
                   ? 0.0
                   : static_cast<double>(m.pairs.size()) / static_cast<double>(query_nodes);
  return m;
}

// Fraction of reference pairs recovered, over the query-node count (the truth
// covers every query node).
inline double accuracy(const Matching& m,
                       const std::vector<std::pair<std::uint32_t, std::uint32_t>>& truth) {
  if (truth.empty()) return 0.0;
  std::unordered_set<std::uint64_t> want;
  want.reserve(truth.size());
  for (auto [q, t] : truth) {
    want.insert((static_cast<std::uint64_t>(q) << 32) | t);
  }
  std::size_t hits = 0;
  for (const auto& pair : m.pairs) {
    const std::uint64_t key =
        (static_cast<std::uint64_t>(pair.query) << 32) | pair.target;
    if (want.count(key)) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(truth.size());
}

// "query_label<TAB>target_label<TAB>score" lines.
inline std::string matching_tsv(const Matching& m, const Graph& query,
                                const Graph& target) {
  std::string out;
  char buf[64];
  for (const auto& pair : m.pairs) {
    std::snprintf(buf, sizeof(buf), "%.12g", pair.score);
    out += query.label(pair.query);
    out += '\t';
    out += target.label(pair.target);
    out += '\t';
    out += buf;
    out += '\n';
  }
  return out;
}

}  // namespace netalign
