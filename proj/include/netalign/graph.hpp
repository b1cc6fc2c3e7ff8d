#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "netalign/error.hpp"

namespace netalign {

// Undirected simple graph over string-labelled nodes. Neighbor lists are kept
// sorted; construction rejects self-loops and collapses duplicate edges.
// Immutable after construction.
class Graph {
 public:
  Graph(std::vector<std::string> labels,
        std::vector<std::pair<std::uint32_t, std::uint32_t>> edges)
      : labels_(std::move(labels)) {
    const auto n = static_cast<std::uint32_t>(labels_.size());
    index_.reserve(n);
    for (std::uint32_t i = 0; i < n; ++i) {
      if (!index_.emplace(labels_[i], i).second) {
        throw validation_error("duplicate node label \"" + labels_[i] + "\"");
      }
    }
    std::vector<std::pair<std::uint32_t, std::uint32_t>> uniq;
    uniq.reserve(edges.size());
    for (auto [u, v] : edges) {
      if (u >= n || v >= n) {
        throw validation_error("edge endpoint index out of range");
      }
      if (u == v) {
        throw validation_error("self-loop at node \"" + labels_[u] + "\"");
      }
      uniq.emplace_back(std::min(u, v), std::max(u, v));
    }
    std::sort(uniq.begin(), uniq.end());
    uniq.erase(std::unique(uniq.begin(), uniq.end()), uniq.end());
    edge_count_ = uniq.size();

    offsets_.assign(n + 1, 0);
    for (auto [u, v] : uniq) {
      ++offsets_[u + 1];
      ++offsets_[v + 1];
    }
    for (std::size_t i = 1; i < offsets_.size(); ++i) offsets_[i] += offsets_[i - 1];
    adj_.resize(2 * edge_count_);
    std::vector<std::uint32_t> cursor(offsets_.begin(), offsets_.end() - 1);
    for (auto [u, v] : uniq) {
      adj_[cursor[u]++] = v;
      adj_[cursor[v]++] = u;
    }
    for (std::uint32_t i = 0; i < n; ++i) {
      std::sort(adj_.begin() + offsets_[i], adj_.begin() + offsets_[i + 1]);
    }
  }

  std::size_t node_count() const noexcept { return labels_.size(); }
  std::size_t edge_count() const noexcept { return edge_count_; }

  std::uint32_t degree(std::uint32_t v) const { return offsets_[v + 1] - offsets_[v]; }

  std::span<const std::uint32_t> neighbors(std::uint32_t v) const {
    return {adj_.data() + offsets_[v], adj_.data() + offsets_[v + 1]};
  }

  bool has_edge(std::uint32_t u, std::uint32_t v) const {
    const auto nb = neighbors(u);
    return std::binary_search(nb.begin(), nb.end(), v);
  }

  const std::string& label(std::uint32_t v) const { return labels_[v]; }
  const std::vector<std::string>& labels() const noexcept { return labels_; }

  std::optional<std::uint32_t> index_of(std::string_view label) const {
    auto it = index_.find(std::string(label));
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

 private:
  std::vector<std::string> labels_;
  std::unordered_map<std::string, std::uint32_t> index_;
  std::vector<std::uint32_t> offsets_;  // CSR offsets, size node_count()+1
  std::vector<std::uint32_t> adj_;      // sorted neighbor lists
  std::size_t edge_count_ = 0;
};

// Parses a line-oriented edge list: two whitespace-separated labels per line,
// '#'-prefixed comment lines and blank lines skipped. Labels are indexed in
// first-appearance order; duplicate edges collapse silently.
inline Graph load_edge_list(std::string_view text) {
  std::vector<std::string> labels;
  std::unordered_map<std::string, std::uint32_t> seen;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
  auto intern = [&](std::string&& token) {
    auto it = seen.find(token);
    if (it != seen.end()) return it->second;
    const auto id = static_cast<std::uint32_t>(labels.size());
    seen.emplace(token, id);
    labels.push_back(std::move(token));
    return id;
  };

  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream ls(line);
    std::string a, b, extra;
    if (!(ls >> a >> b) || (ls >> extra)) {
      throw parse_error("line " + std::to_string(line_no) +
                            ": expected two node labels, got \"" + line + "\"",
                        line_no);
    }
    if (a == b) {
      throw validation_error("self-loop at node \"" + a + "\" (line " +
                             std::to_string(line_no) + ")");
    }
    const auto u = intern(std::move(a));
    const auto v = intern(std::move(b));
    edges.emplace_back(u, v);
  }
  return Graph(std::move(labels), std::move(edges));
}

// Canonical edge-list text: one "u v" line per edge with u < v by label,
// lines sorted by label pair, so the text is independent of index order.
inline std::string to_edge_list(const Graph& g) {
  std::vector<std::pair<std::string, std::string>> lines;
  lines.reserve(g.edge_count());
  for (std::uint32_t u = 0; u < g.node_count(); ++u) {
    for (auto v : g.neighbors(u)) {
      if (v > u) {
        const auto& a = g.label(u);
        const auto& b = g.label(v);
        lines.emplace_back(std::min(a, b), std::max(a, b));
      }
    }
  }
  std::sort(lines.begin(), lines.end());
  std::string out;
  for (const auto& [a, b] : lines) {
    out += a;
    out += ' ';
    out += b;
    out += '\n';
  }
  return out;
}

struct GraphCheck {
  bool connected = false;
  bool bipartite = false;                // exact 2-coloring over all components
  std::vector<std::string> isolated;     // labels of zero-degree nodes
};

struct ValidationReport {
  GraphCheck query;
  GraphCheck target;
};

inline GraphCheck check_graph(const Graph& g) {
  const auto n = static_cast<std::uint32_t>(g.node_count());
  GraphCheck r;
  std::vector<std::int8_t> color(n, -1);
  std::size_t components = 0;
  bool two_colorable = true;
  std::vector<std::uint32_t> stack;
  for (std::uint32_t s = 0; s < n; ++s) {
    if (color[s] != -1) continue;
    ++components;
    color[s] = 0;
    stack.assign(1, s);
    while (!stack.empty()) {
      const auto u = stack.back();
      stack.pop_back();
      for (auto v : g.neighbors(u)) {
        if (color[v] == -1) {
          color[v] = static_cast<std::int8_t>(1 - color[u]);
          stack.push_back(v);
        } else if (color[v] == color[u]) {
          two_colorable = false;
        }
      }
    }
  }
  r.connected = (components == 1);
  r.bipartite = two_colorable;
  for (std::uint32_t v = 0; v < n; ++v) {
    if (g.degree(v) == 0) r.isolated.push_back(g.label(v));
  }
  return r;
}

// Pure report; the caller decides what is fatal (a pure-topology alignment
// requires both graphs connected and non-bipartite).
inline ValidationReport validate_pair(const Graph& query, const Graph& target) {
  if (query.node_count() == 0 || target.node_count() == 0) {
    throw validation_error("validate_pair: graphs must be non-empty");
  }
  return {check_graph(query), check_graph(target)};
}

}  // namespace netalign
