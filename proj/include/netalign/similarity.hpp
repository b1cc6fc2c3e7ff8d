#pragma once

#include <charconv>
#include <cstdint>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>

#include "netalign/error.hpp"
#include "netalign/graph.hpp"

namespace netalign {

// Raw nonnegative cross-network scores keyed by (query node, target node).
// Scores stay unnormalized so one table can serve several alpha settings;
// the 1-norm normalization happens at operator construction.
class SimilarityTable {
 public:
  using Key = std::pair<std::uint32_t, std::uint32_t>;

  // Duplicate keys keep the larger score (idempotent on reload).
  void set(std::uint32_t query, std::uint32_t target, double score) {
    if (!(score >= 0.0)) {
      throw validation_error("similarity score must be nonnegative");
    }
    auto [it, inserted] = entries_.try_emplace({query, target}, score);
    if (!inserted && score > it->second) it->second = score;
  }

  double score(std::uint32_t query, std::uint32_t target) const {
    auto it = entries_.find({query, target});
    return it == entries_.end() ? 0.0 : it->second;
  }

  double total() const {
    double s = 0.0;
    for (const auto& [k, v] : entries_) s += v;
    return s;
  }

  std::size_t size() const noexcept { return entries_.size(); }
  bool empty() const noexcept { return entries_.empty(); }
  const std::map<Key, double>& entries() const noexcept { return entries_; }

 private:
  std::map<Key, double> entries_;
};

// Parses "query_label target_label score" triples; '#' comments and blank
// lines skipped. Labels must exist in the respective graphs.
inline SimilarityTable load_similarity(std::string_view text, const Graph& query,
                                       const Graph& target) {
  SimilarityTable table;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream ls(line);
    std::string q, t, score_text, extra;
    if (!(ls >> q >> t >> score_text) || (ls >> extra)) {
      throw parse_error("line " + std::to_string(line_no) +
                            ": expected \"query target score\", got \"" + line + "\"",
                        line_no);
    }
    const auto qi = query.index_of(q);
    if (!qi) throw validation_error("unknown query label \"" + q + "\"");
    const auto ti = target.index_of(t);
    if (!ti) throw validation_error("unknown target label \"" + t + "\"");
    double score = 0.0;
    const char* begin = score_text.data();
    const char* end = begin + score_text.size();
    auto [ptr, ec] = std::from_chars(begin, end, score);
    if (ec != std::errc{} || ptr != end) {
      throw parse_error("line " + std::to_string(line_no) + ": bad score \"" +
                            score_text + "\"",
                        line_no);
    }
    if (!(score >= 0.0)) {
      throw validation_error("negative similarity score for (" + q + ", " + t +
                             ") on line " + std::to_string(line_no));
    }
    table.set(*qi, *ti, score);
  }
  return table;
}

}  // namespace netalign
