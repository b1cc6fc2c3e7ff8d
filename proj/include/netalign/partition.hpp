#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <span>
#include <vector>

#include "netalign/error.hpp"
#include "netalign/rng.hpp"

namespace netalign {

// A uniformly random permutation of {0, ..., dim-1} split into `blocks`
// near-equal contiguous chunks: the first (dim mod blocks) blocks hold
// ceil(dim/blocks) coordinates, the rest floor(dim/blocks). Each block's
// coordinate list is kept sorted ascending.
class BlockPartition {
 public:
  BlockPartition(std::size_t dim, std::size_t blocks, Rng& rng) : dim_(dim) {
    if (blocks < 1 || blocks > dim) {
      throw config_error("block count must lie in [1, dim]");
    }
    const std::size_t base = dim / blocks;
    const std::size_t extra = dim % blocks;
    offsets_.assign(blocks + 1, 0);
    for (std::size_t i = 0; i < blocks; ++i) {
      offsets_[i + 1] = offsets_[i] + base + (i < extra ? 1 : 0);
    }
    assignment_.resize(dim);
    std::iota(assignment_.begin(), assignment_.end(), 0u);
    reshuffle(rng);
  }

  // Redraws the permutation in place; distribution-identical to building a
  // fresh partition but without reallocating. Blocks come out sorted via a
  // stable O(dim) bucket pass instead of per-block sorts.
  void reshuffle(Rng& rng) {
    rng.shuffle(assignment_);
    const std::size_t blocks = block_count();
    if (block_of_.size() != dim_) block_of_.resize(dim_);
    for (std::size_t i = 0; i < blocks; ++i) {
      for (std::size_t k = offsets_[i]; k < offsets_[i + 1]; ++k) {
        block_of_[assignment_[k]] = static_cast<std::uint32_t>(i);
      }
    }
    if (cursor_.size() != blocks) cursor_.resize(blocks);
    for (std::size_t i = 0; i < blocks; ++i) cursor_[i] = offsets_[i];
    for (std::uint32_t c = 0; c < dim_; ++c) {
      assignment_[cursor_[block_of_[c]]++] = c;
    }
  }

  std::size_t dim() const noexcept { return dim_; }
  std::size_t block_count() const noexcept { return offsets_.size() - 1; }
  std::size_t block_size(std::size_t i) const { return offsets_[i + 1] - offsets_[i]; }

  // Sorted coordinate list of block i.
  std::span<const std::uint32_t> block(std::size_t i) const {
    return {assignment_.data() + offsets_[i], assignment_.data() + offsets_[i + 1]};
  }

 private:
  std::size_t dim_;
  std::vector<std::uint32_t> assignment_;
  std::vector<std::size_t> offsets_;
  std::vector<std::uint32_t> block_of_;  // reshuffle scratch
  std::vector<std::size_t> cursor_;      // reshuffle scratch
};

inline BlockPartition random_partition(std::size_t dim, std::size_t blocks, Rng& rng) {
  return BlockPartition(dim, blocks, rng);
}

}  // namespace netalign
