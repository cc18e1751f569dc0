#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <unordered_map>
#include <utility>
#include <vector>

#include "exactpa/rng.hpp"

namespace exactpa {

struct BagItem {
  std::uint32_t element;
  std::uint32_t frequency;
};

/// Multiset of element ids with positive integer frequencies.
class FrequencyBag {
 public:
  FrequencyBag() = default;
  FrequencyBag(std::initializer_list<BagItem> items);

  /// Adds `frequency` copies of `element`. The element must not already be
  /// present; use a builder with a lookup table for accumulation.
  void add(std::uint32_t element, std::uint32_t frequency);

  std::span<const BagItem> items() const noexcept { return items_; }
  std::size_t size() const noexcept { return items_.size(); }
  std::uint64_t total() const noexcept { return total_; }
  std::uint32_t max_frequency() const noexcept;

 private:
  std::vector<BagItem> items_;
  std::uint64_t total_ = 0;
};

/// Systematic pass over `ordered` with stride total/m starting at `offset`
/// (0 <= offset < total/m). Appends the m hit elements to `out`. This is the
/// deterministic core of random systematic sampling; requires every
/// frequency <= total/m so that no element is hit twice.
void systematic_select(std::span<const BagItem> ordered, std::uint64_t total,
                       std::size_t m, std::uint64_t offset,
                       std::vector<std::uint32_t>& out);

/// Random systematic sampling: m distinct elements, element i included with
/// probability exactly m * d_i / s.
///
/// Draw order: Fisher-Yates over the items (size-1 draws), then the offset.
/// Throws Divisibility if m does not divide the total and Infeasible if some
/// frequency exceeds total/m.
std::vector<std::uint32_t> rss_sample(const FrequencyBag& bag, std::size_t m, Rng& rng);

/// In-place variant for hot loops: shuffles `items` and appends the sample
/// to `out`. Preconditions are the caller's responsibility.
void rss_sample_into(std::span<BagItem> items, std::uint64_t total, std::size_t m,
                     Rng& rng, std::vector<std::uint32_t>& out);

/// s groups of m members each, stored row-major.
struct Partition {
  std::size_t groups = 0;
  std::size_t arity = 0;
  std::vector<std::uint32_t> members;

  std::span<const std::uint32_t> group(std::size_t i) const {
    return {members.data() + i * arity, arity};
  }
};

/// Work counters for random systematic partitioning.
struct RspCounters {
  std::uint64_t shuffle_draws = 0;
  std::uint64_t writes = 0;
};

/// Random systematic partitioning: shuffles the distinct elements, then deals
/// their copies round-robin into s groups. Each group ends up with m distinct
/// members as long as no frequency exceeds s.
///
/// Throws Arity if s*m != total and Infeasible if a frequency exceeds s.
Partition rsp_partition(const FrequencyBag& bag, std::size_t s, std::size_t m, Rng& rng,
                        RspCounters* counters = nullptr);

/// In-place variant writing row-major groups into `out` (resized to s*m).
void rsp_partition_into(std::span<BagItem> items, std::size_t s, std::size_t m, Rng& rng,
                        std::vector<std::uint32_t>& out, RspCounters* counters = nullptr);

std::vector<std::size_t> choose_with_replacement(std::size_t pool_size, std::size_t z,
                                                 Rng& rng);

/// Sparse Fisher-Yates over the virtual range [0, n). Only displaced slots
/// are stored, so drawing k values costs O(k) expected time and memory.
/// The first few displaced slots live in a flat table, which keeps the
/// per-round update draws free of allocations.
class VirtualShuffle {
 public:
  void reset(std::size_t n) {
    n_ = n;
    drawn_ = 0;
    few_.clear();
    displaced_.clear();
  }
  std::size_t remaining() const noexcept { return n_ - drawn_; }
  /// Next element of a uniform random permutation of [0, n).
  std::size_t next(Rng& rng);

 private:
  std::size_t at(std::size_t i) const;
  void put(std::size_t i, std::size_t value);

  static constexpr std::size_t kFlat = 32;

  std::size_t n_ = 0;
  std::size_t drawn_ = 0;
  std::vector<std::pair<std::size_t, std::size_t>> few_;
  std::unordered_map<std::size_t, std::size_t> displaced_;
};

/// k distinct indices from [0, pool_size), every k-subset equally likely,
/// returned in draw order.
std::vector<std::size_t> choose_without_replacement(std::size_t pool_size, std::size_t k,
                                                    Rng& rng);

}  // namespace exactpa
