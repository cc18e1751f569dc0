#include "exactpa/sampling.hpp"

#include <algorithm>
#include <string>

#include "exactpa/error.hpp"

namespace exactpa {

namespace {

template <typename T>
void fisher_yates(std::span<T> items, Rng& rng, RspCounters* counters = nullptr) {
  for (std::size_t i = items.size(); i > 1; --i) {
    std::swap(items[i - 1], items[uniform_index(rng, i)]);
    if (counters) ++counters->shuffle_draws;
  }
}

}  // namespace

FrequencyBag::FrequencyBag(std::initializer_list<BagItem> items) {
  for (const auto& item : items) add(item.element, item.frequency);
}

void FrequencyBag::add(std::uint32_t element, std::uint32_t frequency) {
  if (frequency == 0) {
    throw Error(ErrorKind::Domain, "bag frequencies must be positive");
  }
  items_.push_back({element, frequency});
  total_ += frequency;
}

std::uint32_t FrequencyBag::max_frequency() const noexcept {
  std::uint32_t best = 0;
  for (const auto& item : items_) best = std::max(best, item.frequency);
  return best;
}

void systematic_select(std::span<const BagItem> ordered, std::uint64_t total,
                       std::size_t m, std::uint64_t offset,
                       std::vector<std::uint32_t>& out) {
  const std::uint64_t step = total / m;
  std::uint64_t psum = 0;
  std::uint64_t next = offset;
  for (const auto& item : ordered) {
    psum += item.frequency;
    if (psum > next) {
      out.push_back(item.element);
      next += step;
    }
  }
}

void rss_sample_into(std::span<BagItem> items, std::uint64_t total, std::size_t m,
                     Rng& rng, std::vector<std::uint32_t>& out) {
  fisher_yates(items, rng);
  const std::uint64_t offset = uniform_index(rng, total / m);
  systematic_select(items, total, m, offset, out);
}

std::vector<std::uint32_t> rss_sample(const FrequencyBag& bag, std::size_t m, Rng& rng) {
  if (m == 0 || bag.total() == 0 || bag.total() % m != 0) {
    throw Error(ErrorKind::Divisibility,
                "sample size " + std::to_string(m) + " does not divide bag total " +
                    std::to_string(bag.total()));
  }
  if (bag.max_frequency() > bag.total() / m) {
    throw Error(ErrorKind::Infeasible,
                "a frequency exceeds total/m = " + std::to_string(bag.total() / m));
  }
  std::vector<BagItem> items(bag.items().begin(), bag.items().end());
  std::vector<std::uint32_t> out;
  out.reserve(m);
  rss_sample_into(items, bag.total(), m, rng, out);
  return out;
}

void rsp_partition_into(std::span<BagItem> items, std::size_t s, std::size_t m, Rng& rng,
                        std::vector<std::uint32_t>& out, RspCounters* counters) {
  fisher_yates(items, rng, counters);
  out.resize(s * m);
  // Copies are dealt into groups 0,1,...,s-1,0,1,... ; the k-th copy overall
  // lands in group k mod s at slot k div s.
  std::size_t k = 0;
  for (const auto& item : items) {
    for (std::uint32_t c = 0; c < item.frequency; ++c, ++k) {
      out[(k % s) * m + k / s] = item.element;
    }
  }
  if (counters) counters->writes += k;
}

Partition rsp_partition(const FrequencyBag& bag, std::size_t s, std::size_t m, Rng& rng,
                        RspCounters* counters) {
  if (s == 0 || m == 0 || static_cast<std::uint64_t>(s) * m != bag.total()) {
    throw Error(ErrorKind::Arity, "s*m = " + std::to_string(s * m) +
                                      " differs from bag total " +
                                      std::to_string(bag.total()));
  }
  for (const auto& item : bag.items()) {
    if (item.frequency > s) {
      throw Error(ErrorKind::Infeasible,
                  "element " + std::to_string(item.element) + " has frequency " +
                      std::to_string(item.frequency) + " > s = " + std::to_string(s));
    }
  }
  std::vector<BagItem> items(bag.items().begin(), bag.items().end());
  Partition p{s, m, {}};
  rsp_partition_into(items, s, m, rng, p.members, counters);
  return p;
}

std::vector<std::size_t> choose_with_replacement(std::size_t pool_size, std::size_t z,
                                                 Rng& rng) {
  if (pool_size == 0) throw Error(ErrorKind::EmptyPool, "cannot draw from an empty pool");
  std::vector<std::size_t> out(z);
  for (auto& x : out) x = uniform_index(rng, pool_size);
  return out;
}

std::size_t VirtualShuffle::at(std::size_t i) const {
  for (const auto& [key, value] : few_) {
    if (key == i) return value;
  }
  auto it = displaced_.find(i);
  return it == displaced_.end() ? i : it->second;
}

void VirtualShuffle::put(std::size_t i, std::size_t value) {
  for (auto& [key, stored] : few_) {
    if (key == i) {
      stored = value;
      return;
    }
  }
  if (few_.size() < kFlat) {
    few_.emplace_back(i, value);
  } else {
    displaced_[i] = value;
  }
}

std::size_t VirtualShuffle::next(Rng& rng) {
  const std::size_t j = drawn_ + uniform_index(rng, n_ - drawn_);
  const std::size_t picked = at(j);
  if (j != drawn_) put(j, at(drawn_));
  ++drawn_;
  return picked;
}

std::vector<std::size_t> choose_without_replacement(std::size_t pool_size, std::size_t k,
                                                    Rng& rng) {
  if (k > pool_size) {
    throw Error(ErrorKind::Domain, "cannot choose " + std::to_string(k) + " of " +
                                       std::to_string(pool_size) + " without replacement");
  }
  VirtualShuffle shuffle;
  shuffle.reset(pool_size);
  std::vector<std::size_t> out(k);
  for (auto& x : out) x = shuffle.next(rng);
  return out;
}

}  // namespace exactpa
