#pragma once

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace mmslab {

// Fixed-size dynamic bitset over 0..size-1, enough for the small exact searches.
class Bitset {
 public:
  Bitset() = default;
  explicit Bitset(std::size_t size) : size_(size), words_((size + 63) / 64, 0) {}

  std::size_t size() const noexcept { return size_; }

  void set(std::size_t i) { words_[i / 64] |= std::uint64_t{1} << (i % 64); }
  void reset(std::size_t i) { words_[i / 64] &= ~(std::uint64_t{1} << (i % 64)); }
  bool test(std::size_t i) const { return (words_[i / 64] >> (i % 64)) & 1u; }

  std::size_t count() const {
    std::size_t c = 0;
    for (auto w : words_) c += static_cast<std::size_t>(std::popcount(w));
    return c;
  }

  bool none() const {
    return std::all_of(words_.begin(), words_.end(), [](std::uint64_t w) { return w == 0; });
  }

  std::size_t count_and(const Bitset& o) const {
    std::size_t c = 0;
    for (std::size_t k = 0; k < words_.size(); ++k) c += static_cast<std::size_t>(std::popcount(words_[k] & o.words_[k]));
    return c;
  }

  bool subset_of(const Bitset& o) const {
    for (std::size_t k = 0; k < words_.size(); ++k)
      if (words_[k] & ~o.words_[k]) return false;
    return true;
  }

  Bitset& operator&=(const Bitset& o) {
    for (std::size_t k = 0; k < words_.size(); ++k) words_[k] &= o.words_[k];
    return *this;
  }
  Bitset& subtract(const Bitset& o) {
    for (std::size_t k = 0; k < words_.size(); ++k) words_[k] &= ~o.words_[k];
    return *this;
  }

  // Lowest set index, or size() when empty.
  std::size_t first() const {
    for (std::size_t k = 0; k < words_.size(); ++k)
      if (words_[k]) return k * 64 + static_cast<std::size_t>(std::countr_zero(words_[k]));
    return size_;
  }

  template <typename F>
  void for_each(F&& f) const {
    for (std::size_t k = 0; k < words_.size(); ++k) {
      std::uint64_t w = words_[k];
      while (w) {
        f(k * 64 + static_cast<std::size_t>(std::countr_zero(w)));
        w &= w - 1;
      }
    }
  }

  bool operator==(const Bitset&) const = default;

 private:
  std::size_t size_ = 0;
  std::vector<std::uint64_t> words_;
};

struct SearchResult {
  std::vector<std::size_t> chosen;  // ascending
  std::uint64_t nodes = 0;
  bool optimal = false;        // search exhausted within budget
  std::size_t root_bound = 0;  // bound proven at the root before branching
};

inline constexpr std::uint64_t kDefaultNodeBudget = 1'000'000;

namespace detail {

class MisSearch {
 public:
  MisSearch(const std::vector<Bitset>& conflicts, std::uint64_t budget) : adj_(conflicts), budget_(budget) {}

  SearchResult run(const Bitset& vertices, std::vector<std::size_t> incumbent) {
    best_ = std::move(incumbent);
    SearchResult r;
    r.root_bound = clique_cover_bound(vertices);
    std::vector<std::size_t> current;
    exhausted_ = true;
    if (best_.size() < r.root_bound) recurse(vertices, current);
    std::sort(best_.begin(), best_.end());
    r.chosen = best_;
    r.nodes = nodes_;
    r.optimal = exhausted_;
    return r;
  }

 private:
  // Greedy partition of P into cliques of the conflict graph; an independent
  // set takes at most one vertex from each.
  std::size_t clique_cover_bound(Bitset p) const {
    std::size_t cliques = 0;
    while (!p.none()) {
      ++cliques;
      Bitset common = p;
      while (!common.none()) {
        const std::size_t v = common.first();
        p.reset(v);
        common.reset(v);
        common &= adj_[v];
      }
    }
    return cliques;
  }

  void recurse(Bitset p, std::vector<std::size_t>& current) {
    if (nodes_ >= budget_) {
      exhausted_ = false;
      return;
    }
    ++nodes_;
    // Vertices with no conflicts left in P are always taken.
    std::size_t taken = 0;
    std::size_t branch = p.size();
    std::size_t branch_degree = 0;
    p.for_each([&](std::size_t v) {
      const std::size_t deg = adj_[v].count_and(p);
      if (deg == 0) return;
      if (branch == p.size() || deg > branch_degree) {
        branch = v;
        branch_degree = deg;
      }
    });
    Bitset isolated = p;
    p.for_each([&](std::size_t v) {
      if (adj_[v].count_and(p) != 0) isolated.reset(v);
    });
    isolated.for_each([&](std::size_t v) {
      current.push_back(v);
      p.reset(v);
      ++taken;
    });

    if (p.none()) {
      if (current.size() > best_.size()) best_ = current;
    } else if (current.size() + clique_cover_bound(p) > best_.size()) {
      Bitset with = p;
      with.reset(branch);
      with.subtract(adj_[branch]);
      current.push_back(branch);
      recurse(with, current);
      current.pop_back();

      Bitset without = p;
      without.reset(branch);
      if (current.size() + clique_cover_bound(without) > best_.size()) recurse(without, current);
    }
    current.resize(current.size() - taken);
  }

  const std::vector<Bitset>& adj_;
  std::uint64_t budget_;
  std::uint64_t nodes_ = 0;
  bool exhausted_ = true;
  std::vector<std::size_t> best_;
};

class CoverSearch {
 public:
  CoverSearch(const std::vector<Bitset>& sets, std::uint64_t budget) : sets_(sets), budget_(budget) {}

  SearchResult run(const Bitset& universe, std::vector<std::size_t> incumbent) {
    best_ = std::move(incumbent);
    SearchResult r;
    r.root_bound = lower_bound(universe);
    std::vector<std::size_t> current;
    if (r.root_bound < best_.size()) recurse(universe, current);
    std::sort(best_.begin(), best_.end());
    r.chosen = best_;
    r.nodes = nodes_;
    r.optimal = exhausted_;
    return r;
  }

 private:
  // ceil(|uncovered| / largest gain of any single set).
  std::size_t lower_bound(const Bitset& uncovered) const {
    const std::size_t left = uncovered.count();
    if (left == 0) return 0;
    std::size_t gain = 0;
    for (const auto& s : sets_) gain = std::max(gain, s.count_and(uncovered));
    if (gain == 0) return left + 1;
    return (left + gain - 1) / gain;
  }

  void recurse(const Bitset& uncovered, std::vector<std::size_t>& current) {
    if (uncovered.none()) {
      if (current.size() < best_.size()) best_ = current;
      return;
    }
    if (nodes_ >= budget_) {
      exhausted_ = false;
      return;
    }
    ++nodes_;
    if (current.size() + lower_bound(uncovered) >= best_.size()) return;

    // Branch on the uncovered element contained in the fewest sets.
    std::size_t pivot = uncovered.size();
    std::size_t pivot_count = 0;
    uncovered.for_each([&](std::size_t e) {
      std::size_t c = 0;
      for (const auto& s : sets_) c += s.test(e) ? 1 : 0;
      if (pivot == uncovered.size() || c < pivot_count) {
        pivot = e;
        pivot_count = c;
      }
    });

    std::vector<std::pair<std::size_t, std::size_t>> options;  // (-gain, set index)
    for (std::size_t s = 0; s < sets_.size(); ++s)
      if (sets_[s].test(pivot)) options.emplace_back(sets_[s].count_and(uncovered), s);
    std::stable_sort(options.begin(), options.end(), [](const auto& a, const auto& b) { return a.first > b.first; });

    for (const auto& [gain, s] : options) {
      Bitset next = uncovered;
      next.subtract(sets_[s]);
      current.push_back(s);
      recurse(next, current);
      current.pop_back();
      if (current.size() + 1 >= best_.size()) break;
    }
  }

  const std::vector<Bitset>& sets_;
  std::uint64_t budget_;
  std::uint64_t nodes_ = 0;
  bool exhausted_ = true;
  std::vector<std::size_t> best_;
};

}  // namespace detail

// Greedy maximal independent set, lowest index first.
inline std::vector<std::size_t> greedy_independent_set(const std::vector<Bitset>& conflicts, const Bitset& vertices) {
  std::vector<std::size_t> chosen;
  Bitset open = vertices;
  while (!open.none()) {
    const std::size_t v = open.first();
    chosen.push_back(v);
    open.reset(v);
    open.subtract(conflicts[v]);
  }
  return chosen;
}

// Maximum independent set of the conflict graph restricted to `vertices`.
// Conflicts must be symmetric and irreflexive.
inline SearchResult max_independent_set(const std::vector<Bitset>& conflicts, const Bitset& vertices,
                                        std::uint64_t node_budget = kDefaultNodeBudget) {
  detail::MisSearch search(conflicts, node_budget);
  return search.run(vertices, greedy_independent_set(conflicts, vertices));
}

// Greedy set cover: largest uncovered gain, lowest set index on ties.
// Returns set indices in selection order; empty if some element is uncoverable.
inline std::vector<std::size_t> greedy_set_cover(const std::vector<Bitset>& sets, const Bitset& universe) {
  std::vector<std::size_t> chosen;
  Bitset uncovered = universe;
  while (!uncovered.none()) {
    std::size_t best = sets.size(), best_gain = 0;
    for (std::size_t s = 0; s < sets.size(); ++s) {
      const std::size_t g = sets[s].count_and(uncovered);
      if (g > best_gain) {
        best = s;
        best_gain = g;
      }
    }
    if (best == sets.size()) return {};
    chosen.push_back(best);
    uncovered.subtract(sets[best]);
  }
  return chosen;
}

// Minimum set cover by branch and bound, seeded with the greedy cover.
// The caller guarantees coverability.
inline SearchResult min_set_cover(const std::vector<Bitset>& sets, const Bitset& universe,
                                  std::uint64_t node_budget = kDefaultNodeBudget) {
  detail::CoverSearch search(sets, node_budget);
  return search.run(universe, greedy_set_cover(sets, universe));
}

}  // namespace mmslab
