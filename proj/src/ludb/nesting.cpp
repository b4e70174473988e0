#include "fpnc/ludb/nesting.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "fpnc/errors.hpp"

namespace fpnc {

namespace {

bool contains(const NestingNode& outer, std::size_t first, std::size_t last) {
  return outer.first <= first && last <= outer.last;
}

// Positions c in [lo, hi] where a single cut separates an interleaved pair.
struct CutWindow {
  std::size_t lo;
  std::size_t hi;
};

std::vector<CutWindow> cut_windows(const std::vector<Crossing>& crossings) {
  std::vector<CutWindow> windows;
  for (std::size_t i = 0; i < crossings.size(); ++i)
    for (std::size_t j = i + 1; j < crossings.size(); ++j) {
      const Crossing* a = &crossings[i];
      const Crossing* b = &crossings[j];
      if (!interleaved(*a, *b)) continue;
      if (b->first < a->first) std::swap(a, b);
      windows.push_back({b->first, a->last + 1});
    }
  std::sort(windows.begin(), windows.end(), [](const CutWindow& x, const CutWindow& y) {
    return x.hi != y.hi ? x.hi < y.hi : x.lo < y.lo;
  });
  return windows;
}

bool hits_all(const std::vector<CutWindow>& windows, const std::vector<std::size_t>& cuts) {
  return std::all_of(windows.begin(), windows.end(), [&](const CutWindow& w) {
    return std::any_of(cuts.begin(), cuts.end(), [&](std::size_t c) { return w.lo <= c && c <= w.hi; });
  });
}

}  // namespace

bool interleaved(const Crossing& a, const Crossing& b) {
  return (a.first < b.first && b.first <= a.last && a.last < b.last) ||
         (b.first < a.first && a.first <= b.last && b.last < a.last);
}

std::variant<NestingTree, NotNested> build_nesting_tree(const std::vector<Crossing>& crossings,
                                                        std::size_t size) {
  for (std::size_t i = 0; i < crossings.size(); ++i) {
    if (crossings[i].last >= size || crossings[i].first > crossings[i].last)
      throw UsageError("crossing outside the tandem");
    for (std::size_t j = i + 1; j < crossings.size(); ++j)
      if (interleaved(crossings[i], crossings[j])) return NotNested{i, j};
  }

  // Group identical intervals; order outer intervals before the ones they contain.
  std::map<std::pair<std::size_t, std::size_t>, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < crossings.size(); ++i)
    groups[{crossings[i].first, crossings[i].last}].push_back(i);
  std::vector<std::pair<std::size_t, std::size_t>> intervals;
  for (const auto& [iv, members] : groups) intervals.push_back(iv);
  std::sort(intervals.begin(), intervals.end(), [](const auto& x, const auto& y) {
    return x.first != y.first ? x.first < y.first : x.second > y.second;
  });

  NestingTree tree;
  tree.root.first = 0;
  tree.root.last = size - 1;
  std::vector<NestingNode*> stack{&tree.root};
  for (const auto& iv : intervals) {
    while (!contains(*stack.back(), iv.first, iv.second)) stack.pop_back();
    NestingNode& parent = *stack.back();
    parent.children.push_back(NestingNode{iv.first, iv.second, groups[iv], {}});
    stack.push_back(&parent.children.back());
  }
  return tree;
}

std::variant<NestingTree, NotNested> build_nesting_tree(const TandemView& view) {
  return build_nesting_tree(view.crossings, view.size());
}

std::vector<std::pair<std::size_t, std::size_t>> split_by_cuts(std::size_t size, const CutSet& cuts) {
  std::vector<std::pair<std::size_t, std::size_t>> ranges;
  std::size_t start = 0;
  for (std::size_t c : cuts.cuts) {
    if (c == 0 || c >= size || c <= start) throw UsageError("invalid cut position");
    ranges.emplace_back(start, c - 1);
    start = c;
  }
  ranges.emplace_back(start, size - 1);
  return ranges;
}

std::vector<Crossing> clip_crossings(const std::vector<Crossing>& crossings, std::size_t first,
                                     std::size_t last) {
  std::vector<Crossing> out;
  for (const auto& c : crossings) {
    if (c.last < first || c.first > last) continue;
    Crossing clipped = c;
    clipped.first = std::max(c.first, first);
    clipped.last = std::min(c.last, last);
    out.push_back(clipped);
  }
  return out;
}

bool cuts_resolve(const std::vector<Crossing>& crossings, std::size_t size, const CutSet& cuts) {
  for (const auto& [first, last] : split_by_cuts(size, cuts)) {
    auto part = clip_crossings(crossings, first, last);
    for (std::size_t i = 0; i < part.size(); ++i)
      for (std::size_t j = i + 1; j < part.size(); ++j)
        if (interleaved(part[i], part[j])) return false;
  }
  return true;
}

std::vector<CutSet> enumerate_cut_sets(const std::vector<Crossing>& crossings, std::size_t size,
                                       std::optional<std::size_t> limit) {
  const auto windows = cut_windows(crossings);
  if (windows.empty()) return {};

  // Branch on the positions of the first window not yet hit; every minimal hitting
  // set is reached this way, non-minimal ones are filtered afterwards.
  std::set<std::vector<std::size_t>> found;
  std::vector<std::size_t> current;
  auto recurse = [&](auto&& self) -> void {
    if (limit && found.size() >= *limit * 4 + 64) return;
    const CutWindow* open = nullptr;
    for (const auto& w : windows) {
      bool hit = std::any_of(current.begin(), current.end(),
                             [&](std::size_t c) { return w.lo <= c && c <= w.hi; });
      if (!hit) {
        open = &w;
        break;
      }
    }
    if (!open) {
      auto sorted = current;
      std::sort(sorted.begin(), sorted.end());
      found.insert(sorted);
      return;
    }
    for (std::size_t c = open->lo; c <= std::min(open->hi, size - 1); ++c) {
      current.push_back(c);
      self(self);
      current.pop_back();
    }
  };
  recurse(recurse);

  std::vector<CutSet> minimal;
  for (const auto& cuts : found) {
    bool is_minimal = true;
    for (std::size_t i = 0; i < cuts.size() && is_minimal; ++i) {
      auto smaller = cuts;
      smaller.erase(smaller.begin() + static_cast<std::ptrdiff_t>(i));
      if (hits_all(windows, smaller)) is_minimal = false;
    }
    if (is_minimal) minimal.push_back(CutSet{cuts});
    if (limit && minimal.size() >= *limit) break;
  }
  return minimal;
}

std::vector<CutSet> enumerate_cut_sets(const TandemView& view) {
  return enumerate_cut_sets(view.crossings, view.size());
}

std::vector<CutSet> enumerate_all_cut_subsets(const std::vector<Crossing>& crossings,
                                              std::size_t size) {
  if (size > 20) throw UsageError("exhaustive cut subsets limited to tandems of 20 servers");
  std::vector<CutSet> out;
  const std::size_t positions = size > 0 ? size - 1 : 0;
  for (std::size_t mask = 0; mask < (std::size_t{1} << positions); ++mask) {
    CutSet cs;
    for (std::size_t p = 0; p < positions; ++p)
      if (mask & (std::size_t{1} << p)) cs.cuts.push_back(p + 1);
    if (cuts_resolve(crossings, size, cs)) out.push_back(cs);
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace fpnc
