#pragma once

#include <optional>
#include <utility>
#include <variant>
#include <vector>

#include "fpnc/netmodel/tandem.hpp"

namespace fpnc {

/// Node of a nesting tree over tandem positions [first, last].
///
/// `members` are indices into the crossing list whose (clipped) interval equals
/// the node's interval; they are analysed as one aggregate. The root stands for
/// the analysed flow and has no members.
struct NestingNode {
  std::size_t first = 0;
  std::size_t last = 0;
  std::vector<std::size_t> members;
  std::vector<NestingNode> children;
};

struct NestingTree {
  NestingNode root;
};

/// Two crossings (indices) whose intervals overlap without inclusion.
struct NotNested {
  std::size_t first_crossing;
  std::size_t second_crossing;
};

/// a starts before b, b starts inside a, and b ends after a (or the mirror image).
bool interleaved(const Crossing& a, const Crossing& b);

/// Tree over the crossings of a tandem with positions [0, size).
std::variant<NestingTree, NotNested> build_nesting_tree(const std::vector<Crossing>& crossings,
                                                        std::size_t size);
std::variant<NestingTree, NotNested> build_nesting_tree(const TandemView& view);

/// Cut positions: a cut at c splits the tandem between positions c-1 and c.
struct CutSet {
  std::vector<std::size_t> cuts;

  friend bool operator==(const CutSet&, const CutSet&) = default;
  friend auto operator<=>(const CutSet&, const CutSet&) = default;
};

/// Sub-tandem position ranges [first, last] produced by a cut set.
std::vector<std::pair<std::size_t, std::size_t>> split_by_cuts(std::size_t size, const CutSet& cuts);

/// Whether every sub-tandem is nested after applying the cuts.
bool cuts_resolve(const std::vector<Crossing>& crossings, std::size_t size, const CutSet& cuts);

/// All inclusion-minimal cut sets, in lexicographic order; empty for a nested tandem.
/// `limit` bounds the number of sets returned.
std::vector<CutSet> enumerate_cut_sets(const std::vector<Crossing>& crossings, std::size_t size,
                                       std::optional<std::size_t> limit = std::nullopt);
std::vector<CutSet> enumerate_cut_sets(const TandemView& view);

/// Every cut subset (minimal or not) that resolves the tandem; exponential, for
/// debugging small tandems only.
std::vector<CutSet> enumerate_all_cut_subsets(const std::vector<Crossing>& crossings,
                                              std::size_t size);

/// Clips crossings to positions [first, last], dropping those outside.
std::vector<Crossing> clip_crossings(const std::vector<Crossing>& crossings, std::size_t first,
                                     std::size_t last);

}  // namespace fpnc
