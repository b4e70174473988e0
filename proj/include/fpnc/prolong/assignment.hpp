#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

namespace fpnc {

/// New exit position (0-based, on the foi path) for every prolongable cross-flow,
/// keyed by flow index. A flow mapped to its current exit is left unchanged.
struct ProlongationAssignment {
  std::map<std::size_t, std::size_t> exits;

  friend bool operator==(const ProlongationAssignment&, const ProlongationAssignment&) = default;
  friend auto operator<=>(const ProlongationAssignment&, const ProlongationAssignment&) = default;
};

enum class AlternativeSource { exhaustive, hfp, random, deepfp, manual };

struct AlternativeSet {
  std::vector<ProlongationAssignment> items;
  AlternativeSource source = AlternativeSource::manual;

  std::size_t size() const { return items.size(); }
};

std::string to_string(AlternativeSource source);

}  // namespace fpnc
