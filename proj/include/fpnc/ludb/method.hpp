#pragma once

#include <cstdint>
#include <functional>
#include <string>

#include "fpnc/netmodel/tandem.hpp"
#include "fpnc/prolong/assignment.hpp"

namespace fpnc {

enum class MethodKind { ludb_ff, fp_exhaustive, fp_heuristic, rnd_fp, rnd_hfp, deepfp };

/// Proposes up to k prolongation alternatives for a flow of interest.
using Predictor = std::function<AlternativeSet(const ServerGraph& net, std::size_t foi,
                                               const TandemView& view, std::size_t k)>;

struct MethodConfig {
  MethodKind kind = MethodKind::ludb_ff;
  std::size_t k = 1;
  std::uint64_t seed = 0;
  Predictor predictor;
};

std::string to_string(MethodKind kind);
/// Accepts the command-line names (ludb-ff, fp-exhaustive, ...); throws UsageError.
MethodKind parse_method_kind(const std::string& name);
bool method_uses_k(MethodKind kind);

}  // namespace fpnc
