#pragma once

#include <cstdint>

#include "lanegraph/graph.hpp"

namespace lanegraph {

/// Shape of a generated successor tree: `n_splits` levels of binary splits,
/// every branch a chain of `depth` edges, so 2^n_splits maximal paths.
struct SyntheticSpec {
  int n_splits = 1;
  int depth = 3;
  double jitter = 0.0;  // std-dev of Gaussian node noise in px (root excluded)
  Extent extent{256.0, 256.0};
};

inline constexpr int kMaxSyntheticSplits = 6;
inline constexpr int kMaxSyntheticDepth = 16;

/// Deterministic per (seed, spec). Root at the bottom-center of the extent,
/// branches grow upward and fan out; all nodes stay inside the extent.
/// Throws Error(kInvalidArgument) for specs outside the documented bounds.
LaneGraph generate_synthetic(std::uint64_t seed, const SyntheticSpec& spec);

}  // namespace lanegraph
