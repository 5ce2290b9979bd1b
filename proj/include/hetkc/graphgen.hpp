#pragma once

#include <cstdint>
#include <vector>

#include "hetkc/graph.hpp"
#include "hetkc/params.hpp"
#include "hetkc/rng.hpp"

namespace hetkc {

using KeyId = std::uint32_t;

/// Class label and key ring of every node. Classes are 0-based.
struct KeyAssignment {
  std::int64_t P = 0;
  std::vector<std::uint32_t> classes;
  std::vector<std::vector<KeyId>> rings;  ///< sorted, distinct, all < P

  std::size_t size() const noexcept { return classes.size(); }
};

/// Rings with K at most P / kRejectionDivisor use rejection sampling; larger
/// rings use a partial Fisher-Yates shuffle of the pool.
inline constexpr std::int64_t kRejectionDivisor = 64;

/// Draws `K` distinct keys uniformly from {0, ..., P-1}, sorted ascending.
/// `pool` is scratch space for the shuffle path; it is resized as needed and
/// may be reused between calls.
std::vector<KeyId> sample_ring(Engine& eng, std::int64_t K, std::int64_t P,
                               std::vector<KeyId>& pool);

/// Node counts up to this build the key graph through dense bit rows.
inline constexpr std::size_t kDenseRowLimit = 1 << 15;

KeyAssignment sample_key_assignment(const NetworkParams& params, const RngSeed& seed);

/// Nodes are adjacent iff their rings share a key. Built from an inverted
/// key -> holders index.
Graph build_key_graph(const KeyAssignment& assignment);

/// G(n, alpha): each unordered pair is an edge independently with
/// probability alpha.
Graph sample_er_graph(std::size_t n, double alpha, const RngSeed& seed);

/// Edge-set intersection. Throws std::invalid_argument on size mismatch.
Graph intersect_graphs(const Graph& a, const Graph& b);

/// Key graph intersected with the channel graph, each drawn from its own
/// sub-stream of `seed`.
Graph sample_intersection_model(const NetworkParams& params, const RngSeed& seed);

}  // namespace hetkc
