#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "hetkc/graph.hpp"

namespace hetkc {

/// Vertex connectivity and one minimum vertex cut.
struct CutResult {
  std::size_t kappa = 0;
  /// Sorted node ids. Empty for complete graphs (kappa = n - 1) and for
  /// disconnected graphs (kappa = 0).
  std::vector<NodeId> cut_nodes;
};

/// Component label per node; labels are 0..c-1 in order of first appearance.
std::vector<std::uint32_t> connected_components(const Graph& g);
std::size_t component_count(const Graph& g);

/// Graphs with at most one node count as connected.
bool is_connected(const Graph& g);

/// Throws std::invalid_argument for the null graph.
std::size_t min_degree(const Graph& g);

/// True if removing a single node disconnects the graph. Expects a connected
/// graph with at least three nodes.
bool has_articulation_point(const Graph& g);

/// Union of k scan-first-search forests (each over the edges the previous
/// forests did not use). It keeps every local vertex connectivity up to k,
/// so it is k-connected iff `g` is, with at most k (n - 1) edges.
Graph sparse_certificate(const Graph& g, std::size_t k);

/// Number of internally vertex-disjoint s-t paths, capped at `cap`. Requires
/// s != t and {s, t} not an edge. When the result is below `cap` and `cut`
/// is non-null, a minimum s-t vertex separator is written to it.
std::size_t local_vertex_connectivity(const Graph& g, NodeId s, NodeId t,
                                      std::size_t cap,
                                      std::vector<NodeId>* cut = nullptr);

/// True iff the vertex connectivity is at least k (k >= 1). K_n is
/// (n-1)-connected and not n-connected; a single node is only 0-connected.
bool is_k_connected(const Graph& g, std::size_t k);

/// Exact vertex connectivity with a minimum cut. Throws
/// std::invalid_argument for n < 2.
CutResult vertex_connectivity(const Graph& g);

/// Induced subgraph on the nodes not in `victims`, renumbered in increasing
/// order of original id.
Graph delete_nodes(const Graph& g, std::span<const NodeId> victims);

}  // namespace hetkc
