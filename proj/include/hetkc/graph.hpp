#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <utility>
#include <vector>

namespace hetkc {

using NodeId = std::uint32_t;
using Edge = std::pair<NodeId, NodeId>;

/// Undirected simple graph on nodes 0..n-1 with sorted adjacency lists.
class Graph {
 public:
  Graph() = default;
  explicit Graph(std::size_t n) : adj_(n) {}

  /// Builds from an arbitrary edge list. Self-loops are dropped and
  /// duplicates (in either orientation) are merged.
  static Graph from_edges(std::size_t n, std::span<const Edge> edges);

  /// Takes ownership of per-node neighbor lists that may be unsorted and hold
  /// duplicates; lists are sorted, deduplicated and self-loops removed. The
  /// caller must supply both orientations of every edge.
  static Graph from_adjacency(std::vector<std::vector<NodeId>> adj);

  static Graph complete(std::size_t n);
  static Graph cycle(std::size_t n);

  std::size_t size() const noexcept { return adj_.size(); }
  std::size_t edge_count() const noexcept;
  std::size_t degree(NodeId v) const { return adj_[v].size(); }
  std::span<const NodeId> neighbors(NodeId v) const { return adj_[v]; }
  bool has_edge(NodeId u, NodeId v) const;
  bool is_complete() const noexcept;

  /// Edges with u < v in lexicographic order.
  std::vector<Edge> edges() const;

  /// Symmetric, loop-free and sorted without duplicates.
  bool well_formed() const;

  friend bool operator==(const Graph&, const Graph&) = default;

 private:
  std::vector<std::vector<NodeId>> adj_;
};

/// Edge-list text: a header line "n m" followed by one "u v" line per edge
/// (u < v, lexicographic order).
void write_edge_list(std::ostream& os, const Graph& g);

/// Parses the format written by write_edge_list. Throws std::runtime_error on
/// malformed input.
Graph read_edge_list(std::istream& is);

}  // namespace hetkc
