#include "hetkc/graph.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>

namespace hetkc {

Graph Graph::from_edges(std::size_t n, std::span<const Edge> edges) {
  std::vector<std::vector<NodeId>> adj(n);
  for (const auto& [u, v] : edges) {
    if (u >= n || v >= n) throw std::out_of_range("edge endpoint out of range");
    if (u == v) continue;
    adj[u].push_back(v);
    adj[v].push_back(u);
  }
  return from_adjacency(std::move(adj));
}

Graph Graph::from_adjacency(std::vector<std::vector<NodeId>> adj) {
  Graph g;
  for (std::size_t v = 0; v < adj.size(); ++v) {
    auto& list = adj[v];
    if (!std::is_sorted(list.begin(), list.end())) std::sort(list.begin(), list.end());
    list.erase(std::unique(list.begin(), list.end()), list.end());
    auto self = std::lower_bound(list.begin(), list.end(), static_cast<NodeId>(v));
    if (self != list.end() && *self == v) list.erase(self);
  }
  g.adj_ = std::move(adj);
  return g;
}

Graph Graph::complete(std::size_t n) {
  std::vector<std::vector<NodeId>> adj(n);
  for (std::size_t v = 0; v < n; ++v) {
    adj[v].reserve(n - 1);
    for (std::size_t u = 0; u < n; ++u) {
      if (u != v) adj[v].push_back(static_cast<NodeId>(u));
    }
  }
  Graph g;
  g.adj_ = std::move(adj);
  return g;
}

Graph Graph::cycle(std::size_t n) {
  std::vector<Edge> e;
  for (std::size_t v = 0; v < n; ++v) {
    e.emplace_back(static_cast<NodeId>(v), static_cast<NodeId>((v + 1) % n));
  }
  return from_edges(n, e);
}

std::size_t Graph::edge_count() const noexcept {
  std::size_t twice = 0;
  for (const auto& l : adj_) twice += l.size();
  return twice / 2;
}

bool Graph::has_edge(NodeId u, NodeId v) const {
  const auto& a = adj_[u].size() <= adj_[v].size() ? adj_[u] : adj_[v];
  const NodeId target = &a == &adj_[u] ? v : u;
  return std::binary_search(a.begin(), a.end(), target);
}

bool Graph::is_complete() const noexcept {
  const std::size_t n = adj_.size();
  return std::all_of(adj_.begin(), adj_.end(),
                     [n](const auto& l) { return l.size() + 1 == n; });
}

std::vector<Edge> Graph::edges() const {
  std::vector<Edge> out;
  out.reserve(edge_count());
  for (std::size_t u = 0; u < adj_.size(); ++u) {
    for (NodeId v : adj_[u]) {
      if (u < v) out.emplace_back(static_cast<NodeId>(u), v);
    }
  }
  return out;
}

bool Graph::well_formed() const {
  for (std::size_t u = 0; u < adj_.size(); ++u) {
    const auto& l = adj_[u];
    if (!std::is_sorted(l.begin(), l.end())) return false;
    if (std::adjacent_find(l.begin(), l.end()) != l.end()) return false;
    for (NodeId v : l) {
      if (v >= adj_.size() || v == u) return false;
      if (!std::binary_search(adj_[v].begin(), adj_[v].end(), static_cast<NodeId>(u))) {
        return false;
      }
    }
  }
  return true;
}

void write_edge_list(std::ostream& os, const Graph& g) {
  os << g.size() << ' ' << g.edge_count() << '\n';
  for (const auto& [u, v] : g.edges()) os << u << ' ' << v << '\n';
}

Graph read_edge_list(std::istream& is) {
  std::size_t n = 0, m = 0;
  if (!(is >> n >> m)) throw std::runtime_error("edge list: missing \"n m\" header");
  std::vector<Edge> edges;
  edges.reserve(m);
  for (std::size_t i = 0; i < m; ++i) {
    std::uint64_t u = 0, v = 0;
    if (!(is >> u >> v)) {
      throw std::runtime_error("edge list: expected " + std::to_string(m) +
                               " edges, got " + std::to_string(i));
    }
    if (u >= n || v >= n) throw std::runtime_error("edge list: endpoint out of range");
    edges.emplace_back(static_cast<NodeId>(u), static_cast<NodeId>(v));
  }
  return Graph::from_edges(n, edges);
}

}  // namespace hetkc
