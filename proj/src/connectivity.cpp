#include "hetkc/connectivity.hpp"

#include <algorithm>
#include <cassert>
#include <limits>
#include <stdexcept>
#include <string>

namespace hetkc {

std::vector<std::uint32_t> connected_components(const Graph& g) {
  constexpr auto kUnset = std::numeric_limits<std::uint32_t>::max();
  const std::size_t n = g.size();
  std::vector<std::uint32_t> label(n, kUnset);
  std::vector<NodeId> queue;
  queue.reserve(n);
  std::uint32_t next = 0;
  for (std::size_t root = 0; root < n; ++root) {
    if (label[root] != kUnset) continue;
    label[root] = next;
    queue.clear();
    queue.push_back(static_cast<NodeId>(root));
    for (std::size_t head = 0; head < queue.size(); ++head) {
      for (NodeId w : g.neighbors(queue[head])) {
        if (label[w] == kUnset) {
          label[w] = next;
          queue.push_back(w);
        }
      }
    }
    ++next;
  }
  return label;
}

std::size_t component_count(const Graph& g) {
  const auto labels = connected_components(g);
  return labels.empty() ? 0 : *std::max_element(labels.begin(), labels.end()) + 1;
}

bool is_connected(const Graph& g) { return component_count(g) <= 1; }

std::size_t min_degree(const Graph& g) {
  if (g.size() == 0) throw std::invalid_argument("min_degree: graph has no nodes");
  std::size_t best = g.degree(0);
  for (NodeId v = 1; v < g.size(); ++v) best = std::min(best, g.degree(v));
  return best;
}

namespace {

NodeId min_degree_node(const Graph& g) {
  NodeId best = 0;
  for (NodeId v = 1; v < g.size(); ++v) {
    if (g.degree(v) < g.degree(best)) best = v;
  }
  return best;
}

/// Unit vertex-capacity flow on the node-split graph, kept implicit: node v
/// becomes in(v) -> out(v) with capacity 1, and each edge {u, v} becomes
/// out(u) -> in(v) and out(v) -> in(u) with unbounded capacity.
///
/// Flow is stored per node: `used[v]` says v carries a path, `pred[v]` is the
/// node the path enters from. In the residual graph in(v) then has exactly
/// one move (to out(v) if unused, else back to out(pred[v])), so only out
/// states scan adjacency. Augmentation follows Dinic's phases and stops as
/// soon as the flow reaches the cap.
class SplitFlowNetwork {
 public:
  explicit SplitFlowNetwork(const Graph& g)
      : g_(g), n_(g.size()), used_(n_, 0), pred_(n_, kNone), level_(2 * n_), iter_(2 * n_) {}

  /// Max number of internally disjoint s-t paths, stopping at `cap`.
  std::size_t max_flow(NodeId s, NodeId t, std::size_t cap) {
    std::fill(used_.begin(), used_.end(), 0);
    std::fill(pred_.begin(), pred_.end(), kNone);
    s_ = s;
    source_ = out(s);
    sink_ = in(t);
    std::size_t flow = 0;
    saturated_ = false;
    while (flow < cap) {
      if (!build_levels()) {
        saturated_ = true;
        break;
      }
      std::fill(iter_.begin(), iter_.end(), 0);
      while (flow < cap && push_unit()) ++flow;
    }
    return flow;
  }

  /// Minimum separator from the last max_flow call that ended below its cap.
  std::vector<NodeId> last_cut() const {
    assert(saturated_);
    std::vector<NodeId> cut;
    for (NodeId v = 0; v < n_; ++v) {
      if (level_[in(v)] >= 0 && level_[out(v)] < 0) cut.push_back(v);
    }
    return cut;
  }

 private:
  static constexpr NodeId kNone = std::numeric_limits<NodeId>::max();
  static std::uint32_t in(NodeId v) { return 2 * v; }
  static std::uint32_t out(NodeId v) { return 2 * v + 1; }
  static bool is_out(std::uint32_t state) { return (state & 1) != 0; }
  static NodeId node(std::uint32_t state) { return state >> 1; }

  /// The single residual move out of in(v).
  std::uint32_t in_move(NodeId v) const { return used_[v] ? out(pred_[v]) : out(v); }

  /// Calls visit(next) for each residual move out of `state` until it
  /// returns true. Moves into in(s) are pointless and skipped.
  template <typename Visit>
  bool for_each_move(std::uint32_t state, std::size_t from, Visit&& visit) {
    const NodeId v = node(state);
    if (!is_out(state)) return from == 0 && visit(in_move(v), 0);
    const auto nbrs = g_.neighbors(v);
    for (std::size_t i = from; i < nbrs.size(); ++i) {
      if (nbrs[i] != s_ && visit(in(nbrs[i]), i)) return true;
    }
    return used_[v] && visit(in(v), nbrs.size());
  }

  /// BFS levels over residual moves. States at or past the sink's level are
  /// not expanded; when the sink is unreachable the search is exhaustive, so
  /// the labelled set is exactly the source side of a minimum cut.
  bool build_levels() {
    std::fill(level_.begin(), level_.end(), -1);
    queue_.clear();
    level_[source_] = 0;
    queue_.push_back(source_);
    for (std::size_t h = 0; h < queue_.size(); ++h) {
      const std::uint32_t u = queue_[h];
      if (level_[sink_] >= 0 && level_[u] >= level_[sink_]) break;
      const std::int32_t next_level = level_[u] + 1;
      for_each_move(u, 0, [&](std::uint32_t w, std::size_t) {
        if (level_[w] < 0) {
          level_[w] = next_level;
          queue_.push_back(w);
        }
        return false;
      });
    }
    return level_[sink_] >= 0;
  }

  bool push_unit() {
    path_.clear();
    path_.push_back(source_);
    while (!path_.empty()) {
      const std::uint32_t u = path_.back();
      if (u == sink_) {
        apply_path();
        return true;
      }
      const bool advanced =
          for_each_move(u, iter_[u], [&](std::uint32_t w, std::size_t i) {
            iter_[u] = static_cast<std::uint32_t>(i);
            if (level_[w] != level_[u] + 1) return false;
            path_.push_back(w);
            return true;
          });
      if (advanced) continue;
      // Dead end: drop it from the level graph and retreat.
      level_[u] = -1;
      path_.pop_back();
    }
    return false;
  }

  void apply_path() {
    for (std::size_t i = 0; i + 1 < path_.size(); ++i) {
      const std::uint32_t a = path_[i], b = path_[i + 1];
      const NodeId x = node(a), y = node(b);
      if (is_out(a) && !is_out(b)) {
        if (x == y) {
          used_[x] = 0;  // cancel the unit through x
          pred_[x] = kNone;
        } else if (b != sink_) {
          pred_[y] = x;
        }
      } else if (!is_out(a) && x == y) {
        used_[y] = 1;
      }
      // in(y) -> out(pred[y]) cancels an edge; the step that entered in(y)
      // already rewrote pred[y].
    }
  }

  const Graph& g_;
  std::size_t n_;
  std::vector<char> used_;
  std::vector<NodeId> pred_;
  std::vector<std::int32_t> level_;
  std::vector<std::uint32_t> iter_, queue_, path_;
  NodeId s_ = 0;
  std::uint32_t source_ = 0, sink_ = 0;
  bool saturated_ = false;
};

/// Calls fn(x, y) for every pair that must be checked to find the global
/// vertex connectivity: pivot v against each non-neighbor, then each
/// non-adjacent pair of v's neighbors. Stops when fn returns false.
template <typename Fn>
void for_each_separating_pair(const Graph& g, NodeId v, Fn&& fn) {
  const auto nv = g.neighbors(v);
  std::size_t j = 0;
  for (NodeId w = 0; w < g.size(); ++w) {
    while (j < nv.size() && nv[j] < w) ++j;
    if (w == v || (j < nv.size() && nv[j] == w)) continue;
    if (!fn(v, w)) return;
  }
  for (std::size_t a = 0; a < nv.size(); ++a) {
    for (std::size_t b = a + 1; b < nv.size(); ++b) {
      if (g.has_edge(nv[a], nv[b])) continue;
      if (!fn(nv[a], nv[b])) return;
    }
  }
}

}  // namespace

bool has_articulation_point(const Graph& g) {
  const std::size_t n = g.size();
  if (n < 3) return false;
  std::vector<std::int32_t> disc(n, -1), low(n, 0);
  std::vector<std::size_t> next_edge(n, 0);
  std::vector<NodeId> parent(n, 0), stack;
  std::int32_t time = 0;

  for (NodeId root = 0; root < n; ++root) {
    if (disc[root] >= 0) continue;
    std::size_t root_children = 0;
    disc[root] = low[root] = time++;
    stack.push_back(root);
    while (!stack.empty()) {
      const NodeId u = stack.back();
      const auto nbrs = g.neighbors(u);
      if (next_edge[u] < nbrs.size()) {
        const NodeId w = nbrs[next_edge[u]++];
        if (disc[w] < 0) {
          parent[w] = u;
          disc[w] = low[w] = time++;
          if (u == root) ++root_children;
          stack.push_back(w);
        } else if (!(u != root && w == parent[u])) {
          low[u] = std::min(low[u], disc[w]);
        }
        continue;
      }
      stack.pop_back();
      if (u != root) {
        const NodeId p = parent[u];
        low[p] = std::min(low[p], low[u]);
        if (p != root && low[u] >= disc[p]) return true;
      }
    }
    if (root_children >= 2) return true;
  }
  return false;
}

Graph sparse_certificate(const Graph& g, std::size_t k) {
  const std::size_t n = g.size();
  // Edge ids over the (u < v) ordering, so both orientations share one flag.
  std::vector<std::uint32_t> edge_base(n + 1, 0);
  for (NodeId u = 0; u < n; ++u) edge_base[u + 1] = edge_base[u] + static_cast<std::uint32_t>(g.degree(u));
  std::vector<std::uint32_t> id(edge_base.back());
  {
    std::uint32_t next = 0;
    for (NodeId u = 0; u < n; ++u) {
      const auto nu = g.neighbors(u);
      for (std::size_t j = 0; j < nu.size(); ++j) {
        const NodeId v = nu[j];
        if (u < v) {
          id[edge_base[u] + j] = next++;
        } else {
          const auto nv = g.neighbors(v);
          const auto pos = std::lower_bound(nv.begin(), nv.end(), u) - nv.begin();
          id[edge_base[u] + j] = id[edge_base[v] + pos];
        }
      }
    }
  }

  std::vector<char> used(g.edge_count(), 0);
  std::vector<char> visited(n);
  std::vector<NodeId> queue;
  std::vector<std::vector<NodeId>> adj(n);
  for (std::size_t forest = 0; forest < k; ++forest) {
    std::fill(visited.begin(), visited.end(), 0);
    bool grew = false;
    for (NodeId root = 0; root < n; ++root) {
      if (visited[root]) continue;
      visited[root] = 1;
      queue.assign(1, root);
      for (std::size_t h = 0; h < queue.size(); ++h) {
        const NodeId u = queue[h];
        const auto nu = g.neighbors(u);
        for (std::size_t j = 0; j < nu.size(); ++j) {
          const NodeId w = nu[j];
          const std::uint32_t e = id[edge_base[u] + j];
          if (used[e] || visited[w]) continue;
          visited[w] = 1;
          used[e] = 1;
          adj[u].push_back(w);
          adj[w].push_back(u);
          queue.push_back(w);
          grew = true;
        }
      }
    }
    if (!grew) break;
  }
  return Graph::from_adjacency(std::move(adj));
}

std::size_t local_vertex_connectivity(const Graph& g, NodeId s, NodeId t,
                                      std::size_t cap, std::vector<NodeId>* cut) {
  if (s >= g.size() || t >= g.size() || s == t) {
    throw std::invalid_argument("local_vertex_connectivity: need distinct nodes");
  }
  if (g.has_edge(s, t)) {
    throw std::invalid_argument("local_vertex_connectivity: nodes are adjacent");
  }
  SplitFlowNetwork net(g);
  const std::size_t f = net.max_flow(s, t, cap);
  if (cut && f < cap) *cut = net.last_cut();
  return f;
}

bool is_k_connected(const Graph& g, std::size_t k) {
  if (k == 0) throw std::invalid_argument("is_k_connected: k must be positive");
  const std::size_t n = g.size();
  if (n <= k) return false;
  if (min_degree(g) < k) return false;
  if (!is_connected(g)) return false;
  if (g.is_complete()) return true;
  if (k == 1) return true;
  if (k == 2) return !has_articulation_point(g);

  const bool sparsify = k * (n - 1) < g.edge_count();
  const Graph cert = sparsify ? sparse_certificate(g, k) : Graph{};
  const Graph& work = sparsify ? cert : g;
  if (sparsify && min_degree(work) < k) return false;

  SplitFlowNetwork net(work);
  bool ok = true;
  for_each_separating_pair(work, min_degree_node(work), [&](NodeId x, NodeId y) {
    if (net.max_flow(x, y, k) < k) ok = false;
    return ok;
  });
  return ok;
}

CutResult vertex_connectivity(const Graph& g) {
  const std::size_t n = g.size();
  if (n < 2) throw std::invalid_argument("vertex_connectivity: need at least 2 nodes");
  if (!is_connected(g)) return {0, {}};
  if (g.is_complete()) return {n - 1, {}};

  // Removing the neighbors of a minimum-degree node isolates it.
  const NodeId pivot = min_degree_node(g);
  const std::size_t delta = g.degree(pivot);
  CutResult best{delta, {g.neighbors(pivot).begin(), g.neighbors(pivot).end()}};
  if (delta == 1) return best;

  const bool sparsify = delta * (n - 1) < g.edge_count();
  const Graph cert = sparsify ? sparse_certificate(g, delta) : Graph{};
  const Graph& work = sparsify ? cert : g;

  SplitFlowNetwork net(work);
  NodeId best_x = 0, best_y = 0;
  bool improved = false;
  for_each_separating_pair(work, min_degree_node(work), [&](NodeId x, NodeId y) {
    const std::size_t f = net.max_flow(x, y, best.kappa);
    if (f < best.kappa) {
      best.kappa = f;
      best_x = x;
      best_y = y;
      improved = true;
      if (!sparsify) best.cut_nodes = net.last_cut();
    }
    return best.kappa > 1;
  });

  if (improved && sparsify) {
    // Pairs separated by kappa < delta nodes in the certificate are separated
    // by the same number in g; recover the cut there.
    const std::size_t f =
        local_vertex_connectivity(g, best_x, best_y, best.kappa + 1, &best.cut_nodes);
    if (f != best.kappa) {
      throw std::logic_error("vertex_connectivity: certificate disagrees with graph (" +
                             std::to_string(f) + " vs " + std::to_string(best.kappa) + ")");
    }
  }
  return best;
}

Graph delete_nodes(const Graph& g, std::span<const NodeId> victims) {
  constexpr auto kGone = std::numeric_limits<NodeId>::max();
  const std::size_t n = g.size();
  std::vector<NodeId> remap(n, 0);
  for (NodeId v : victims) {
    if (v >= n) throw std::out_of_range("delete_nodes: victim " + std::to_string(v) + " out of range");
    remap[v] = kGone;
  }
  NodeId next = 0;
  for (auto& r : remap) r = (r == kGone) ? kGone : next++;

  std::vector<std::vector<NodeId>> adj(next);
  for (NodeId v = 0; v < n; ++v) {
    if (remap[v] == kGone) continue;
    auto& out = adj[remap[v]];
    for (NodeId w : g.neighbors(v)) {
      if (remap[w] != kGone) out.push_back(remap[w]);
    }
  }
  return Graph::from_adjacency(std::move(adj));
}

}  // namespace hetkc
