#include "hetkc/graphgen.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace hetkc {

std::vector<KeyId> sample_ring(Engine& eng, std::int64_t K, std::int64_t P,
                               std::vector<KeyId>& pool) {
  if (K < 0 || K > P) throw std::domain_error("sample_ring: need 0 <= K <= P");
  std::vector<KeyId> ring;
  ring.reserve(static_cast<std::size_t>(K));
  const auto bound = static_cast<std::uint64_t>(P);

  if (K * kRejectionDivisor <= P) {
    while (ring.size() < static_cast<std::size_t>(K)) {
      const auto key = static_cast<KeyId>(uniform_below(eng, bound));
      auto pos = std::lower_bound(ring.begin(), ring.end(), key);
      if (pos == ring.end() || *pos != key) ring.insert(pos, key);
    }
    return ring;
  }

  // Partial Fisher-Yates. Any starting permutation of the pool gives a
  // uniform K-subset, so the scratch array is not reset between calls.
  if (pool.size() != bound) {
    pool.resize(bound);
    std::iota(pool.begin(), pool.end(), KeyId{0});
  }
  for (std::int64_t i = 0; i < K; ++i) {
    const auto j = static_cast<std::size_t>(i) +
                   uniform_below(eng, bound - static_cast<std::uint64_t>(i));
    std::swap(pool[static_cast<std::size_t>(i)], pool[j]);
  }
  ring.assign(pool.begin(), pool.begin() + K);
  std::sort(ring.begin(), ring.end());
  return ring;
}

KeyAssignment sample_key_assignment(const NetworkParams& params, const RngSeed& seed) {
  params.validate();
  const auto n = static_cast<std::size_t>(params.n);
  const std::size_t r = params.classes();

  std::vector<double> cumulative(r);
  std::partial_sum(params.mu.begin(), params.mu.end(), cumulative.begin());

  KeyAssignment out;
  out.P = params.P;
  out.classes.resize(n);
  out.rings.resize(n);

  Engine class_eng = make_engine(seed, Stage::Classes);
  for (auto& c : out.classes) {
    const double u = uniform_unit(class_eng);
    std::size_t t = 0;
    while (t + 1 < r && u >= cumulative[t]) ++t;
    c = static_cast<std::uint32_t>(t);
  }

  Engine ring_eng = make_engine(seed, Stage::Rings);
  std::vector<KeyId> pool;
  for (std::size_t x = 0; x < n; ++x) {
    out.rings[x] = sample_ring(ring_eng, params.K[out.classes[x]], params.P, pool);
  }
  return out;
}

Graph build_key_graph(const KeyAssignment& a) {
  const std::size_t n = a.size();
  const auto P = static_cast<std::size_t>(a.P);

  // Inverted index in CSR form: holders of key `k` are
  // holders[start[k] .. start[k+1]).
  std::vector<std::uint32_t> start(P + 1, 0);
  for (const auto& ring : a.rings) {
    for (KeyId key : ring) ++start[key + 1];
  }
  std::partial_sum(start.begin(), start.end(), start.begin());
  std::vector<NodeId> holders(start.back());
  std::vector<std::uint32_t> fill(start.begin(), start.end() - 1);
  for (std::size_t x = 0; x < n; ++x) {
    for (KeyId key : a.rings[x]) holders[fill[key]++] = static_cast<NodeId>(x);
  }

  std::vector<std::vector<NodeId>> adj(n);
  if (n <= kDenseRowLimit) {
    // Mark neighbors in a bit row, then read them back in order: sorted and
    // duplicate-free without a per-node sort.
    const std::size_t words = (n + 63) / 64;
    std::vector<std::uint64_t> row(words);
    for (std::size_t x = 0; x < n; ++x) {
      std::fill(row.begin(), row.end(), 0);
      for (KeyId key : a.rings[x]) {
        for (auto h = start[key]; h < start[key + 1]; ++h) {
          const NodeId y = holders[h];
          row[y >> 6] |= std::uint64_t{1} << (y & 63);
        }
      }
      row[x >> 6] &= ~(std::uint64_t{1} << (x & 63));
      auto& out = adj[x];
      for (std::size_t w = 0; w < words; ++w) {
        for (std::uint64_t bits = row[w]; bits != 0; bits &= bits - 1) {
          out.push_back(static_cast<NodeId>(w * 64 + static_cast<std::size_t>(std::countr_zero(bits))));
        }
      }
    }
    return Graph::from_adjacency(std::move(adj));
  }

  for (std::size_t key = 0; key < P; ++key) {
    const auto first = holders.begin() + start[key];
    const auto last = holders.begin() + start[key + 1];
    for (auto it = first; it != last; ++it) {
      for (auto jt = it + 1; jt != last; ++jt) {
        adj[*it].push_back(*jt);
        adj[*jt].push_back(*it);
      }
    }
  }
  return Graph::from_adjacency(std::move(adj));
}

namespace {

/// Channel coin for the unordered pair u < v.
CounterCoins channel_coins(const RngSeed& seed) {
  Engine eng = make_engine(seed, Stage::Channels);
  return CounterCoins(eng());
}

std::uint64_t pair_index(std::size_t n, std::size_t u, std::size_t v) {
  return static_cast<std::uint64_t>(u) * n + v;
}

}  // namespace

Graph sample_er_graph(std::size_t n, double alpha, const RngSeed& seed) {
  if (!(alpha > 0.0 && alpha <= 1.0)) {
    throw InvalidParams("alpha", "channel probability must lie in (0, 1]");
  }
  if (alpha == 1.0) return Graph::complete(n);

  const CounterCoins coins = channel_coins(seed);
  std::vector<std::vector<NodeId>> adj(n);
  const auto expected = static_cast<std::size_t>(alpha * static_cast<double>(n) * 1.1) + 4;
  for (auto& l : adj) l.reserve(expected);
  for (std::size_t u = 0; u < n; ++u) {
    for (std::size_t v = u + 1; v < n; ++v) {
      if (coins.flip(pair_index(n, u, v), alpha)) {
        adj[u].push_back(static_cast<NodeId>(v));
        adj[v].push_back(static_cast<NodeId>(u));
      }
    }
  }
  // Pairs are visited in lexicographic order, so every list is already
  // sorted and duplicate-free.
  return Graph::from_adjacency(std::move(adj));
}

Graph intersect_graphs(const Graph& a, const Graph& b) {
  if (a.size() != b.size()) {
    throw std::invalid_argument("intersect_graphs: node counts differ (" +
                                std::to_string(a.size()) + " vs " +
                                std::to_string(b.size()) + ")");
  }
  std::vector<std::vector<NodeId>> adj(a.size());
  for (std::size_t v = 0; v < a.size(); ++v) {
    const auto na = a.neighbors(static_cast<NodeId>(v));
    const auto nb = b.neighbors(static_cast<NodeId>(v));
    std::set_intersection(na.begin(), na.end(), nb.begin(), nb.end(),
                          std::back_inserter(adj[v]));
  }
  return Graph::from_adjacency(std::move(adj));
}

Graph sample_intersection_model(const NetworkParams& params, const RngSeed& seed) {
  const Graph keys = build_key_graph(sample_key_assignment(params, seed));
  const auto n = static_cast<std::size_t>(params.n);
  if (params.alpha == 1.0) return keys;

  // Channel coins are per pair, so only key-graph edges need one; the
  // result equals intersect_graphs(keys, sample_er_graph(n, alpha, seed)).
  const CounterCoins coins = channel_coins(seed);
  std::vector<std::vector<NodeId>> adj(n);
  for (std::size_t u = 0; u < n; ++u) {
    for (NodeId v : keys.neighbors(static_cast<NodeId>(u))) {
      if (v > u && coins.flip(pair_index(n, u, v), params.alpha)) {
        adj[u].push_back(v);
        adj[v].push_back(static_cast<NodeId>(u));
      }
    }
  }
  return Graph::from_adjacency(std::move(adj));
}

}  // namespace hetkc
