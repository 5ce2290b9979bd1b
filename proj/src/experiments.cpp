#include "hetkc/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <thread>

#include "hetkc/graphgen.hpp"
#include "hetkc/model.hpp"

namespace hetkc {

namespace {

/// Runs fn(i) for i in [0, count) on `workers` threads. Results must be
/// stored by index; the first exception is rethrown after all threads stop.
template <typename Fn>
void parallel_for(std::size_t count, std::size_t workers, Fn&& fn) {
  workers = std::clamp<std::size_t>(workers, 1, std::max<std::size_t>(count, 1));
  if (workers == 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      while (!failed.load(std::memory_order_relaxed)) {
        const std::size_t i = next.fetch_add(1);
        if (i >= count) return;
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
          failed = true;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace

std::size_t ExperimentSpec::points() const noexcept {
  return sweep.values.empty() ? 1 : sweep.values.size();
}

double ExperimentSpec::sweep_value(std::size_t point) const {
  return sweep.values.empty() ? 0.0 : sweep.values.at(point);
}

NetworkParams ExperimentSpec::params_at(std::size_t point) const {
  NetworkParams p = base;
  if (sweep.values.empty()) return p;
  const double v = sweep.values.at(point);
  switch (sweep.variable) {
    case SweepVariable::K1: {
      if (sweep.offsets.size() != p.classes()) {
        throw InvalidParams("offsets", "K1 sweep needs one offset per class");
      }
      const auto K1 = static_cast<std::int64_t>(std::llround(v));
      if (static_cast<double>(K1) != v) throw InvalidParams("sweep", "K1 values must be integers");
      p.K.resize(p.classes());
      for (std::size_t j = 0; j < p.classes(); ++j) p.K[j] = K1 + sweep.offsets[j];
      break;
    }
    case SweepVariable::Alpha:
      p.alpha = v;
      break;
  }
  return p;
}

void ExperimentSpec::validate() const {
  if (trials < 1) throw InvalidParams("trials", "must be at least 1");
  if (ks.empty()) throw InvalidParams("k", "at least one connectivity order is required");
  for (auto k : ks) {
    if (k < 1) throw InvalidParams("k", "connectivity orders must be positive");
  }
  if (name.find_first_of(",\n\r") != std::string::npos) {
    throw InvalidParams("name", "experiment name may not contain commas or newlines");
  }
  if (sweep.variable == SweepVariable::K1 && !sweep.values.empty()) {
    if (sweep.offsets.empty() || sweep.offsets.front() != 0) {
      throw InvalidParams("offsets", "first offset must be 0");
    }
  }
  for (std::size_t j = 0; j < points(); ++j) params_at(j).validate();
}

RngSeed trial_seed(std::uint64_t master_seed, std::size_t point, std::size_t trial) {
  return {master_seed, (static_cast<std::uint64_t>(point) << 32) + static_cast<std::uint64_t>(trial)};
}

TrialResult run_trial(const ExperimentSpec& spec, std::size_t point, std::size_t trial) {
  const NetworkParams params = spec.params_at(point);
  const Graph g = sample_intersection_model(params, trial_seed(spec.master_seed, point, trial));

  TrialResult r;
  r.sweep_value = spec.sweep_value(point);
  r.trial_index = trial;
  r.min_degree = min_degree(g);
  if (spec.compute_kappa && g.size() >= 2) {
    r.kappa = vertex_connectivity(g).kappa;
    if (*r.kappa > r.min_degree) throw std::logic_error("Whitney inequality violated");
  }
  r.k_connected.reserve(spec.ks.size());
  for (std::size_t k : spec.ks) {
    const bool ok = is_k_connected(g, k);
    if (ok && r.min_degree < k) throw std::logic_error("k-connected graph with min degree < k");
    if (r.kappa && ok != (*r.kappa >= k)) {
      throw std::logic_error("is_k_connected disagrees with vertex connectivity");
    }
    r.k_connected.push_back(ok);
  }
  return r;
}

double wilson_half_width(std::size_t successes, std::size_t trials) {
  if (trials == 0) return 0.0;
  constexpr double z = 1.959963984540054;
  const double nt = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / nt;
  const double z2 = z * z;
  return z / (1.0 + z2 / nt) * std::sqrt(p * (1.0 - p) / nt + z2 / (4.0 * nt * nt));
}

double SweepRow::wilson_half_width() const noexcept {
  return hetkc::wilson_half_width(successes, trials);
}

SweepSummary run_transition_sweep(const ExperimentSpec& spec, const RunOptions& opts,
                                  std::vector<TrialResult>* trials_out) {
  spec.validate();
  const std::size_t points = spec.points();
  const std::size_t total = points * spec.trials;

  std::vector<TrialResult> results(total);
  parallel_for(total, opts.workers, [&](std::size_t idx) {
    results[idx] = run_trial(spec, idx / spec.trials, idx % spec.trials);
  });

  SweepSummary s;
  s.experiment = spec.name;
  s.kind = SummaryKind::Sweep;
  for (std::size_t j = 0; j < points; ++j) {
    for (std::size_t q = 0; q < spec.ks.size(); ++q) {
      SweepRow row{spec.sweep_value(j), spec.ks[q], spec.trials, 0};
      for (std::size_t i = 0; i < spec.trials; ++i) {
        if (results[j * spec.trials + i].k_connected[q]) ++row.successes;
      }
      s.rows.push_back(row);
    }
  }

  if (spec.sweep.variable == SweepVariable::K1 && !spec.sweep.values.empty()) {
    for (std::size_t k : spec.ks) {
      CriticalK1Query q{spec.base.n, static_cast<int>(k), spec.base.alpha, spec.base.mu,
                        spec.sweep.offsets, spec.base.P};
      try {
        s.predicted_K1[k] = critical_k1(q).K1;
      } catch (const Unsatisfiable&) {
      } catch (const InvalidParams&) {
        // n < 3: no threshold to report.
      }
    }
    // Monotone up to binomial noise; flag drops larger than 0.15.
    for (std::size_t q = 0; q < spec.ks.size(); ++q) {
      for (std::size_t j = 1; j < points; ++j) {
        const auto& prev = s.rows[(j - 1) * spec.ks.size() + q];
        const auto& cur = s.rows[j * spec.ks.size() + q];
        if (prev.prob() - cur.prob() > 0.15) {
          s.warnings.push_back("k=" + std::to_string(cur.k) + ": probability drops from " +
                               format_real(prev.prob()) + " to " + format_real(cur.prob()) +
                               " at K1=" + format_real(cur.sweep_value));
        }
      }
    }
  }

  if (trials_out) *trials_out = std::move(results);
  return s;
}

std::optional<double> empirical_crossing(const SweepSummary& summary, std::size_t k) {
  std::optional<double> best;
  for (const auto& row : summary.rows) {
    if (row.k != k || row.prob() < 0.5) continue;
    if (!best || row.sweep_value < *best) best = row.sweep_value;
  }
  return best;
}

std::vector<bool> deletion_curve(const Graph& g, const CutResult& cut, std::size_t max_deletions) {
  const std::size_t n = g.size();
  if (max_deletions >= n) {
    throw std::invalid_argument("deletion_curve: max_deletions must be below n");
  }
  std::vector<bool> connected(max_deletions + 1, true);
  if (n >= 2 && cut.kappa == n - 1 && cut.cut_nodes.empty()) return connected;  // complete

  const std::size_t kappa = cut.kappa;
  for (std::size_t d = 0; d <= std::min(kappa, max_deletions); ++d) connected[d] = d < kappa;
  if (max_deletions <= kappa) return connected;

  std::vector<NodeId> deleted(cut.cut_nodes.begin(), cut.cut_nodes.end());
  std::vector<char> is_deleted(n, 0);
  for (NodeId v : deleted) is_deleted[v] = 1;

  constexpr auto kFar = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> dist(n);
  std::vector<NodeId> queue;
  for (std::size_t d = kappa + 1; d <= max_deletions; ++d) {
    // Distance from the deleted set in the original graph.
    std::fill(dist.begin(), dist.end(), kFar);
    queue.assign(deleted.begin(), deleted.end());
    for (NodeId v : deleted) dist[v] = 0;
    for (std::size_t h = 0; h < queue.size(); ++h) {
      for (NodeId w : g.neighbors(queue[h])) {
        if (dist[w] == kFar) {
          dist[w] = dist[queue[h]] + 1;
          queue.push_back(w);
        }
      }
    }

    // Largest surviving component; labels follow node order, so ties go to
    // the component holding the smallest surviving id.
    std::vector<NodeId> survivors;
    for (NodeId v = 0; v < n; ++v) {
      if (!is_deleted[v]) survivors.push_back(v);
    }
    const Graph rest = delete_nodes(g, deleted);
    const auto labels = connected_components(rest);
    std::vector<std::size_t> sizes;
    for (auto l : labels) {
      if (l >= sizes.size()) sizes.resize(l + 1, 0);
      ++sizes[l];
    }
    const auto largest = static_cast<std::uint32_t>(
        std::max_element(sizes.begin(), sizes.end()) - sizes.begin());

    NodeId pick = 0;
    std::size_t pick_dist = kFar;
    bool found = false;
    for (std::size_t i = 0; i < survivors.size(); ++i) {
      if (labels[i] != largest) continue;
      const NodeId v = survivors[i];
      if (!found || dist[v] < pick_dist) {
        pick = v;
        pick_dist = dist[v];
        found = true;
      }
    }
    deleted.push_back(pick);
    is_deleted[pick] = 1;
    connected[d] = is_connected(delete_nodes(g, deleted));
  }
  return connected;
}

SweepSummary run_reliability_experiment(const ExperimentSpec& spec, std::size_t max_deletions,
                                        const RunOptions& opts) {
  spec.validate();
  if (!spec.sweep.values.empty()) {
    throw InvalidParams("sweep", "the reliability experiment uses fixed parameters");
  }
  if (max_deletions >= static_cast<std::size_t>(spec.base.n)) {
    throw InvalidParams("max_deletions", "must be below n");
  }
  if (spec.base.n < 2) throw InvalidParams("n", "need at least 2 nodes");

  std::vector<std::vector<bool>> curves(spec.trials);
  parallel_for(spec.trials, opts.workers, [&](std::size_t i) {
    const Graph g = sample_intersection_model(spec.base, trial_seed(spec.master_seed, 0, i));
    const CutResult cut = vertex_connectivity(g);
    if (cut.kappa > min_degree(g)) throw std::logic_error("Whitney inequality violated");
    curves[i] = deletion_curve(g, cut, max_deletions);
  });

  SweepSummary s;
  s.experiment = spec.name;
  s.kind = SummaryKind::Reliability;
  const std::size_t k_design = spec.ks.front();
  for (std::size_t d = 0; d <= max_deletions; ++d) {
    SweepRow row{static_cast<double>(d), k_design, spec.trials, 0};
    for (const auto& c : curves) row.successes += c[d] ? 1 : 0;
    s.rows.push_back(row);
  }
  for (std::size_t d = 1; d <= max_deletions; ++d) {
    if (s.rows[d].successes > s.rows[d - 1].successes) {
      s.warnings.push_back("reliability curve rises at d=" + std::to_string(d));
    }
  }
  return s;
}

}  // namespace hetkc
