#pragma once

// Monte Carlo harness: k-connectivity transition sweeps and the
// minimum-vertex-cut deletion (reliability) experiment.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "hetkc/connectivity.hpp"
#include "hetkc/graph.hpp"
#include "hetkc/params.hpp"
#include "hetkc/rng.hpp"

namespace hetkc {

enum class SweepVariable { K1, Alpha };

struct SweepSpec {
  SweepVariable variable = SweepVariable::K1;
  std::vector<double> values;
  /// Per-class offsets for K1 sweeps: K[j] = K1 + offsets[j].
  std::vector<std::int64_t> offsets;
};

struct ExperimentSpec {
  std::string name;
  NetworkParams base;
  SweepSpec sweep;
  std::vector<std::size_t> ks{2};
  std::size_t trials = 200;
  std::uint64_t master_seed = 0;
  bool compute_kappa = false;

  /// Parameters at sweep point `point` (the base when the sweep is empty).
  NetworkParams params_at(std::size_t point) const;
  std::size_t points() const noexcept;
  double sweep_value(std::size_t point) const;
  /// Throws InvalidParams if any sweep point yields invalid parameters.
  void validate() const;
};

/// Seed for trial `trial` at sweep point `point`: stream = point * 2^32 + trial.
RngSeed trial_seed(std::uint64_t master_seed, std::size_t point, std::size_t trial);

struct TrialResult {
  double sweep_value = 0.0;
  std::size_t trial_index = 0;
  std::optional<std::size_t> kappa;
  std::vector<bool> k_connected;  ///< parallel to ExperimentSpec::ks
  std::size_t min_degree = 0;
};

/// One sample of the intersection graph at `point` and its connectivity
/// verdicts. Throws std::logic_error if the Whitney inequality is violated.
TrialResult run_trial(const ExperimentSpec& spec, std::size_t point, std::size_t trial);

enum class SummaryKind { Sweep, Reliability };

struct SweepRow {
  double sweep_value = 0.0;  ///< swept coordinate, or deletion count
  std::size_t k = 0;         ///< connectivity order, or k_design
  std::size_t trials = 0;
  std::size_t successes = 0;

  double prob() const noexcept {
    return trials == 0 ? 0.0 : static_cast<double>(successes) / static_cast<double>(trials);
  }
  double wilson_half_width() const noexcept;

  friend bool operator==(const SweepRow&, const SweepRow&) = default;
};

/// Half-width of the 95% Wilson score interval.
double wilson_half_width(std::size_t successes, std::size_t trials);

struct SweepSummary {
  std::string experiment;
  SummaryKind kind = SummaryKind::Sweep;
  std::vector<SweepRow> rows;
  /// Critical K1 per k, present for K1 sweeps when solvable.
  std::map<std::size_t, std::int64_t> predicted_K1;
  /// Non-fatal sanity flags (e.g. non-monotone transition curves).
  std::vector<std::string> warnings;
};

struct RunOptions {
  std::size_t workers = 1;
};

/// Samples `trials` graphs per sweep point and tests k-connectivity for each
/// requested k. Output is independent of the worker count.
SweepSummary run_transition_sweep(const ExperimentSpec& spec, const RunOptions& opts = {},
                                  std::vector<TrialResult>* trials_out = nullptr);

/// Smallest sweep value whose empirical probability reaches 0.5 for order k,
/// if any.
std::optional<double> empirical_crossing(const SweepSummary& summary, std::size_t k);

/// connected[d] for d = 0..max_deletions: is `g` still connected after
/// deleting d nodes taken from the minimum cut? For d <= kappa this is
/// d < kappa. Past the cut, further nodes come from the currently largest
/// component, nearest to the deleted set first (ties by node id), and
/// connectivity is tested explicitly. Requires max_deletions < n.
std::vector<bool> deletion_curve(const Graph& g, const CutResult& cut,
                                 std::size_t max_deletions);

/// Per trial: sample, compute the vertex connectivity and minimum cut, then
/// the deletion curve. `spec.ks.front()` is the design order reported in the
/// k column; the sweep must be empty.
SweepSummary run_reliability_experiment(const ExperimentSpec& spec, std::size_t max_deletions,
                                        const RunOptions& opts = {});

// CSV (LF line endings, 6 significant digits for reals):
//   experiment,sweep_value,k,trials,successes,prob
//   experiment,deletions,k_design,trials,successes,prob

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

void write_csv(std::ostream& os, const SweepSummary& summary);
/// Throws IoError naming `path` on failure.
void emit_csv(const SweepSummary& summary, const std::filesystem::path& path);
/// Reads what write_csv produced. prob is recomputed from the counts.
/// Throws std::runtime_error on malformed input.
SweepSummary parse_csv(std::istream& is);

std::string format_real(double v);

}  // namespace hetkc
