#pragma once

// Closed-form theory for the intersection of an inhomogeneous random key
// graph with an Erdos-Renyi channel graph: edge probabilities, mean edge
// probabilities, the k-connectivity critical key ring size and the
// deviation sequence of a parameter scaling. All logarithms are natural.

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "hetkc/params.hpp"

namespace hetkc {

/// How the binomial ratio C(P-Ki, Kj) / C(P, Kj) is evaluated.
enum class BinomialEval {
  /// Sum of log1p(-Ki / (P - l)) followed by -expm1; accurate even when the
  /// probability is tiny. This is the default.
  Log1pSum,
  /// Plain floating-point product of (P - Ki - l) / (P - l), then 1 - ratio.
  Product,
  /// Differences of lgamma; only sensible for very large pools.
  LogGamma,
};

/// Probability that rings of sizes `Ki` and `Kj` drawn from a pool of `P`
/// keys intersect. Exactly 1 when Ki + Kj > P.
/// Throws std::domain_error if a ring is larger than the pool or negative.
double edge_prob_pij(std::int64_t Ki, std::int64_t Kj, std::int64_t P,
                     BinomialEval eval = BinomialEval::Log1pSum);

/// Mean edge probability of a class-`i` node in the key graph:
/// sum_j mu[j] * p_ij.
double mean_edge_prob_lambda(std::size_t i, const NetworkParams& params);

/// Mean edge probability of a class-`i` node in the intersection graph,
/// alpha * lambda_i.
double mean_edge_prob_Lambda(std::size_t i, const NetworkParams& params);

/// K_1 * K_avg / P. Approximates lambda_1 when lambda_1 is small.
double lambda1_asymptotic(const NetworkParams& params);

/// Right-hand side of the critical inequality on lambda_1:
/// (log n + (k - 1) log log n) / (alpha n).
double critical_lambda1(std::int64_t n, int k, double alpha);

/// Thrown by critical_k1 when no admissible K_1 clears the threshold.
class Unsatisfiable : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct CriticalK1Query {
  std::int64_t n = 0;
  int k = 1;
  double alpha = 1.0;
  std::vector<double> mu;
  /// K[j] = K1 + offsets[j]; offsets[0] must be 0, nondecreasing.
  std::vector<std::int64_t> offsets;
  std::int64_t P = 0;

  NetworkParams params_at(std::int64_t K1) const;
};

struct CriticalK1 {
  std::int64_t K1 = 0;
  double lambda1 = 0.0;     ///< lambda_1 at K1
  double threshold = 0.0;   ///< the bound lambda_1 must strictly exceed
};

/// Smallest K1 >= 1 with lambda_1(K1) > critical_lambda1(n, k, alpha).
/// Throws InvalidParams for malformed queries and Unsatisfiable if no K1 with
/// K1 + max(offsets) <= P qualifies.
CriticalK1 critical_k1(const CriticalK1Query& query);

/// Finite-n thresholds used to turn the asymptotic one-law side conditions
/// into verdicts. They are engineering defaults, not limits.
struct OneLawThresholds {
  double min_pool_per_node = 1.0;       ///< P / n >= this
  double max_ring_to_pool = 0.1;        ///< K_r / P <= this
  double max_ring_spread_per_log = 1.0; ///< K_r / (K_1 log n) <= this
};

struct OneLawFlags {
  double pool_per_node = 0.0;        ///< P / n
  double ring_to_pool = 0.0;         ///< K_r / P
  double ring_spread_per_log = 0.0;  ///< K_r / (K_1 log n)
  bool pool_ok = false;
  bool ring_to_pool_ok = false;
  bool ring_spread_ok = false;

  bool all() const noexcept { return pool_ok && ring_to_pool_ok && ring_spread_ok; }
};

struct ScalingEvaluation {
  std::int64_t n = 0;
  int k = 1;
  double lambda1 = 0.0;
  double Lambda1 = 0.0;
  double gamma_n = 0.0;
  bool admissible = false;  ///< 2 <= K_1 <= ... <= K_r <= P / 2
  OneLawFlags one_law;
};

/// True when 2 <= K[0] and K.back() <= P / 2 (ordering is checked by
/// NetworkParams::validate).
bool check_scaling_admissible(const NetworkParams& params);

/// gamma_n = n Lambda_1 - log n - (k - 1) log log n at the given n.
/// Requires n >= 3 and k >= 1.
ScalingEvaluation evaluate_scaling(const NetworkParams& params, int k,
                                   const OneLawThresholds& thresholds = {});

struct ExampleScalingParams {
  double epsilon = 0.1;
  std::function<double(std::int64_t)> alpha_fn;
  double mu_r = 1.0;  ///< mass of the class with the largest rings
};

/// Pool and key ring sizes of the P = n log n example scaling at one n.
struct ExampleScaling {
  std::int64_t n = 0;
  std::int64_t P = 0;
  std::vector<std::int64_t> K;
  double alpha = 1.0;

  NetworkParams with_mu(std::vector<double> mu) const;
};

/// P = round(n log n), K_1 = round((log n)^(1/2+eps) / sqrt(alpha_n)),
/// K_r = round((1+eps)(log n)^(3/2-eps) / (mu_r sqrt(alpha_n))); the classes
/// in between are linearly interpolated. Throws InvalidParams when rounding
/// leaves K_1 > K_r or inputs are out of range.
ExampleScaling example_scaling(std::int64_t n, const ExampleScalingParams& es,
                               std::size_t r);

}  // namespace hetkc
