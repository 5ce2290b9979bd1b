#include "hetkc/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace hetkc {

namespace {

double ratio_log1p(std::int64_t shorter, std::int64_t other, std::int64_t P) {
  // log of prod_{l < shorter} (1 - other / (P - l))
  double acc = 0.0;
  const double o = static_cast<double>(other);
  for (std::int64_t l = 0; l < shorter; ++l) {
    acc += std::log1p(-o / static_cast<double>(P - l));
  }
  return acc;
}

double ratio_product(std::int64_t shorter, std::int64_t other, std::int64_t P) {
  double acc = 1.0;
  for (std::int64_t l = 0; l < shorter; ++l) {
    acc *= static_cast<double>(P - other - l) / static_cast<double>(P - l);
  }
  return acc;
}

double ratio_lgamma(std::int64_t shorter, std::int64_t other, std::int64_t P) {
  // log C(P - other, shorter) - log C(P, shorter)
  const auto lg = [](std::int64_t x) { return std::lgamma(static_cast<double>(x) + 1.0); };
  return lg(P - other) - lg(P - other - shorter) - lg(P) + lg(P - shorter);
}

}  // namespace

double edge_prob_pij(std::int64_t Ki, std::int64_t Kj, std::int64_t P,
                     BinomialEval eval) {
  if (P < 1) throw std::domain_error("edge_prob_pij: pool size must be positive");
  if (Ki < 0 || Kj < 0 || Ki > P || Kj > P) {
    throw std::domain_error("edge_prob_pij: key ring size outside [0, P] (Ki=" +
                            std::to_string(Ki) + ", Kj=" + std::to_string(Kj) +
                            ", P=" + std::to_string(P) + ")");
  }
  if (Ki + Kj > P) return 1.0;
  if (Ki == 0 || Kj == 0) return 0.0;

  // C(P-Ki, Kj)/C(P, Kj) is symmetric in (Ki, Kj); iterate over the shorter.
  const std::int64_t shorter = std::min(Ki, Kj);
  const std::int64_t other = std::max(Ki, Kj);

  double p = 0.0;
  switch (eval) {
    case BinomialEval::Log1pSum:
      p = -std::expm1(ratio_log1p(shorter, other, P));
      break;
    case BinomialEval::Product:
      p = 1.0 - ratio_product(shorter, other, P);
      break;
    case BinomialEval::LogGamma:
      p = -std::expm1(ratio_lgamma(shorter, other, P));
      break;
  }
  return std::clamp(p, 0.0, 1.0);
}

double mean_edge_prob_lambda(std::size_t i, const NetworkParams& params) {
  if (i >= params.classes()) {
    throw InvalidParams("class", "class index " + std::to_string(i) +
                                     " out of range for " +
                                     std::to_string(params.classes()) + " classes");
  }
  double acc = 0.0;
  for (std::size_t j = 0; j < params.classes(); ++j) {
    acc += params.mu[j] * edge_prob_pij(params.K[i], params.K[j], params.P);
  }
  return std::clamp(acc, 0.0, 1.0);
}

double mean_edge_prob_Lambda(std::size_t i, const NetworkParams& params) {
  return params.alpha * mean_edge_prob_lambda(i, params);
}

double lambda1_asymptotic(const NetworkParams& params) {
  params.validate();
  return static_cast<double>(params.K.front()) * params.mean_ring_size() /
         static_cast<double>(params.P);
}

double critical_lambda1(std::int64_t n, int k, double alpha) {
  if (n < 3) throw InvalidParams("n", "must be at least 3 so that log log n is defined");
  if (k < 1) throw InvalidParams("k", "connectivity order must be positive");
  if (!(alpha > 0.0 && alpha <= 1.0)) throw InvalidParams("alpha", "must lie in (0, 1]");
  const double nn = static_cast<double>(n);
  const double ln = std::log(nn);
  return (ln + (k - 1) * std::log(ln)) / (alpha * nn);
}

NetworkParams CriticalK1Query::params_at(std::int64_t K1) const {
  NetworkParams p;
  p.n = n;
  p.mu = mu;
  p.P = P;
  p.alpha = alpha;
  p.K.reserve(offsets.size());
  for (auto off : offsets) p.K.push_back(K1 + off);
  return p;
}

CriticalK1 critical_k1(const CriticalK1Query& q) {
  const double threshold = critical_lambda1(q.n, q.k, q.alpha);
  if (q.offsets.size() != q.mu.size()) {
    throw InvalidParams("offsets", "must have one entry per class");
  }
  if (q.offsets.empty() || q.offsets.front() != 0) {
    throw InvalidParams("offsets", "first offset must be 0");
  }
  if (!std::is_sorted(q.offsets.begin(), q.offsets.end())) {
    throw InvalidParams("offsets", "must be nondecreasing");
  }
  const std::int64_t hi_limit = q.P - q.offsets.back();
  if (hi_limit < 1) throw Unsatisfiable("no K1 >= 1 fits in the key pool");
  q.params_at(hi_limit).validate();

  const auto lambda_at = [&](std::int64_t K1) {
    return mean_edge_prob_lambda(0, q.params_at(K1));
  };

  if (!(lambda_at(hi_limit) > threshold)) {
    throw Unsatisfiable("lambda_1 never exceeds " + std::to_string(threshold) +
                        " for K1 <= " + std::to_string(hi_limit));
  }
  // lambda_1 is nondecreasing in K1; find the first K1 that clears it.
  std::int64_t lo = 1, hi = hi_limit;
  while (lo < hi) {
    const std::int64_t mid = lo + (hi - lo) / 2;
    if (lambda_at(mid) > threshold) {
      hi = mid;
    } else {
      lo = mid + 1;
    }
  }

  CriticalK1 out{lo, lambda_at(lo), threshold};
  if (!(out.lambda1 > threshold) || (lo > 1 && lambda_at(lo - 1) > threshold)) {
    throw std::logic_error("critical_k1: result is not the minimal solution");
  }
  return out;
}

bool check_scaling_admissible(const NetworkParams& params) {
  return !params.K.empty() && params.K.front() >= 2 &&
         std::is_sorted(params.K.begin(), params.K.end()) &&
         2 * params.K.back() <= params.P;
}

ScalingEvaluation evaluate_scaling(const NetworkParams& params, int k,
                                   const OneLawThresholds& thresholds) {
  params.validate();
  if (params.n < 3) throw InvalidParams("n", "must be at least 3");
  if (k < 1) throw InvalidParams("k", "connectivity order must be positive");

  ScalingEvaluation ev;
  ev.n = params.n;
  ev.k = k;
  ev.lambda1 = mean_edge_prob_lambda(0, params);
  ev.Lambda1 = params.alpha * ev.lambda1;

  const double nn = static_cast<double>(params.n);
  const double ln = std::log(nn);
  ev.gamma_n = nn * ev.Lambda1 - ln - (k - 1) * std::log(ln);
  ev.admissible = check_scaling_admissible(params);

  const double K1 = static_cast<double>(params.K.front());
  const double Kr = static_cast<double>(params.K.back());
  const double P = static_cast<double>(params.P);
  auto& f = ev.one_law;
  f.pool_per_node = P / nn;
  f.ring_to_pool = Kr / P;
  f.ring_spread_per_log = K1 > 0 ? Kr / (K1 * ln) : std::numeric_limits<double>::infinity();
  f.pool_ok = f.pool_per_node >= thresholds.min_pool_per_node;
  f.ring_to_pool_ok = f.ring_to_pool <= thresholds.max_ring_to_pool;
  f.ring_spread_ok = f.ring_spread_per_log <= thresholds.max_ring_spread_per_log;
  return ev;
}

NetworkParams ExampleScaling::with_mu(std::vector<double> mu) const {
  NetworkParams p;
  p.n = n;
  p.mu = std::move(mu);
  p.K = K;
  p.P = P;
  p.alpha = alpha;
  return p;
}

ExampleScaling example_scaling(std::int64_t n, const ExampleScalingParams& es,
                               std::size_t r) {
  if (n < 3) throw InvalidParams("n", "must be at least 3");
  if (r < 1) throw InvalidParams("r", "need at least one class");
  if (!(es.epsilon > 0.0)) throw InvalidParams("epsilon", "must be positive");
  if (!(es.mu_r > 0.0 && es.mu_r <= 1.0)) throw InvalidParams("mu_r", "must lie in (0, 1]");
  if (!es.alpha_fn) throw InvalidParams("alpha_fn", "channel probability sequence missing");
  const double alpha = es.alpha_fn(n);
  if (!(alpha > 0.0 && alpha <= 1.0)) throw InvalidParams("alpha_fn", "value must lie in (0, 1]");

  const double ln = std::log(static_cast<double>(n));
  const double root_alpha = std::sqrt(alpha);

  ExampleScaling out;
  out.n = n;
  out.alpha = alpha;
  out.P = std::llround(static_cast<double>(n) * ln);

  const std::int64_t K1 = std::llround(std::pow(ln, 0.5 + es.epsilon) / root_alpha);
  if (r == 1) {
    // A single class is both the smallest and the largest; the smallest ring
    // governs lambda_1.
    out.K = {K1};
    return out;
  }
  const std::int64_t Kr = std::llround((1.0 + es.epsilon) * std::pow(ln, 1.5 - es.epsilon) /
                               (es.mu_r * root_alpha));
  if (K1 > Kr) {
    throw InvalidParams("epsilon", "rounded K_1 = " + std::to_string(K1) +
                                       " exceeds K_r = " + std::to_string(Kr));
  }

  out.K.resize(r);
  out.K.front() = K1;
  out.K.back() = Kr;
  for (std::size_t i = 1; i + 1 < r; ++i) {
    const double t = static_cast<double>(i) / static_cast<double>(r - 1);
    out.K[i] = std::llround(static_cast<double>(K1) + t * static_cast<double>(Kr - K1));
  }
  for (std::size_t i = 1; i < r; ++i) {
    out.K[i] = std::clamp(out.K[i], out.K[i - 1], Kr);
  }
  return out;
}

}  // namespace hetkc
