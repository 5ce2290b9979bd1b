#include "hetkc/params.hpp"

#include <cmath>
#include <numeric>

namespace hetkc {

double NetworkParams::mean_ring_size() const {
  double acc = 0.0;
  for (std::size_t j = 0; j < mu.size() && j < K.size(); ++j) {
    acc += mu[j] * static_cast<double>(K[j]);
  }
  return acc;
}

void NetworkParams::validate() const {
  if (n < 1) throw InvalidParams("n", "node count must be positive");
  if (mu.empty()) throw InvalidParams("mu", "at least one class is required");
  if (K.size() != mu.size()) {
    throw InvalidParams("K", "must have one entry per class (" +
                                 std::to_string(mu.size()) + ")");
  }
  if (P < 1) throw InvalidParams("P", "key pool size must be positive");
  if (!(alpha > 0.0 && alpha <= 1.0)) {
    throw InvalidParams("alpha", "channel probability must lie in (0, 1]");
  }

  double sum = 0.0;
  for (double m : mu) {
    if (!(m > 0.0) || !std::isfinite(m)) {
      throw InvalidParams("mu", "every class probability must be > 0");
    }
    sum += m;
  }
  if (std::abs(sum - 1.0) > kMuSumTolerance) {
    throw InvalidParams("mu", "class probabilities must sum to 1");
  }

  for (std::size_t j = 0; j < K.size(); ++j) {
    if (K[j] < 0) throw InvalidParams("K", "key ring sizes must be non-negative");
    if (j > 0 && K[j] < K[j - 1]) {
      throw InvalidParams("K", "key ring sizes must be nondecreasing");
    }
  }
  if (K.back() > P) throw InvalidParams("K", "largest key ring exceeds the pool");
}

}  // namespace hetkc
