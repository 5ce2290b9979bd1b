#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace hetkc {

/// Raised when a parameter set violates its contract. `field()` names the
/// offending input so front ends can report it.
class InvalidParams : public std::invalid_argument {
 public:
  InvalidParams(std::string field, const std::string& what)
      : std::invalid_argument(field + ": " + what), field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

/// Parameterization of the heterogeneous key predistribution network under
/// on/off channels.
///
/// Classes are 0-based in this API: class 0 has the smallest key ring and
/// `K.back()` the largest. The number of classes is `mu.size()`.
struct NetworkParams {
  std::int64_t n = 0;            ///< sensor node count
  std::vector<double> mu;        ///< class distribution
  std::vector<std::int64_t> K;   ///< key ring size per class, nondecreasing
  std::int64_t P = 0;            ///< key pool size
  double alpha = 1.0;            ///< channel-on probability, in (0, 1]

  std::size_t classes() const noexcept { return mu.size(); }

  /// Mean key ring size over the class distribution.
  double mean_ring_size() const;

  /// Throws InvalidParams on the first violated invariant.
  void validate() const;
};

inline constexpr double kMuSumTolerance = 1e-12;

}  // namespace hetkc
