#pragma once

#include <cstdint>
#include <initializer_list>
#include <vector>

namespace tensorlev {

/// Splittable counter-based random stream.
///
/// A stream is identified by a 64-bit key derived from a seed and a path of
/// child ids. Draw number k of a stream is a pure function of (key, k), so
/// two streams built from the same (seed, path) produce identical draws and
/// children with distinct ids are decorrelated by a strong 64-bit mixer.
///
/// The stateful helpers (uniform, normal, below, ...) advance an internal
/// counter; `child` never touches that counter.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed = 0);

  RngStream child(std::uint64_t id) const;
  RngStream child(std::initializer_list<std::uint64_t> path) const;

  std::uint64_t key() const { return key_; }

  /// Stateless draw at a given counter.
  std::uint64_t bits_at(std::uint64_t counter) const;

  std::uint64_t next_u64() { return bits_at(counter_++); }
  /// Uniform in [0, 1) with 53 bits of resolution.
  double uniform();
  /// Standard normal (Box-Muller).
  double normal();
  /// Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n);
  /// Rademacher sign.
  int sign() { return (next_u64() >> 63) ? 1 : -1; }

  /// m distinct values drawn uniformly from [0, n) (partial Fisher-Yates),
  /// in draw order.
  std::vector<std::uint64_t> sample_without_replacement(std::uint64_t n, std::uint64_t m);

 private:
  RngStream(std::uint64_t key, int) : key_(key) {}

  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  double spare_normal_ = 0.0;
  bool has_spare_ = false;
};

/// Sample an index from unnormalized nonnegative weights by inverse CDF.
/// Requires a positive total.
std::size_t sample_categorical(const std::vector<double>& weights, double total, double u);

}  // namespace tensorlev
