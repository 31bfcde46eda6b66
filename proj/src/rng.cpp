#include "tensorlev/rng.hpp"

#include "tensorlev/common.hpp"

#include <cmath>
#include <numbers>
#include <unordered_map>

namespace tensorlev {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

// splitmix64 finalizer
std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace

RngStream::RngStream(std::uint64_t seed) : key_(mix64(seed ^ 0x5EEDF00DCAFEBABEULL)) {}

RngStream RngStream::child(std::uint64_t id) const {
  return RngStream(mix64(key_ ^ mix64(id + kGolden)) + 0x632BE59BD9B4E019ULL, 0);
}

RngStream RngStream::child(std::initializer_list<std::uint64_t> path) const {
  RngStream s = *this;
  for (auto id : path) s = s.child(id);
  return RngStream(s.key_, 0);
}

std::uint64_t RngStream::bits_at(std::uint64_t counter) const {
  std::uint64_t x = mix64(key_ + counter * kGolden);
  return mix64(x ^ (key_ >> 17) ^ (counter << 29));
}

double RngStream::uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

double RngStream::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_normal_;
  }
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double th = 2.0 * std::numbers::pi * u2;
  spare_normal_ = r * std::sin(th);
  has_spare_ = true;
  return r * std::cos(th);
}

std::uint64_t RngStream::below(std::uint64_t n) {
  require(n > 0, "below: empty range");
  // Lemire's nearly divisionless method with rejection.
  unsigned __int128 m = static_cast<unsigned __int128>(next_u64()) * n;
  auto low = static_cast<std::uint64_t>(m);
  if (low < n) {
    const std::uint64_t threshold = (0 - n) % n;
    while (low < threshold) {
      m = static_cast<unsigned __int128>(next_u64()) * n;
      low = static_cast<std::uint64_t>(m);
    }
  }
  return static_cast<std::uint64_t>(m >> 64);
}

std::vector<std::uint64_t> RngStream::sample_without_replacement(std::uint64_t n, std::uint64_t m) {
  require(m <= n, "sample_without_replacement: m > n");
  // Sparse Fisher-Yates: only displaced slots are stored.
  std::unordered_map<std::uint64_t, std::uint64_t> moved;
  std::vector<std::uint64_t> out;
  out.reserve(m);
  auto at = [&](std::uint64_t i) {
    auto it = moved.find(i);
    return it == moved.end() ? i : it->second;
  };
  for (std::uint64_t i = 0; i < m; ++i) {
    const std::uint64_t j = i + below(n - i);
    const std::uint64_t vi = at(i), vj = at(j);
    out.push_back(vj);
    moved[j] = vi;
  }
  return out;
}

std::size_t sample_categorical(const std::vector<double>& weights, double total, double u) {
  require(!weights.empty() && total > 0.0, "sample_categorical: no mass");
  const double target = u * total;
  double acc = 0.0;
  std::size_t last_positive = 0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (weights[i] <= 0.0) continue;
    acc += weights[i];
    last_positive = i;
    if (target < acc) return i;
  }
  return last_positive;
}

}  // namespace tensorlev
