#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

namespace graphnli {

// All randomness in the library flows through this header. The generators are
// integer-only and fully specified, so identical seeds give identical streams
// on every platform and standard library.

inline std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t basis = 0xcbf29ce484222325ULL) {
  std::uint64_t h = basis;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() { return splitmix64(state_); }

  // Uniform in [0, 1) with 53 bits of precision.
  double next_double() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // Uniform in [0, n); n > 0. Lemire's multiply-shift with rejection.
  std::uint64_t next_below(std::uint64_t n) {
    __uint128_t m = static_cast<__uint128_t>(next()) * n;
    auto lo = static_cast<std::uint64_t>(m);
    if (lo < n) {
      std::uint64_t threshold = (0ULL - n) % n;
      while (lo < threshold) {
        m = static_cast<__uint128_t>(next()) * n;
        lo = static_cast<std::uint64_t>(m);
      }
    }
    return static_cast<std::uint64_t>(m >> 64);
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

 private:
  std::uint64_t state_;
};

// Derives an independent stream seed from a base seed and a list of key parts
// (numbers or strings). Used to give every (debate, node, epoch, ...) its own
// reproducible stream.
class StreamKey {
 public:
  explicit StreamKey(std::uint64_t seed) : acc_(seed) { mix(0x6a09e667f3bcc909ULL); }

  StreamKey& mix(std::uint64_t part) {
    acc_ ^= part + 0x9e3779b97f4a7c15ULL + (acc_ << 6) + (acc_ >> 2);
    std::uint64_t s = acc_;
    acc_ = splitmix64(s);
    return *this;
  }

  StreamKey& mix(std::string_view part) { return mix(fnv1a64(part)); }

  std::uint64_t value() const { return acc_; }
  SplitMix64 stream() const { return SplitMix64(acc_); }

 private:
  std::uint64_t acc_;
};

// Deterministic Fisher-Yates shuffle of index order.
template <typename T>
void shuffle(std::vector<T>& items, SplitMix64& rng) {
  for (std::size_t i = items.size(); i > 1; --i) {
    std::size_t j = static_cast<std::size_t>(rng.next_below(i));
    std::swap(items[i - 1], items[j]);
  }
}

}  // namespace graphnli
