#pragma once

#include <cstdint>

namespace morselab {

// Counter-based generator: the n-th draw of stream s under seed x is
//
//   splitmix64( splitmix64(x ^ (0x9e3779b97f4a7c15 * (s+1))) + n )
//
// so a (seed, stream, counter) triple fully determines every value, no
// matter how work is split across threads. Streams are cheap; suites give
// every trial its own stream id and never share generator state.
struct CounterRng {
  std::uint64_t base = 0;
  std::uint64_t counter = 0;

  static std::uint64_t splitmix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  CounterRng(std::uint64_t seed, std::uint64_t stream)
      : base(splitmix64(seed ^ (0x9e3779b97f4a7c15ULL * (stream + 1)))) {}

  std::uint64_t next() { return splitmix64(base + counter++); }

  // Uniform in [0, n); n must be positive. Modulo bias is irrelevant at the
  // n values used here (n << 2^32).
  std::uint64_t below(std::uint64_t n) { return next() % n; }

  int range(int lo, int hi) {  // inclusive bounds
    return lo + static_cast<int>(below(static_cast<std::uint64_t>(hi - lo + 1)));
  }
};

}  // namespace morselab
