#pragma once

// Counter-based random streams.  Each record gets its own substream keyed by
// (seed, record index), so generation is order-independent and can be
// partitioned across workers without changing a single draw.

#include <cstdint>

namespace fpa {

namespace detail {
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}
}  // namespace detail

class RecordStream {
 public:
  RecordStream(std::uint64_t seed, std::uint64_t index) {
    // mix the pair into a well-separated initial state
    std::uint64_t s = seed;
    std::uint64_t a = detail::splitmix64(s);
    s = index ^ 0x6a09e667f3bcc908ULL;
    std::uint64_t b = detail::splitmix64(s);
    state_ = a ^ (b + 0x9e3779b97f4a7c15ULL + (a << 6) + (a >> 2));
  }

  std::uint64_t next_u64() { return detail::splitmix64(state_); }

  // uniform on (0,1); never returns exactly 0 or 1
  double next_uniform() {
    const double u = double(next_u64() >> 11) * 0x1.0p-53;
    return u == 0.0 ? 0x1.0p-53 : u;
  }

  // index in [0,n) from the discrete distribution with given cumulative
  // weights (last entry must be ~1)
  std::size_t next_index(const double* cumw, std::size_t n) {
    const double u = next_uniform();
    for (std::size_t i = 0; i + 1 < n; ++i)
      if (u <= cumw[i]) return i;
    return n - 1;
  }

 private:
  std::uint64_t state_ = 0;
};

}  // namespace fpa
