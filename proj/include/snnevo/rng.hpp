#pragma once

#include <array>
#include <cstdint>
#include <initializer_list>
#include <string_view>

namespace snnevo {

// 64-bit FNV-1a, used for stream derivation tags and artifact digests.
inline std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

inline std::uint64_t fnv1a_u64(std::uint64_t v, std::uint64_t h = 14695981039346656037ULL) {
  for (int i = 0; i < 8; ++i) {
    h ^= (v >> (8 * i)) & 0xffULL;
    h *= 1099511628211ULL;
  }
  return h;
}

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Order-sensitive combine of 64-bit words into one seed.
inline std::uint64_t mix_seed(std::initializer_list<std::uint64_t> words) {
  std::uint64_t h = 0x8f1bbcdcbfa53e0bULL;
  for (std::uint64_t w : words) h = splitmix64(h ^ splitmix64(w));
  return h;
}

// Deterministic, explicitly-seeded stream (xoshiro256**). All draws are pure
// integer/IEEE arithmetic except next_gaussian (libm sqrt/log/cos).
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) {
    // seed expansion per the xoshiro authors' recommendation
    std::uint64_t x = seed;
    for (auto& word : state_) {
      x = splitmix64(x);
      word = x;
    }
  }

  std::uint64_t next_u64() {
    const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  /// Uniform in [0, 1).
  double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Uniform in [-1, 1).
  double next_symmetric() { return 2.0 * next_unit() - 1.0; }

  /// Uniform integer in [0, bound). bound must be > 0.
  std::uint64_t next_below(std::uint64_t bound) {
    const std::uint64_t threshold = (0 - bound) % bound;
    for (;;) {
      const std::uint64_t r = next_u64();
      if (r >= threshold) return r % bound;
    }
  }

  bool next_bool() { return (next_u64() >> 63) != 0; }

  /// Standard normal via Box-Muller (one draw per call, no cached twin).
  double next_gaussian();

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
  std::array<std::uint64_t, 4> state_{};
};

// Counter-based stream derivation: the stream for a (seed, generation,
// individual, purpose) coordinate is a pure function of the tuple, so the set
// of streams a run consumes is independent of evaluation order and worker
// count.
inline RngStream derive_stream(std::uint64_t master_seed, std::uint64_t generation,
                               std::uint64_t individual, std::string_view purpose) {
  return RngStream(mix_seed({master_seed, generation, individual, fnv1a(purpose)}));
}

}  // namespace snnevo
