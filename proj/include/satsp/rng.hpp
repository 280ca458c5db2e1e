#ifndef SATSP_RNG_HPP_
#define SATSP_RNG_HPP_

#include <cstdint>
#include <random>

namespace satsp {

/// Seeded generator with a fixed, platform-independent output stream.
///
/// The engine is std::mt19937_64, whose output sequence is pinned by the C++
/// standard. The standard library distributions are not (their algorithms are
/// implementation-defined), so every derived draw is computed here:
///   - uniform01(): top 53 bits of one engine output, scaled by 2^-53.
///   - below(k):    Lemire's multiply-shift with rejection, unbiased.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform on [0, 1).
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform integer on [0, bound). bound must be positive.
  std::uint64_t below(std::uint64_t bound) {
    __extension__ using u128 = unsigned __int128;
    u128 product = static_cast<u128>(engine_()) * bound;
    auto low = static_cast<std::uint64_t>(product);
    if (low < bound) {
      const std::uint64_t threshold = (0 - bound) % bound;
      while (low < threshold) {
        product = static_cast<u128>(engine_()) * bound;
        low = static_cast<std::uint64_t>(product);
      }
    }
    return static_cast<std::uint64_t>(product >> 64);
  }

  bool coin() { return (engine_() >> 63) != 0; }

 private:
  std::mt19937_64 engine_;
};

/// SplitMix64 finalizer applied to (master, index); gives independent-looking
/// seeds for per-instance or per-task generators.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  std::uint64_t z = master + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace satsp

#endif  // SATSP_RNG_HPP_
