#ifndef WETTING_RNG_HPP
#define WETTING_RNG_HPP

#include <cstdint>
#include <limits>

namespace wetting {

inline std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Counter-based generator: the n-th output is a fixed bijective mix of
// key + n * golden, so any stream position and any substream are reachable
// without running the generator (SplitMix64 output function).
class CounterRng {
 public:
  using result_type = std::uint64_t;

  explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0)
      : key_(mix64(seed ^ mix64(stream + 0x632BE59BD9B4E019ULL))) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() { return mix64(key_ + (++counter_) * 0x9E3779B97F4A7C15ULL); }

  // uniform on [0, 1) with 53 random bits
  double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  // Independent child stream keyed by (this stream's key, id); does not advance this stream.
  CounterRng substream(std::uint64_t id) const { return CounterRng(key_, id + 1); }

  std::uint64_t counter() const { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace wetting

#endif
