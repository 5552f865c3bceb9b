// Counter-based deterministic random streams.
//
// Every random quantity in a session is drawn from a stream addressed by
// (master seed, stream tag, index). Streams never share state, so rounds can
// be generated in any order, on any number of threads, with bit-identical
// results. The generator is the SplitMix64 finalizer over a keyed counter;
// its output sequence is part of the reproducibility contract documented in
// the README.

#ifndef DIQGPS_RNG_HPP
#define DIQGPS_RNG_HPP

#include <algorithm>
#include <cstdint>
#include <unordered_map>
#include <vector>

namespace diqgps {

// Stream tags. Adding a tag is backwards-compatible; renumbering is not.
enum class StreamTag : std::uint64_t {
  InputR = 1,      // receiver input bit, index = round
  InputS = 2,      // satellite input bit, index = round
  Outcome = 3,     // joint-outcome variate, index = round
  CarrierSelect = 4,  // carrier index permutation, index = 0
  Gauge = 5,       // test-side random unitaries / ancillas
  EveInput = 6,    // forger's replacement input bits, index = round
  EveSelect = 7,   // forger's carrier position choice, index = 0
};

class CounterRng {
 public:
  CounterRng(std::uint64_t seed, StreamTag tag, std::uint64_t index = 0)
      : state_(derive_key(seed, static_cast<std::uint64_t>(tag), index)) {}

  CounterRng(std::uint64_t seed, std::uint64_t tag, std::uint64_t index = 0)
      : state_(derive_key(seed, tag, index)) {}

  std::uint64_t next_u64() {
    state_ += kGamma;
    return finalize(state_);
  }

  // Uniform in [0, 1) with 53 random mantissa bits.
  double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  int next_bit() { return static_cast<int>(next_u64() >> 63); }

  // Uniform in [0, n) by rejection; exact for any n > 0.
  std::uint64_t next_below(std::uint64_t n) {
    const std::uint64_t threshold = (0 - n) % n;  // 2^64 mod n
    for (;;) {
      const std::uint64_t u = next_u64();
      if (u >= threshold) return u % n;
    }
  }

  static std::uint64_t finalize(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

 private:
  static constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ull;

  static std::uint64_t derive_key(std::uint64_t seed, std::uint64_t tag,
                                  std::uint64_t index) {
    std::uint64_t k = finalize(seed + kGamma);
    k = finalize(k ^ (tag * 0xD1342543DE82EF95ull) ^ kGamma);
    k = finalize(k ^ (index * 0xDABA0B6EB09322E3ull) ^ kGamma);
    return k;
  }

  std::uint64_t state_;
};

// `count` distinct values from [lo, hi], ascending. Sparse Fisher-Yates, so
// the cost is O(count) regardless of the range size.
inline std::vector<std::int64_t> sample_without_replacement(std::int64_t lo,
                                                            std::int64_t hi,
                                                            std::size_t count,
                                                            CounterRng& rng) {
  const std::int64_t pool = hi - lo + 1;
  std::unordered_map<std::int64_t, std::int64_t> swapped;
  std::vector<std::int64_t> picked;
  picked.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const auto slot = static_cast<std::int64_t>(i) +
                      static_cast<std::int64_t>(rng.next_below(static_cast<std::uint64_t>(
                          pool - static_cast<std::int64_t>(i))));
    const auto take = [&](std::int64_t position) {
      const auto it = swapped.find(position);
      return it == swapped.end() ? position : it->second;
    };
    picked.push_back(lo + take(slot));
    swapped[slot] = take(static_cast<std::int64_t>(i));
  }
  std::sort(picked.begin(), picked.end());
  return picked;
}

}  // namespace diqgps

#endif  // DIQGPS_RNG_HPP
