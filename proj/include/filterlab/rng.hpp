#pragma once

#include <cstdint>

namespace filterlab {

// SplitMix64. Tiny, splittable enough for desk-scale Monte Carlo: replica r
// of a run seeded with s uses stream s + r. Identical seed, identical stream,
// on every platform; that is what makes runs byte-reproducible.
class SplitMix64 {
public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform on the open interval (0, 1); never returns an endpoint, so it is
  // safe to feed into inverse CDFs with log singularities.
  double next_open01() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

private:
  std::uint64_t state_;
};

}  // namespace filterlab
