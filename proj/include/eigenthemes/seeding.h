#ifndef EIGENTHEMES_SEEDING_H_
#define EIGENTHEMES_SEEDING_H_

#include <cstdint>

namespace eigenthemes {

// SplitMix64 finalizer; expands one root seed into independent streams.
inline uint64_t DeriveSeed(uint64_t root, uint64_t stream) {
  uint64_t z = root + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace eigenthemes

#endif  // EIGENTHEMES_SEEDING_H_
