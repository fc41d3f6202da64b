#pragma once

#include <cstdint>
#include <random>

namespace fhlab {

using Rng = std::mt19937_64;

// Independent stream for (seed, index).  Batches use one stream per sample
// so results do not depend on how work is split across threads.
inline Rng make_stream(std::uint64_t seed, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  return Rng(seq);
}

// Per-sample seed recorded in a Spectrum so that any batch member can be
// regenerated on its own.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  Rng r = make_stream(seed, index);
  return r();
}

}  // namespace fhlab
