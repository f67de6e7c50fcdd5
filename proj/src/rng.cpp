#include "triq/rng.hpp"

namespace triq {

Rng::Rng(RngSeed seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed.value),
                    static_cast<std::uint32_t>(seed.value >> 32),
                    static_cast<std::uint32_t>(stream),
                    static_cast<std::uint32_t>(stream >> 32), 0x7472u};
  engine_.seed(seq);
}

}  // namespace triq
