#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>
#include <vector>

namespace qxx {

/// Derives an independent 64-bit seed from a master seed and a key path,
/// so per-item streams do not depend on generation order.
inline std::uint64_t derive_seed(std::uint64_t seed,
                                 std::initializer_list<std::uint64_t> keys) {
  std::vector<std::uint32_t> material{static_cast<std::uint32_t>(seed),
                                      static_cast<std::uint32_t>(seed >> 32)};
  for (std::uint64_t k : keys) {
    material.push_back(static_cast<std::uint32_t>(k));
    material.push_back(static_cast<std::uint32_t>(k >> 32));
  }
  std::seed_seq seq(material.begin(), material.end());
  std::uint32_t out[2];
  seq.generate(out, out + 2);
  return (static_cast<std::uint64_t>(out[1]) << 32) | out[0];
}

}  // namespace qxx
