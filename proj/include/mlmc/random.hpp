#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace mlmc {

using Rng = std::mt19937_64;

constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Stateless seed derivation: hash(master, parts...). Used to give every
/// level, stage and multistart instance its own reproducible stream.
constexpr std::uint64_t derive_seed(std::uint64_t master,
                                    std::initializer_list<std::uint64_t> parts) noexcept {
  std::uint64_t h = splitmix64(master);
  for (auto p : parts) h = splitmix64(h ^ splitmix64(p + 0x632be59bd9b4e019ULL));
  return h;
}

// Stream tags for derive_seed.
namespace seed_tag {
inline constexpr std::uint64_t kEmbed = 0x454d42;
inline constexpr std::uint64_t kMatch = 0x4d4154;
inline constexpr std::uint64_t kCoarsest = 0x435253;
inline constexpr std::uint64_t kRefine = 0x524546;
}  // namespace seed_tag

}  // namespace mlmc
