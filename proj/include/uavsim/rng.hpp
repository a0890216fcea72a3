#pragma once

#include <cstdint>
#include <random>

namespace uavsim {

// splitmix64 finalizer; used to derive independent sub-streams from a master
// seed so results do not depend on evaluation order.
inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream,
                                 std::uint64_t id = 0) {
  return mix64(mix64(master ^ 0xa0761d6478bd642fULL) ^ mix64(stream) ^
               mix64(id ^ 0xe7037ed1a0b428dbULL));
}

using Rng = std::mt19937_64;

inline Rng make_rng(std::uint64_t master, std::uint64_t stream,
                    std::uint64_t id = 0) {
  return Rng(derive_seed(master, stream, id));
}

}  // namespace uavsim
