#pragma once

#include <cstdint>

namespace isomesh {

/// splitmix64 finalizer: cheap, stateless, full-avalanche. The basis for
/// every "random" choice in the library, so results are pure functions of
/// their seeds.
inline uint64_t splitmix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

/// Uniform double in [0, 1) from a hash value.
inline double hash_unit(uint64_t h) { return double(h >> 11) * 0x1.0p-53; }

}  // namespace isomesh
