#pragma once

#include <cstdint>
#include <random>

namespace solsim {

// All stochastic operations draw from mt19937_64 through uniform_open(),
// so base seed + stream derivation fully determine every output on every
// platform (std::uniform_real_distribution is left aside on purpose: its
// algorithm is implementation-defined).
using Rng = std::mt19937_64;

constexpr std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Independent per-(day, replicate) stream: replicates may be simulated in
// any order or thread count and still reproduce bit-for-bit.
constexpr std::uint64_t derive_stream(std::uint64_t base_seed, std::uint64_t day,
                                      std::uint64_t replicate) {
    return splitmix64(splitmix64(splitmix64(base_seed) ^ day) ^ (replicate * 0x9e3779b97f4a7c15ULL + 1));
}

// Uniform draw on the open interval (0, 1); never returns 0 or 1, so
// log/log-log transforms stay finite.
inline double uniform_open(Rng& rng) {
    return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
}

} // namespace solsim
