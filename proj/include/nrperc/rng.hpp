#ifndef NRPERC_RNG_HPP
#define NRPERC_RNG_HPP

#include <cstdint>
#include <random>

namespace nrperc {

/// Engine used for every replica. Each replica owns one.
using Rng = std::mt19937_64;

/// splitmix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Per-replica seed as a deterministic function of (master_seed, n, replica).
/// The three inputs are folded through the mixer one at a time so that
/// neighbouring replica indices land on unrelated streams.
constexpr std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t n,
                                    std::uint64_t replica) {
    std::uint64_t h = mix64(master_seed);
    h = mix64(h ^ n);
    h = mix64(h ^ (replica + 0x632be59bd9b4e019ULL));
    return h;
}

inline Rng make_rng(std::uint64_t seed) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
    return Rng(seq);
}

inline std::uint64_t poisson(Rng& rng, double mean) {
    if (!(mean > 0.0)) return 0;
    std::poisson_distribution<std::uint64_t> d(mean);
    return d(rng);
}

inline double uniform01(Rng& rng) {
    return std::uniform_real_distribution<double>(0.0, 1.0)(rng);
}

}  // namespace nrperc

#endif  // NRPERC_RNG_HPP
