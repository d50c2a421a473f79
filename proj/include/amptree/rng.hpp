#pragma once

#include <cstdint>
#include <random>

namespace amptree {

using Rng = std::mt19937_64;

// splitmix64 finalizer
constexpr std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Child seed for (root, trial, stream). Each coordinate passes through the
// avalanche before being folded in, so neighbouring indices decorrelate.
constexpr std::uint64_t derive_seed(std::uint64_t root, std::uint64_t trial, std::uint64_t stream) {
    std::uint64_t h = mix64(root);
    h = mix64(h ^ mix64(trial + 0x632be59bd9b4e019ULL));
    h = mix64(h ^ mix64(stream + 0x8cb92ba72f3d8dd7ULL));
    return h;
}

inline Rng make_rng(std::uint64_t root, std::uint64_t trial, std::uint64_t stream) {
    return Rng(derive_seed(root, trial, stream));
}

inline double uniform01(Rng& rng) { return std::generate_canonical<double, 64>(rng); }

} // namespace amptree
