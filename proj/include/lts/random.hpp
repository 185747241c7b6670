#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace lts {

using Rng = std::mt19937_64;

/// SplitMix64 finalizer. Used to derive independent stream seeds.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

constexpr std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t child) noexcept {
    return mix64(mix64(parent) ^ (child * 0xd6e8feb86659fd93ULL + 0x632be59bd9b4e019ULL));
}

/// FNV-1a over a tag, so substreams can be named ("env", "agent", ...).
constexpr std::uint64_t hash_tag(std::string_view tag) noexcept {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (char c : tag) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
    }
    return h;
}

inline Rng make_rng(std::uint64_t seed) { return Rng{mix64(seed)}; }

inline Rng substream(std::uint64_t parent, std::uint64_t child) {
    return Rng{derive_seed(parent, child)};
}

inline Rng substream(std::uint64_t parent, std::string_view tag) {
    return Rng{derive_seed(parent, hash_tag(tag))};
}

/// Draws a fresh seed from an existing stream (for per-arm / per-row children).
inline std::uint64_t fork_seed(Rng& rng) { return rng(); }

inline double standard_normal(Rng& rng) {
    std::normal_distribution<double> n{0.0, 1.0};
    return n(rng);
}

inline double uniform01(Rng& rng) {
    std::uniform_real_distribution<double> u{0.0, 1.0};
    return u(rng);
}

}  // namespace lts
