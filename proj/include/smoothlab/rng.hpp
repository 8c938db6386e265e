#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace smoothlab {

// splitmix64 step (Vigna). Used for seeding and for the keyed seed derivation.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// xoshiro256++ . Deterministic stream given a 64-bit seed (state expanded
// through splitmix64, the recommended seeding procedure).
class Xoshiro256pp {
  public:
    explicit Xoshiro256pp(std::uint64_t seed = 0) {
        std::uint64_t sm = seed;
        for (auto& w : s_) w = splitmix64(sm);
    }

    std::uint64_t next() {
        const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    // Uniform in [0,1), 53 random bits.
    double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    // Uniform in (0,1] (safe to take log of).
    double uniform01_open_low() {
        return (static_cast<double>(next() >> 11) + 1.0) * 0x1.0p-53;
    }

    double exponential() { return -std::log(uniform01_open_low()); }

    // Standard normal via a 256-layer ziggurat; see rng.cpp.
    double normal();

  private:
    static std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }
    std::uint64_t s_[4];
};

// One component of a seed-derivation label path.
using SeedLabel = std::variant<std::string, std::uint64_t>;

// Counter-based seed derivation: a keyed hash of (master seed, label path).
// Every parallel task derives its own stream seed through this so that
// results never depend on scheduling. The derivation is part of the tool's
// reproducibility contract and must not change between versions:
//   h = splitmix64-mix of master, then for each label: absorb a type tag and
//   the label bytes through FNV-1a/64, then one splitmix64 mix.
std::uint64_t derive_seed(std::uint64_t master, const std::vector<SeedLabel>& labels);
std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<SeedLabel> labels);

// FNV-1a 64-bit over a byte range; also used for output checksums.
std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t h = 0xcbf29ce484222325ULL);

}  // namespace smoothlab
