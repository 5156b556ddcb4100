#pragma once

#include <cstdint>

namespace fringewire {

/// Finalizer from the splitmix64 generator (Stafford's mix13 variant).
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

/// Counter-based per-photon random stream.
///
/// The state is a strong hash of (seed, stream index), so stream i is fully
/// determined by its index and independent of evaluation order. Sharded
/// ensemble runs therefore reproduce the single-threaded results exactly.
class PhotonRng {
public:
    PhotonRng(std::uint64_t seed, std::uint64_t stream)
        : state_(mix64(seed ^ mix64(stream + 0x632be59bd9b4e019ull))) {}

    std::uint64_t next_u64() {
        state_ += 0x9e3779b97f4a7c15ull;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    bool bernoulli(double p) { return uniform() < p; }

private:
    std::uint64_t state_;
};

}  // namespace fringewire
