#ifndef FRACBRIDGE_RNG_HPP
#define FRACBRIDGE_RNG_HPP

#include <cmath>
#include <cstdint>

namespace fracbridge::rng {

// splitmix64 finalizer; used both to expand a seed into generator state and
// to derive independent per-replication stream seeds.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// Deterministic stream seed for one replication. Both maps are bijections on
// 64-bit words, so distinct replication indices always yield distinct seeds.
inline std::uint64_t stream_seed(std::uint64_t global_seed, std::uint64_t replication) {
    std::uint64_t s = replication;
    const std::uint64_t mixed = splitmix64(s);
    std::uint64_t t = global_seed ^ mixed;
    return splitmix64(t);
}

// xoshiro256++ with a polar-method normal generator. std::normal_distribution
// is not bit-stable across standard libraries, which would break the
// byte-identical reproducibility the Monte Carlo harness promises, so the
// whole uniform->normal pipeline is pinned down here.
class RngStream {
  public:
    explicit RngStream(std::uint64_t seed) {
        std::uint64_t sm = seed;
        for (auto& word : state_) {
            word = splitmix64(sm);
        }
    }

    static RngStream for_replication(std::uint64_t global_seed, std::uint64_t replication) {
        return RngStream(stream_seed(global_seed, replication));
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    // Uniform on [0,1) with 53 random bits.
    double uniform01() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // Standard normal via the polar (Marsaglia) method; the rejected-pair
    // loop consumes a variable number of uniforms, which is fine because a
    // stream is owned by exactly one replication.
    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u;
        double v;
        double s;
        do {
            u = 2.0 * uniform01() - 1.0;
            v = 2.0 * uniform01() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        const double factor = std::sqrt(-2.0 * std::log(s) / s);
        spare_ = v * factor;
        has_spare_ = true;
        return u * factor;
    }

  private:
    static std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }

    std::uint64_t state_[4] = {};
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace fracbridge::rng

#endif
