#ifndef RABISIM_RNG_HPP
#define RABISIM_RNG_HPP

#include <cmath>
#include <cstdint>

namespace rabisim {

/// Counter-based stream derivation: the n-th stream seed is a pure function
/// of (master_seed, n), so ensembles are reproducible under any scheduling.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t derive_stream_seed(std::uint64_t master_seed, std::uint64_t index) {
    return splitmix64(master_seed ^ splitmix64(index + 0x51a2b3c4d5e6f708ULL));
}

/// Small deterministic generator (xoshiro256**). We roll our own uniform /
/// exponential transforms because std:: distributions are not guaranteed to
/// produce identical streams across standard library implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed) {
        // seed expansion via splitmix64, the reference recommendation
        std::uint64_t s = seed;
        for (auto& word : state_) {
            s = splitmix64(s);
            word = s;
        }
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    /// uniform on the open interval (0,1)
    double uniform_open() {
        return (static_cast<double>(next_u64() >> 12) + 0.5) * 0x1p-52;
    }

    /// uniform on the open interval (-1,1)
    double uniform_symmetric() { return 2.0 * uniform_open() - 1.0; }

    /// exponential waiting time with the given rate (rate > 0)
    double exponential(double rate) { return -std::log(uniform_open()) / rate; }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }
    std::uint64_t state_[4];
};

} // namespace rabisim

#endif
