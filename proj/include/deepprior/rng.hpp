// Counter-based RNG for the Monte Carlo oracle.  Each (master seed, stream)
// pair yields an independent deterministic sequence; streams are assigned
// one per sample chunk, so results do not depend on how chunks are
// scheduled across threads.  The generator is the splitmix64 finalizer on
// a keyed counter; normals come from Box-Muller on (0, 1] uniforms.

#pragma once

#include <cmath>
#include <cstdint>

namespace deepprior {

class CounterRng {
public:
    CounterRng(std::uint64_t master_seed, std::uint64_t stream)
        : key_(mix(mix(master_seed) ^ mix(stream ^ 0x632BE59BD9B4E019ULL))) {}

    std::uint64_t next_u64() {
        return mix(key_ + (++counter_) * 0x9E3779B97F4A7C15ULL);
    }

    // Uniform on (0, 1]; never 0, so logs are safe.
    double uniform() {
        return ((next_u64() >> 11) + 1) * 0x1p-53;
    }

    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u1 = uniform();
        const double u2 = uniform();
        const double rad = std::sqrt(-2.0 * std::log(u1));
        const double ang = 6.283185307179586477 * u2;
        spare_ = rad * std::sin(ang);
        have_spare_ = true;
        return rad * std::cos(ang);
    }

private:
    static std::uint64_t mix(std::uint64_t x) {
        x += 0x9E3779B97F4A7C15ULL;
        x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
        x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
        return x ^ (x >> 31);
    }

    std::uint64_t key_;
    std::uint64_t counter_ = 0;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace deepprior
