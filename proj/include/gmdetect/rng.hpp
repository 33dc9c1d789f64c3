#pragma once

#include <cstdint>
#include <cmath>

namespace gmdetect {

// Counter-seeded random stream. Streams derived from the same master seed
// with distinct stream indices are independent and reproducible, so parallel
// chains are deterministic given (master seed, chain index).
class RngStream {
  public:
    explicit RngStream(std::uint64_t seed, std::uint64_t stream = 0)
    {
        // splitmix64 over (seed, stream) to decorrelate nearby seeds
        state_ = mix(seed + 0x9e3779b97f4a7c15ULL * (stream + 1));
        state_ = mix(state_ + stream);
        inc_   = mix(state_ ^ 0xda3e39cb94b95bdbULL) | 1ULL;
    }

    std::uint64_t next_u64()
    {
        // xorshift128+ style step on (state_, inc_)
        std::uint64_t x = state_;
        const std::uint64_t y = inc_;
        state_ = y;
        x ^= x << 23;
        inc_ = x ^ y ^ (x >> 17) ^ (y >> 26);
        return inc_ + y;
    }

    // uniform on (0, 1); never returns 0 or 1
    double uniform()
    {
        const std::uint64_t bits = next_u64() >> 11;  // 53 bits
        return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
    }

    // standard normal via Box-Muller (no rejection, bit-reproducible)
    double normal()
    {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u1 = uniform();
        const double u2 = uniform();
        const double r  = std::sqrt(-2.0 * std::log(u1));
        const double th = 6.283185307179586476925286766559 * u2;
        spare_      = r * std::sin(th);
        have_spare_ = true;
        return r * std::cos(th);
    }

    // Exp(lambda) by inverse CDF
    double exponential(double lambda) { return -std::log(uniform()) / lambda; }

  private:
    static std::uint64_t mix(std::uint64_t z)
    {
        z += 0x9e3779b97f4a7c15ULL;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    std::uint64_t state_;
    std::uint64_t inc_;
    double spare_      = 0.0;
    bool have_spare_   = false;
};

}  // namespace gmdetect
