#ifndef PQV2X_RNG_HPP
#define PQV2X_RNG_HPP

#include <cstdint>
#include <random>
#include <string>
#include <string_view>

namespace pqv2x {

/**
 * Named deterministic random stream.
 *
 * A stream is identified by (seed, label); identical pairs replay the exact
 * same sequence on every platform. Distinct labels (e.g. "channel-loss" vs
 * "attack") decorrelate consumers so adding a draw in one subsystem never
 * shifts the draws seen by another.
 */
class RngStream {
public:
    RngStream(std::uint64_t seed, std::string_view label)
        : label_(label), engine_(mix(seed, label)) {}

    std::uint64_t next_u64() { return engine_(); }

    // Uniform in [0, 1), 53-bit mantissa; avoids std::uniform_real_distribution
    // whose output is not pinned down by the standard.
    double next_unit() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    // Uniform integer in [0, bound) via rejection sampling.
    std::uint64_t next_below(std::uint64_t bound) {
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
        std::uint64_t x;
        do { x = engine_(); } while (x >= limit);
        return x % bound;
    }

    bool bernoulli(double p) { return next_unit() < p; }

    const std::string& label() const { return label_; }

private:
    static std::uint64_t mix(std::uint64_t seed, std::string_view label) {
        // FNV-1a over the label folded into the seed, then one splitmix64
        // round so nearby seeds do not produce nearby engine states.
        std::uint64_t h = 1469598103934665603ULL;
        for (char c : label) {
            h ^= static_cast<unsigned char>(c);
            h *= 1099511628211ULL;
        }
        std::uint64_t z = seed ^ h;
        z += 0x9e3779b97f4a7c15ULL;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    std::string label_;
    std::mt19937_64 engine_;
};

} // namespace pqv2x

#endif
