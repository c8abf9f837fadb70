#ifndef PQV2X_CLOCK_HPP
#define PQV2X_CLOCK_HPP

#include <cstdint>

namespace pqv2x {

/**
 * Lockstep simulation clock.
 *
 * `now()` is always recomputed as step_index * step_size instead of being
 * accumulated, so 1000 steps of 0.1 s land on exactly 100.0 s.
 */
struct SimClock {
    double step_size = 0.1;        // seconds, fixed after scenario start
    std::uint64_t step_index = 0;

    double now() const { return static_cast<double>(step_index) * step_size; }
    std::uint64_t now_ms() const {
        // step_size carries millisecond resolution in every supported scenario
        return static_cast<std::uint64_t>(static_cast<double>(step_index) * step_size * 1000.0 + 0.5);
    }

    SimClock advanced() const { return SimClock{step_size, step_index + 1}; }
    void advance() { ++step_index; }
};

} // namespace pqv2x

#endif
