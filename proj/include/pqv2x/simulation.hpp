#ifndef PQV2X_SIMULATION_HPP
#define PQV2X_SIMULATION_HPP

#include "pqv2x/metrics.hpp"
#include "pqv2x/scenario.hpp"

#include <cstdint>
#include <string>

namespace pqv2x {

struct RunCounters {
    std::uint64_t genuine_broadcasts = 0;
    std::uint64_t genuine_delivered = 0;     // delivery events, summed over receivers
    std::uint64_t genuine_accepted = 0;
    std::uint64_t genuine_rejected = 0;
    std::uint64_t adversarial_injected = 0;
    std::uint64_t adversarial_accepted = 0;
    std::uint64_t adversarial_rejected = 0;
    std::uint64_t attacks_skipped = 0;
};

struct RunResult {
    MetricsReport report;
    std::string event_log;
    RunCounters counters;
};

/**
 * Execute the scenario: exactly ceil(duration/step_size) lockstep steps,
 * each ordered mobility -> RSU sensing/TTC -> signing/broadcast -> channel
 * delivery -> verification -> metric sampling. Single-threaded and fully
 * deterministic for a fixed (config, seed) with the mock backend; with the
 * falcon backend only the measured timings vary between runs.
 *
 * `backend_override` ("falcon"/"mock"/"") supersedes config.crypto.scheme.
 */
RunResult run_scenario(const ScenarioConfig& config, const std::string& backend_override = "",
                       bool events_enabled = true);

} // namespace pqv2x

#endif
