#include "pqv2x/simulation.hpp"

#include "pqv2x/agents.hpp"
#include "pqv2x/channel.hpp"
#include "pqv2x/clock.hpp"
#include "pqv2x/crypto.hpp"
#include "pqv2x/event_log.hpp"
#include "pqv2x/verify.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace pqv2x {

namespace {

Bytes seed_bytes(std::uint64_t seed) {
    Bytes out(8);
    for (int i = 0; i < 8; ++i) {
        out[i] = static_cast<std::uint8_t>(seed >> (56 - 8 * i));
    }
    return out;
}

struct SimVehicle {
    VehicleSpec spec;
    VehicleState state;
    VehicleAgent agent;
    bool spawned = false;
};

nlohmann::json deliveries_json(const ChannelEvent& ev) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& d : ev.deliveries) {
        arr.push_back({{"vehicle", d.receiver}, {"delivered", d.delivered}});
    }
    return arr;
}

} // namespace

RunResult run_scenario(const ScenarioConfig& config, const std::string& backend_override,
                       bool events_enabled) {
    const std::string scheme =
        backend_override.empty() ? config.crypto.scheme : backend_override;
    auto backend = make_backend(scheme);

    const std::uint64_t duration_ms =
        static_cast<std::uint64_t>(std::ceil(config.duration * 1000.0));

    SimClock clock{config.step_size, 0};
    EventLog log(events_enabled);

    RsuAgent rsu(config.rsu, config.intersection.intersection_id, *backend,
                 seed_bytes(config.crypto.key_seed), 0, duration_ms + 1000,
                 config.step_size);
    const VerifyPolicy policy{sha3_256_digest(rsu.certificate().verification_key),
                              config.crypto.freshness_ms, config.crypto.replay_check_enabled};

    std::vector<SimVehicle> vehicles;
    vehicles.reserve(config.vehicles.size());
    for (const auto& spec : config.vehicles) {
        VehicleState state;
        state.id = spec.id;
        state.reference_arclength = spec.route.reference_arclength;
        state.route_length = spec.route.length();
        state.profile = spec.speed_profile;
        vehicles.push_back(
            {spec, state, VehicleAgent(spec.id, policy, config.crypto.replay_window), false});
    }
    std::sort(vehicles.begin(), vehicles.end(),
              [](const SimVehicle& a, const SimVehicle& b) { return a.spec.id < b.spec.id; });

    Channel channel(config.channel.loss_model, config.channel.data_rate_bps, config.seed);
    channel.set_step_size(config.step_size);

    std::vector<AttackInjector> injectors;
    for (const auto& spec : config.attacks) {
        injectors.emplace_back(spec, *backend, config.seed,
                               config.intersection.intersection_id);
    }

    std::vector<double> sign_samples_ms;
    std::map<AttackSpec::Kind, AttackRow> attack_rows;
    for (const auto& spec : config.attacks) {
        attack_rows[spec.kind].kind = spec.kind;
    }
    RunCounters counters;

    const std::uint64_t total_steps = config.total_steps();
    for (std::uint64_t step = 0; step < total_steps; ++step) {
        const std::uint64_t now_ms = clock.now_ms();

        // --- mobility ---
        for (auto& v : vehicles) {
            if (!v.spawned && v.spec.entry_time <= clock.now() + 1e-9) {
                v.spawned = true;
                v.state.active = true;
                v.state.speed = v.state.profile.empty() ? 0.0 : v.state.profile.front().speed;
                log.record(step, "mobility", "spawn", {{"vehicle", v.spec.id}});
            }
            if (v.state.active) {
                const bool was_active = v.state.active;
                v.state = advance_vehicle(v.state, config.step_size);
                if (was_active && !v.state.active) {
                    log.record(step, "mobility", "exit", {{"vehicle", v.spec.id}});
                }
            }
        }

        // --- RSU sensing / TTC / signing ---
        std::vector<VehicleState> snapshot;
        for (const auto& v : vehicles) {
            if (v.state.active) {
                snapshot.push_back(v.state);
            }
        }
        std::vector<ConflictPair> conflicts;
        std::vector<TimingSample> sign_timings;
        std::optional<SignedEnvelope> warning;
        try {
            warning = rsu.step(snapshot, clock, conflicts, sign_timings);
        } catch (const CryptoError& e) {
            throw CryptoError("step " + std::to_string(step) + ": " + e.what());
        }
        if (!conflicts.empty()) {
            nlohmann::json pairs = nlohmann::json::array();
            for (const auto& c : conflicts) {
                pairs.push_back({{"a", c.vehicle_a},
                                 {"b", c.vehicle_b},
                                 {"ttc_a", c.ttc_a},
                                 {"ttc_b", c.ttc_b},
                                 {"gap", c.ttc_gap}});
            }
            log.record(step, "sense", "conflict", {{"pairs", pairs}});
        }
        for (const auto& t : sign_timings) {
            sign_samples_ms.push_back(t.duration_ms);
            log.record(step, "sign", "timing", {{"duration_ms", t.duration_ms}});
        }

        // --- channel: genuine broadcast, then attack injections ---
        std::vector<VehicleId> receivers;
        for (const auto& v : vehicles) {
            if (v.state.active) {
                receivers.push_back(v.spec.id);
            }
        }

        struct OnAir {
            ChannelEvent ev;
            std::optional<AttackSpec::Kind> kind;  // set for adversarial frames
        };
        std::vector<OnAir> on_air;
        if (warning) {
            const Bytes wire = encode_envelope(*warning);
            ChannelEvent ev = channel.broadcast(wire, step, receivers, kRsuSenderId, false);
            ++counters.genuine_broadcasts;
            for (auto& v : vehicles) {
                if (v.state.active) {
                    v.agent.note_expected();
                }
            }
            // Shared-fate loss also silences the adversary's receiver.
            const bool heard =
                ev.deliveries.empty() ||
                std::any_of(ev.deliveries.begin(), ev.deliveries.end(),
                            [](const Delivery& d) { return d.delivered; });
            if (heard) {
                for (auto& inj : injectors) {
                    inj.capture(step, wire);
                }
            }
            log.record(step, "channel", "broadcast",
                       {{"tx_index", ev.tx_index},
                        {"bytes", ev.envelope_bytes_len},
                        {"airtime", ev.airtime},
                        {"adversarial", false},
                        {"deliveries", deliveries_json(ev)}});
            on_air.push_back({std::move(ev), std::nullopt});
        }
        for (auto& inj : injectors) {
            bool skipped = false;
            std::optional<Bytes> wire;
            try {
                wire = inj.step(step, now_ms, skipped);
            } catch (const CryptoError& e) {
                throw CryptoError("step " + std::to_string(step) + ": " + e.what());
            }
            if (skipped) {
                ++counters.attacks_skipped;
                log.record(step, "channel", "attack_skipped",
                           {{"kind", to_string(inj.spec().kind)}});
                continue;
            }
            if (!wire) {
                continue;
            }
            ChannelEvent ev = channel.broadcast(*wire, step, receivers, 0xADBEEF01, true);
            ++counters.adversarial_injected;
            ++attack_rows[inj.spec().kind].injected;
            log.record(step, "channel", "broadcast",
                       {{"tx_index", ev.tx_index},
                        {"bytes", ev.envelope_bytes_len},
                        {"airtime", ev.airtime},
                        {"adversarial", true},
                        {"kind", to_string(inj.spec().kind)},
                        {"deliveries", deliveries_json(ev)}});
            on_air.push_back({std::move(ev), inj.spec().kind});
        }

        // --- verification, receiver-id order per event ---
        for (const auto& [ev, kind] : on_air) {
            for (const auto& d : ev.deliveries) {
                if (!d.delivered) {
                    continue;
                }
                auto it = std::find_if(vehicles.begin(), vehicles.end(),
                                       [&](const SimVehicle& v) { return v.spec.id == d.receiver; });
                if (it == vehicles.end()) {
                    continue;
                }
                const Verdict verdict = it->agent.on_receive(*backend, ev.wire, now_ms, step);
                if (ev.adversarial) {
                    if (verdict.accepted) {
                        ++counters.adversarial_accepted;
                        ++attack_rows[*kind].accepted;
                    } else {
                        ++counters.adversarial_rejected;
                        ++attack_rows[*kind].rejected;
                    }
                } else {
                    ++counters.genuine_delivered;
                    if (verdict.accepted) {
                        ++counters.genuine_accepted;
                    } else {
                        ++counters.genuine_rejected;
                    }
                }
                log.record(step, "verify", "verdict",
                           {{"vehicle", d.receiver},
                            {"accepted", verdict.accepted},
                            {"reason", to_string(verdict.reason)},
                            {"duration_ms",
                             verdict.verify_ms ? nlohmann::json(*verdict.verify_ms)
                                               : nlohmann::json(nullptr)},
                            {"adversarial", ev.adversarial}});
            }
        }

        // --- metric sampling happens implicitly via channel busy accounting ---
        clock.advance();
    }

    RunResult result;
    result.counters = counters;

    MetricsReport& report = result.report;
    if (!sign_samples_ms.empty()) {
        report.sign_time = sample_stats(sign_samples_ms);
    }
    std::map<VehicleId, std::vector<double>> verify_map;
    for (const auto& v : vehicles) {
        if (!v.agent.verify_samples_ms().empty()) {
            verify_map[v.spec.id] = v.agent.verify_samples_ms();
        }
    }
    if (!verify_map.empty()) {
        report.verify_time_pooled = pooled_verify_stats(verify_map);
    }
    for (const auto& v : vehicles) {
        report.pdr_rows.push_back(
            {v.spec.id, v.agent.expected_count(), v.agent.received_count()});
    }
    const std::vector<double> busy =
        channel.busy_per_window(config.duration, config.channel.cbr_window);
    for (const auto& v : vehicles) {
        std::vector<BusyObservation> obs;
        for (std::size_t w = 0; w < busy.size(); ++w) {
            obs.push_back({v.spec.id, static_cast<double>(w) * config.channel.cbr_window,
                           config.channel.cbr_window, busy[w]});
        }
        const auto [mean, std] = sample_cbr(obs);
        report.cbr_rows.push_back({v.spec.id, mean, std});
    }
    for (auto& [kind, row] : attack_rows) {
        report.attack_rows.push_back(row);
    }
    report.run_meta = {config.seed, config_digest(config), config.duration};

    log.record(total_steps, "metrics", "summary",
               {{"genuine_broadcasts", counters.genuine_broadcasts},
                {"genuine_delivered", counters.genuine_delivered},
                {"genuine_accepted", counters.genuine_accepted},
                {"adversarial_injected", counters.adversarial_injected},
                {"adversarial_accepted", counters.adversarial_accepted}});
    result.event_log = log.text();
    return result;
}

} // namespace pqv2x
