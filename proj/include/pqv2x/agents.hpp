#ifndef PQV2X_AGENTS_HPP
#define PQV2X_AGENTS_HPP

#include "pqv2x/clock.hpp"
#include "pqv2x/crypto.hpp"
#include "pqv2x/event_log.hpp"
#include "pqv2x/message.hpp"
#include "pqv2x/mobility.hpp"
#include "pqv2x/rng.hpp"
#include "pqv2x/scenario.hpp"
#include "pqv2x/verify.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace pqv2x {

constexpr std::uint32_t kRsuSenderId = 0x52535501;  // arbitrary fixed RSU id

/**
 * RSU pipeline: sense ground-truth vehicle states, detect TTC conflicts,
 * and emit at most one aggregated signed warning per warning interval.
 */
class RsuAgent {
public:
    RsuAgent(const RsuSpec& spec, std::uint32_t intersection_id, SignatureBackend& backend,
             const Bytes& key_seed, std::uint64_t cert_not_before_ms,
             std::uint64_t cert_not_after_ms, double step_size);

    const Certificate& certificate() const { return certificate_; }

    /// One sensing step. Returns the signed envelope when a warning is due.
    /// `conflicts_out` receives the detected pairs (possibly empty), and a
    /// timing sample is appended for each sign call.
    std::optional<SignedEnvelope> step(const std::vector<VehicleState>& vehicles,
                                       const SimClock& clock,
                                       std::vector<ConflictPair>& conflicts_out,
                                       std::vector<TimingSample>& timing_out);

    std::uint64_t emitted() const { return emitted_; }

private:
    RsuSpec spec_;
    std::uint32_t intersection_id_;
    SignatureBackend& backend_;
    Bytes signing_key_;
    Certificate certificate_;
    std::uint64_t interval_steps_;
    std::optional<std::uint64_t> last_emit_step_;
    std::uint8_t msg_count_ = 0;   // wraps modulo 128
    std::uint64_t emitted_ = 0;
};

/**
 * Receive side of one vehicle: decode, run the full verification pipeline,
 * and keep delivery/acceptance counters for PDR.
 */
class VehicleAgent {
public:
    VehicleAgent(VehicleId id, VerifyPolicy policy, std::size_t replay_capacity)
        : id_(id), policy_(policy), replay_(replay_capacity) {}

    /// Total over arbitrary bytes; all failures become reject verdicts.
    Verdict on_receive(SignatureBackend& backend, const Bytes& wire, std::uint64_t now_ms,
                       std::uint64_t step_index);

    VehicleId id() const { return id_; }
    std::uint64_t expected_count() const { return expected_; }
    std::uint64_t received_count() const { return received_; }
    void note_expected() { ++expected_; }
    const std::vector<double>& verify_samples_ms() const { return verify_samples_; }

private:
    VehicleId id_;
    VerifyPolicy policy_;
    ReplayWindow replay_;
    std::uint64_t expected_ = 0;
    std::uint64_t received_ = 0;
    std::vector<double> verify_samples_;
};

/**
 * Outsider adversary: crafts forged, tampered, or replayed envelopes and
 * pushes them through the same broadcast path as genuine traffic. The
 * attacker holds a valid-looking certificate chained to nobody, so forged
 * messages carry real signatures under an untrusted key.
 */
class AttackInjector {
public:
    AttackInjector(AttackSpec spec, SignatureBackend& backend, std::uint64_t scenario_seed,
                   std::uint32_t intersection_id);

    /// Envelope bytes to inject at this step, if the attack is active and its
    /// preconditions hold (replay needs a captured envelope old enough).
    /// Returns nullopt with `skipped_out` set when injection was skipped.
    std::optional<Bytes> step(std::uint64_t step_index, std::uint64_t now_ms,
                              bool& skipped_out);

    /// Genuine on-air bytes observed by the adversary.
    void capture(std::uint64_t step_index, const Bytes& wire);

    const AttackSpec& spec() const { return spec_; }
    std::uint64_t injected() const { return injected_; }

private:
    Bytes make_forged(std::uint64_t now_ms);
    std::optional<Bytes> make_tampered();
    std::optional<Bytes> make_replayed(std::uint64_t step_index);

    AttackSpec spec_;
    SignatureBackend& backend_;
    RngStream rng_;
    std::uint32_t intersection_id_;
    Bytes attacker_signing_key_;
    Bytes attacker_cert_bytes_;
    std::uint8_t forge_msg_count_ = 0;
    std::uint64_t injected_ = 0;
    std::uint64_t replayed_ = 0;
    std::vector<std::pair<std::uint64_t, Bytes>> capture_buffer_;
};

} // namespace pqv2x

#endif
