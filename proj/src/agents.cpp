#include "pqv2x/agents.hpp"

#include <algorithm>
#include <cmath>

namespace pqv2x {

RsuAgent::RsuAgent(const RsuSpec& spec, std::uint32_t intersection_id,
                   SignatureBackend& backend, const Bytes& key_seed,
                   std::uint64_t cert_not_before_ms, std::uint64_t cert_not_after_ms,
                   double step_size)
    : spec_(spec), intersection_id_(intersection_id), backend_(backend) {
    KeyPair kp = backend_.keygen(key_seed);
    signing_key_ = std::move(kp.signing_key);
    certificate_ = make_certificate(kRsuSenderId, cert_not_before_ms, cert_not_after_ms,
                                    backend_.scheme_id(), kp.verification_key);
    const double steps = 1.0 / (spec_.warning_rate * step_size);
    interval_steps_ = std::max<std::uint64_t>(1, static_cast<std::uint64_t>(steps + 0.5));
}

std::optional<SignedEnvelope> RsuAgent::step(const std::vector<VehicleState>& vehicles,
                                             const SimClock& clock,
                                             std::vector<ConflictPair>& conflicts_out,
                                             std::vector<TimingSample>& timing_out) {
    conflicts_out = detect_conflicts(vehicles, spec_.ttc_threshold);
    if (conflicts_out.empty()) {
        return std::nullopt;
    }
    if (last_emit_step_ && clock.step_index - *last_emit_step_ < interval_steps_) {
        return std::nullopt;
    }

    IcaMessage msg;
    msg.msg_count = msg_count_;
    msg_count_ = static_cast<std::uint8_t>((msg_count_ + 1) & 0x7f);
    msg.sender_id = kRsuSenderId;
    msg.timestamp_ms = clock.now_ms();
    msg.intersection_id = intersection_id_;
    msg.event_flag = kEventFlagIcaWarning;
    for (const auto& pair : conflicts_out) {
        for (VehicleId id : {pair.vehicle_a, pair.vehicle_b}) {
            if (std::find(msg.conflicting_vehicles.begin(), msg.conflicting_vehicles.end(),
                          id) == msg.conflicting_vehicles.end()) {
                msg.conflicting_vehicles.push_back(id);
            }
        }
    }

    SignedEnvelope env;
    env.payload = encode_payload(msg);
    if (spec_.include_certificate) {
        env.certificate = encode_certificate(certificate_);
    }
    double sign_ms = 0.0;
    env.signature = backend_.sign(signing_key_, signing_prefix(env), sign_ms);
    timing_out.push_back(
        {TimingSample::Kind::sign, sign_ms, kRsuSenderId, clock.step_index});

    last_emit_step_ = clock.step_index;
    ++emitted_;
    return env;
}

Verdict VehicleAgent::on_receive(SignatureBackend& backend, const Bytes& wire,
                                 std::uint64_t now_ms, std::uint64_t step_index) {
    Verdict verdict;
    const auto decoded = decode_envelope(wire);
    if (!decoded) {
        verdict.reason = RejectReason::malformed;
        return verdict;
    }
    verdict = verify_envelope(backend, *decoded, policy_, now_ms, replay_);
    if (verdict.verify_ms) {
        verify_samples_.push_back(*verdict.verify_ms);
    }
    if (verdict.accepted) {
        ++received_;
    }
    (void)step_index;
    return verdict;
}

AttackInjector::AttackInjector(AttackSpec spec, SignatureBackend& backend,
                               std::uint64_t scenario_seed, std::uint32_t intersection_id)
    : spec_(spec), backend_(backend), rng_(scenario_seed, "attack"),
      intersection_id_(intersection_id) {
    if (spec_.kind == AttackSpec::Kind::forge) {
        // The attacker's keypair is real; only the trust chain is missing.
        Bytes seed = {0xad, 0x5e, 0xed};
        for (int shift = 56; shift >= 0; shift -= 8) {
            seed.push_back(static_cast<std::uint8_t>(scenario_seed >> shift));
        }
        KeyPair kp = backend_.keygen(seed);
        attacker_signing_key_ = std::move(kp.signing_key);
        const Certificate cert = make_certificate(0xADBEEF01, 0, UINT64_MAX,
                                                  backend_.scheme_id(), kp.verification_key);
        attacker_cert_bytes_ = encode_certificate(cert);
    }
}

void AttackInjector::capture(std::uint64_t step_index, const Bytes& wire) {
    capture_buffer_.emplace_back(step_index, wire);
}

std::optional<Bytes> AttackInjector::step(std::uint64_t step_index, std::uint64_t now_ms,
                                          bool& skipped_out) {
    skipped_out = false;
    if (step_index < spec_.start_step || injected_ >= spec_.count) {
        return std::nullopt;
    }
    std::optional<Bytes> wire;
    switch (spec_.kind) {
    case AttackSpec::Kind::forge:
        wire = make_forged(now_ms);
        break;
    case AttackSpec::Kind::tamper:
        wire = make_tampered();
        break;
    case AttackSpec::Kind::replay:
        wire = make_replayed(step_index);
        break;
    }
    if (!wire) {
        skipped_out = true;
        return std::nullopt;
    }
    ++injected_;
    return wire;
}

Bytes AttackInjector::make_forged(std::uint64_t now_ms) {
    IcaMessage msg;
    msg.msg_count = forge_msg_count_;
    forge_msg_count_ = static_cast<std::uint8_t>((forge_msg_count_ + 1) & 0x7f);
    msg.sender_id = 0xADBEEF01;
    msg.timestamp_ms = now_ms;  // fresh, so only the trust check can stop it
    msg.intersection_id = intersection_id_;
    msg.event_flag = kEventFlagIcaWarning;
    msg.conflicting_vehicles = {1, 2};

    SignedEnvelope env;
    env.payload = encode_payload(msg);
    env.certificate = attacker_cert_bytes_;
    double ignored = 0.0;
    env.signature = backend_.sign(attacker_signing_key_, signing_prefix(env), ignored);
    return encode_envelope(env);
}

std::optional<Bytes> AttackInjector::make_tampered() {
    if (capture_buffer_.empty()) {
        return std::nullopt;
    }
    const auto decoded = decode_envelope(capture_buffer_.back().second);
    if (!decoded || decoded->payload.empty()) {
        return std::nullopt;
    }
    SignedEnvelope env = *decoded;
    const std::uint64_t n_bits = env.payload.size() * 8;
    const std::uint64_t bit =
        spec_.tamper_bit ? *spec_.tamper_bit % n_bits : rng_.next_below(n_bits);
    env.payload[bit / 8] ^= static_cast<std::uint8_t>(1u << (bit % 8));
    return encode_envelope(env);  // original signature kept
}

std::optional<Bytes> AttackInjector::make_replayed(std::uint64_t step_index) {
    // Oldest not-yet-replayed capture that satisfies the delay.
    while (replayed_ < capture_buffer_.size()) {
        const auto& [captured_at, wire] = capture_buffer_[replayed_];
        if (step_index - captured_at >= spec_.capture_delay_steps) {
            ++replayed_;
            return wire;
        }
        break;  // buffer is in capture order; newer entries are no better
    }
    return std::nullopt;
}

} // namespace pqv2x
