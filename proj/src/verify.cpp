#include "pqv2x/verify.hpp"

namespace pqv2x {

std::string to_string(RejectReason r) {
    switch (r) {
    case RejectReason::none: return "accept";
    case RejectReason::malformed: return "malformed";
    case RejectReason::bad_signature: return "bad_signature";
    case RejectReason::cert_validity: return "cert_validity";
    case RejectReason::untrusted_issuer: return "untrusted_issuer";
    case RejectReason::stale: return "stale";
    case RejectReason::replay: return "replay";
    }
    return "unknown";
}

Verdict verify_envelope(SignatureBackend& backend, const SignedEnvelope& env,
                        const VerifyPolicy& policy, std::uint64_t now_ms,
                        ReplayWindow& replay) {
    Verdict v;

    const auto cert = decode_certificate(env.certificate);
    const auto msg = decode_payload(env.payload);
    if (!cert || !msg) {
        v.reason = RejectReason::malformed;
        return v;
    }

    // 1. signature over version || msg_type || payload
    double verify_ms = 0.0;
    const bool sig_ok = backend.verify(cert->verification_key, signing_prefix(env),
                                       env.signature, verify_ms);
    v.verify_ms = verify_ms;
    if (!sig_ok) {
        v.reason = RejectReason::bad_signature;
        return v;
    }

    // 2. certificate validity at the receiver's clock
    if (now_ms < cert->not_before_ms || now_ms > cert->not_after_ms) {
        v.reason = RejectReason::cert_validity;
        return v;
    }

    // 3. trust anchor: computed digest of the key, not the stored field
    if (sha3_256_digest(cert->verification_key) != policy.trust_anchor) {
        v.reason = RejectReason::untrusted_issuer;
        return v;
    }

    // 4. freshness: shared clock, zero skew bound, so a future timestamp is stale
    if (msg->timestamp_ms > now_ms || now_ms - msg->timestamp_ms > policy.freshness_ms) {
        v.reason = RejectReason::stale;
        return v;
    }

    // 5. replay
    if (policy.replay_check_enabled && replay.seen(msg->sender_id, msg->msg_count)) {
        v.reason = RejectReason::replay;
        return v;
    }

    replay.remember(msg->sender_id, msg->msg_count);
    v.accepted = true;
    v.reason = RejectReason::none;
    return v;
}

} // namespace pqv2x
