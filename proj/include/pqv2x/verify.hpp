#ifndef PQV2X_VERIFY_HPP
#define PQV2X_VERIFY_HPP

#include "pqv2x/crypto.hpp"
#include "pqv2x/message.hpp"

#include <array>
#include <cstdint>
#include <deque>
#include <optional>
#include <set>
#include <string>
#include <utility>

namespace pqv2x {

enum class RejectReason {
    none,            // accepted
    malformed,
    bad_signature,
    cert_validity,
    untrusted_issuer,
    stale,
    replay,
};

std::string to_string(RejectReason r);

struct Verdict {
    bool accepted = false;
    RejectReason reason = RejectReason::malformed;
    std::optional<double> verify_ms;  // present iff the backend was invoked
};

/// Retains the last `capacity` (sender_id, msg_count) pairs that were
/// accepted; a duplicate within retention is a replay.
class ReplayWindow {
public:
    explicit ReplayWindow(std::size_t capacity = 128) : capacity_(capacity) {}

    bool seen(std::uint32_t sender_id, std::uint8_t msg_count) const {
        return index_.count({sender_id, msg_count}) > 0;
    }

    void remember(std::uint32_t sender_id, std::uint8_t msg_count) {
        const auto key = std::make_pair(sender_id, msg_count);
        if (index_.count(key)) {
            return;
        }
        order_.push_back(key);
        index_.insert(key);
        while (order_.size() > capacity_) {
            index_.erase(order_.front());
            order_.pop_front();
        }
    }

private:
    std::size_t capacity_;
    std::deque<std::pair<std::uint32_t, std::uint8_t>> order_;
    std::set<std::pair<std::uint32_t, std::uint8_t>> index_;
};

struct VerifyPolicy {
    std::array<std::uint8_t, 32> trust_anchor{};
    std::uint64_t freshness_ms = 500;
    bool replay_check_enabled = true;
};

/**
 * Full receive-side check pipeline over a decoded envelope. Check order is
 * fixed — signature, certificate validity, trust anchor, freshness, replay —
 * so the rejection reason names the first failed check. The trust-anchor
 * comparison digests the certificate's verification key; the stored
 * issuer_fingerprint field is never trusted on its own.
 *
 * On accept, the (sender_id, msg_count) pair is recorded in `replay`.
 */
Verdict verify_envelope(SignatureBackend& backend, const SignedEnvelope& env,
                        const VerifyPolicy& policy, std::uint64_t now_ms,
                        ReplayWindow& replay);

} // namespace pqv2x

#endif
