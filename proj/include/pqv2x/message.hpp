#ifndef PQV2X_MESSAGE_HPP
#define PQV2X_MESSAGE_HPP

#include "pqv2x/mobility.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace pqv2x {

using Bytes = std::vector<std::uint8_t>;

constexpr std::uint8_t kEnvelopeVersion = 0x01;
constexpr std::uint8_t kMsgTypeIca = 0x21;
constexpr std::uint8_t kEventFlagIcaWarning = 0x01;
constexpr std::uint8_t kSchemeFalcon512 = 0x01;
constexpr std::size_t kFalcon512PublicKeyBytes = 897;
constexpr std::size_t kFalcon512MaxSignatureBytes = 666;

/// Fixed-width warning payload. msg_count wraps modulo 128 per sender.
struct IcaMessage {
    std::uint8_t msg_count = 0;                 // 0..127
    std::uint32_t sender_id = 0;                // 4-byte temporary id
    std::uint64_t timestamp_ms = 0;             // ms since scenario start
    std::uint32_t intersection_id = 0;
    std::uint8_t event_flag = kEventFlagIcaWarning;
    std::vector<VehicleId> conflicting_vehicles;

    bool operator==(const IcaMessage&) const = default;
};

struct Certificate {
    std::uint32_t subject_id = 0;
    std::uint64_t not_before_ms = 0;
    std::uint64_t not_after_ms = 0;
    std::uint8_t scheme_id = kSchemeFalcon512;
    Bytes verification_key;
    std::array<std::uint8_t, 32> issuer_fingerprint{};

    bool operator==(const Certificate&) const = default;
};

/// Wire container. `payload` and `certificate` are kept as serialized bytes;
/// the signature covers version || msg_type || payload only.
struct SignedEnvelope {
    std::uint8_t version = kEnvelopeVersion;
    std::uint8_t msg_type = kMsgTypeIca;
    Bytes payload;
    Bytes certificate;
    Bytes signature;

    bool operator==(const SignedEnvelope&) const = default;
};

enum class DecodeError {
    truncated,
    length_overrun,
    unknown_version,
    bad_field,
};

std::string to_string(DecodeError e);

template <typename T>
struct Decoded {
    std::optional<T> value;
    DecodeError error = DecodeError::truncated;

    explicit operator bool() const { return value.has_value(); }
    const T& operator*() const { return *value; }
    const T* operator->() const { return &*value; }
};

Bytes encode_payload(const IcaMessage& msg);
Decoded<IcaMessage> decode_payload(const Bytes& bytes);

Bytes encode_certificate(const Certificate& cert);
Decoded<Certificate> decode_certificate(const Bytes& bytes);

// version(1) | msg_type(1) | payload_len(2,BE) | payload
//            | cert_len(2,BE) | cert | sig_len(2,BE) | sig
Bytes encode_envelope(const SignedEnvelope& env);
Decoded<SignedEnvelope> decode_envelope(const Bytes& bytes);

/// The canonical bytes the signature is computed over.
Bytes signing_prefix(const SignedEnvelope& env);

} // namespace pqv2x

#endif
