#ifndef PQV2X_CRYPTO_HPP
#define PQV2X_CRYPTO_HPP

#include "pqv2x/message.hpp"

#include <array>
#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>

namespace pqv2x {

struct TimingSample {
    enum class Kind { sign, verify };
    Kind kind = Kind::sign;
    double duration_ms = 0.0;   // wraps only the backend call
    std::uint32_t actor_id = 0;
    std::uint64_t step_index = 0;
};

struct KeyPair {
    Bytes signing_key;
    Bytes verification_key;
};

class CryptoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/**
 * Pluggable signer/verifier. Two implementations exist:
 *  - "falcon": the vendored Falcon-512 reference code (897-byte keys,
 *    666-byte padded signatures), deterministic for a fixed keygen seed;
 *  - "mock": a SHAKE256 construction with fixed fake timings, for
 *    byte-reproducible unit and golden tests. Not a real signature scheme.
 */
class SignatureBackend {
public:
    virtual ~SignatureBackend() = default;

    virtual std::string name() const = 0;
    virtual std::uint8_t scheme_id() const = 0;
    virtual std::size_t verification_key_bytes() const = 0;
    virtual std::size_t max_signature_bytes() const = 0;

    virtual KeyPair keygen(const Bytes& seed) = 0;
    virtual Bytes sign(const Bytes& signing_key, const Bytes& message,
                       double& duration_ms) = 0;
    virtual bool verify(const Bytes& verification_key, const Bytes& message,
                        const Bytes& signature, double& duration_ms) = 0;
};

std::unique_ptr<SignatureBackend> make_falcon_backend();
std::unique_ptr<SignatureBackend> make_mock_backend();

/// name is "falcon" or "mock"; throws CryptoError otherwise.
std::unique_ptr<SignatureBackend> make_backend(std::string_view name);

std::array<std::uint8_t, 32> sha3_256_digest(const Bytes& data);

/// Self-issued certificate: issuer_fingerprint is the digest of the
/// verification key itself. Receivers compare the computed key digest
/// against their configured trust anchor, never the stored field alone.
Certificate make_certificate(std::uint32_t subject_id, std::uint64_t not_before_ms,
                             std::uint64_t not_after_ms, std::uint8_t scheme_id,
                             const Bytes& verification_key);

} // namespace pqv2x

#endif
