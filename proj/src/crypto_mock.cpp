#include "pqv2x/crypto.hpp"

extern "C" {
#include "fips202.h"
}

namespace pqv2x {

namespace {

constexpr std::size_t kMockSignatureBytes = 64;
constexpr double kMockSignMs = 0.30;
constexpr double kMockVerifyMs = 0.11;

Bytes shake256_of(std::string_view domain, const Bytes& a, const Bytes& b,
                  std::size_t out_len) {
    shake256incctx ctx;
    shake256_inc_init(&ctx);
    shake256_inc_absorb(&ctx, reinterpret_cast<const std::uint8_t*>(domain.data()),
                        domain.size());
    shake256_inc_absorb(&ctx, a.data(), a.size());
    shake256_inc_absorb(&ctx, b.data(), b.size());
    shake256_inc_finalize(&ctx);
    Bytes out(out_len);
    shake256_inc_squeeze(out.data(), out.size(), &ctx);
    shake256_inc_ctx_release(&ctx);
    return out;
}

// Keyless MAC-style stand-in: the "signature" is a SHAKE256 digest bound to
// the verification key and message. Anyone holding the key could forge, so
// authenticity rests on the trust-anchor check; acceptable for tests only.
class MockBackend final : public SignatureBackend {
public:
    std::string name() const override { return "mock"; }
    std::uint8_t scheme_id() const override { return kSchemeFalcon512; }
    std::size_t verification_key_bytes() const override { return kFalcon512PublicKeyBytes; }
    std::size_t max_signature_bytes() const override { return kMockSignatureBytes; }

    KeyPair keygen(const Bytes& seed) override {
        KeyPair kp;
        kp.verification_key = shake256_of("pqv2x-mock-vk", seed, {}, kFalcon512PublicKeyBytes);
        kp.signing_key = kp.verification_key;
        return kp;
    }

    Bytes sign(const Bytes& signing_key, const Bytes& message,
               double& duration_ms) override {
        duration_ms = kMockSignMs;
        return shake256_of("pqv2x-mock-sig", signing_key, message, kMockSignatureBytes);
    }

    bool verify(const Bytes& verification_key, const Bytes& message, const Bytes& signature,
                double& duration_ms) override {
        duration_ms = kMockVerifyMs;
        return signature ==
               shake256_of("pqv2x-mock-sig", verification_key, message, kMockSignatureBytes);
    }
};

} // namespace

std::unique_ptr<SignatureBackend> make_mock_backend() {
    return std::make_unique<MockBackend>();
}

std::unique_ptr<SignatureBackend> make_backend(std::string_view name) {
    if (name == "falcon") {
        return make_falcon_backend();
    }
    if (name == "mock") {
        return make_mock_backend();
    }
    throw CryptoError("unknown crypto backend: " + std::string(name));
}

std::array<std::uint8_t, 32> sha3_256_digest(const Bytes& data) {
    std::array<std::uint8_t, 32> out{};
    sha3_256(out.data(), data.data(), data.size());
    return out;
}

Certificate make_certificate(std::uint32_t subject_id, std::uint64_t not_before_ms,
                             std::uint64_t not_after_ms, std::uint8_t scheme_id,
                             const Bytes& verification_key) {
    Certificate cert;
    cert.subject_id = subject_id;
    cert.not_before_ms = not_before_ms;
    cert.not_after_ms = not_after_ms;
    cert.scheme_id = scheme_id;
    cert.verification_key = verification_key;
    cert.issuer_fingerprint = sha3_256_digest(verification_key);
    return cert;
}

} // namespace pqv2x
