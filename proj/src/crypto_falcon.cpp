#include "pqv2x/crypto.hpp"

#include <chrono>

extern "C" {
#include "api.h"
#include "pqv2x_drbg.h"
}

#if defined(PQV2X_FALCON_AVX2)
#define FALCON_FN(x) PQCLEAN_FALCONPADDED512_AVX2_##x
#define FALCON_CONST(x) PQCLEAN_FALCONPADDED512_AVX2_##x
#else
#define FALCON_FN(x) PQCLEAN_FALCONPADDED512_CLEAN_##x
#define FALCON_CONST(x) PQCLEAN_FALCONPADDED512_CLEAN_##x
#endif

namespace pqv2x {

namespace {

double elapsed_ms(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
        .count();
}

class FalconBackend final : public SignatureBackend {
public:
    std::string name() const override { return "falcon"; }
    std::uint8_t scheme_id() const override { return kSchemeFalcon512; }
    std::size_t verification_key_bytes() const override {
        return FALCON_CONST(CRYPTO_PUBLICKEYBYTES);
    }
    std::size_t max_signature_bytes() const override { return FALCON_CONST(CRYPTO_BYTES); }

    KeyPair keygen(const Bytes& seed) override {
        pqv2x_drbg_seed(seed.data(), seed.size());
        KeyPair kp;
        kp.verification_key.resize(FALCON_CONST(CRYPTO_PUBLICKEYBYTES));
        kp.signing_key.resize(FALCON_CONST(CRYPTO_SECRETKEYBYTES));
        if (FALCON_FN(crypto_sign_keypair)(kp.verification_key.data(),
                                           kp.signing_key.data()) != 0) {
            throw CryptoError("falcon keygen failed");
        }
        return kp;
    }

    Bytes sign(const Bytes& signing_key, const Bytes& message,
               double& duration_ms) override {
        if (signing_key.size() != FALCON_CONST(CRYPTO_SECRETKEYBYTES)) {
            throw CryptoError("falcon sign: bad signing key length");
        }
        Bytes sig(FALCON_CONST(CRYPTO_BYTES));
        std::size_t sig_len = 0;
        const auto t0 = std::chrono::steady_clock::now();
        const int rc = FALCON_FN(crypto_sign_signature)(
            sig.data(), &sig_len, message.data(), message.size(), signing_key.data());
        duration_ms = elapsed_ms(t0);
        if (rc != 0) {
            throw CryptoError("falcon sign failed");
        }
        sig.resize(sig_len);
        return sig;
    }

    bool verify(const Bytes& verification_key, const Bytes& message, const Bytes& signature,
                double& duration_ms) override {
        if (verification_key.size() != FALCON_CONST(CRYPTO_PUBLICKEYBYTES)) {
            duration_ms = 0.0;
            return false;
        }
        const auto t0 = std::chrono::steady_clock::now();
        const int rc = FALCON_FN(crypto_sign_verify)(
            signature.data(), signature.size(), message.data(), message.size(),
            verification_key.data());
        duration_ms = elapsed_ms(t0);
        return rc == 0;
    }
};

} // namespace

std::unique_ptr<SignatureBackend> make_falcon_backend() {
    return std::make_unique<FalconBackend>();
}

} // namespace pqv2x
