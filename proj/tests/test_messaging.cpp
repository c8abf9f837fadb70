#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "pqv2x/crypto.hpp"
#include "pqv2x/message.hpp"
#include "pqv2x/rng.hpp"
#include "pqv2x/verify.hpp"

using namespace pqv2x;

namespace {

IcaMessage sample_message() {
    IcaMessage msg;
    msg.msg_count = 5;
    msg.sender_id = kSchemeFalcon512 /*unused*/ + 0x52535500;
    msg.timestamp_ms = 1234;
    msg.intersection_id = 829;
    msg.event_flag = kEventFlagIcaWarning;
    msg.conflicting_vehicles = {1, 2};
    return msg;
}

Bytes random_bytes(RngStream& rng, std::size_t n) {
    Bytes out(n);
    for (auto& b : out) b = static_cast<std::uint8_t>(rng.next_below(256));
    return out;
}

struct SignedFixture {
    std::unique_ptr<SignatureBackend> backend;
    Certificate cert;
    Bytes signing_key;
    SignedEnvelope envelope;
    VerifyPolicy policy;

    explicit SignedFixture(const std::string& scheme, std::uint64_t ts_ms = 0) {
        backend = make_backend(scheme);
        KeyPair kp = backend->keygen({0x01, 0x02});
        signing_key = std::move(kp.signing_key);
        cert = make_certificate(0x52535501, 0, 1000000, backend->scheme_id(),
                                kp.verification_key);
        policy.trust_anchor = sha3_256_digest(cert.verification_key);

        IcaMessage msg = sample_message();
        msg.timestamp_ms = ts_ms;
        envelope.payload = encode_payload(msg);
        envelope.certificate = encode_certificate(cert);
        double ms = 0.0;
        envelope.signature = backend->sign(signing_key, signing_prefix(envelope), ms);
    }
};

} // namespace

TEST_CASE("envelope header bytes match the wire layout") {
    SignedEnvelope env;
    env.payload = {0x01, 0x02};
    env.certificate = {};
    env.signature = {};
    const Bytes wire = encode_envelope(env);
    const Bytes expected = {0x01, 0x21, 0x00, 0x02, 0x01, 0x02, 0x00, 0x00, 0x00, 0x00};
    CHECK(wire == expected);
}

TEST_CASE("envelope round trip over randomized envelopes") {
    RngStream rng(77, "roundtrip");
    for (int i = 0; i < 500; ++i) {
        SignedEnvelope env;
        env.payload = random_bytes(rng, rng.next_below(100));
        env.certificate = random_bytes(rng, rng.next_below(1200));
        env.signature = random_bytes(rng, rng.next_below(700));
        const auto decoded = decode_envelope(encode_envelope(env));
        REQUIRE(decoded);
        CHECK(*decoded == env);
    }
}

TEST_CASE("payload round trip") {
    const IcaMessage msg = sample_message();
    const auto decoded = decode_payload(encode_payload(msg));
    REQUIRE(decoded);
    CHECK(*decoded == msg);
}

TEST_CASE("certificate round trip") {
    const Certificate cert = make_certificate(7, 10, 20, kSchemeFalcon512, Bytes(897, 0xAB));
    const auto decoded = decode_certificate(encode_certificate(cert));
    REQUIRE(decoded);
    CHECK(*decoded == cert);
}

TEST_CASE("truncated buffers decode to errors, never crash") {
    SignedEnvelope env;
    env.payload = {1, 2, 3};
    env.certificate = {4, 5};
    env.signature = {6};
    const Bytes wire = encode_envelope(env);
    for (std::size_t cut = 0; cut < wire.size(); ++cut) {
        const Bytes prefix(wire.begin(), wire.begin() + static_cast<std::ptrdiff_t>(cut));
        CHECK_FALSE(decode_envelope(prefix));
    }
}

TEST_CASE("unknown version is a structured error") {
    Bytes wire = encode_envelope(SignedEnvelope{});
    wire[0] = 0x7f;
    const auto decoded = decode_envelope(wire);
    CHECK_FALSE(decoded);
    CHECK(decoded.error == DecodeError::unknown_version);
}

TEST_CASE("trailing garbage is a length overrun") {
    Bytes wire = encode_envelope(SignedEnvelope{});
    wire.push_back(0x00);
    const auto decoded = decode_envelope(wire);
    CHECK_FALSE(decoded);
    CHECK(decoded.error == DecodeError::length_overrun);
}

TEST_CASE("falcon keygen yields an 897-byte verification key") {
    auto backend = make_falcon_backend();
    const KeyPair kp = backend->keygen({0x11});
    CHECK(kp.verification_key.size() == 897);
}

TEST_CASE("falcon keygen is deterministic per seed and distinct across seeds") {
    auto backend = make_falcon_backend();
    const KeyPair a1 = backend->keygen({0x11});
    const KeyPair a2 = backend->keygen({0x11});
    const KeyPair b = backend->keygen({0x22});
    CHECK(a1.verification_key == a2.verification_key);
    CHECK(a1.verification_key != b.verification_key);
}

TEST_CASE("falcon sign/verify accepts and stays within 666 bytes") {
    auto backend = make_falcon_backend();
    const KeyPair kp = backend->keygen({0x33});
    RngStream rng(5, "siglen");
    for (int i = 0; i < 50; ++i) {
        const Bytes msg = random_bytes(rng, 32 + rng.next_below(64));
        double ms = 0.0;
        const Bytes sig = backend->sign(kp.signing_key, msg, ms);
        CHECK(sig.size() <= kFalcon512MaxSignatureBytes);
        CHECK(ms > 0.0);
        CHECK(backend->verify(kp.verification_key, msg, sig, ms));
    }
}

TEST_CASE("mock backend round trips with fixed timings") {
    auto backend = make_mock_backend();
    const KeyPair kp = backend->keygen({0x44});
    CHECK(kp.verification_key.size() == 897);
    double sign_ms = 0.0, verify_ms = 0.0;
    const Bytes sig = backend->sign(kp.signing_key, {1, 2, 3}, sign_ms);
    CHECK(backend->verify(kp.verification_key, {1, 2, 3}, sig, verify_ms));
    CHECK(sign_ms == 0.30);
    CHECK(verify_ms == 0.11);
    CHECK_FALSE(backend->verify(kp.verification_key, {1, 2, 4}, sig, verify_ms));
}

TEST_CASE("valid fresh unseen envelope is accepted") {
    SignedFixture fx("mock");
    ReplayWindow replay;
    const Verdict v = verify_envelope(*fx.backend, fx.envelope, fx.policy, 100, replay);
    CHECK(v.accepted);
    CHECK(v.reason == RejectReason::none);
    CHECK(v.verify_ms.has_value());
}

TEST_CASE("second delivery of the same envelope is a replay") {
    SignedFixture fx("mock");
    ReplayWindow replay;
    CHECK(verify_envelope(*fx.backend, fx.envelope, fx.policy, 100, replay).accepted);
    const Verdict v = verify_envelope(*fx.backend, fx.envelope, fx.policy, 100, replay);
    CHECK_FALSE(v.accepted);
    CHECK(v.reason == RejectReason::replay);
}

TEST_CASE("flipped payload bit rejects with bad_signature") {
    SignedFixture fx("mock");
    ReplayWindow replay;
    auto env = fx.envelope;
    env.payload[0] ^= 0x01;
    const Verdict v = verify_envelope(*fx.backend, env, fx.policy, 100, replay);
    CHECK(v.reason == RejectReason::bad_signature);
}

TEST_CASE("expired certificate rejects after the signature check") {
    SignedFixture fx("mock");
    ReplayWindow replay;
    const Verdict v =
        verify_envelope(*fx.backend, fx.envelope, fx.policy, 2000000, replay);
    CHECK(v.reason == RejectReason::cert_validity);
}

TEST_CASE("wrong trust anchor rejects as untrusted_issuer") {
    SignedFixture fx("mock");
    ReplayWindow replay;
    VerifyPolicy policy = fx.policy;
    policy.trust_anchor[0] ^= 0xff;
    const Verdict v = verify_envelope(*fx.backend, fx.envelope, policy, 100, replay);
    CHECK(v.reason == RejectReason::untrusted_issuer);
}

TEST_CASE("stale and future timestamps reject") {
    SignedFixture fx("mock", 1000);
    ReplayWindow replay;
    CHECK(verify_envelope(*fx.backend, fx.envelope, fx.policy, 1501, replay).reason ==
          RejectReason::stale);
    CHECK(verify_envelope(*fx.backend, fx.envelope, fx.policy, 999, replay).reason ==
          RejectReason::stale);
    CHECK(verify_envelope(*fx.backend, fx.envelope, fx.policy, 1500, replay).accepted);
}

TEST_CASE("malformed certificate bytes reject without a backend call") {
    SignedFixture fx("mock");
    ReplayWindow replay;
    auto env = fx.envelope;
    env.certificate.pop_back();
    const Verdict v = verify_envelope(*fx.backend, env, fx.policy, 100, replay);
    CHECK(v.reason == RejectReason::malformed);
    CHECK_FALSE(v.verify_ms.has_value());
}

TEST_CASE("replay window evicts oldest beyond capacity") {
    ReplayWindow replay(4);
    for (std::uint8_t i = 0; i < 6; ++i) {
        replay.remember(1, i);
    }
    CHECK_FALSE(replay.seen(1, 0));
    CHECK_FALSE(replay.seen(1, 1));
    CHECK(replay.seen(1, 2));
    CHECK(replay.seen(1, 5));
}

TEST_CASE("single-bit flips over payload, key and signature always reject (falcon)") {
    SignedFixture fx("falcon");
    ReplayWindow replay;
    RngStream rng(99, "bitflip");
    const std::size_t payload_bits = fx.envelope.payload.size() * 8;
    const std::size_t sig_bits = fx.envelope.signature.size() * 8;
    for (int i = 0; i < 200; ++i) {
        auto env = fx.envelope;
        switch (rng.next_below(3)) {
        case 0: {
            const auto bit = rng.next_below(payload_bits);
            env.payload[bit / 8] ^= static_cast<std::uint8_t>(1u << (bit % 8));
            break;
        }
        case 1: {
            // flip inside the certificate's verification key field
            auto cert = *decode_certificate(env.certificate);
            const auto bit = rng.next_below(cert.verification_key.size() * 8);
            cert.verification_key[bit / 8] ^= static_cast<std::uint8_t>(1u << (bit % 8));
            env.certificate = encode_certificate(cert);
            break;
        }
        default: {
            const auto bit = rng.next_below(sig_bits);
            env.signature[bit / 8] ^= static_cast<std::uint8_t>(1u << (bit % 8));
            break;
        }
        }
        ReplayWindow fresh;
        CHECK_FALSE(verify_envelope(*fx.backend, env, fx.policy, 100, fresh).accepted);
    }
}
