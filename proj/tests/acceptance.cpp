#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "pqv2x/channel.hpp"
#include "pqv2x/crypto.hpp"
#include "pqv2x/message.hpp"
#include "pqv2x/metrics.hpp"
#include "pqv2x/mobility.hpp"
#include "pqv2x/rng.hpp"
#include "pqv2x/simulation.hpp"
#include "pqv2x/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <string>
#include <vector>

using namespace pqv2x;

namespace {

const std::string kScenarioDir = PQV2X_SCENARIO_DIR;

void report_line(int index, const char* label, bool ok) {
    std::printf("criterion %d (%s): %s\n", index, label, ok ? "PASS" : "FAIL");
    std::fflush(stdout);
}

Bytes random_bytes(RngStream& rng, std::size_t n) {
    Bytes out(n);
    for (auto& b : out) b = static_cast<std::uint8_t>(rng.next_below(256));
    return out;
}

} // namespace

TEST_CASE("criterion 1: reference delivery table") {
    const auto config = load_scenario(kScenarioDir + "/reference.json");
    const auto result = run_scenario(config, "", false);

    bool ok = result.report.pdr_rows.size() == 8;
    for (const auto& row : result.report.pdr_rows) {
        ok = ok && row.expected == 61 && row.received == 57;
    }
    const std::string csv = render_delivery_csv(result.report);
    // every rendered row carries the 2-decimal ratio 0.93
    ok = ok && std::count(csv.begin(), csv.end(), '\n') == 9;
    for (std::size_t pos = csv.find('\n'); ok && pos != std::string::npos;) {
        const auto next = csv.find('\n', pos + 1);
        if (next == std::string::npos) break;
        const std::string line = csv.substr(pos + 1, next - pos - 1);
        ok = ok && line.size() >= 4 && line.substr(line.size() - 4) == "0.93";
        pos = next;
    }
    report_line(1, "delivery counts 61/57 with ratio 0.93 for all 8 vehicles", ok);
    CHECK(ok);
}

TEST_CASE("criterion 2: channel busy ratio band") {
    const auto config = load_scenario(kScenarioDir + "/reference.json");
    const auto result = run_scenario(config, "", false);

    bool ok = !result.report.cbr_rows.empty();
    for (const auto& row : result.report.cbr_rows) {
        ok = ok && std::abs(row.mean - 0.020) <= 0.005;
        if (row.std) {
            ok = ok && *row.std <= 0.007;
        }
    }
    report_line(2, "busy ratio mean 0.020 +/- 0.005, std <= 0.007", ok);
    CHECK(ok);
}

TEST_CASE("criterion 3: signature timing bands") {
    auto backend = make_falcon_backend();
    const KeyPair kp = backend->keygen({0x42});
    IcaMessage msg;
    msg.sender_id = 0x52535501;
    msg.intersection_id = 829;
    msg.conflicting_vehicles = {1, 2};
    SignedEnvelope env;
    env.payload = encode_payload(msg);
    const Bytes prefix = signing_prefix(env);

    std::vector<double> sign_ms, verify_ms;
    Bytes sig;
    for (int i = 0; i < 300; ++i) {
        double ms = 0.0;
        sig = backend->sign(kp.signing_key, prefix, ms);
        sign_ms.push_back(ms);
    }
    bool verified = true;
    for (int i = 0; i < 300; ++i) {
        double ms = 0.0;
        verified = verified && backend->verify(kp.verification_key, prefix, sig, ms);
        verify_ms.push_back(ms);
    }
    const double sign_mean = sample_stats(sign_ms).mean;
    const double verify_mean = sample_stats(verify_ms).mean;
    const bool ok = verified && verify_mean < sign_mean && sign_mean > 0.05 &&
                    sign_mean < 5.0 && verify_mean > 0.01 && verify_mean < 2.0;
    std::printf("  sign mean %.4f ms, verify mean %.4f ms\n", sign_mean, verify_mean);
    report_line(3, "verification faster than signing, both in their ms bands", ok);
    CHECK(ok);
}

TEST_CASE("criterion 4: pooled statistics match the flat oracle") {
    RngStream rng(404, "acceptance-pooled");
    bool ok = true;
    for (int trial = 0; trial < 1000 && ok; ++trial) {
        std::map<VehicleId, std::vector<double>> per_vehicle;
        std::vector<double> flat;
        const auto vehicles = rng.next_below(8) + 1;
        for (std::uint64_t v = 0; v < vehicles; ++v) {
            const auto n = rng.next_below(25);
            for (std::uint64_t i = 0; i < n; ++i) {
                const double sample = 0.01 + rng.next_unit() * 3.0;
                per_vehicle[static_cast<VehicleId>(v + 1)].push_back(sample);
                flat.push_back(sample);
            }
        }
        if (flat.size() < 2) {
            continue;
        }
        const auto pooled = pooled_verify_stats(per_vehicle);
        const auto oracle = sample_stats(flat);
        ok = ok && pooled.n == oracle.n && std::abs(pooled.mean - oracle.mean) < 1e-12 &&
             std::abs(*pooled.std - *oracle.std) < 1e-12;
    }
    report_line(4, "pooled timing statistics equal flat-list statistics", ok);
    CHECK(ok);
}

TEST_CASE("criterion 5: conflict detection matches brute force") {
    RngStream rng(505, "acceptance-conflict");
    bool ok = true;
    for (int trial = 0; trial < 1000 && ok; ++trial) {
        const auto n = rng.next_below(12) + 1;
        std::vector<VehicleState> fleet;
        for (std::size_t i = 0; i < n; ++i) {
            VehicleState v;
            v.id = static_cast<VehicleId>(i + 1);
            v.route_position = 0.0;
            v.reference_arclength = rng.next_unit() * 300.0;
            v.route_length = 1000.0;
            v.speed = rng.next_unit() * 30.0;
            v.active = true;
            if (rng.next_below(6) == 0) v.speed = 0.0;
            if (rng.next_below(8) == 0) v.route_position = v.reference_arclength + 0.5;
            fleet.push_back(v);
        }
        const double threshold = 0.25 + rng.next_unit() * 4.0;

        std::vector<ConflictPair> oracle;
        for (std::size_t i = 0; i < fleet.size(); ++i) {
            for (std::size_t j = i + 1; j < fleet.size(); ++j) {
                const auto ta = time_to_reference(fleet[i]);
                const auto tb = time_to_reference(fleet[j]);
                if (ta && tb && std::abs(*ta - *tb) < threshold) {
                    oracle.push_back({fleet[i].id, fleet[j].id, *ta, *tb,
                                      std::abs(*ta - *tb)});
                }
            }
        }
        const auto detected = detect_conflicts(fleet, threshold);
        ok = ok && detected.size() == oracle.size();
        for (std::size_t k = 0; ok && k < detected.size(); ++k) {
            ok = detected[k].vehicle_a == oracle[k].vehicle_a &&
                 detected[k].vehicle_b == oracle[k].vehicle_b &&
                 detected[k].ttc_gap == oracle[k].ttc_gap;
        }
    }
    report_line(5, "pairwise conflict detection equals the quadratic oracle", ok);
    CHECK(ok);
}

TEST_CASE("criterion 6: attack resistance across seeds and bit flips") {
    bool ok = true;

    for (std::uint64_t seed = 1; seed <= 20 && ok; ++seed) {
        auto config = load_scenario(kScenarioDir + "/attack.json");
        config.seed = seed;
        const auto result = run_scenario(config, "", false);
        ok = result.counters.adversarial_injected > 0 &&
             result.counters.adversarial_accepted == 0 &&
             result.counters.genuine_rejected == 0 &&
             result.counters.genuine_accepted > 0;
    }

    // single random bit flips in any authenticated region (payload, the
    // certificate's verification key, or the signature) must never be accepted
    auto backend = make_falcon_backend();
    const KeyPair kp = backend->keygen({0x66});
    const Certificate cert = make_certificate(0x52535501, 0, 1000000,
                                              backend->scheme_id(), kp.verification_key);
    IcaMessage msg;
    msg.sender_id = 0x52535501;
    msg.timestamp_ms = 100;
    msg.intersection_id = 829;
    msg.conflicting_vehicles = {1, 2};
    SignedEnvelope env;
    env.payload = encode_payload(msg);
    env.certificate = encode_certificate(cert);
    double ms = 0.0;
    env.signature = backend->sign(kp.signing_key, signing_prefix(env), ms);

    VerifyPolicy policy;
    policy.trust_anchor = sha3_256_digest(kp.verification_key);

    RngStream rng(606, "acceptance-bitflip");
    int rejected = 0;
    const int flips = 10000;
    const std::size_t payload_bits = env.payload.size() * 8;
    const std::size_t key_bits = kp.verification_key.size() * 8;
    const std::size_t sig_bits = env.signature.size() * 8;
    for (int i = 0; i < flips; ++i) {
        SignedEnvelope mutated = env;
        auto bit = rng.next_below(payload_bits + key_bits + sig_bits);
        if (bit < payload_bits) {
            mutated.payload[bit / 8] ^= static_cast<std::uint8_t>(1u << (bit % 8));
        } else if ((bit -= payload_bits) < key_bits) {
            Certificate c = cert;
            c.verification_key[bit / 8] ^= static_cast<std::uint8_t>(1u << (bit % 8));
            mutated.certificate = encode_certificate(c);
        } else {
            bit -= key_bits;
            mutated.signature[bit / 8] ^= static_cast<std::uint8_t>(1u << (bit % 8));
        }
        ReplayWindow replay;
        if (!verify_envelope(*backend, mutated, policy, 100, replay).accepted) {
            ++rejected;
        }
    }
    ok = ok && rejected == flips;
    std::printf("  %d/%d flipped frames rejected\n", rejected, flips);
    report_line(6, "no adversarial or corrupted frame accepted, no genuine frame lost", ok);
    CHECK(ok);
}

TEST_CASE("criterion 7: equal seeds give byte-identical outputs") {
    auto config = load_scenario(kScenarioDir + "/reference.json");
    config.crypto.scheme = "mock";  // measured timings are the one nondeterministic input
    const auto a = run_scenario(config);
    const auto b = run_scenario(config);
    const bool ok = a.event_log == b.event_log &&
                    render_delivery_csv(a.report) == render_delivery_csv(b.report) &&
                    render_cbr_csv(a.report) == render_cbr_csv(b.report) &&
                    render_summary_json(a.report).dump() == render_summary_json(b.report).dump();
    report_line(7, "same seed reproduces reports and event log byte for byte", ok);
    CHECK(ok);
}

TEST_CASE("criterion 8: wire codec round trip and decoder totality") {
    RngStream rng(808, "acceptance-wire");
    bool ok = true;
    for (int i = 0; i < 10000 && ok; ++i) {
        SignedEnvelope env;
        env.payload = random_bytes(rng, rng.next_below(120));
        env.certificate = random_bytes(rng, rng.next_below(1100));
        env.signature = random_bytes(rng, rng.next_below(700));
        const auto decoded = decode_envelope(encode_envelope(env));
        ok = decoded && *decoded == env;
    }
    // decoder totality: arbitrary and truncated buffers return errors
    for (int i = 0; i < 10000 && ok; ++i) {
        Bytes buf;
        if (i % 2 == 0) {
            buf = random_bytes(rng, rng.next_below(200));
        } else {
            SignedEnvelope env;
            env.payload = random_bytes(rng, rng.next_below(60));
            env.certificate = random_bytes(rng, rng.next_below(60));
            env.signature = random_bytes(rng, rng.next_below(60));
            buf = encode_envelope(env);
            buf.resize(rng.next_below(buf.size() + 1));
        }
        const auto decoded = decode_envelope(buf);
        if (decoded) {
            // a random buffer may parse; it must then re-encode to itself
            ok = encode_envelope(*decoded) == buf;
        }
    }
    report_line(8, "round trip holds and the decoder is total on arbitrary input", ok);
    CHECK(ok);
}
