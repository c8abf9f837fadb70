#include "pqv2x/cli.hpp"

#include "pqv2x/agents.hpp"
#include "pqv2x/crypto.hpp"
#include "pqv2x/metrics.hpp"
#include "pqv2x/scenario.hpp"
#include "pqv2x/simulation.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>

namespace pqv2x::cli {

namespace {

std::optional<ScenarioConfig> load_or_report(const CliInvocation& inv) {
    try {
        ScenarioConfig config = load_scenario(inv.scenario);
        if (inv.seed_override) {
            config.seed = *inv.seed_override;
        }
        return config;
    } catch (const ScenarioError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return std::nullopt;
    }
}

void write_atomic_text(const std::filesystem::path& path, const std::string& content) {
    const std::filesystem::path tmp = path.string() + ".tmp";
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out << content;
    out.close();
    std::filesystem::rename(tmp, path);
}

bool outputs_exist(const std::filesystem::path& dir) {
    for (const char* name : {"table1.csv", "table2.csv", "table3.json", "events.ndjson"}) {
        if (std::filesystem::exists(dir / name)) {
            return true;
        }
    }
    return false;
}

std::string fmt_ms(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4f", v);
    return buf;
}

} // namespace

int cmd_run(const CliInvocation& inv) {
    const auto config = load_or_report(inv);
    if (!config) {
        return kExitConfig;
    }
    if (outputs_exist(inv.output_dir) && !inv.force) {
        std::cerr << "error: report files already exist in " << inv.output_dir
                  << " (use --force to overwrite)\n";
        return kExitConfig;
    }
    try {
        const RunResult result = run_scenario(*config, inv.backend, !inv.no_events);
        std::filesystem::create_directories(inv.output_dir);
        emit_report(result.report, inv.output_dir);
        if (!inv.no_events) {
            write_atomic_text(inv.output_dir / "events.ndjson", result.event_log);
        }
        if (inv.log_level != "quiet") {
            std::cout << "run complete: " << result.counters.genuine_broadcasts
                      << " warnings broadcast, reports written to " << inv.output_dir.string()
                      << "\n";
        }
        return kExitOk;
    } catch (const std::exception& e) {
        std::cerr << "runtime error: " << e.what() << "\n";
        return kExitRuntime;
    }
}

int cmd_validate(const CliInvocation& inv) {
    const auto config = load_or_report(inv);
    if (!config) {
        return kExitConfig;
    }
    std::cout << "scenario ok: " << config->vehicles.size() << " vehicles, "
              << config->total_steps() << " steps, digest " << config_digest(*config)
              << "\n";
    return kExitOk;
}

int cmd_bench_crypto(const CliInvocation& inv) {
    const std::string backend_name = inv.backend.empty() ? "falcon" : inv.backend;
    if (backend_name == "mock") {
        std::cerr << "error: bench-crypto needs the real backend; "
                     "mock timings are synthetic\n";
        return kExitRuntime;
    }
    try {
        auto backend = make_backend(backend_name);
        const KeyPair kp = backend->keygen({0x42});

        // Representative signing input: an ICA envelope prefix.
        IcaMessage msg;
        msg.sender_id = kRsuSenderId;
        msg.intersection_id = 829;
        msg.conflicting_vehicles = {1, 2};
        SignedEnvelope env;
        env.payload = encode_payload(msg);
        const Bytes prefix = signing_prefix(env);

        std::vector<double> sign_ms, verify_ms;
        sign_ms.reserve(inv.iterations);
        verify_ms.reserve(inv.iterations);
        Bytes sig;
        for (std::uint64_t i = 0; i < inv.iterations; ++i) {
            double ms = 0.0;
            sig = backend->sign(kp.signing_key, prefix, ms);
            sign_ms.push_back(ms);
        }
        for (std::uint64_t i = 0; i < inv.iterations; ++i) {
            double ms = 0.0;
            if (!backend->verify(kp.verification_key, prefix, sig, ms)) {
                std::cerr << "error: benchmark signature failed to verify\n";
                return kExitRuntime;
            }
            verify_ms.push_back(ms);
        }

        const TimingStats sign_stats = sample_stats(sign_ms);
        const TimingStats verify_stats = sample_stats(verify_ms);
        std::cout << "metric,mean_ms,std_ms,n\n";
        std::cout << "signature_generation," << fmt_ms(sign_stats.mean) << ","
                  << (sign_stats.std ? fmt_ms(*sign_stats.std) : "") << "," << sign_stats.n
                  << "\n";
        std::cout << "signature_verification," << fmt_ms(verify_stats.mean) << ","
                  << (verify_stats.std ? fmt_ms(*verify_stats.std) : "") << ","
                  << verify_stats.n << "\n";
        return kExitOk;
    } catch (const std::exception& e) {
        std::cerr << "runtime error: " << e.what() << "\n";
        return kExitRuntime;
    }
}

int cmd_attack_suite(const CliInvocation& inv) {
    const auto config = load_or_report(inv);
    if (!config) {
        return kExitConfig;
    }
    try {
        const RunResult result = run_scenario(*config, inv.backend, false);
        std::cout << "attack_kind,injected,accepted,rejected\n";
        std::uint64_t accepted_total = 0;
        for (const auto& row : result.report.attack_rows) {
            std::cout << to_string(row.kind) << "," << row.injected << "," << row.accepted
                      << "," << row.rejected << "\n";
            accepted_total += row.accepted;
        }
        if (accepted_total > 0) {
            std::cerr << "SECURITY REGRESSION: " << accepted_total
                      << " adversarial envelope(s) accepted\n";
            return kExitSecurityRegression;
        }
        return kExitOk;
    } catch (const std::exception& e) {
        std::cerr << "runtime error: " << e.what() << "\n";
        return kExitRuntime;
    }
}

} // namespace pqv2x::cli
