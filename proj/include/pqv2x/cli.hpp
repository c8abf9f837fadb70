#ifndef PQV2X_CLI_HPP
#define PQV2X_CLI_HPP

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

namespace pqv2x::cli {

// Exit codes are a stable contract.
constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitRuntime = 2;
constexpr int kExitSecurityRegression = 3;

struct CliInvocation {
    std::filesystem::path scenario;
    std::optional<std::uint64_t> seed_override;
    std::filesystem::path output_dir = ".";
    bool force = false;
    bool no_events = false;
    std::uint64_t iterations = 1000;       // bench-crypto
    std::string backend;                   // from PQV2X_BACKEND; "" = scenario's choice
    std::string log_level = "info";
};

int cmd_run(const CliInvocation& inv);
int cmd_validate(const CliInvocation& inv);
int cmd_bench_crypto(const CliInvocation& inv);
int cmd_attack_suite(const CliInvocation& inv);

} // namespace pqv2x::cli

#endif
