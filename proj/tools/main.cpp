#include "pqv2x/cli.hpp"

#include <cstdlib>
#include <string>

#include <CLI11.hpp>

int main(int argc, char** argv) {
    CLI::App app{"pqv2x - PQC-signed intersection collision warning simulator"};
    app.require_subcommand(1);

    pqv2x::cli::CliInvocation inv;
    if (const char* env = std::getenv("PQV2X_BACKEND")) {
        inv.backend = env;
    }

    std::uint64_t seed = 0;
    bool have_seed = false;

    auto add_common = [&](CLI::App* cmd, bool needs_scenario) {
        if (needs_scenario) {
            cmd->add_option("--scenario", inv.scenario, "scenario JSON file")->required();
            cmd->add_option("--seed", seed, "override the scenario seed")
                ->each([&](const std::string&) { have_seed = true; });
        }
        cmd->add_option("--log-level", inv.log_level, "quiet|info|debug");
    };

    auto* run = app.add_subcommand("run", "run a scenario and emit reports");
    add_common(run, true);
    run->add_option("--output-dir", inv.output_dir, "report directory");
    run->add_flag("--force", inv.force, "overwrite an existing report set");
    run->add_flag("--no-events", inv.no_events, "skip events.ndjson");

    auto* validate = app.add_subcommand("validate", "validate a scenario file");
    add_common(validate, true);

    auto* bench = app.add_subcommand("bench-crypto", "signature micro-benchmark");
    add_common(bench, false);
    bench->add_option("--iterations", inv.iterations, "iterations per operation");

    auto* suite = app.add_subcommand("attack-suite", "run attacks and score mitigations");
    add_common(suite, true);

    CLI11_PARSE(app, argc, argv);
    if (have_seed) {
        inv.seed_override = seed;
    }

    if (run->parsed()) return pqv2x::cli::cmd_run(inv);
    if (validate->parsed()) return pqv2x::cli::cmd_validate(inv);
    if (bench->parsed()) return pqv2x::cli::cmd_bench_crypto(inv);
    if (suite->parsed()) return pqv2x::cli::cmd_attack_suite(inv);
    return pqv2x::cli::kExitRuntime;
}
