#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "pqv2x/cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

using namespace pqv2x::cli;
namespace fs = std::filesystem;

namespace {

const std::string kScenarioDir = PQV2X_SCENARIO_DIR;
const std::string kBinary = std::string(PQV2X_BIN_DIR) + "/pqv2x";

struct TempDir {
    fs::path path;
    explicit TempDir(const char* name) : path(fs::temp_directory_path() / name) {
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

CliInvocation base_invocation(const fs::path& out) {
    CliInvocation inv;
    inv.scenario = kScenarioDir + "/reference.json";
    inv.output_dir = out;
    inv.backend = "mock";   // keep tests fast and deterministic
    inv.log_level = "quiet";
    return inv;
}

} // namespace

TEST_CASE("validate accepts the reference scenario") {
    CliInvocation inv;
    inv.scenario = kScenarioDir + "/reference.json";
    CHECK(cmd_validate(inv) == kExitOk);
}

TEST_CASE("validate rejects a missing file with the config exit code") {
    CliInvocation inv;
    inv.scenario = "/nonexistent/nope.json";
    CHECK(cmd_validate(inv) == kExitConfig);
}

TEST_CASE("validate rejects malformed json with the config exit code") {
    TempDir tmp("pqv2x_cli_badjson");
    const fs::path bad = tmp.path / "bad.json";
    std::ofstream(bad) << "{ not json";
    CliInvocation inv;
    inv.scenario = bad;
    CHECK(cmd_validate(inv) == kExitConfig);
}

TEST_CASE("run writes the three tables and the event log") {
    TempDir tmp("pqv2x_cli_run");
    const auto inv = base_invocation(tmp.path);
    REQUIRE(cmd_run(inv) == kExitOk);
    for (const char* name : {"table1.csv", "table2.csv", "table3.json", "events.ndjson"}) {
        CHECK(fs::exists(tmp.path / name));
    }
}

TEST_CASE("run refuses to overwrite without --force") {
    TempDir tmp("pqv2x_cli_overwrite");
    auto inv = base_invocation(tmp.path);
    REQUIRE(cmd_run(inv) == kExitOk);
    CHECK(cmd_run(inv) == kExitConfig);
    inv.force = true;
    CHECK(cmd_run(inv) == kExitOk);
}

TEST_CASE("run with --no-events skips the event log") {
    TempDir tmp("pqv2x_cli_noevents");
    auto inv = base_invocation(tmp.path);
    inv.no_events = true;
    REQUIRE(cmd_run(inv) == kExitOk);
    CHECK(fs::exists(tmp.path / "table1.csv"));
    CHECK_FALSE(fs::exists(tmp.path / "events.ndjson"));
}

TEST_CASE("seed override changes the recorded run seed") {
    TempDir tmp("pqv2x_cli_seed");
    auto inv = base_invocation(tmp.path);
    inv.seed_override = 777;
    REQUIRE(cmd_run(inv) == kExitOk);
    std::ifstream in(tmp.path / "table3.json");
    const std::string doc((std::istreambuf_iterator<char>(in)),
                          std::istreambuf_iterator<char>());
    CHECK(doc.find("\"seed\": 777") != std::string::npos);
}

TEST_CASE("attack suite passes on the attack scenario") {
    CliInvocation inv;
    inv.scenario = kScenarioDir + "/attack.json";
    inv.backend = "mock";
    CHECK(cmd_attack_suite(inv) == kExitOk);
}

TEST_CASE("bench-crypto refuses the mock backend") {
    CliInvocation inv;
    inv.backend = "mock";
    CHECK(cmd_bench_crypto(inv) == kExitRuntime);
}

TEST_CASE("binary: validate subcommand exits zero") {
    const std::string cmd =
        kBinary + " validate --scenario " + kScenarioDir + "/reference.json > /dev/null";
    CHECK(std::system(cmd.c_str()) == 0);
}

TEST_CASE("binary: missing required flag is an error") {
    const std::string cmd = kBinary + " validate 2> /dev/null";
    CHECK(std::system(cmd.c_str()) != 0);
}

TEST_CASE("binary: PQV2X_BACKEND=mock run produces reports") {
    TempDir tmp("pqv2x_cli_binary_run");
    const std::string cmd = "PQV2X_BACKEND=mock " + kBinary + " run --scenario " +
                            kScenarioDir + "/reference.json --output-dir " +
                            tmp.path.string() + " --log-level quiet";
    REQUIRE(std::system(cmd.c_str()) == 0);
    CHECK(fs::exists(tmp.path / "table1.csv"));
}
