#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "pqv2x/clock.hpp"
#include "pqv2x/rng.hpp"
#include "pqv2x/scenario.hpp"
#include "pqv2x/simulation.hpp"

#include <sstream>

using namespace pqv2x;
using nlohmann::json;

namespace {

const std::string kScenarioDir = PQV2X_SCENARIO_DIR;

json minimal_scenario() {
    return json::parse(R"({
        "duration": 1.0,
        "step_size": 0.1,
        "seed": 1,
        "intersection": {"id": 829, "reference_point": [0.0, 0.0]},
        "vehicles": [],
        "rsu": {"position": [5.0, 5.0], "ttc_threshold": 2.0, "warning_rate": 10.0,
                "include_certificate": true},
        "channel": {"data_rate_bps": 6000000.0, "cbr_window": 1.0,
                    "loss_model": {"variant": "bernoulli", "p": 0.0}},
        "crypto": {"scheme": "mock", "key_seed": 1, "freshness_ms": 500,
                   "replay_window": 128, "replay_check_enabled": true},
        "attacks": []
    })");
}

} // namespace

TEST_CASE("clock advances by recomputation") {
    SimClock clock{0.1, 0};
    clock.advance();
    CHECK(clock.now() == doctest::Approx(0.1));
    CHECK(clock.step_index == 1);
}

TEST_CASE("clock now is exact at index 10") {
    SimClock clock{0.1, 10};
    CHECK(clock.now() == 1.0);  // exact, not summed
}

TEST_CASE("1000 advances land exactly on the integer oracle") {
    SimClock clock{0.1, 0};
    for (int i = 0; i < 1000; ++i) clock.advance();
    // oracle: index * step computed in one multiplication
    CHECK(clock.now() == 1000 * 0.1);
    CHECK(clock.now() == 100.0);
}

TEST_CASE("rng streams replay identically for equal (seed, label)") {
    RngStream a(42, "channel-loss");
    RngStream b(42, "channel-loss");
    for (int i = 0; i < 100; ++i) {
        CHECK(a.next_u64() == b.next_u64());
    }
}

TEST_CASE("distinct labels decorrelate streams") {
    RngStream a(42, "channel-loss");
    RngStream b(42, "attack");
    int equal = 0;
    for (int i = 0; i < 100; ++i) {
        if (a.next_u64() == b.next_u64()) ++equal;
    }
    CHECK(equal == 0);
}

TEST_CASE("rng unit draws stay in [0,1)") {
    RngStream rng(9, "unit");
    for (int i = 0; i < 1000; ++i) {
        const double u = rng.next_unit();
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
    }
}

TEST_CASE("reference scenario loads with 8 vehicles") {
    const auto config = load_scenario(kScenarioDir + "/reference.json");
    CHECK(config.vehicles.size() == 8);
    CHECK(config.rsu.ttc_threshold == 2.0);
    CHECK(config.seed == 42);
    CHECK(config.intersection.intersection_id == 829);
}

TEST_CASE("duration zero is a validation error naming the field") {
    auto doc = minimal_scenario();
    doc["duration"] = 0.0;
    CHECK_THROWS_WITH_AS(parse_scenario(doc),
                         doctest::Contains("scenario.duration"), ScenarioError);
}

TEST_CASE("vehicle entry_time at duration is rejected") {
    auto doc = minimal_scenario();
    doc["vehicles"] = json::array({json::parse(R"({
        "id": 1, "entry_time": 1.0,
        "route": {"points": [[0.0,0.0],[10.0,0.0]], "reference_arclength": 5.0},
        "speed_profile": [{"from_position": 0.0, "speed": 1.0}]
    })")});
    CHECK_THROWS_WITH_AS(parse_scenario(doc), doctest::Contains("entry_time"),
                         ScenarioError);
}

TEST_CASE("unknown keys are rejected") {
    auto doc = minimal_scenario();
    doc["surprise"] = 1;
    CHECK_THROWS_WITH_AS(parse_scenario(doc), doctest::Contains("surprise"),
                         ScenarioError);
}

TEST_CASE("missing scenario file raises a parse error") {
    CHECK_THROWS_AS(load_scenario("/nonexistent/nope.json"), ScenarioError);
}

TEST_CASE("zero-vehicle scenario runs clean and empty") {
    const auto config = parse_scenario(minimal_scenario());
    const auto result = run_scenario(config);
    CHECK(result.report.pdr_rows.empty());
    CHECK(result.report.cbr_rows.empty());
    CHECK(result.counters.genuine_broadcasts == 0);
    CHECK_FALSE(result.report.sign_time.has_value());
}

TEST_CASE("equal seeds give byte-identical runs with the mock backend") {
    auto config = load_scenario(kScenarioDir + "/reference.json");
    config.crypto.scheme = "mock";
    const auto a = run_scenario(config);
    const auto b = run_scenario(config);
    CHECK(a.event_log == b.event_log);
    CHECK(render_delivery_csv(a.report) == render_delivery_csv(b.report));
    CHECK(render_cbr_csv(a.report) == render_cbr_csv(b.report));
    CHECK(render_summary_json(a.report).dump() == render_summary_json(b.report).dump());
}

TEST_CASE("phase order within a step: sign precedes channel precedes verify") {
    auto config = load_scenario(kScenarioDir + "/reference.json");
    config.crypto.scheme = "mock";
    const auto result = run_scenario(config);

    // Per step, events for a message must appear in sign -> channel -> verify
    // order in the log; phases never interleave backwards.
    std::istringstream lines(result.event_log);
    std::string line;
    std::uint64_t current_step = 0;
    int phase_rank = -1;
    const auto rank_of = [](const std::string& phase) {
        if (phase == "mobility") return 0;
        if (phase == "sense") return 1;
        if (phase == "sign") return 2;
        if (phase == "channel") return 3;
        if (phase == "verify") return 4;
        return 5;  // metrics
    };
    bool ordered = true;
    while (std::getline(lines, line)) {
        const auto record = json::parse(line);
        const auto step = record["step"].get<std::uint64_t>();
        const int rank = rank_of(record["phase"].get<std::string>());
        if (step != current_step) {
            current_step = step;
            phase_rank = -1;
        }
        if (rank < phase_rank) {
            ordered = false;
        }
        phase_rank = std::max(phase_rank, rank);
    }
    CHECK(ordered);
}

TEST_CASE("run executes ceil(duration/step_size) steps") {
    auto config = parse_scenario(minimal_scenario());
    config.duration = 0.95;  // 10 steps at 0.1
    CHECK(config.total_steps() == 10);
    config.duration = 1.0;
    CHECK(config.total_steps() == 10);
}
