#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "pqv2x/metrics.hpp"
#include "pqv2x/rng.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>

using namespace pqv2x;

namespace {

// Naive two-pass reference used as the oracle for both the flat and the
// pooled implementation.
TimingStats flat_oracle(const std::vector<double>& samples) {
    TimingStats stats;
    stats.n = samples.size();
    double sum = 0.0;
    for (double s : samples) sum += s;
    stats.mean = sum / static_cast<double>(samples.size());
    if (samples.size() >= 2) {
        double sq = 0.0;
        for (double s : samples) sq += (s - stats.mean) * (s - stats.mean);
        stats.std = std::sqrt(sq / static_cast<double>(samples.size() - 1));
    }
    return stats;
}

} // namespace

TEST_CASE("sample_stats on a hand-worked example") {
    const auto stats = sample_stats({1.0, 2.0, 3.0, 4.0});
    CHECK(stats.mean == doctest::Approx(2.5).epsilon(1e-15));
    REQUIRE(stats.std.has_value());
    // variance = (2.25+0.25+0.25+2.25)/3 = 5/3
    CHECK(*stats.std == doctest::Approx(std::sqrt(5.0 / 3.0)).epsilon(1e-15));
    CHECK(stats.n == 4);
}

TEST_CASE("sample_stats omits std for one sample and rejects none") {
    const auto stats = sample_stats({0.5});
    CHECK(stats.mean == 0.5);
    CHECK_FALSE(stats.std.has_value());
    CHECK_THROWS_AS(sample_stats({}), std::invalid_argument);
}

TEST_CASE("pooled stats equal flat-list stats on a worked example") {
    std::map<VehicleId, std::vector<double>> per_vehicle = {
        {1, {0.10, 0.12}},
        {2, {0.11}},
        {3, {0.09, 0.13, 0.10}},
    };
    const auto pooled = pooled_verify_stats(per_vehicle);
    const auto flat = flat_oracle({0.10, 0.12, 0.11, 0.09, 0.13, 0.10});
    CHECK(pooled.n == 6);
    CHECK(pooled.mean == doctest::Approx(flat.mean).epsilon(1e-15));
    CHECK(*pooled.std == doctest::Approx(*flat.std).epsilon(1e-15));
}

TEST_CASE("pooled stats equal the flat oracle over randomized partitions") {
    RngStream rng(31337, "metrics-prop");
    for (int trial = 0; trial < 1000; ++trial) {
        std::map<VehicleId, std::vector<double>> per_vehicle;
        std::vector<double> flat;
        const auto vehicles = rng.next_below(6) + 1;
        for (std::uint64_t v = 0; v < vehicles; ++v) {
            const auto n = rng.next_below(20);
            for (std::uint64_t i = 0; i < n; ++i) {
                const double sample = 0.01 + rng.next_unit() * 2.0;
                per_vehicle[static_cast<VehicleId>(v + 1)].push_back(sample);
                flat.push_back(sample);
            }
        }
        if (flat.empty()) {
            flat.push_back(0.5);
            per_vehicle[1].push_back(0.5);
        }
        const auto pooled = pooled_verify_stats(per_vehicle);
        const auto oracle = flat_oracle(flat);
        CHECK(std::abs(pooled.mean - oracle.mean) < 1e-12);
        CHECK(pooled.n == oracle.n);
        if (oracle.std) {
            CHECK(std::abs(*pooled.std - *oracle.std) < 1e-12);
        } else {
            CHECK_FALSE(pooled.std.has_value());
        }
    }
}

TEST_CASE("pdr is the exact received over expected ratio") {
    CHECK(pdr(57, 61) == doctest::Approx(57.0 / 61.0).epsilon(1e-15));
    CHECK(pdr(0, 10) == 0.0);
    CHECK(pdr(10, 10) == 1.0);
    CHECK_THROWS_AS(pdr(0, 0), std::invalid_argument);
}

TEST_CASE("delivery csv golden rendering") {
    MetricsReport report;
    report.pdr_rows = {{1, 61, 57}, {2, 61, 61}, {3, 0, 0}};
    CHECK(render_delivery_csv(report) ==
          "vehicle_id,expected,received,pdr\n"
          "1,61,57,0.93\n"
          "2,61,61,1.00\n"
          "3,0,0,\n");
}

TEST_CASE("cbr csv golden rendering") {
    MetricsReport report;
    report.cbr_rows = {{1, 0.0214, 0.0004}, {2, 0.02, std::nullopt}};
    CHECK(render_cbr_csv(report) ==
          "vehicle_id,cbr_mean,cbr_std\n"
          "1,0.021,0.000\n"
          "2,0.020,\n");
}

TEST_CASE("summary json carries full precision and nulls for absent stats") {
    MetricsReport report;
    report.sign_time = TimingStats{0.25, 0.01, 100};
    report.pdr_rows = {{1, 61, 57}};
    report.cbr_rows = {{1, 0.02, std::nullopt}};
    report.attack_rows = {{AttackSpec::Kind::forge, 10, 0, 80}};
    report.run_meta = {42, "abc123", 6.1};

    const auto doc = render_summary_json(report);
    CHECK(doc["sign_time"]["mean_ms"].get<double>() == 0.25);
    CHECK(doc["sign_time"]["n"].get<std::size_t>() == 100);
    CHECK(doc["verify_time_pooled"].is_null());
    CHECK(doc["pdr"][0]["pdr"].get<double>() == doctest::Approx(57.0 / 61.0).epsilon(1e-15));
    CHECK(doc["cbr"][0]["std"].is_null());
    CHECK(doc["attacks"][0]["kind"] == "forge");
    CHECK(doc["attacks"][0]["rejected"].get<std::uint64_t>() == 80);
    CHECK(doc["run_meta"]["seed"].get<std::uint64_t>() == 42);
    CHECK(doc["run_meta"]["config_digest"] == "abc123");
}

TEST_CASE("emit_report writes all three tables") {
    const auto dir = std::filesystem::temp_directory_path() / "pqv2x_metrics_test";
    std::filesystem::remove_all(dir);

    MetricsReport report;
    report.pdr_rows = {{1, 10, 9}};
    report.cbr_rows = {{1, 0.02, std::nullopt}};
    emit_report(report, dir);

    for (const char* name : {"table1.csv", "table2.csv", "table3.json"}) {
        CHECK(std::filesystem::exists(dir / name));
    }
    std::ifstream t1(dir / "table1.csv");
    std::string header;
    std::getline(t1, header);
    CHECK(header == "vehicle_id,expected,received,pdr");
    std::filesystem::remove_all(dir);
}
