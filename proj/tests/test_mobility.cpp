#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "pqv2x/mobility.hpp"
#include "pqv2x/rng.hpp"

#include <algorithm>
#include <cmath>

using namespace pqv2x;

namespace {

VehicleState make_vehicle(VehicleId id, double distance, double speed) {
    VehicleState v;
    v.id = id;
    v.route_position = 0.0;
    v.speed = speed;
    v.reference_arclength = distance;
    v.route_length = distance + 1000.0;
    v.active = true;
    v.profile = {{0.0, speed}};
    return v;
}

// Independent O(n^2) oracle over all unordered pairs of defined TTCs.
std::vector<ConflictPair> brute_force_conflicts(const std::vector<VehicleState>& vehicles,
                                                double threshold) {
    std::vector<ConflictPair> out;
    for (std::size_t i = 0; i < vehicles.size(); ++i) {
        for (std::size_t j = 0; j < vehicles.size(); ++j) {
            const auto& a = vehicles[i];
            const auto& b = vehicles[j];
            if (a.id >= b.id) continue;
            const auto ta = time_to_reference(a);
            const auto tb = time_to_reference(b);
            if (!ta || !tb) continue;
            const double gap = std::abs(*ta - *tb);
            if (gap < threshold) {
                out.push_back({a.id, b.id, *ta, *tb, gap});
            }
        }
    }
    std::sort(out.begin(), out.end(), [](const ConflictPair& x, const ConflictPair& y) {
        return std::tie(x.vehicle_a, x.vehicle_b) < std::tie(y.vehicle_a, y.vehicle_b);
    });
    return out;
}

bool same_pairs(const std::vector<ConflictPair>& a, const std::vector<ConflictPair>& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i].vehicle_a != b[i].vehicle_a || a[i].vehicle_b != b[i].vehicle_b ||
            a[i].ttc_gap != b[i].ttc_gap) {
            return false;
        }
    }
    return true;
}

} // namespace

TEST_CASE("advance_vehicle moves by speed * dt") {
    auto v = make_vehicle(1, 100.0, 10.0);
    v = advance_vehicle(v, 0.1);
    CHECK(v.route_position == doctest::Approx(1.0));
}

TEST_CASE("advance_vehicle stationary vehicle stays put") {
    auto v = make_vehicle(1, 50.0, 0.0);
    v = advance_vehicle(v, 0.1);
    CHECK(v.route_position == 0.0);
}

TEST_CASE("advance_vehicle matches closed-form position over many steps") {
    auto v = make_vehicle(1, 1000.0, 20.0);
    for (int i = 0; i < 50; ++i) {
        v = advance_vehicle(v, 0.1);
    }
    CHECK(v.route_position == doctest::Approx(100.0).epsilon(1e-12));
}

TEST_CASE("advance_vehicle deactivates past route end") {
    auto v = make_vehicle(1, 5.0, 10.0);
    v.route_length = 2.0;
    v = advance_vehicle(v, 0.5);
    CHECK_FALSE(v.active);
    v.route_position = 10.0;
    const auto frozen = advance_vehicle(v, 0.5);
    CHECK(frozen.route_position == 10.0);  // inactive vehicles do not move
}

TEST_CASE("advance_vehicle follows piecewise-constant speed profile") {
    auto v = make_vehicle(1, 100.0, 10.0);
    v.profile = {{0.0, 10.0}, {5.0, 2.0}};
    v = advance_vehicle(v, 1.0);  // crosses the 5 m boundary
    CHECK(v.route_position == doctest::Approx(10.0));
    CHECK(v.speed == doctest::Approx(2.0));
}

TEST_CASE("time_to_reference is distance over speed") {
    CHECK(*time_to_reference(make_vehicle(1, 100.0, 20.0)) == doctest::Approx(5.0));
}

TEST_CASE("time_to_reference none at zero speed") {
    CHECK_FALSE(time_to_reference(make_vehicle(1, 50.0, 0.0)).has_value());
}

TEST_CASE("time_to_reference zero at the reference point") {
    CHECK(*time_to_reference(make_vehicle(1, 0.0, 10.0)) == 0.0);
}

TEST_CASE("time_to_reference none once past the reference point") {
    auto v = make_vehicle(1, 10.0, 10.0);
    v.route_position = 10.5;
    CHECK_FALSE(time_to_reference(v).has_value());
}

TEST_CASE("TTC is scale consistent") {
    const auto base = time_to_reference(make_vehicle(1, 80.0, 16.0));
    const auto scaled = time_to_reference(make_vehicle(1, 160.0, 32.0));
    CHECK(*base == doctest::Approx(*scaled));
}

TEST_CASE("detect_conflicts picks the single close pair") {
    std::vector<VehicleState> vehicles = {
        make_vehicle(1, 4.0 * 10.0, 10.0),   // ttc 4.0
        make_vehicle(2, 5.5 * 10.0, 10.0),   // ttc 5.5
        make_vehicle(3, 9.0 * 10.0, 10.0),   // ttc 9.0
    };
    const auto pairs = detect_conflicts(vehicles, 2.0);
    REQUIRE(pairs.size() == 1);
    CHECK(pairs[0].vehicle_a == 1);
    CHECK(pairs[0].vehicle_b == 2);
    CHECK(pairs[0].ttc_gap == doctest::Approx(1.5));
}

TEST_CASE("detect_conflicts empty for a single vehicle") {
    CHECK(detect_conflicts({make_vehicle(1, 10.0, 5.0)}, 2.0).empty());
}

TEST_CASE("gap equal to the threshold is not a conflict") {
    std::vector<VehicleState> vehicles = {
        make_vehicle(1, 4.0 * 10.0, 10.0),   // ttc 4.0
        make_vehicle(2, 6.0 * 10.0, 10.0),   // ttc 6.0
    };
    CHECK(detect_conflicts(vehicles, 2.0).empty());
}

TEST_CASE("stationary vehicles never appear in conflict pairs") {
    std::vector<VehicleState> vehicles = {
        make_vehicle(1, 40.0, 10.0),
        make_vehicle(2, 42.0, 10.0),
        make_vehicle(3, 41.0, 0.0),
    };
    const auto pairs = detect_conflicts(vehicles, 2.0);
    for (const auto& p : pairs) {
        CHECK(p.vehicle_a != 3);
        CHECK(p.vehicle_b != 3);
    }
    REQUIRE(pairs.size() == 1);
}

TEST_CASE("detect_conflicts equals brute force over randomized fleets") {
    RngStream rng(1234, "mobility-prop");
    for (int trial = 0; trial < 1000; ++trial) {
        const auto n = static_cast<std::size_t>(rng.next_below(10) + 1);
        std::vector<VehicleState> vehicles;
        for (std::size_t i = 0; i < n; ++i) {
            auto v = make_vehicle(static_cast<VehicleId>(i + 1),
                                  rng.next_unit() * 200.0, rng.next_unit() * 30.0);
            if (rng.next_below(5) == 0) v.speed = 0.0;       // some parked
            if (rng.next_below(7) == 0) v.route_position = v.reference_arclength + 1.0;
            vehicles.push_back(v);
        }
        const double threshold = 0.5 + rng.next_unit() * 4.0;
        CHECK(same_pairs(detect_conflicts(vehicles, threshold),
                         brute_force_conflicts(vehicles, threshold)));
    }
}
