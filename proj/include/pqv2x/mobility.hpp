#ifndef PQV2X_MOBILITY_HPP
#define PQV2X_MOBILITY_HPP

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

namespace pqv2x {

using VehicleId = std::uint32_t;

/// Piecewise-constant speed along the route: the active segment is the last
/// one whose from_position is <= the current route position.
struct SpeedSegment {
    double from_position = 0.0;  // meters along route
    double speed = 0.0;          // m/s, >= 0
};

struct VehicleState {
    VehicleId id = 0;
    double route_position = 0.0;        // meters along route
    double speed = 0.0;                 // m/s
    double reference_arclength = 0.0;   // route position of the intersection reference point
    double route_length = 0.0;          // vehicle leaves the simulation past this
    bool active = false;
    std::vector<SpeedSegment> profile;

    double distance_to_reference() const { return reference_arclength - route_position; }
    bool passed_reference() const { return route_position > reference_arclength; }
};

struct IntersectionRef {
    std::uint32_t intersection_id = 0;
    std::array<double, 2> reference_point{0.0, 0.0};  // meters
};

/// Materialized only when |ttc_a - ttc_b| is strictly below the threshold;
/// vehicle_a < vehicle_b canonically.
struct ConflictPair {
    VehicleId vehicle_a = 0;
    VehicleId vehicle_b = 0;
    double ttc_a = 0.0;
    double ttc_b = 0.0;
    double ttc_gap = 0.0;
};

/// Move a vehicle forward by dt under its speed profile. Clears `active`
/// once the route end has been passed.
VehicleState advance_vehicle(const VehicleState& v, double dt);

/// Time for the vehicle to reach the reference point at its current speed.
/// None when the vehicle is stationary or already past the reference point.
std::optional<double> time_to_reference(const VehicleState& v);

/// All canonical pairs (a < b) of active vehicles whose TTC difference is
/// strictly smaller than the threshold, ordered by (a, b).
std::vector<ConflictPair> detect_conflicts(const std::vector<VehicleState>& vehicles,
                                           double threshold);

} // namespace pqv2x

#endif
