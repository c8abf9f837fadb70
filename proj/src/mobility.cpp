#include "pqv2x/mobility.hpp"

#include <algorithm>
#include <cmath>

namespace pqv2x {

namespace {

double speed_at(const std::vector<SpeedSegment>& profile, double position, double fallback) {
    double speed = fallback;
    for (const auto& seg : profile) {
        if (seg.from_position <= position) {
            speed = seg.speed;
        } else {
            break;  // profile is sorted by from_position
        }
    }
    return speed;
}

} // namespace

VehicleState advance_vehicle(const VehicleState& v, double dt) {
    VehicleState out = v;
    if (!v.active) {
        return out;
    }
    out.route_position = v.route_position + v.speed * dt;
    out.speed = speed_at(v.profile, out.route_position, v.speed);
    if (out.route_position > out.route_length) {
        out.active = false;
    }
    return out;
}

std::optional<double> time_to_reference(const VehicleState& v) {
    if (!v.active || v.passed_reference() || v.speed <= 0.0) {
        return std::nullopt;
    }
    return v.distance_to_reference() / v.speed;
}

std::vector<ConflictPair> detect_conflicts(const std::vector<VehicleState>& vehicles,
                                           double threshold) {
    struct Ttc {
        VehicleId id;
        double ttc;
    };
    std::vector<Ttc> ttcs;
    ttcs.reserve(vehicles.size());
    for (const auto& v : vehicles) {
        if (auto t = time_to_reference(v)) {
            ttcs.push_back({v.id, *t});
        }
    }
    std::sort(ttcs.begin(), ttcs.end(), [](const Ttc& a, const Ttc& b) { return a.id < b.id; });

    std::vector<ConflictPair> pairs;
    for (std::size_t i = 0; i < ttcs.size(); ++i) {
        for (std::size_t j = i + 1; j < ttcs.size(); ++j) {
            const double gap = std::abs(ttcs[i].ttc - ttcs[j].ttc);
            if (gap < threshold) {
                pairs.push_back({ttcs[i].id, ttcs[j].id, ttcs[i].ttc, ttcs[j].ttc, gap});
            }
        }
    }
    return pairs;
}

} // namespace pqv2x
