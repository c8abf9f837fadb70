#ifndef PQV2X_SCENARIO_HPP
#define PQV2X_SCENARIO_HPP

#include "pqv2x/channel.hpp"
#include "pqv2x/mobility.hpp"

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace pqv2x {

class ScenarioError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Route polyline; vehicle motion is 1D along its arc length, with the
/// intersection reference point marked as an arc-length offset.
struct RouteSpec {
    std::vector<std::array<double, 2>> points;
    double reference_arclength = 0.0;

    double length() const;
};

struct VehicleSpec {
    VehicleId id = 0;
    double entry_time = 0.0;
    RouteSpec route;
    std::vector<SpeedSegment> speed_profile;
};

struct RsuSpec {
    std::array<double, 2> position{0.0, 0.0};
    double ttc_threshold = 2.0;    // seconds
    double warning_rate = 10.0;    // hertz
    bool include_certificate = true;
};

struct ChannelSpec {
    double data_rate_bps = 6e6;
    double cbr_window = 1.0;       // seconds
    LossModel loss_model;
};

struct CryptoSpec {
    std::string scheme = "falcon";  // "falcon" or "mock"
    std::uint64_t key_seed = 0;
    std::uint64_t freshness_ms = 500;
    std::size_t replay_window = 128;
    bool replay_check_enabled = true;
};

struct AttackSpec {
    enum class Kind { forge, tamper, replay };
    Kind kind = Kind::forge;
    std::uint64_t start_step = 0;
    std::uint32_t count = 1;
    std::uint64_t capture_delay_steps = 1;     // replay only
    std::optional<std::uint64_t> tamper_bit;   // tamper; absent = random position
};

std::string to_string(AttackSpec::Kind k);

struct ScenarioConfig {
    double duration = 0.0;
    double step_size = 0.1;
    std::uint64_t seed = 0;
    IntersectionRef intersection;
    std::vector<VehicleSpec> vehicles;
    RsuSpec rsu;
    ChannelSpec channel;
    CryptoSpec crypto;
    std::vector<AttackSpec> attacks;

    std::uint64_t total_steps() const;
};

/// Parse and validate; unknown keys and cross-field violations raise
/// ScenarioError naming the offending field.
ScenarioConfig parse_scenario(const nlohmann::json& doc);

ScenarioConfig load_scenario(const std::filesystem::path& path);

/// Hex SHA3-256 of the canonical re-serialized config, for run_meta.
std::string config_digest(const ScenarioConfig& config);

nlohmann::json scenario_to_json(const ScenarioConfig& config);

} // namespace pqv2x

#endif
