#include "pqv2x/scenario.hpp"

#include "pqv2x/crypto.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace pqv2x {

using nlohmann::json;

namespace {

[[noreturn]] void bad(const std::string& field, const std::string& what) {
    throw ScenarioError("scenario field '" + field + "': " + what);
}

void require_keys(const json& obj, const std::string& ctx,
                  const std::set<std::string>& allowed) {
    if (!obj.is_object()) {
        bad(ctx, "expected an object");
    }
    for (const auto& [key, _] : obj.items()) {
        if (!allowed.count(key)) {
            bad(ctx + "." + key, "unknown key");
        }
    }
}

const json& get(const json& obj, const std::string& ctx, const std::string& key) {
    auto it = obj.find(key);
    if (it == obj.end()) {
        bad(ctx + "." + key, "missing");
    }
    return *it;
}

double get_number(const json& obj, const std::string& ctx, const std::string& key) {
    const json& v = get(obj, ctx, key);
    if (!v.is_number()) {
        bad(ctx + "." + key, "expected a number");
    }
    return v.get<double>();
}

std::uint64_t get_u64(const json& obj, const std::string& ctx, const std::string& key) {
    const json& v = get(obj, ctx, key);
    if (!v.is_number_unsigned()) {
        bad(ctx + "." + key, "expected a non-negative integer");
    }
    return v.get<std::uint64_t>();
}

std::array<double, 2> get_point(const json& v, const std::string& ctx) {
    if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
        bad(ctx, "expected [x, y]");
    }
    return {v[0].get<double>(), v[1].get<double>()};
}

RouteSpec parse_route(const json& doc, const std::string& ctx) {
    require_keys(doc, ctx, {"points", "reference_arclength"});
    RouteSpec route;
    const json& pts = get(doc, ctx, "points");
    if (!pts.is_array() || pts.size() < 2) {
        bad(ctx + ".points", "need at least 2 polyline points");
    }
    for (std::size_t i = 0; i < pts.size(); ++i) {
        route.points.push_back(get_point(pts[i], ctx + ".points[" + std::to_string(i) + "]"));
    }
    route.reference_arclength = get_number(doc, ctx, "reference_arclength");
    if (route.reference_arclength < 0.0 || route.reference_arclength > route.length()) {
        bad(ctx + ".reference_arclength", "must lie within the route's arc length");
    }
    return route;
}

VehicleSpec parse_vehicle(const json& doc, const std::string& ctx) {
    require_keys(doc, ctx, {"id", "entry_time", "route", "speed_profile"});
    VehicleSpec v;
    v.id = static_cast<VehicleId>(get_u64(doc, ctx, "id"));
    if (v.id == 0) {
        bad(ctx + ".id", "vehicle ids start at 1");
    }
    v.entry_time = get_number(doc, ctx, "entry_time");
    if (v.entry_time < 0.0) {
        bad(ctx + ".entry_time", "must be non-negative");
    }
    v.route = parse_route(get(doc, ctx, "route"), ctx + ".route");
    const json& profile = get(doc, ctx, "speed_profile");
    if (!profile.is_array() || profile.empty()) {
        bad(ctx + ".speed_profile", "need at least one segment");
    }
    double prev_from = -1.0;
    for (std::size_t i = 0; i < profile.size(); ++i) {
        const std::string sctx = ctx + ".speed_profile[" + std::to_string(i) + "]";
        require_keys(profile[i], sctx, {"from_position", "speed"});
        SpeedSegment seg;
        seg.from_position = get_number(profile[i], sctx, "from_position");
        seg.speed = get_number(profile[i], sctx, "speed");
        if (seg.speed < 0.0) {
            bad(sctx + ".speed", "must be non-negative");
        }
        if (seg.from_position <= prev_from) {
            bad(sctx + ".from_position", "segments must be strictly increasing");
        }
        prev_from = seg.from_position;
        v.speed_profile.push_back(seg);
    }
    return v;
}

LossModel parse_loss_model(const json& doc, const std::string& ctx) {
    LossModel model;
    const json& variant = get(doc, ctx, "variant");
    if (variant == "bernoulli") {
        require_keys(doc, ctx, {"variant", "p"});
        model.variant = LossModel::Variant::bernoulli;
        model.p = get_number(doc, ctx, "p");
        if (model.p < 0.0 || model.p > 1.0) {
            bad(ctx + ".p", "must be in [0, 1]");
        }
    } else if (variant == "trace") {
        require_keys(doc, ctx, {"variant", "drop"});
        model.variant = LossModel::Variant::trace;
        const json& drop = get(doc, ctx, "drop");
        if (!drop.is_array()) {
            bad(ctx + ".drop", "expected an array of tx indices");
        }
        for (const auto& idx : drop) {
            if (!idx.is_number_unsigned()) {
                bad(ctx + ".drop", "indices must be non-negative integers");
            }
            if (!model.drop_set.insert(idx.get<std::uint64_t>()).second) {
                bad(ctx + ".drop", "indices must be distinct");
            }
        }
    } else {
        bad(ctx + ".variant", "must be 'bernoulli' or 'trace'");
    }
    return model;
}

AttackSpec parse_attack(const json& doc, const std::string& ctx) {
    AttackSpec spec;
    const json& kind = get(doc, ctx, "kind");
    std::set<std::string> allowed = {"kind", "start_step", "count"};
    if (kind == "forge") {
        spec.kind = AttackSpec::Kind::forge;
    } else if (kind == "tamper") {
        spec.kind = AttackSpec::Kind::tamper;
        allowed.insert("bit_index");
    } else if (kind == "replay") {
        spec.kind = AttackSpec::Kind::replay;
        allowed.insert("capture_delay_steps");
    } else {
        bad(ctx + ".kind", "must be 'forge', 'tamper' or 'replay'");
    }
    require_keys(doc, ctx, allowed);
    spec.start_step = get_u64(doc, ctx, "start_step");
    spec.count = static_cast<std::uint32_t>(get_u64(doc, ctx, "count"));
    if (spec.count < 1) {
        bad(ctx + ".count", "must be >= 1");
    }
    if (spec.kind == AttackSpec::Kind::replay && doc.contains("capture_delay_steps")) {
        spec.capture_delay_steps = get_u64(doc, ctx, "capture_delay_steps");
        if (spec.capture_delay_steps < 1) {
            bad(ctx + ".capture_delay_steps", "must be >= 1 step");
        }
    }
    if (spec.kind == AttackSpec::Kind::tamper && doc.contains("bit_index")) {
        spec.tamper_bit = get_u64(doc, ctx, "bit_index");
    }
    return spec;
}

} // namespace

double RouteSpec::length() const {
    double total = 0.0;
    for (std::size_t i = 1; i < points.size(); ++i) {
        const double dx = points[i][0] - points[i - 1][0];
        const double dy = points[i][1] - points[i - 1][1];
        total += std::hypot(dx, dy);
    }
    return total;
}

std::string to_string(AttackSpec::Kind k) {
    switch (k) {
    case AttackSpec::Kind::forge: return "forge";
    case AttackSpec::Kind::tamper: return "tamper";
    case AttackSpec::Kind::replay: return "replay";
    }
    return "unknown";
}

std::uint64_t ScenarioConfig::total_steps() const {
    return static_cast<std::uint64_t>(std::ceil(duration / step_size - 1e-9));
}

ScenarioConfig parse_scenario(const json& doc) {
    require_keys(doc, "scenario",
                 {"duration", "step_size", "seed", "intersection", "vehicles", "rsu",
                  "channel", "crypto", "attacks"});
    ScenarioConfig config;
    config.duration = get_number(doc, "scenario", "duration");
    if (config.duration <= 0.0) {
        bad("scenario.duration", "must be > 0");
    }
    if (doc.contains("step_size")) {
        config.step_size = get_number(doc, "scenario", "step_size");
        if (config.step_size <= 0.0) {
            bad("scenario.step_size", "must be > 0");
        }
    }
    config.seed = get_u64(doc, "scenario", "seed");

    const json& inter = get(doc, "scenario", "intersection");
    require_keys(inter, "scenario.intersection", {"id", "reference_point"});
    config.intersection.intersection_id =
        static_cast<std::uint32_t>(get_u64(inter, "scenario.intersection", "id"));
    config.intersection.reference_point =
        get_point(get(inter, "scenario.intersection", "reference_point"),
                  "scenario.intersection.reference_point");

    const json& vehicles = get(doc, "scenario", "vehicles");
    if (!vehicles.is_array()) {
        bad("scenario.vehicles", "expected an array");
    }
    std::set<VehicleId> ids;
    for (std::size_t i = 0; i < vehicles.size(); ++i) {
        const std::string ctx = "scenario.vehicles[" + std::to_string(i) + "]";
        VehicleSpec v = parse_vehicle(vehicles[i], ctx);
        if (!ids.insert(v.id).second) {
            bad(ctx + ".id", "duplicate vehicle id");
        }
        if (v.entry_time >= config.duration) {
            bad(ctx + ".entry_time", "must be < duration");
        }
        config.vehicles.push_back(std::move(v));
    }

    const json& rsu = get(doc, "scenario", "rsu");
    require_keys(rsu, "scenario.rsu",
                 {"position", "ttc_threshold", "warning_rate", "include_certificate"});
    config.rsu.position = get_point(get(rsu, "scenario.rsu", "position"), "scenario.rsu.position");
    config.rsu.ttc_threshold = get_number(rsu, "scenario.rsu", "ttc_threshold");
    if (config.rsu.ttc_threshold <= 0.0) {
        bad("scenario.rsu.ttc_threshold", "must be > 0");
    }
    config.rsu.warning_rate = get_number(rsu, "scenario.rsu", "warning_rate");
    if (config.rsu.warning_rate <= 0.0) {
        bad("scenario.rsu.warning_rate", "must be > 0");
    }
    if (rsu.contains("include_certificate")) {
        config.rsu.include_certificate = rsu["include_certificate"].get<bool>();
    }

    const json& channel = get(doc, "scenario", "channel");
    require_keys(channel, "scenario.channel", {"data_rate_bps", "cbr_window", "loss_model"});
    config.channel.data_rate_bps = get_number(channel, "scenario.channel", "data_rate_bps");
    if (config.channel.data_rate_bps <= 0.0) {
        bad("scenario.channel.data_rate_bps", "must be > 0");
    }
    config.channel.cbr_window = get_number(channel, "scenario.channel", "cbr_window");
    if (config.channel.cbr_window <= 0.0) {
        bad("scenario.channel.cbr_window", "must be > 0");
    }
    config.channel.loss_model =
        parse_loss_model(get(channel, "scenario.channel", "loss_model"),
                         "scenario.channel.loss_model");

    const json& crypto = get(doc, "scenario", "crypto");
    require_keys(crypto, "scenario.crypto",
                 {"scheme", "key_seed", "freshness_ms", "replay_window",
                  "replay_check_enabled"});
    config.crypto.scheme = get(crypto, "scenario.crypto", "scheme").get<std::string>();
    if (config.crypto.scheme != "falcon" && config.crypto.scheme != "mock") {
        bad("scenario.crypto.scheme", "must be 'falcon' or 'mock'");
    }
    config.crypto.key_seed = get_u64(crypto, "scenario.crypto", "key_seed");
    if (crypto.contains("freshness_ms")) {
        config.crypto.freshness_ms = get_u64(crypto, "scenario.crypto", "freshness_ms");
    }
    if (crypto.contains("replay_window")) {
        config.crypto.replay_window =
            static_cast<std::size_t>(get_u64(crypto, "scenario.crypto", "replay_window"));
    }
    if (crypto.contains("replay_check_enabled")) {
        config.crypto.replay_check_enabled = crypto["replay_check_enabled"].get<bool>();
    }

    if (doc.contains("attacks")) {
        const json& attacks = doc["attacks"];
        if (!attacks.is_array()) {
            bad("scenario.attacks", "expected an array");
        }
        for (std::size_t i = 0; i < attacks.size(); ++i) {
            config.attacks.push_back(
                parse_attack(attacks[i], "scenario.attacks[" + std::to_string(i) + "]"));
        }
    }
    return config;
}

ScenarioConfig load_scenario(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ScenarioError("cannot open scenario file: " + path.string());
    }
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ScenarioError("scenario parse error in " + path.string() + ": " + e.what());
    }
    return parse_scenario(doc);
}

json scenario_to_json(const ScenarioConfig& config) {
    json doc;
    doc["duration"] = config.duration;
    doc["step_size"] = config.step_size;
    doc["seed"] = config.seed;
    doc["intersection"] = {{"id", config.intersection.intersection_id},
                           {"reference_point", config.intersection.reference_point}};
    doc["vehicles"] = json::array();
    for (const auto& v : config.vehicles) {
        json profile = json::array();
        for (const auto& seg : v.speed_profile) {
            profile.push_back({{"from_position", seg.from_position}, {"speed", seg.speed}});
        }
        doc["vehicles"].push_back(
            {{"id", v.id},
             {"entry_time", v.entry_time},
             {"route",
              {{"points", v.route.points},
               {"reference_arclength", v.route.reference_arclength}}},
             {"speed_profile", profile}});
    }
    doc["rsu"] = {{"position", config.rsu.position},
                  {"ttc_threshold", config.rsu.ttc_threshold},
                  {"warning_rate", config.rsu.warning_rate},
                  {"include_certificate", config.rsu.include_certificate}};
    json loss;
    if (config.channel.loss_model.variant == LossModel::Variant::bernoulli) {
        loss = {{"variant", "bernoulli"}, {"p", config.channel.loss_model.p}};
    } else {
        loss = {{"variant", "trace"},
                {"drop", std::vector<std::uint64_t>(config.channel.loss_model.drop_set.begin(),
                                                    config.channel.loss_model.drop_set.end())}};
    }
    doc["channel"] = {{"data_rate_bps", config.channel.data_rate_bps},
                      {"cbr_window", config.channel.cbr_window},
                      {"loss_model", loss}};
    doc["crypto"] = {{"scheme", config.crypto.scheme},
                     {"key_seed", config.crypto.key_seed},
                     {"freshness_ms", config.crypto.freshness_ms},
                     {"replay_window", config.crypto.replay_window},
                     {"replay_check_enabled", config.crypto.replay_check_enabled}};
    doc["attacks"] = json::array();
    for (const auto& a : config.attacks) {
        json spec = {{"kind", to_string(a.kind)},
                     {"start_step", a.start_step},
                     {"count", a.count}};
        if (a.kind == AttackSpec::Kind::replay) {
            spec["capture_delay_steps"] = a.capture_delay_steps;
        }
        if (a.kind == AttackSpec::Kind::tamper && a.tamper_bit) {
            spec["bit_index"] = *a.tamper_bit;
        }
        doc["attacks"].push_back(spec);
    }
    return doc;
}

std::string config_digest(const ScenarioConfig& config) {
    const std::string dump = scenario_to_json(config).dump();
    const Bytes bytes(dump.begin(), dump.end());
    const auto digest = sha3_256_digest(bytes);
    std::ostringstream hex;
    hex << std::hex;
    for (std::uint8_t b : digest) {
        hex << (b >> 4) << (b & 0xf);
    }
    return hex.str();
}

} // namespace pqv2x
