#ifndef PQV2X_METRICS_HPP
#define PQV2X_METRICS_HPP

#include "pqv2x/mobility.hpp"
#include "pqv2x/scenario.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace pqv2x {

/// Sample statistics in milliseconds; std uses the n-1 denominator and is
/// absent for n < 2.
struct TimingStats {
    double mean = 0.0;
    std::optional<double> std;
    std::size_t n = 0;
};

TimingStats sample_stats(const std::vector<double>& samples_ms);

/// Mean signing time over all RSU sign calls. Absent metric on empty input
/// is represented as std::nullopt by the caller; this function requires n >= 1.
inline TimingStats mean_sign_time(const std::vector<double>& samples_ms) {
    return sample_stats(samples_ms);
}

/// Pooled mean and standard deviation across per-vehicle verification times:
/// mean = sum of all durations / sum N_v, std over the pooled residuals with
/// denominator (sum N_v - 1). Identical to flat-list sample statistics.
TimingStats pooled_verify_stats(const std::map<VehicleId, std::vector<double>>& per_vehicle);

/// N_recv / N_exp as an exact ratio. Requires expected >= 1.
double pdr(std::uint64_t received, std::uint64_t expected);

struct PdrRow {
    VehicleId vehicle_id = 0;
    std::uint64_t expected = 0;
    std::uint64_t received = 0;

    double pdr() const;
};

struct CbrRow {
    VehicleId vehicle_id = 0;
    double mean = 0.0;
    std::optional<double> std;
};

struct AttackRow {
    AttackSpec::Kind kind = AttackSpec::Kind::forge;
    std::uint64_t injected = 0;
    std::uint64_t accepted = 0;
    std::uint64_t rejected = 0;
};

struct RunMeta {
    std::uint64_t seed = 0;
    std::string config_digest;
    double duration = 0.0;
};

struct MetricsReport {
    std::optional<TimingStats> sign_time;
    std::optional<TimingStats> verify_time_pooled;
    std::vector<PdrRow> pdr_rows;
    std::vector<CbrRow> cbr_rows;
    std::vector<AttackRow> attack_rows;
    RunMeta run_meta;
};

// Renderers are pure so golden tests can pin bytes. CSV uses LF endings,
// '.' decimals, a header row; PDR renders at 2 decimals and CBR at 3 to
// match the report tables, while JSON carries full precision.
std::string render_delivery_csv(const MetricsReport& report);   // table1.csv
std::string render_cbr_csv(const MetricsReport& report);        // table2.csv
nlohmann::json render_summary_json(const MetricsReport& report);  // table3.json

/// Writes table1.csv, table2.csv, table3.json into dir. All writes are
/// atomic (temp file + rename). Throws std::runtime_error naming the path
/// on I/O failure.
void emit_report(const MetricsReport& report, const std::filesystem::path& dir);

} // namespace pqv2x

#endif
