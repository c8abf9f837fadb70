#include "pqv2x/metrics.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace pqv2x {

namespace {

std::string fixed(double value, int decimals) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, value);
    return buf;
}

void write_atomic(const std::filesystem::path& path, const std::string& content) {
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw std::runtime_error("cannot write " + tmp.string());
        }
        out << content;
        if (!out.flush()) {
            throw std::runtime_error("write failed for " + tmp.string());
        }
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        throw std::runtime_error("rename failed for " + path.string() + ": " + ec.message());
    }
}

nlohmann::json stats_json(const std::optional<TimingStats>& stats) {
    if (!stats) {
        return nullptr;
    }
    nlohmann::json j = {{"mean_ms", stats->mean}, {"n", stats->n}};
    j["std_ms"] = stats->std ? nlohmann::json(*stats->std) : nlohmann::json(nullptr);
    return j;
}

} // namespace

TimingStats sample_stats(const std::vector<double>& samples_ms) {
    if (samples_ms.empty()) {
        throw std::invalid_argument("sample_stats: empty sample list");
    }
    TimingStats stats;
    stats.n = samples_ms.size();
    double sum = 0.0;
    for (double s : samples_ms) sum += s;
    stats.mean = sum / static_cast<double>(stats.n);
    if (stats.n >= 2) {
        double sq = 0.0;
        for (double s : samples_ms) sq += (s - stats.mean) * (s - stats.mean);
        stats.std = std::sqrt(sq / static_cast<double>(stats.n - 1));
    }
    return stats;
}

TimingStats pooled_verify_stats(const std::map<VehicleId, std::vector<double>>& per_vehicle) {
    std::size_t total = 0;
    double sum = 0.0;
    for (const auto& [_, samples] : per_vehicle) {
        total += samples.size();
        for (double s : samples) sum += s;
    }
    if (total == 0) {
        throw std::invalid_argument("pooled_verify_stats: no samples");
    }
    TimingStats stats;
    stats.n = total;
    stats.mean = sum / static_cast<double>(total);
    if (total >= 2) {
        double sq = 0.0;
        for (const auto& [_, samples] : per_vehicle) {
            for (double s : samples) sq += (s - stats.mean) * (s - stats.mean);
        }
        stats.std = std::sqrt(sq / static_cast<double>(total - 1));
    }
    return stats;
}

double pdr(std::uint64_t received, std::uint64_t expected) {
    if (expected == 0) {
        throw std::invalid_argument("pdr: expected count must be >= 1");
    }
    return static_cast<double>(received) / static_cast<double>(expected);
}

double PdrRow::pdr() const { return pqv2x::pdr(received, expected); }

std::string render_delivery_csv(const MetricsReport& report) {
    std::string out = "vehicle_id,expected,received,pdr\n";
    for (const auto& row : report.pdr_rows) {
        out += std::to_string(row.vehicle_id) + "," + std::to_string(row.expected) + "," +
               std::to_string(row.received) + "," +
               (row.expected > 0 ? fixed(row.pdr(), 2) : std::string("")) + "\n";
    }
    return out;
}

std::string render_cbr_csv(const MetricsReport& report) {
    std::string out = "vehicle_id,cbr_mean,cbr_std\n";
    for (const auto& row : report.cbr_rows) {
        out += std::to_string(row.vehicle_id) + "," + fixed(row.mean, 3) + "," +
               (row.std ? fixed(*row.std, 3) : std::string("")) + "\n";
    }
    return out;
}

nlohmann::json render_summary_json(const MetricsReport& report) {
    nlohmann::json doc;
    doc["sign_time"] = stats_json(report.sign_time);
    doc["verify_time_pooled"] = stats_json(report.verify_time_pooled);

    nlohmann::json pdr_rows = nlohmann::json::array();
    for (const auto& row : report.pdr_rows) {
        pdr_rows.push_back(
            {{"vehicle_id", row.vehicle_id},
             {"expected", row.expected},
             {"received", row.received},
             {"pdr", row.expected > 0 ? nlohmann::json(row.pdr()) : nlohmann::json(nullptr)}});
    }
    doc["pdr"] = pdr_rows;

    nlohmann::json cbr_rows = nlohmann::json::array();
    for (const auto& row : report.cbr_rows) {
        cbr_rows.push_back(
            {{"vehicle_id", row.vehicle_id},
             {"mean", row.mean},
             {"std", row.std ? nlohmann::json(*row.std) : nlohmann::json(nullptr)}});
    }
    doc["cbr"] = cbr_rows;

    nlohmann::json attacks = nlohmann::json::array();
    for (const auto& row : report.attack_rows) {
        attacks.push_back({{"kind", to_string(row.kind)},
                           {"injected", row.injected},
                           {"accepted", row.accepted},
                           {"rejected", row.rejected}});
    }
    doc["attacks"] = attacks;

    doc["run_meta"] = {{"seed", report.run_meta.seed},
                       {"config_digest", report.run_meta.config_digest},
                       {"duration", report.run_meta.duration}};
    return doc;
}

void emit_report(const MetricsReport& report, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    write_atomic(dir / "table1.csv", render_delivery_csv(report));
    write_atomic(dir / "table2.csv", render_cbr_csv(report));
    write_atomic(dir / "table3.json", render_summary_json(report).dump(2) + "\n");
}

} // namespace pqv2x
