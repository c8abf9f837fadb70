#include "pqv2x/channel.hpp"

#include <cmath>

namespace pqv2x {

double airtime_of(std::size_t envelope_len_bytes, double data_rate_bps) {
    return static_cast<double>(envelope_len_bytes) * 8.0 / data_rate_bps;
}

std::pair<double, std::optional<double>> sample_cbr(
    const std::vector<BusyObservation>& observations) {
    if (observations.empty()) {
        return {0.0, std::nullopt};
    }
    std::vector<double> ratios;
    ratios.reserve(observations.size());
    for (const auto& obs : observations) {
        ratios.push_back(obs.busy_time / obs.window_len);
    }
    double sum = 0.0;
    for (double r : ratios) sum += r;
    const double mean = sum / static_cast<double>(ratios.size());
    if (ratios.size() < 2) {
        return {mean, std::nullopt};
    }
    double sq = 0.0;
    for (double r : ratios) sq += (r - mean) * (r - mean);
    return {mean, std::sqrt(sq / static_cast<double>(ratios.size() - 1))};
}

ChannelEvent Channel::broadcast(const Bytes& wire, std::uint64_t tx_step,
                                const std::vector<VehicleId>& receivers,
                                std::uint32_t sender, bool adversarial) {
    ChannelEvent ev;
    ev.tx_step = tx_step;
    ev.sender = sender;
    ev.tx_index = tx_count_++;
    ev.envelope_bytes_len = wire.size();
    ev.airtime = airtime_of(wire.size(), data_rate_bps_);
    ev.adversarial = adversarial;
    ev.wire = wire;

    bool trace_drop = false;
    if (model_.variant == LossModel::Variant::trace) {
        trace_drop = model_.drop_set.count(ev.tx_index) > 0;
    }
    ev.deliveries.reserve(receivers.size());
    for (VehicleId rx : receivers) {
        bool delivered;
        if (model_.variant == LossModel::Variant::trace) {
            delivered = !trace_drop;
        } else {
            delivered = !rng_.bernoulli(model_.p);
        }
        ev.deliveries.push_back({rx, delivered});
    }

    airtime_log_.emplace_back(static_cast<double>(tx_step) * step_size_, ev.airtime);
    return ev;
}

std::vector<double> Channel::busy_per_window(double duration, double window_len) const {
    // Only complete windows count as observations; a trailing partial window
    // would bias the ratio low because its denominator is the full length.
    const auto n_windows = static_cast<std::size_t>(duration / window_len + 1e-9);
    std::vector<double> busy(n_windows, 0.0);
    for (const auto& [t, airtime] : airtime_log_) {
        const auto idx = static_cast<std::size_t>(t / window_len);
        if (idx < n_windows) {
            busy[idx] += airtime;
        }
    }
    return busy;
}

} // namespace pqv2x
