#ifndef PQV2X_CHANNEL_HPP
#define PQV2X_CHANNEL_HPP

#include "pqv2x/message.hpp"
#include "pqv2x/rng.hpp"

#include <cstdint>
#include <optional>
#include <set>
#include <utility>
#include <vector>

namespace pqv2x {

struct LossModel {
    enum class Variant { bernoulli, trace };
    Variant variant = Variant::bernoulli;
    double p = 0.0;                        // bernoulli loss probability
    std::set<std::uint64_t> drop_set;      // trace: tx indices dropped for all receivers
};

struct Delivery {
    VehicleId receiver = 0;
    bool delivered = false;
};

struct ChannelEvent {
    std::uint64_t tx_step = 0;
    std::uint32_t sender = 0;
    std::uint64_t tx_index = 0;            // running transmission counter
    std::size_t envelope_bytes_len = 0;
    double airtime = 0.0;                  // seconds
    std::vector<Delivery> deliveries;      // one entry per receiver, id order
    bool adversarial = false;
    Bytes wire;                            // bytes as they appear on air
};

struct BusyObservation {
    VehicleId vehicle_id = 0;
    double window_start = 0.0;
    double window_len = 0.0;
    double busy_time = 0.0;
};

double airtime_of(std::size_t envelope_len_bytes, double data_rate_bps);

/// Per-window busy ratios r_i = busy/window_len reduced to sample mean and
/// sample standard deviation (n-1). Std is absent with fewer than 2 windows.
std::pair<double, std::optional<double>> sample_cbr(
    const std::vector<BusyObservation>& observations);

/**
 * Abstract PC5 broadcast channel. Every transmission reaches all receivers
 * subject to the loss model: bernoulli draws one loss per receiver from the
 * "channel-loss" stream in receiver-id order; trace mode drops the whole
 * broadcast for everyone when the transmission index is in the drop set
 * (shared-fate corruption). Airtime accrues into per-step busy accounting
 * whether or not the transmission is delivered.
 */
class Channel {
public:
    Channel(LossModel model, double data_rate_bps, std::uint64_t seed)
        : model_(std::move(model)), data_rate_bps_(data_rate_bps),
          rng_(seed, "channel-loss") {}

    ChannelEvent broadcast(const Bytes& wire, std::uint64_t tx_step,
                           const std::vector<VehicleId>& receivers,
                           std::uint32_t sender, bool adversarial);

    /// Total airtime accumulated at simulated time t, bucketed by observation
    /// window of length window_len.
    std::vector<double> busy_per_window(double duration, double window_len) const;

    std::uint64_t transmissions() const { return tx_count_; }

    // tx timestamps are quantized to step starts
    void set_step_size(double s) { step_size_ = s; }

private:
    LossModel model_;
    double data_rate_bps_;
    RngStream rng_;
    std::uint64_t tx_count_ = 0;
    std::vector<std::pair<double, double>> airtime_log_;  // (tx time, airtime)
    double step_size_ = 0.1;
};

} // namespace pqv2x

#endif
