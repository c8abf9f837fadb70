#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "pqv2x/channel.hpp"

#include <cmath>
#include <numeric>

using namespace pqv2x;

namespace {

const std::vector<VehicleId> kReceivers = {1, 2, 3, 4};

std::size_t delivered_count(const ChannelEvent& ev) {
    std::size_t n = 0;
    for (const auto& d : ev.deliveries) {
        if (d.delivered) ++n;
    }
    return n;
}

} // namespace

TEST_CASE("airtime is length times eight over the data rate") {
    CHECK(airtime_of(750, 6e6) == doctest::Approx(0.001));
    CHECK(airtime_of(0, 6e6) == 0.0);
}

TEST_CASE("lossless bernoulli channel delivers to every receiver") {
    Channel ch(LossModel{LossModel::Variant::bernoulli, 0.0, {}}, 6e6, 1);
    const auto ev = ch.broadcast(Bytes(100, 0xAA), 0, kReceivers, 99, false);
    REQUIRE(ev.deliveries.size() == kReceivers.size());
    CHECK(delivered_count(ev) == kReceivers.size());
    for (std::size_t i = 0; i < kReceivers.size(); ++i) {
        CHECK(ev.deliveries[i].receiver == kReceivers[i]);
    }
    CHECK(ev.wire == Bytes(100, 0xAA));
    CHECK(ev.airtime == doctest::Approx(100.0 * 8.0 / 6e6));
}

TEST_CASE("p=1 bernoulli channel drops everything but still burns airtime") {
    Channel ch(LossModel{LossModel::Variant::bernoulli, 1.0, {}}, 6e6, 1);
    const auto ev = ch.broadcast(Bytes(100, 0), 0, kReceivers, 99, false);
    CHECK(delivered_count(ev) == 0);
    CHECK(ev.airtime > 0.0);
    const auto busy = ch.busy_per_window(1.0, 1.0);
    REQUIRE(busy.size() == 1);
    CHECK(busy[0] == doctest::Approx(ev.airtime));
}

TEST_CASE("bernoulli loss rate approaches p over many draws") {
    Channel ch(LossModel{LossModel::Variant::bernoulli, 0.3, {}}, 6e6, 7);
    std::size_t delivered = 0, total = 0;
    for (std::uint64_t step = 0; step < 2000; ++step) {
        const auto ev = ch.broadcast(Bytes(50, 0), step, kReceivers, 99, false);
        delivered += delivered_count(ev);
        total += ev.deliveries.size();
    }
    const double rate = static_cast<double>(delivered) / static_cast<double>(total);
    CHECK(rate == doctest::Approx(0.7).epsilon(0.03));
}

TEST_CASE("trace drops are shared fate per transmission index") {
    LossModel model;
    model.variant = LossModel::Variant::trace;
    model.drop_set = {1, 3};
    Channel ch(model, 6e6, 1);
    for (std::uint64_t i = 0; i < 5; ++i) {
        const auto ev = ch.broadcast(Bytes(10, 0), i, kReceivers, 99, false);
        CHECK(ev.tx_index == i);
        if (model.drop_set.count(i)) {
            CHECK(delivered_count(ev) == 0);
        } else {
            CHECK(delivered_count(ev) == kReceivers.size());
        }
    }
    CHECK(ch.transmissions() == 5);
}

TEST_CASE("busy accounting buckets airtime by window") {
    Channel ch(LossModel{}, 8e3, 1);  // 1 byte = 1 ms airtime
    ch.set_step_size(0.1);
    // steps 0..29 cover 3 seconds; one 100-byte frame per step = 0.1 s busy
    for (std::uint64_t step = 0; step < 30; ++step) {
        ch.broadcast(Bytes(100, 0), step, kReceivers, 99, false);
    }
    const auto busy = ch.busy_per_window(3.0, 1.0);
    REQUIRE(busy.size() == 3);
    for (const double b : busy) {
        CHECK(b == doctest::Approx(1.0));  // 10 frames * 0.1 s
    }
}

TEST_CASE("partial trailing window is excluded from busy accounting") {
    Channel ch(LossModel{}, 8e3, 1);
    ch.set_step_size(0.1);
    for (std::uint64_t step = 0; step < 25; ++step) {
        ch.broadcast(Bytes(10, 0), step, kReceivers, 99, false);
    }
    const auto busy = ch.busy_per_window(2.5, 1.0);
    CHECK(busy.size() == 2);  // the half window at the end is not reported
}

TEST_CASE("sample_cbr matches hand-computed mean and n-1 std") {
    std::vector<BusyObservation> obs = {
        {1, 0.0, 1.0, 0.010},
        {1, 1.0, 1.0, 0.020},
        {1, 2.0, 1.0, 0.030},
    };
    const auto [mean, std] = sample_cbr(obs);
    CHECK(mean == doctest::Approx(0.020).epsilon(1e-12));
    REQUIRE(std.has_value());
    CHECK(*std == doctest::Approx(0.010).epsilon(1e-9));
}

TEST_CASE("sample_cbr omits std for a single window") {
    const auto [mean, std] = sample_cbr({{1, 0.0, 1.0, 0.004}});
    CHECK(mean == doctest::Approx(0.004));
    CHECK_FALSE(std.has_value());
}

TEST_CASE("identical seeds reproduce the exact delivery pattern") {
    const LossModel model{LossModel::Variant::bernoulli, 0.4, {}};
    Channel a(model, 6e6, 123);
    Channel b(model, 6e6, 123);
    for (std::uint64_t step = 0; step < 200; ++step) {
        const auto ea = a.broadcast(Bytes(40, 0), step, kReceivers, 99, false);
        const auto eb = b.broadcast(Bytes(40, 0), step, kReceivers, 99, false);
        for (std::size_t i = 0; i < kReceivers.size(); ++i) {
            CHECK(ea.deliveries[i].delivered == eb.deliveries[i].delivered);
        }
    }
}

TEST_CASE("adversarial flag is carried through") {
    Channel ch(LossModel{}, 6e6, 1);
    CHECK(ch.broadcast(Bytes(10, 0), 0, kReceivers, 7, true).adversarial);
    CHECK_FALSE(ch.broadcast(Bytes(10, 0), 0, kReceivers, 7, false).adversarial);
}
