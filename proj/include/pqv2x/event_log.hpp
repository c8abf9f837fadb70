#ifndef PQV2X_EVENT_LOG_HPP
#define PQV2X_EVENT_LOG_HPP

#include <cstdint>
#include <string>
#include <string_view>

#include <json.hpp>

namespace pqv2x {

/// Newline-delimited JSON event stream: {"step":..,"phase":..,"event_kind":..,"payload":{..}}.
class EventLog {
public:
    explicit EventLog(bool enabled = true) : enabled_(enabled) {}

    void record(std::uint64_t step, std::string_view phase, std::string_view event_kind,
                nlohmann::json payload) {
        if (!enabled_) {
            return;
        }
        nlohmann::json line = {{"step", step},
                               {"phase", phase},
                               {"event_kind", event_kind},
                               {"payload", std::move(payload)}};
        text_ += line.dump();
        text_ += '\n';
    }

    bool enabled() const { return enabled_; }
    const std::string& text() const { return text_; }

private:
    bool enabled_;
    std::string text_;
};

} // namespace pqv2x

#endif
