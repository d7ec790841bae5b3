#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

namespace critical_hawkes {

enum class OrderSign : std::uint8_t { Buy = 0, Sell = 1 };

/// One accepted order: fast-time stamp, acting agent, side.
struct EventRecord {
    double t_micro{0.0};
    std::uint32_t agent_id{0};
    OrderSign sign{OrderSign::Buy};
};

/// Serialize events as little-endian binary: u64 event count, then per event
/// f64 time, u32 agent id, u8 sign. The layout is fixed so logs from
/// different runs/platforms are byte-comparable.
void write_event_log(const std::filesystem::path& path, const std::vector<EventRecord>& events);

[[nodiscard]] std::vector<EventRecord> read_event_log(const std::filesystem::path& path);

}  // namespace critical_hawkes
