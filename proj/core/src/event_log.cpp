#include "critical_hawkes/event_log.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace critical_hawkes {

namespace {

static_assert(std::endian::native == std::endian::little,
              "event-log serialization assumes a little-endian host");

template <typename T>
void put(std::ofstream& out, T value) {
    out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
T take(std::ifstream& in) {
    T value{};
    in.read(reinterpret_cast<char*>(&value), sizeof(T));
    return value;
}

}  // namespace

void write_event_log(const std::filesystem::path& path, const std::vector<EventRecord>& events) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw std::runtime_error("cannot open event log for writing: " + path.string());
    }
    put<std::uint64_t>(out, events.size());
    for (const EventRecord& event : events) {
        put<double>(out, event.t_micro);
        put<std::uint32_t>(out, event.agent_id);
        put<std::uint8_t>(out, static_cast<std::uint8_t>(event.sign));
    }
    if (!out) {
        throw std::runtime_error("short write on event log: " + path.string());
    }
}

std::vector<EventRecord> read_event_log(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open event log: " + path.string());
    }
    const auto count = take<std::uint64_t>(in);
    std::vector<EventRecord> events;
    events.reserve(count);
    for (std::uint64_t k = 0; k < count; ++k) {
        EventRecord event;
        event.t_micro = take<double>(in);
        event.agent_id = take<std::uint32_t>(in);
        event.sign = static_cast<OrderSign>(take<std::uint8_t>(in));
        events.push_back(event);
    }
    if (!in) {
        throw std::runtime_error("truncated event log: " + path.string());
    }
    return events;
}

}  // namespace critical_hawkes
