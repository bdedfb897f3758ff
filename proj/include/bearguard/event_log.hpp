#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "bearguard/errors.hpp"

namespace bearguard {

enum class EventKind { SegmentDecision, SprayTriggered, SprayInhibited, BatteryLow };

std::string to_string(EventKind k);
EventKind event_kind_from_string(const std::string& name);

// One log line. `payload` is a kind-specific JSON object; keys that this
// codebase does not know about survive a read/write round trip.
struct EventRecord {
  std::string device_id;
  double timestamp = 0.0;  // seconds since stream start
  EventKind kind = EventKind::SegmentDecision;
  nlohmann::ordered_json payload = nlohmann::ordered_json::object();

  EventRecord() = default;
  EventRecord(std::string device_id, double timestamp, EventKind kind,
              nlohmann::ordered_json payload);

  bool operator==(const EventRecord& other) const;
};

// Writes one JSON object per line, UTF-8, keys always in the order
// device_id, timestamp, kind, payload. Returns the number of bytes written.
// Records must be ordered by timestamp (ties allowed). An I/O failure
// reports how many complete records made it out.
std::size_t write_event_log(const std::vector<EventRecord>& records,
                            std::ostream& sink);

// Reads a JSONL stream produced by write_event_log (or hand-authored to the
// same schema). A malformed line raises ParseError naming the 1-based line
// number; nothing is skipped silently.
std::vector<EventRecord> read_event_log(std::istream& source);

}  // namespace bearguard
