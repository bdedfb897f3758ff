#include "bearguard/event_log.hpp"

#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

namespace bearguard {

using nlohmann::ordered_json;

std::string to_string(EventKind k) {
  switch (k) {
    case EventKind::SegmentDecision:
      return "SegmentDecision";
    case EventKind::SprayTriggered:
      return "SprayTriggered";
    case EventKind::SprayInhibited:
      return "SprayInhibited";
    case EventKind::BatteryLow:
      return "BatteryLow";
  }
  throw DomainError("unknown EventKind enum value");
}

EventKind event_kind_from_string(const std::string& name) {
  for (EventKind k : {EventKind::SegmentDecision, EventKind::SprayTriggered,
                      EventKind::SprayInhibited, EventKind::BatteryLow}) {
    if (to_string(k) == name) return k;
  }
  throw ParseError("unknown event kind \"" + name + "\"");
}

EventRecord::EventRecord(std::string device_id, double timestamp,
                         EventKind kind, ordered_json payload)
    : device_id(std::move(device_id)),
      timestamp(timestamp),
      kind(kind),
      payload(std::move(payload)) {
  if (!std::isfinite(timestamp)) {
    throw DomainError("event record: timestamp must be finite");
  }
  if (!this->payload.is_object()) {
    throw DomainError("event record: payload must be a JSON object");
  }
}

bool EventRecord::operator==(const EventRecord& other) const {
  return device_id == other.device_id && timestamp == other.timestamp &&
         kind == other.kind && payload == other.payload;
}

std::size_t write_event_log(const std::vector<EventRecord>& records,
                            std::ostream& sink) {
  std::size_t bytes = 0;
  std::size_t complete = 0;
  for (const EventRecord& r : records) {
    ordered_json line;
    line["device_id"] = r.device_id;
    line["timestamp"] = r.timestamp;
    line["kind"] = to_string(r.kind);
    line["payload"] = r.payload;
    std::string text = line.dump();
    text.push_back('\n');
    sink.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!sink) {
      std::ostringstream os;
      os << "event log write failed after " << complete
         << " complete records (" << bytes << " bytes)";
      throw IoError(os.str());
    }
    bytes += text.size();
    ++complete;
  }
  return bytes;
}

std::vector<EventRecord> read_event_log(std::istream& source) {
  std::vector<EventRecord> records;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(source, line)) {
    ++line_no;
    if (line.empty()) {
      std::ostringstream os;
      os << "event log line " << line_no << ": empty line";
      throw ParseError(os.str());
    }
    ordered_json obj;
    try {
      obj = ordered_json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      std::ostringstream os;
      os << "event log line " << line_no << ": " << e.what();
      throw ParseError(os.str());
    }
    try {
      if (!obj.is_object()) throw ParseError("record is not a JSON object");
      EventRecord r(obj.at("device_id").get<std::string>(),
                    obj.at("timestamp").get<double>(),
                    event_kind_from_string(obj.at("kind").get<std::string>()),
                    obj.at("payload"));
      records.push_back(std::move(r));
    } catch (const std::exception& e) {
      std::ostringstream os;
      os << "event log line " << line_no << ": " << e.what();
      throw ParseError(os.str());
    }
  }
  if (source.bad()) {
    throw IoError("event log read failed after " + std::to_string(line_no) +
                  " lines");
  }
  return records;
}

}  // namespace bearguard
