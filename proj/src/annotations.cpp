#include "bearguard/annotations.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>

namespace bearguard {

namespace {

constexpr std::string_view kHeader = "frame,class,conf,x,y,w,h";

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  for (;;) {
    std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
  return fields;
}

double parse_number(std::string_view field, std::size_t line_no,
                    const char* what) {
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(),
                                   value);
  if (ec != std::errc{} || ptr != field.data() + field.size()) {
    std::ostringstream os;
    os << "annotations line " << line_no << ": bad " << what << " \"" << field
       << "\"";
    throw ParseError(os.str());
  }
  return value;
}

std::string_view strip_cr(std::string_view line) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  return line;
}

}  // namespace

std::vector<FrameAnnotations> read_annotations(std::istream& source) {
  std::string raw;
  std::size_t line_no = 0;

  if (!std::getline(source, raw)) {
    if (source.bad()) throw IoError("annotations: read failed");
    throw ParseError("annotations: empty input, expected header \"" +
                     std::string(kHeader) + "\"");
  }
  ++line_no;
  if (strip_cr(raw) != kHeader) {
    throw ParseError("annotations line 1: expected header \"" +
                     std::string(kHeader) + "\", got \"" + raw + "\"");
  }

  std::map<std::int64_t, std::vector<Detection>> by_frame;
  while (std::getline(source, raw)) {
    ++line_no;
    std::string_view line = strip_cr(raw);
    if (line.empty()) continue;
    auto fields = split_fields(line);
    if (fields.size() != 7) {
      std::ostringstream os;
      os << "annotations line " << line_no << ": expected 7 fields, got "
         << fields.size();
      throw ParseError(os.str());
    }
    double frame = parse_number(fields[0], line_no, "frame index");
    if (frame < 0 || frame != static_cast<double>(static_cast<std::int64_t>(frame))) {
      std::ostringstream os;
      os << "annotations line " << line_no << ": bad frame index \""
         << fields[0] << "\"";
      throw ParseError(os.str());
    }
    ObjectClass cls;
    try {
      cls = object_class_from_string(std::string(fields[1]));
    } catch (const ParseError& e) {
      std::ostringstream os;
      os << "annotations line " << line_no << ": " << e.what();
      throw ParseError(os.str());
    }
    double conf = parse_number(fields[2], line_no, "confidence");
    double x = parse_number(fields[3], line_no, "x");
    double y = parse_number(fields[4], line_no, "y");
    double w = parse_number(fields[5], line_no, "w");
    double h = parse_number(fields[6], line_no, "h");
    try {
      by_frame[static_cast<std::int64_t>(frame)].emplace_back(
          cls, conf, BoundingBox(x, y, w, h));
    } catch (const DomainError& e) {
      std::ostringstream os;
      os << "annotations line " << line_no << ": " << e.what();
      throw ParseError(os.str());
    }
  }
  if (source.bad()) throw IoError("annotations: read failed");

  std::vector<FrameAnnotations> result;
  result.reserve(by_frame.size());
  for (auto& [index, dets] : by_frame) {
    result.push_back(FrameAnnotations{index, std::move(dets)});
  }
  return result;
}

void write_annotations(const std::vector<FrameAnnotations>& frames,
                       std::ostream& sink) {
  std::vector<const FrameAnnotations*> sorted;
  sorted.reserve(frames.size());
  for (const auto& f : frames) sorted.push_back(&f);
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const FrameAnnotations* a, const FrameAnnotations* b) {
                     return a->frame_index < b->frame_index;
                   });

  sink << kHeader << '\n';
  char buf[192];
  for (const FrameAnnotations* f : sorted) {
    for (const Detection& d : f->detections) {
      std::snprintf(buf, sizeof(buf), "%lld,%s,%.10g,%.10g,%.10g,%.10g,%.10g\n",
                    static_cast<long long>(f->frame_index),
                    to_string(d.object_class).c_str(), d.confidence, d.bbox.x,
                    d.bbox.y, d.bbox.w, d.bbox.h);
      sink << buf;
    }
  }
  if (!sink) throw IoError("annotations: write failed");
}

}  // namespace bearguard
