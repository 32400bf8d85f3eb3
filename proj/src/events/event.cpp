// Copyright 2026 The dvs_pursuit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "pursuit/events/event.hpp"

#include <charconv>
#include <cstring>
#include <limits>

#include "pursuit/error.hpp"

namespace pursuit::events {

namespace {

template <typename T>
T read_le(const char* p)
{
  T v = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    v |= static_cast<T>(static_cast<std::uint8_t>(p[i])) << (8 * i);
  }
  return v;
}

template <typename T>
void write_le(std::string& out, T v)
{
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
  }
}

void check_event(const Event& e, std::int64_t prev_t, std::size_t offset)
{
  if (!in_sensor_bounds(e)) {
    throw ParseError("event coordinate (" + std::to_string(e.x) + "," + std::to_string(e.y) +
                       ") outside the 240x180 array",
                     offset);
  }
  if (e.t < prev_t) {
    throw OrderingError("timestamp " + std::to_string(e.t) + " precedes " + std::to_string(prev_t) +
                        " at byte " + std::to_string(offset));
  }
}

std::vector<Event> parse_evt1(std::string_view bytes)
{
  if (bytes.substr(0, kEvt1Magic.size()) != kEvt1Magic) {
    throw ParseError("missing EVT1 header", 0);
  }
  std::vector<Event> events;
  std::size_t offset = kEvt1Magic.size();
  events.reserve((bytes.size() - offset) / kEvt1RecordSize);
  std::int64_t prev_t = std::numeric_limits<std::int64_t>::min();
  while (offset < bytes.size()) {
    if (bytes.size() - offset < kEvt1RecordSize) {
      throw ParseError("truncated EVT1 record", offset);
    }
    const char* p = bytes.data() + offset;
    const auto t = read_le<std::uint64_t>(p);
    if (t > static_cast<std::uint64_t>(std::numeric_limits<std::int64_t>::max())) {
      throw ParseError("timestamp out of range", offset);
    }
    const auto pol = static_cast<std::uint8_t>(p[12]);
    if (pol > 1) throw ParseError("polarity must be 0 or 1", offset);
    Event e{static_cast<std::int64_t>(t), read_le<std::uint16_t>(p + 8), read_le<std::uint16_t>(p + 10),
            pol ? Polarity::On : Polarity::Off};
    check_event(e, prev_t, offset);
    prev_t = e.t;
    events.push_back(e);
    offset += kEvt1RecordSize;
  }
  return events;
}

template <typename T>
bool parse_field(std::string_view& line, T& out)
{
  const auto comma = line.find(',');
  const auto field = line.substr(0, comma);
  const auto* begin = field.data();
  const auto* end = begin + field.size();
  auto [ptr, ec] = std::from_chars(begin, end, out);
  if (ec != std::errc{} || ptr != end) return false;
  line = comma == std::string_view::npos ? std::string_view{} : line.substr(comma + 1);
  return true;
}

std::vector<Event> parse_csv(std::string_view bytes)
{
  std::vector<Event> events;
  std::size_t offset = 0;
  bool header_seen = false;
  std::int64_t prev_t = std::numeric_limits<std::int64_t>::min();
  while (offset < bytes.size()) {
    auto eol = bytes.find('\n', offset);
    if (eol == std::string_view::npos) eol = bytes.size();
    std::string_view line = bytes.substr(offset, eol - offset);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    const std::size_t line_offset = offset;
    offset = eol + 1;
    if (line.empty()) continue;
    if (!header_seen) {
      if (line != kCsvHeader) throw ParseError("expected CSV header 't_us,x,y,polarity'", line_offset);
      header_seen = true;
      continue;
    }
    std::int64_t t = 0;
    unsigned x = 0, y = 0, pol = 0;
    std::string_view rest = line;
    if (!parse_field(rest, t) || !parse_field(rest, x) || !parse_field(rest, y) ||
        !parse_field(rest, pol) || !rest.empty() || pol > 1 || t < 0) {
      throw ParseError("malformed CSV event line", line_offset);
    }
    if (x >= kSensorWidth || y >= kSensorHeight) {
      throw ParseError("event coordinate outside the 240x180 array", line_offset);
    }
    Event e{t, static_cast<std::uint16_t>(x), static_cast<std::uint16_t>(y),
            pol ? Polarity::On : Polarity::Off};
    check_event(e, prev_t, line_offset);
    prev_t = e.t;
    events.push_back(e);
  }
  if (!header_seen) throw ParseError("missing CSV header", 0);
  return events;
}

}  // namespace

std::vector<Event> parse_events(std::string_view bytes, EventFormat format)
{
  return format == EventFormat::Evt1 ? parse_evt1(bytes) : parse_csv(bytes);
}

std::string encode_events(std::span<const Event> events, EventFormat format)
{
  std::string out;
  if (format == EventFormat::Evt1) {
    out.reserve(kEvt1Magic.size() + events.size() * kEvt1RecordSize);
    out.append(kEvt1Magic);
    for (const auto& e : events) {
      write_le<std::uint64_t>(out, static_cast<std::uint64_t>(e.t));
      write_le<std::uint16_t>(out, e.x);
      write_le<std::uint16_t>(out, e.y);
      out.push_back(static_cast<char>(e.polarity == Polarity::On ? 1 : 0));
      out.push_back('\0');
    }
    return out;
  }
  out.append(kCsvHeader);
  out.push_back('\n');
  for (const auto& e : events) {
    out += std::to_string(e.t) + ',' + std::to_string(e.x) + ',' + std::to_string(e.y) + ',' +
           (e.polarity == Polarity::On ? '1' : '0') + '\n';
  }
  return out;
}

EventFormat detect_format(std::string_view bytes)
{
  return bytes.substr(0, 4) == "EVT1" ? EventFormat::Evt1 : EventFormat::Csv;
}

}  // namespace pursuit::events
