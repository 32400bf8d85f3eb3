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

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace pursuit::events {

inline constexpr int kSensorWidth = 240;
inline constexpr int kSensorHeight = 180;

enum class Polarity : std::uint8_t { Off = 0, On = 1 };

// One DVS address event. Timestamps are microseconds.
struct Event
{
  std::int64_t t = 0;
  std::uint16_t x = 0;
  std::uint16_t y = 0;
  Polarity polarity = Polarity::On;

  bool operator==(const Event&) const = default;
};

inline bool in_sensor_bounds(const Event& e)
{
  return e.x < kSensorWidth && e.y < kSensorHeight;
}

enum class EventFormat { Evt1, Csv };

// EVT1: "EVT1\n" followed by packed little-endian 14-byte records
// (t:u64, x:u16, y:u16, polarity:u8, reserved:u8).
inline constexpr std::string_view kEvt1Magic = "EVT1\n";
inline constexpr std::size_t kEvt1RecordSize = 14;
inline constexpr std::string_view kCsvHeader = "t_us,x,y,polarity";

// Throws ParseError (truncated/malformed record, with byte offset) or
// OrderingError (timestamps going backwards).
std::vector<Event> parse_events(std::string_view bytes, EventFormat format);

std::string encode_events(std::span<const Event> events, EventFormat format);

// Guesses the format from the leading bytes.
EventFormat detect_format(std::string_view bytes);

}  // namespace pursuit::events
