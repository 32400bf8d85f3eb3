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

#include <array>
#include <optional>
#include <string>
#include <string_view>

namespace pursuit {

// Where the prey sits in the field of view: one of three equal image thirds,
// or not visible at all.
enum class Region { L = 0, C = 1, R = 2, N = 3 };

// Apparent prey size class, split at mean +/- one standard deviation of the
// pixel-width distribution.
enum class Size { S = 0, M = 1, XL = 2 };

inline constexpr int kNumClasses = 10;

struct Label
{
  Region region = Region::N;
  std::optional<Size> size;  // empty iff region == N

  bool operator==(const Label&) const = default;

  // Class order: L:S L:M L:XL C:S C:M C:XL R:S R:M R:XL N
  int class_index() const
  {
    if (region == Region::N || !size) return 9;
    return static_cast<int>(region) * 3 + static_cast<int>(*size);
  }

  static Label from_class(int index)
  {
    if (index == 9) return {Region::N, std::nullopt};
    return {static_cast<Region>(index / 3), static_cast<Size>(index % 3)};
  }

  Label mirrored() const
  {
    Label out = *this;
    if (region == Region::L) out.region = Region::R;
    else if (region == Region::R) out.region = Region::L;
    return out;
  }
};

inline std::string_view to_string(Region r)
{
  constexpr std::array<std::string_view, 4> names{"L", "C", "R", "N"};
  return names[static_cast<int>(r)];
}

inline std::string_view to_string(Size s)
{
  constexpr std::array<std::string_view, 3> names{"S", "M", "XL"};
  return names[static_cast<int>(s)];
}

inline std::string to_string(const Label& l)
{
  if (l.region == Region::N || !l.size) return "N";
  return std::string(to_string(l.region)) + ":" + std::string(to_string(*l.size));
}

}  // namespace pursuit
