/*
 * Copyright 2026 The aiou Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef AIOU_GROUPS_H_
#define AIOU_GROUPS_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>

namespace aiou {

// One cell of the (target label, protected label) cross.
struct GroupKey {
  std::uint8_t target_label = 0;
  std::uint8_t protected_label = 0;

  friend auto operator<=>(const GroupKey&, const GroupKey&) = default;
};

// Fixed reporting order: (0,0), (0,1), (1,0), (1,1).
inline constexpr std::array<GroupKey, 4> kGroupKeys = {
    GroupKey{0, 0}, GroupKey{0, 1}, GroupKey{1, 0}, GroupKey{1, 1}};

inline std::size_t GroupIndex(GroupKey key) {
  return 2u * key.target_label + key.protected_label;
}

// "t1_p0" style label used in CSV output.
inline std::string GroupName(GroupKey key) {
  return "t" + std::to_string(key.target_label) + "_p" +
         std::to_string(key.protected_label);
}

inline constexpr double kDefaultExclusionThreshold = 0.01;

// A group is excluded when it holds strictly fewer than threshold * total
// images. Empty groups are always excluded. The relative guard keeps a
// decimal threshold like 0.07 from moving the boundary by one ulp.
inline bool IsExcludedGroup(std::int64_t n, std::int64_t total,
                            double threshold) {
  if (n == 0) return true;
  const double bound = threshold * static_cast<double>(total);
  return static_cast<double>(n) < bound * (1.0 - 1e-9);
}

}  // namespace aiou

#endif  // AIOU_GROUPS_H_
