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

#ifndef AIOU_CONTAINER_H_
#define AIOU_CONTAINER_H_

// "AIOU v1" map archive.
//
// Layout (all integers little-endian):
//   bytes 0-3   magic "AIOU"
//   byte  4     version (0x01)
//   bytes 5-12  record count, u64
//   per record:
//     u16 name length, name bytes (UTF-8, "<image_id>/<attribute>")
//     u8  kind (0 attention, 1 mask)
//     u32 height, u32 width
//     height * width binary32 values, row-major
//
// Payloads are single precision; writing narrows each double to float.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "aiou/map.h"

namespace aiou {

inline constexpr char kContainerMagic[4] = {'A', 'I', 'O', 'U'};
inline constexpr std::uint8_t kContainerVersion = 1;
inline constexpr std::size_t kContainerHeaderSize = 13;

enum class MapKind : std::uint8_t { kAttention = 0, kMask = 1 };

struct MapRecord {
  std::string name;
  MapKind kind = MapKind::kAttention;
  Map map{1, 1};

  // Portion of the name before / after the single '/'.
  std::string_view image_id() const;
  std::string_view attribute() const;
};

// Checks the name invariants: nonempty, at most 65535 bytes, exactly one
// '/'. Throws MalformedRecord.
void ValidateRecordName(std::string_view name);

struct MapContainer {
  std::uint8_t version = kContainerVersion;
  std::vector<MapRecord> records;
};

// Serializes records. Returns the number of bytes written. Throws
// DuplicateName, MalformedRecord or IoFailure.
std::uint64_t WriteContainer(const std::vector<MapRecord>& records,
                             std::ostream& out);
void WriteContainerFile(const std::vector<MapRecord>& records,
                        const std::filesystem::path& path);

// Inverse of WriteContainer. Throws BadMagic, UnsupportedVersion,
// TruncatedRecord, MalformedRecord, InvalidMap or DuplicateName.
MapContainer ReadContainer(std::istream& in);
MapContainer ReadContainerFile(const std::filesystem::path& path);

// Random access over an archive on disk. Construction performs the
// validation pass: every record header is parsed and payloads are skipped,
// building a name -> offset index. Load() then decodes one record at a
// time through its own file handle, so concurrent Load() calls are safe.
class ContainerReader {
 public:
  struct Entry {
    std::string name;
    MapKind kind;
    std::uint32_t height;
    std::uint32_t width;
    std::uint64_t payload_offset;
  };

  explicit ContainerReader(std::filesystem::path path);

  const std::vector<Entry>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }

  // Index of the named record, or -1.
  std::ptrdiff_t Find(std::string_view name) const;

  MapRecord Load(std::size_t index) const;
  MapRecord Load(std::string_view name) const;

 private:
  std::filesystem::path path_;
  std::vector<Entry> entries_;
  std::unordered_map<std::string, std::size_t> by_name_;
};

// image_id -> map for every record whose attribute equals `attribute` and
// whose kind matches. Ordered by image id.
using MapSet = std::map<std::string, Map, std::less<>>;
MapSet SelectMaps(const MapContainer& container, std::string_view attribute,
                  MapKind kind);

}  // namespace aiou

#endif  // AIOU_CONTAINER_H_
