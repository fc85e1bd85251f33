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

#include "aiou/container.h"

#include <algorithm>
#include <array>
#include <bit>
#include <fstream>
#include <istream>
#include <ostream>
#include <unordered_set>

#include "aiou/error.h"

namespace aiou {
namespace {

constexpr std::uint64_t kMaxPixels = std::uint64_t{1} << 30;

template <typename T>
void PutLe(std::ostream& out, T value) {
  std::array<char, sizeof(T)> bytes;
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    bytes[i] = static_cast<char>((value >> (8 * i)) & 0xFF);
  }
  out.write(bytes.data(), bytes.size());
}

template <typename T>
T GetLe(const unsigned char* bytes) {
  T value = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    value |= static_cast<T>(bytes[i]) << (8 * i);
  }
  return value;
}

// Reads exactly n bytes or throws TruncatedRecord.
void ReadExact(std::istream& in, void* dst, std::size_t n,
               const char* what) {
  in.read(static_cast<char*>(dst), static_cast<std::streamsize>(n));
  if (static_cast<std::size_t>(in.gcount()) != n) {
    throw Error(ErrorCode::kTruncatedRecord,
                std::string("unexpected end of data in ") + what);
  }
}

struct Header {
  std::uint64_t count;
};

Header ReadHeader(std::istream& in) {
  std::array<char, 4> magic{};
  in.read(magic.data(), magic.size());
  if (in.gcount() != 4 ||
      !std::equal(magic.begin(), magic.end(), kContainerMagic)) {
    throw Error(ErrorCode::kBadMagic, "data does not start with \"AIOU\"");
  }
  unsigned char version = 0;
  ReadExact(in, &version, 1, "header");
  if (version != kContainerVersion) {
    throw Error(ErrorCode::kUnsupportedVersion,
                "container version " + std::to_string(version));
  }
  std::array<unsigned char, 8> count{};
  ReadExact(in, count.data(), count.size(), "header");
  return {GetLe<std::uint64_t>(count.data())};
}

struct RecordHeader {
  std::string name;
  MapKind kind;
  std::uint32_t height;
  std::uint32_t width;
};

RecordHeader ReadRecordHeader(std::istream& in) {
  std::array<unsigned char, 2> len{};
  ReadExact(in, len.data(), len.size(), "record name length");
  RecordHeader h;
  h.name.resize(GetLe<std::uint16_t>(len.data()));
  ReadExact(in, h.name.data(), h.name.size(), "record name");
  ValidateRecordName(h.name);

  std::array<unsigned char, 9> rest{};
  ReadExact(in, rest.data(), rest.size(), "record header");
  if (rest[0] > 1) {
    throw Error(ErrorCode::kMalformedRecord,
                "record '" + h.name + "' has unknown kind " +
                    std::to_string(rest[0]));
  }
  h.kind = static_cast<MapKind>(rest[0]);
  h.height = GetLe<std::uint32_t>(rest.data() + 1);
  h.width = GetLe<std::uint32_t>(rest.data() + 5);
  if (h.height == 0 || h.width == 0 ||
      std::uint64_t{h.height} * h.width > kMaxPixels) {
    throw Error(ErrorCode::kMalformedRecord,
                "record '" + h.name + "' has invalid dimensions");
  }
  return h;
}

Map ReadPayload(std::istream& in, const RecordHeader& h) {
  const std::size_t n = std::size_t{h.height} * h.width;
  std::vector<unsigned char> bytes(n * 4);
  ReadExact(in, bytes.data(), bytes.size(), "record payload");
  std::vector<double> values(n);
  for (std::size_t i = 0; i < n; ++i) {
    values[i] = std::bit_cast<float>(GetLe<std::uint32_t>(&bytes[4 * i]));
  }
  try {
    return Map(h.height, h.width, std::move(values));
  } catch (const Error& e) {
    throw Error(e.code(), "record '" + h.name + "': " + e.what());
  }
}

}  // namespace

std::string_view MapRecord::image_id() const {
  const std::string_view n = name;
  return n.substr(0, n.find('/'));
}

std::string_view MapRecord::attribute() const {
  const std::string_view n = name;
  const auto slash = n.find('/');
  return slash == std::string_view::npos ? std::string_view{}
                                         : n.substr(slash + 1);
}

void ValidateRecordName(std::string_view name) {
  if (name.empty() || name.size() > 0xFFFF ||
      std::count(name.begin(), name.end(), '/') != 1) {
    throw Error(ErrorCode::kMalformedRecord,
                "record name '" + std::string(name.substr(0, 64)) +
                    "' must be nonempty, <= 65535 bytes and contain "
                    "exactly one '/'");
  }
}

std::uint64_t WriteContainer(const std::vector<MapRecord>& records,
                             std::ostream& out) {
  std::unordered_set<std::string_view> seen;
  for (const MapRecord& r : records) {
    ValidateRecordName(r.name);
    if (!seen.insert(r.name).second) {
      throw Error(ErrorCode::kDuplicateName, r.name);
    }
  }

  out.write(kContainerMagic, 4);
  out.put(static_cast<char>(kContainerVersion));
  PutLe<std::uint64_t>(out, records.size());
  std::uint64_t bytes = kContainerHeaderSize;
  for (const MapRecord& r : records) {
    PutLe<std::uint16_t>(out, static_cast<std::uint16_t>(r.name.size()));
    out.write(r.name.data(), static_cast<std::streamsize>(r.name.size()));
    out.put(static_cast<char>(r.kind));
    PutLe<std::uint32_t>(out, static_cast<std::uint32_t>(r.map.height()));
    PutLe<std::uint32_t>(out, static_cast<std::uint32_t>(r.map.width()));
    for (const double v : r.map.values()) {
      PutLe<std::uint32_t>(out,
                           std::bit_cast<std::uint32_t>(static_cast<float>(v)));
    }
    bytes += 2 + r.name.size() + 1 + 8 + 4 * r.map.size();
  }
  if (!out) {
    throw Error(ErrorCode::kIoFailure, "write failed");
  }
  return bytes;
}

void WriteContainerFile(const std::vector<MapRecord>& records,
                        const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw Error(ErrorCode::kIoFailure, "cannot open " + path.string());
  }
  WriteContainer(records, out);
  out.close();
  if (!out) {
    throw Error(ErrorCode::kIoFailure, "cannot write " + path.string());
  }
}

MapContainer ReadContainer(std::istream& in) {
  const Header header = ReadHeader(in);
  MapContainer container;
  container.records.reserve(
      static_cast<std::size_t>(std::min<std::uint64_t>(header.count, 4096)));
  std::unordered_set<std::string> seen;
  for (std::uint64_t i = 0; i < header.count; ++i) {
    RecordHeader h = ReadRecordHeader(in);
    if (!seen.insert(h.name).second) {
      throw Error(ErrorCode::kDuplicateName, h.name);
    }
    Map map = ReadPayload(in, h);
    container.records.push_back({std::move(h.name), h.kind, std::move(map)});
  }
  return container;
}

MapContainer ReadContainerFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::kIoFailure, "cannot open " + path.string());
  }
  return ReadContainer(in);
}

ContainerReader::ContainerReader(std::filesystem::path path)
    : path_(std::move(path)) {
  std::ifstream in(path_, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::kIoFailure, "cannot open " + path_.string());
  }
  std::error_code ec;
  const std::uint64_t file_size = std::filesystem::file_size(path_, ec);
  if (ec) {
    throw Error(ErrorCode::kIoFailure, "cannot stat " + path_.string());
  }
  const Header header = ReadHeader(in);
  for (std::uint64_t i = 0; i < header.count; ++i) {
    RecordHeader h = ReadRecordHeader(in);
    const auto offset = static_cast<std::uint64_t>(in.tellg());
    const std::uint64_t payload = std::uint64_t{h.height} * h.width * 4;
    if (offset + payload > file_size) {
      throw Error(ErrorCode::kTruncatedRecord,
                  "payload of '" + h.name + "' runs past end of file");
    }
    if (by_name_.contains(h.name)) {
      throw Error(ErrorCode::kDuplicateName, h.name);
    }
    by_name_.emplace(h.name, entries_.size());
    entries_.push_back({std::move(h.name), h.kind, h.height, h.width, offset});
    in.seekg(static_cast<std::streamoff>(offset + payload));
  }
}

std::ptrdiff_t ContainerReader::Find(std::string_view name) const {
  const auto it = by_name_.find(std::string(name));
  return it == by_name_.end() ? -1 : static_cast<std::ptrdiff_t>(it->second);
}

MapRecord ContainerReader::Load(std::size_t index) const {
  const Entry& e = entries_.at(index);
  std::ifstream in(path_, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::kIoFailure, "cannot open " + path_.string());
  }
  in.seekg(static_cast<std::streamoff>(e.payload_offset));
  const RecordHeader h{e.name, e.kind, e.height, e.width};
  return {e.name, e.kind, ReadPayload(in, h)};
}

MapRecord ContainerReader::Load(std::string_view name) const {
  const std::ptrdiff_t i = Find(name);
  if (i < 0) {
    throw Error(ErrorCode::kUnknownImage,
                "no record named '" + std::string(name) + "'");
  }
  return Load(static_cast<std::size_t>(i));
}

MapSet SelectMaps(const MapContainer& container, std::string_view attribute,
                  MapKind kind) {
  MapSet out;
  for (const MapRecord& r : container.records) {
    if (r.kind == kind && r.attribute() == attribute) {
      out.emplace(std::string(r.image_id()), r.map);
    }
  }
  return out;
}

}  // namespace aiou
