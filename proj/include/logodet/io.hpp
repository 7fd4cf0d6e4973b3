// Copyright 2026 The logodet Authors
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
#include <string>
#include <vector>

#include "logodet/descriptor.hpp"
#include "logodet/whitening.hpp"

#include "json.hpp"

namespace logodet {

// Little-endian byte buffer codec used by every binary file format.
class ByteWriter {
 public:
  void u8(std::uint8_t v) { buf_.push_back(v); }
  void u16(std::uint16_t v);
  void u32(std::uint32_t v);
  void u64(std::uint64_t v);
  void f32(float v);
  void bytes(const void* data, std::size_t len);
  void str(const std::string& s);  // u32 length prefix + UTF-8 bytes

  const std::vector<std::uint8_t>& buffer() const { return buf_; }

 private:
  std::vector<std::uint8_t> buf_;
};

class ByteReader {
 public:
  ByteReader(const std::uint8_t* data, std::size_t len)
      : data_(data), len_(len) {}
  explicit ByteReader(const std::vector<std::uint8_t>& buf)
      : ByteReader(buf.data(), buf.size()) {}

  std::uint8_t u8();
  std::uint16_t u16();
  std::uint32_t u32();
  std::uint64_t u64();
  float f32();
  std::string str();
  void bytes(void* out, std::size_t len);
  std::size_t remaining() const { return len_ - pos_; }
  std::size_t position() const { return pos_; }

 private:
  void need(std::size_t n);
  const std::uint8_t* data_;
  std::size_t len_;
  std::size_t pos_ = 0;
};

std::vector<std::uint8_t> read_file(const std::string& path);
void write_file(const std::string& path, const std::vector<std::uint8_t>& data);

// .fmap: "FMAP" | u16 version=1 | u32 width | u32 height | u32 channels |
// f32 data row-major (y, x, c).
void write_fmap(const FeatureMap& fm, const std::string& path);
FeatureMap read_fmap(const std::string& path);

// .desc: "DESC" | u16 version=1 | u32 dim | f32 values.
void write_desc(const Descriptor& d, const std::string& path);
Descriptor read_desc(const std::string& path);

// .head: "AHED" | u16 version=1 | u32 in_dim | u32 out_dim | f32 W row-major
// | f32 bias.
void write_head(const AffineHead& head, const std::string& path);
AffineHead read_head(const std::string& path);

// .whit: "WHIT" | u16 version=1 | u32 in_dim | u32 out_dim | f32 eps |
// f32 mean | f32 projection row-major.
void write_whitening(const WhitenTransform& t, const std::string& path);
WhitenTransform read_whitening(const std::string& path);

std::vector<nlohmann::json> read_jsonl(const std::string& path);
void write_jsonl(const std::vector<nlohmann::json>& records,
                 const std::string& path);

}  // namespace logodet
