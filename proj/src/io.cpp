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

#include "logodet/io.hpp"

#include <cstring>
#include <fstream>

namespace logodet {

void ByteWriter::u16(std::uint16_t v) {
  buf_.push_back(static_cast<std::uint8_t>(v));
  buf_.push_back(static_cast<std::uint8_t>(v >> 8));
}

void ByteWriter::u32(std::uint32_t v) {
  for (int i = 0; i < 4; ++i) {
    buf_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
}

void ByteWriter::u64(std::uint64_t v) {
  for (int i = 0; i < 8; ++i) {
    buf_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
}

void ByteWriter::f32(float v) {
  std::uint32_t bits;
  std::memcpy(&bits, &v, sizeof(bits));
  u32(bits);
}

void ByteWriter::bytes(const void* data, std::size_t len) {
  if (len == 0) return;
  const auto* p = static_cast<const std::uint8_t*>(data);
  buf_.insert(buf_.end(), p, p + len);
}

void ByteWriter::str(const std::string& s) {
  u32(static_cast<std::uint32_t>(s.size()));
  bytes(s.data(), s.size());
}

void ByteReader::need(std::size_t n) {
  if (pos_ + n > len_) {
    throw FormatError("truncated file: needed " + std::to_string(n) +
                      " more bytes at offset " + std::to_string(pos_));
  }
}

std::uint8_t ByteReader::u8() {
  need(1);
  return data_[pos_++];
}

std::uint16_t ByteReader::u16() {
  need(2);
  std::uint16_t v = static_cast<std::uint16_t>(data_[pos_]) |
                    static_cast<std::uint16_t>(data_[pos_ + 1]) << 8;
  pos_ += 2;
  return v;
}

std::uint32_t ByteReader::u32() {
  need(4);
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) {
    v |= static_cast<std::uint32_t>(data_[pos_ + i]) << (8 * i);
  }
  pos_ += 4;
  return v;
}

std::uint64_t ByteReader::u64() {
  need(8);
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) {
    v |= static_cast<std::uint64_t>(data_[pos_ + i]) << (8 * i);
  }
  pos_ += 8;
  return v;
}

float ByteReader::f32() {
  std::uint32_t bits = u32();
  float v;
  std::memcpy(&v, &bits, sizeof(v));
  return v;
}

std::string ByteReader::str() {
  std::uint32_t n = u32();
  need(n);
  std::string s(reinterpret_cast<const char*>(data_ + pos_), n);
  pos_ += n;
  return s;
}

void ByteReader::bytes(void* out, std::size_t len) {
  if (len == 0) return;
  need(len);
  std::memcpy(out, data_ + pos_, len);
  pos_ += len;
}

std::vector<std::uint8_t> read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open for reading: " + path);
  std::vector<std::uint8_t> data((std::istreambuf_iterator<char>(in)),
                                 std::istreambuf_iterator<char>());
  if (in.bad()) throw IoError("read failed: " + path);
  return data;
}

void write_file(const std::string& path, const std::vector<std::uint8_t>& data) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open for writing: " + path);
  out.write(reinterpret_cast<const char*>(data.data()),
            static_cast<std::streamsize>(data.size()));
  if (!out) throw IoError("write failed: " + path);
}

namespace {

void expect_magic(ByteReader& r, const char* magic, const std::string& path) {
  char got[4];
  r.bytes(got, 4);
  if (std::memcmp(got, magic, 4) != 0) {
    throw FormatError("bad magic in " + path + " (expected " +
                      std::string(magic, 4) + ")");
  }
  std::uint16_t version = r.u16();
  if (version != 1) {
    throw FormatError("unsupported version " + std::to_string(version) +
                      " in " + path);
  }
}

}  // namespace

void write_fmap(const FeatureMap& fm, const std::string& path) {
  fm.validate();
  ByteWriter w;
  w.bytes("FMAP", 4);
  w.u16(1);
  w.u32(static_cast<std::uint32_t>(fm.width));
  w.u32(static_cast<std::uint32_t>(fm.height));
  w.u32(static_cast<std::uint32_t>(fm.channels));
  for (double v : fm.data) w.f32(static_cast<float>(v));
  write_file(path, w.buffer());
}

FeatureMap read_fmap(const std::string& path) {
  auto data = read_file(path);
  ByteReader r(data);
  expect_magic(r, "FMAP", path);
  FeatureMap fm;
  fm.width = static_cast<int>(r.u32());
  fm.height = static_cast<int>(r.u32());
  fm.channels = static_cast<int>(r.u32());
  if (fm.width <= 0 || fm.height <= 0 || fm.channels <= 0) {
    throw FormatError("bad dimensions in " + path);
  }
  std::size_t n =
      static_cast<std::size_t>(fm.width) * fm.height * fm.channels;
  fm.data.resize(n);
  for (std::size_t i = 0; i < n; ++i) fm.data[i] = r.f32();
  return fm;
}

void write_desc(const Descriptor& d, const std::string& path) {
  ByteWriter w;
  w.bytes("DESC", 4);
  w.u16(1);
  w.u32(static_cast<std::uint32_t>(d.size()));
  for (double v : d) w.f32(static_cast<float>(v));
  write_file(path, w.buffer());
}

Descriptor read_desc(const std::string& path) {
  auto data = read_file(path);
  ByteReader r(data);
  expect_magic(r, "DESC", path);
  std::uint32_t dim = r.u32();
  Descriptor d(dim);
  for (std::uint32_t i = 0; i < dim; ++i) d[i] = r.f32();
  return d;
}

void write_head(const AffineHead& head, const std::string& path) {
  ByteWriter w;
  w.bytes("AHED", 4);
  w.u16(1);
  w.u32(static_cast<std::uint32_t>(head.in_dim));
  w.u32(static_cast<std::uint32_t>(head.out_dim));
  for (double v : head.weights) w.f32(static_cast<float>(v));
  for (double v : head.bias) w.f32(static_cast<float>(v));
  write_file(path, w.buffer());
}

AffineHead read_head(const std::string& path) {
  auto data = read_file(path);
  ByteReader r(data);
  expect_magic(r, "AHED", path);
  AffineHead head;
  head.in_dim = static_cast<int>(r.u32());
  head.out_dim = static_cast<int>(r.u32());
  if (head.in_dim <= 0 || head.out_dim <= 0) {
    throw FormatError("bad dimensions in " + path);
  }
  std::size_t wn = static_cast<std::size_t>(head.in_dim) * head.out_dim;
  head.weights.resize(wn);
  for (std::size_t i = 0; i < wn; ++i) head.weights[i] = r.f32();
  head.bias.resize(head.out_dim);
  for (int i = 0; i < head.out_dim; ++i) head.bias[i] = r.f32();
  return head;
}

void write_whitening(const WhitenTransform& t, const std::string& path) {
  ByteWriter w;
  w.bytes("WHIT", 4);
  w.u16(1);
  w.u32(static_cast<std::uint32_t>(t.in_dim));
  w.u32(static_cast<std::uint32_t>(t.out_dim));
  w.f32(static_cast<float>(t.eps));
  for (double v : t.mean) w.f32(static_cast<float>(v));
  for (double v : t.projection) w.f32(static_cast<float>(v));
  write_file(path, w.buffer());
}

WhitenTransform read_whitening(const std::string& path) {
  auto data = read_file(path);
  ByteReader r(data);
  expect_magic(r, "WHIT", path);
  WhitenTransform t;
  t.in_dim = static_cast<int>(r.u32());
  t.out_dim = static_cast<int>(r.u32());
  if (t.in_dim <= 0 || t.out_dim <= 0) {
    throw FormatError("bad dimensions in " + path);
  }
  t.eps = r.f32();
  t.mean.resize(t.in_dim);
  for (int i = 0; i < t.in_dim; ++i) t.mean[i] = r.f32();
  std::size_t pn = static_cast<std::size_t>(t.in_dim) * t.out_dim;
  t.projection.resize(pn);
  for (std::size_t i = 0; i < pn; ++i) t.projection[i] = r.f32();
  return t;
}

std::vector<nlohmann::json> read_jsonl(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open for reading: " + path);
  std::vector<nlohmann::json> records;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    try {
      records.push_back(nlohmann::json::parse(line));
    } catch (const nlohmann::json::parse_error& e) {
      throw FormatError(path + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  return records;
}

void write_jsonl(const std::vector<nlohmann::json>& records,
                 const std::string& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot open for writing: " + path);
  for (const auto& rec : records) {
    out << rec.dump() << '\n';
  }
  if (!out) throw IoError("write failed: " + path);
}

}  // namespace logodet
