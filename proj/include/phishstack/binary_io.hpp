/*
 * Copyright 2026 The PhishStack Authors.
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

#ifndef PHISHSTACK_BINARY_IO_HPP
#define PHISHSTACK_BINARY_IO_HPP

#include <bit>
#include <cstdint>
#include <cstring>
#include <string>
#include <vector>

#include "phishstack/errors.hpp"

namespace phishstack {

/// Appends little-endian scalars to an in-memory buffer.
class BinaryWriter {
 public:
  void u8(std::uint8_t v) { buf_.push_back(static_cast<char>(v)); }
  void u32(std::uint32_t v) {
    for (int i = 0; i < 4; ++i) buf_.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
  }
  void u64(std::uint64_t v) {
    for (int i = 0; i < 8; ++i) buf_.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
  }
  void i32(std::int32_t v) { u32(static_cast<std::uint32_t>(v)); }
  void i64(std::int64_t v) { u64(static_cast<std::uint64_t>(v)); }
  void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }
  void str(const std::string& s) {
    u64(s.size());
    buf_.append(s);
  }
  void vec_f64(const std::vector<double>& v) {
    u64(v.size());
    for (double x : v) f64(x);
  }
  void vec_i32(const std::vector<int>& v) {
    u64(v.size());
    for (int x : v) i32(x);
  }

  const std::string& buffer() const { return buf_; }
  std::string take() { return std::move(buf_); }

 private:
  std::string buf_;
};

/// Reads little-endian scalars; throws CorruptPayloadError on overrun.
class BinaryReader {
 public:
  BinaryReader(const char* data, std::size_t size) : data_(data), size_(size) {}
  explicit BinaryReader(const std::string& s) : data_(s.data()), size_(s.size()) {}

  std::uint8_t u8() {
    need(1);
    return static_cast<std::uint8_t>(data_[pos_++]);
  }
  std::uint32_t u32() {
    need(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(static_cast<std::uint8_t>(data_[pos_++])) << (8 * i);
    return v;
  }
  std::uint64_t u64() {
    need(8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(static_cast<std::uint8_t>(data_[pos_++])) << (8 * i);
    return v;
  }
  std::int32_t i32() { return static_cast<std::int32_t>(u32()); }
  std::int64_t i64() { return static_cast<std::int64_t>(u64()); }
  double f64() { return std::bit_cast<double>(u64()); }
  std::string str() {
    const std::uint64_t len = u64();
    need(len);
    std::string s(data_ + pos_, len);
    pos_ += len;
    return s;
  }
  std::vector<double> vec_f64() {
    const std::uint64_t len = u64();
    need(len * 8);
    std::vector<double> v(len);
    for (auto& x : v) x = f64();
    return v;
  }
  std::vector<int> vec_i32() {
    const std::uint64_t len = u64();
    need(len * 4);
    std::vector<int> v(len);
    for (auto& x : v) x = i32();
    return v;
  }

  std::size_t remaining() const { return size_ - pos_; }
  bool done() const { return pos_ == size_; }

 private:
  void need(std::uint64_t bytes) const {
    if (bytes > size_ - pos_) {
      throw CorruptPayloadError("binary payload truncated: need " + std::to_string(bytes) +
                                " bytes, have " + std::to_string(size_ - pos_));
    }
  }
  const char* data_;
  std::size_t size_;
  std::size_t pos_ = 0;
};

/// CRC-32 (IEEE 802.3 polynomial) used for model-file section checksums.
std::uint32_t crc32(const char* data, std::size_t size);
inline std::uint32_t crc32(const std::string& s) { return crc32(s.data(), s.size()); }

}  // namespace phishstack

#endif  // PHISHSTACK_BINARY_IO_HPP
