// Copyright 2026 The advgan Authors
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

// Little-endian binary encoding shared by the gram, stats and checkpoint
// formats.

#include <bit>
#include <cstdint>
#include <cstring>
#include <string>
#include <string_view>
#include <vector>

#include "advgan/error.hpp"

namespace advgan::binio {

static_assert(std::endian::native == std::endian::little,
              "binary formats are written with native little-endian layout");

class Writer {
 public:
  void bytes(const void* p, std::size_t n) {
    const auto* c = static_cast<const char*>(p);
    buf_.insert(buf_.end(), c, c + n);
  }
  void magic(std::string_view m) { bytes(m.data(), m.size()); }
  void u32(std::uint32_t v) { bytes(&v, sizeof v); }
  void u64(std::uint64_t v) { bytes(&v, sizeof v); }
  void f64(double v) { bytes(&v, sizeof v); }
  void f64s(const double* p, std::size_t n) { bytes(p, n * sizeof(double)); }
  void str(std::string_view s) {
    u32(static_cast<std::uint32_t>(s.size()));
    bytes(s.data(), s.size());
  }
  const std::string& buffer() const { return buf_; }

 private:
  std::string buf_;
};

class Reader {
 public:
  Reader(std::string data, std::string what) : data_(std::move(data)), what_(std::move(what)) {}

  void bytes(void* p, std::size_t n) {
    if (n > data_.size() - pos_) {
      throw FormatError(what_ + ": truncated (needed " + std::to_string(n) + " bytes at offset " +
                        std::to_string(pos_) + ")");
    }
    std::memcpy(p, data_.data() + pos_, n);
    pos_ += n;
  }
  void expect_magic(std::string_view m) {
    std::string got(m.size(), '\0');
    bytes(got.data(), got.size());
    if (got != m) throw FormatError(what_ + ": bad magic, expected '" + std::string(m) + "'");
  }
  std::uint32_t u32() {
    std::uint32_t v;
    bytes(&v, sizeof v);
    return v;
  }
  std::uint64_t u64() {
    std::uint64_t v;
    bytes(&v, sizeof v);
    return v;
  }
  double f64() {
    double v;
    bytes(&v, sizeof v);
    return v;
  }
  std::vector<double> f64s(std::size_t n) {
    if (n > (data_.size() - pos_) / sizeof(double)) {
      throw FormatError(what_ + ": truncated array of " + std::to_string(n) + " values");
    }
    std::vector<double> v(n);
    bytes(v.data(), n * sizeof(double));
    return v;
  }
  std::string str() {
    const auto n = u32();
    if (n > data_.size() - pos_) throw FormatError(what_ + ": truncated string");
    std::string s(n, '\0');
    bytes(s.data(), n);
    return s;
  }
  bool at_end() const { return pos_ == data_.size(); }
  const std::string& what() const { return what_; }

 private:
  std::string data_;
  std::string what_;
  std::size_t pos_ = 0;
};

std::string read_file(const std::string& path);

// Writes to a sibling temp file and renames it over `path`.
void write_file_atomic(const std::string& path, const std::string& data);

}  // namespace advgan::binio
