// Copyright 2026 The streamPCQ Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace streampcq::gpcc {

// MSB-first bit reader over a byte span. Reading past the end throws
// BitstreamExhausted.
class BitReader {
 public:
  explicit BitReader(std::span<const std::uint8_t> data) : data_(data) {}

  bool read_flag();
  // Up to 64 bits, most significant bit first.
  std::uint64_t read_bits(int num_bits);
  // ue(v): leading-zero count z, then z suffix bits; value = 2^z - 1 + suffix.
  // A prefix of 32 or more zeros throws MalformedExpGolomb.
  std::uint64_t read_ue();
  // se(v): ue codeword k maps to (k+1)/2 for odd k and -k/2 for even k.
  std::int64_t read_se();
  // Sign-magnitude fixed width: num_bits magnitude, then a sign bit when the
  // magnitude is nonzero.
  std::int64_t read_sign_magnitude(int num_bits);

  void byte_align();

  std::size_t bit_position() const noexcept { return pos_; }
  std::size_t bits_left() const noexcept { return data_.size() * 8 - pos_; }

 private:
  bool next_bit();

  std::span<const std::uint8_t> data_;
  std::size_t pos_ = 0;
};

class BitWriter {
 public:
  void write_flag(bool value);
  void write_bits(std::uint64_t value, int num_bits);
  void write_ue(std::uint64_t value);
  void write_se(std::int64_t value);
  void write_sign_magnitude(std::int64_t value, int num_bits);
  // Pads with zero bits to the next byte boundary.
  void byte_align();

  const std::vector<std::uint8_t>& bytes() const noexcept { return bytes_; }
  std::vector<std::uint8_t> take() && { return std::move(bytes_); }
  std::size_t bit_count() const noexcept { return bit_count_; }

 private:
  std::vector<std::uint8_t> bytes_;
  std::size_t bit_count_ = 0;
};

}  // namespace streampcq::gpcc
