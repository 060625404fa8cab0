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

#include "streampcq/bit_io.hpp"

#include <bit>
#include <string>

#include "streampcq/error.hpp"

namespace streampcq::gpcc {

namespace {
constexpr int kMaxExpGolombPrefix = 32;
}

bool BitReader::next_bit() {
  if (pos_ >= data_.size() * 8) {
    throw Error(ErrorCode::kBitstreamExhausted,
                "read past end of payload at bit " + std::to_string(pos_),
                pos_ / 8);
  }
  const std::uint8_t byte = data_[pos_ >> 3];
  const bool bit = (byte >> (7 - (pos_ & 7))) & 1;
  ++pos_;
  return bit;
}

bool BitReader::read_flag() { return next_bit(); }

std::uint64_t BitReader::read_bits(int num_bits) {
  if (num_bits < 0 || num_bits > 64) {
    throw Error(ErrorCode::kInvalidProfile,
                "fixed-width field of " + std::to_string(num_bits) + " bits");
  }
  if (static_cast<std::size_t>(num_bits) > bits_left()) {
    throw Error(ErrorCode::kBitstreamExhausted,
                "need " + std::to_string(num_bits) + " bits, " +
                    std::to_string(bits_left()) + " left",
                pos_ / 8);
  }
  std::uint64_t value = 0;
  for (int i = 0; i < num_bits; ++i) value = (value << 1) | next_bit();
  return value;
}

std::uint64_t BitReader::read_ue() {
  const std::size_t start = pos_;
  int leading_zeros = 0;
  while (!next_bit()) {
    if (++leading_zeros >= kMaxExpGolombPrefix) {
      throw Error(ErrorCode::kMalformedExpGolomb,
                  "exp-Golomb prefix of 32 or more zeros at bit " +
                      std::to_string(start),
                  start / 8);
    }
  }
  if (leading_zeros == 0) return 0;
  const std::uint64_t suffix = read_bits(leading_zeros);
  return ((std::uint64_t{1} << leading_zeros) - 1) + suffix;
}

std::int64_t BitReader::read_se() {
  const std::uint64_t k = read_ue();
  const auto magnitude = static_cast<std::int64_t>((k + 1) >> 1);
  return (k & 1) ? magnitude : -magnitude;
}

std::int64_t BitReader::read_sign_magnitude(int num_bits) {
  const auto magnitude = static_cast<std::int64_t>(read_bits(num_bits));
  if (magnitude != 0 && read_flag()) return -magnitude;
  return magnitude;
}

void BitReader::byte_align() {
  pos_ = (pos_ + 7) & ~std::size_t{7};
  if (pos_ > data_.size() * 8) pos_ = data_.size() * 8;
}

void BitWriter::write_flag(bool value) {
  if ((bit_count_ & 7) == 0) bytes_.push_back(0);
  if (value) bytes_.back() |= static_cast<std::uint8_t>(0x80u >> (bit_count_ & 7));
  ++bit_count_;
}

void BitWriter::write_bits(std::uint64_t value, int num_bits) {
  for (int i = num_bits - 1; i >= 0; --i) write_flag((value >> i) & 1);
}

void BitWriter::write_ue(std::uint64_t value) {
  const std::uint64_t code = value + 1;
  const int length = std::bit_width(code);
  write_bits(0, length - 1);
  write_bits(code, length);
}

void BitWriter::write_se(std::int64_t value) {
  const std::uint64_t k =
      value > 0 ? 2 * static_cast<std::uint64_t>(value) - 1
                : 2 * static_cast<std::uint64_t>(-value);
  write_ue(k);
}

void BitWriter::write_sign_magnitude(std::int64_t value, int num_bits) {
  const std::uint64_t magnitude =
      value < 0 ? static_cast<std::uint64_t>(-value) : static_cast<std::uint64_t>(value);
  write_bits(magnitude, num_bits);
  if (magnitude != 0) write_flag(value < 0);
}

void BitWriter::byte_align() {
  while (bit_count_ & 7) write_flag(false);
}

}  // namespace streampcq::gpcc
