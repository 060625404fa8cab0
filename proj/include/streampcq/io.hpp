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

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace streampcq {

// All throw InputError on failure.
std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path);
std::string read_text_file(const std::filesystem::path& path);

// Writes to a sibling temporary and renames it over the target, so readers
// never observe a partial file.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);
void write_file_atomic(const std::filesystem::path& path, const std::vector<std::uint8_t>& contents);

// Minimal RFC 4180 reader: header row, quoted fields, CRLF or LF endings.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  // Index of a header column, or -1.
  int column(std::string_view name) const;
};

// Throws ParseError on ragged rows or unterminated quotes.
CsvTable parse_csv(std::string_view text);
std::string csv_escape(std::string_view field);

// Strict number parsing for CSV cells; throws ParseError naming the column.
double parse_double_field(std::string_view text, std::string_view column, std::size_t row);

}  // namespace streampcq
