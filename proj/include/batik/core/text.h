// Copyright 2026 The Batik KG Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef BATIK_CORE_TEXT_H_
#define BATIK_CORE_TEXT_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace batik {

// Byte length of the UTF-8 sequence starting at s[pos], or 0 when the bytes
// there do not form a valid, minimal encoding.
size_t Utf8SequenceLength(std::string_view s, size_t pos);

bool IsValidUtf8(std::string_view s);

// Decodes the code point at s[pos]. Assumes valid UTF-8.
char32_t DecodeUtf8(std::string_view s, size_t pos);

size_t CountCodePoints(std::string_view s);

// Terminal column width: 2 for East Asian wide/fullwidth characters.
size_t DisplayWidth(std::string_view s);

std::string_view Trim(std::string_view s);

std::vector<std::string> Split(std::string_view s, char sep);

// Whitespace-separated fields (spaces and tabs).
std::vector<std::string> SplitFields(std::string_view s);

std::string ReadFile(const std::filesystem::path& path);

// Reads lines, strips a trailing '\r', validates UTF-8 per line.
std::vector<std::string> ReadLines(const std::filesystem::path& path);

void WriteFile(const std::filesystem::path& path, std::string_view content);

// Hex-free escaping for tab-separated output: \t, \n, \r and \\.
std::string EscapeTsv(std::string_view s);
std::string UnescapeTsv(std::string_view s);

std::string FormatDouble(double v, int precision = 17);

}  // namespace batik

#endif  // BATIK_CORE_TEXT_H_
