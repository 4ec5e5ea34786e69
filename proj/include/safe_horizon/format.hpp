// Copyright 2026 The safe_horizon Authors
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

#ifndef SAFE_HORIZON__FORMAT_HPP_
#define SAFE_HORIZON__FORMAT_HPP_

#include <array>
#include <charconv>
#include <optional>
#include <string>
#include <string_view>
#include <system_error>

namespace safe_horizon
{

/// Significant digits used for every number written to a file or stdout.
inline constexpr int kOutputDigits = 9;

/// Locale-independent shortest "%.9g"-style rendering.
inline std::string format_number(double value)
{
  std::array<char, 64> buf{};
  const auto res = std::to_chars(
    buf.data(), buf.data() + buf.size(), value, std::chars_format::general, kOutputDigits);
  if (res.ec != std::errc{}) {
    return "nan";
  }
  std::string out(buf.data(), res.ptr);
  if (out == "-0") {
    out = "0";
  }
  return out;
}

/// Locale-independent parse of a complete token; nullopt on any trailing junk.
inline std::optional<double> parse_number(std::string_view text)
{
  while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) {
    text.remove_prefix(1);
  }
  while (!text.empty() && (text.back() == ' ' || text.back() == '\t' || text.back() == '\r')) {
    text.remove_suffix(1);
  }
  if (!text.empty() && text.front() == '+') {
    text.remove_prefix(1);
  }
  if (text.empty()) {
    return std::nullopt;
  }
  double value = 0.0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
  if (res.ec != std::errc{} || res.ptr != text.data() + text.size()) {
    return std::nullopt;
  }
  return value;
}

template<typename Int = long long>
std::optional<Int> parse_integer(std::string_view text)
{
  while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) {
    text.remove_prefix(1);
  }
  while (!text.empty() && (text.back() == ' ' || text.back() == '\t' || text.back() == '\r')) {
    text.remove_suffix(1);
  }
  if (text.empty()) {
    return std::nullopt;
  }
  Int value = 0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
  if (res.ec != std::errc{} || res.ptr != text.data() + text.size()) {
    return std::nullopt;
  }
  return value;
}

}  // namespace safe_horizon

#endif  // SAFE_HORIZON__FORMAT_HPP_
