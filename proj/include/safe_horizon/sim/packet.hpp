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

#ifndef SAFE_HORIZON__SIM__PACKET_HPP_
#define SAFE_HORIZON__SIM__PACKET_HPP_

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "safe_horizon/format.hpp"
#include "safe_horizon/types.hpp"

namespace safe_horizon::sim
{

/// What the decision maker sends to one robot each period: the velocity to
/// execute and how long it may keep executing it without a fresh packet.
struct CommandPacket
{
  int robot_id{0};
  long long tick{0};
  VelocityCommand command{};
  double horizon{0.0};

  friend bool operator==(const CommandPacket &, const CommandPacket &) = default;
};

class PacketFormatError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

inline constexpr std::string_view kPacketMagic = "SH1";

/// `SH1 <robot_id> <tick> <v> <omega> <horizon>\n`, 9 significant digits.
inline std::string encode_packet(const CommandPacket & p)
{
  std::string out{kPacketMagic};
  out += ' ';
  out += std::to_string(p.robot_id);
  out += ' ';
  out += std::to_string(p.tick);
  out += ' ';
  out += format_number(p.command.linear);
  out += ' ';
  out += format_number(p.command.angular);
  out += ' ';
  out += format_number(p.horizon);
  out += '\n';
  return out;
}

/// Parse one wire line (trailing newline optional). Rejects out-of-bound
/// speeds, negative horizons and, when `horizon_cap` is given, horizons above it.
inline CommandPacket decode_packet(
  std::string_view line, std::optional<double> horizon_cap = std::nullopt)
{
  if (!line.empty() && line.back() == '\n') {
    line.remove_suffix(1);
  }
  std::vector<std::string_view> fields;
  std::size_t pos = 0;
  while (pos <= line.size()) {
    const std::size_t next = line.find(' ', pos);
    const std::size_t end = next == std::string_view::npos ? line.size() : next;
    fields.push_back(line.substr(pos, end - pos));
    if (next == std::string_view::npos) {
      break;
    }
    pos = next + 1;
  }
  if (fields.size() != 6) {
    throw PacketFormatError("packet: expected 6 space-separated fields");
  }
  if (fields[0] != kPacketMagic) {
    throw PacketFormatError("packet: bad magic '" + std::string(fields[0]) + "'");
  }
  const auto id = parse_integer(fields[1]);
  const auto tick = parse_integer(fields[2]);
  const auto v = parse_number(fields[3]);
  const auto w = parse_number(fields[4]);
  const auto h = parse_number(fields[5]);
  if (!id || *id < 0 || *id > 1'000'000'000) {
    throw PacketFormatError("packet: bad robot_id");
  }
  if (!tick || *tick < 0) {
    throw PacketFormatError("packet: bad tick");
  }
  if (!v || !w || !h) {
    throw PacketFormatError("packet: malformed number");
  }
  const VelocityCommand cmd{*v, *w};
  if (!cmd.admissible()) {
    throw PacketFormatError("packet: speed out of bounds");
  }
  if (!std::isfinite(*h) || *h < 0.0 || (horizon_cap && *h > *horizon_cap)) {
    throw PacketFormatError("packet: horizon out of range");
  }
  return CommandPacket{static_cast<int>(*id), *tick, cmd, *h};
}

}  // namespace safe_horizon::sim

#endif  // SAFE_HORIZON__SIM__PACKET_HPP_
