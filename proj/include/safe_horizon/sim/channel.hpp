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

#ifndef SAFE_HORIZON__SIM__CHANNEL_HPP_
#define SAFE_HORIZON__SIM__CHANNEL_HPP_

#include <cstdint>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "safe_horizon/sim/packet.hpp"

namespace safe_horizon::sim
{

/// Link down for `robot_id` over [start, end).
struct Outage
{
  int robot_id{0};
  double start{0.0};
  double end{0.0};

  bool covers(int id, double time) const
  {
    return id == robot_id && time >= start && time < end;
  }
};

struct FailureModel
{
  std::vector<Outage> outages;
  double drop_probability{0.0};
  std::uint64_t seed{0};

  bool in_outage(int robot_id, double time) const
  {
    for (const auto & o : outages) {
      if (o.covers(robot_id, time)) {
        return true;
      }
    }
    return false;
  }

  void validate() const
  {
    if (!(drop_probability >= 0.0 && drop_probability <= 1.0)) {
      throw std::invalid_argument("failure.drop_probability must be in [0, 1]");
    }
    for (const auto & o : outages) {
      if (!(o.start < o.end) || !(o.start >= 0.0)) {
        throw std::invalid_argument(
                "outage for robot " + std::to_string(o.robot_id) + " must satisfy 0 <= start < end");
      }
    }
  }
};

/// Uniform double in [0, 1) from the top 53 bits; identical on every platform.
inline double unit_draw(std::mt19937_64 & rng)
{
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Delivery flag per packet. One draw is consumed per packet whether or not
/// the robot is in a scheduled outage, so the random stream does not depend
/// on the outage schedule.
inline std::vector<bool> channel_deliver(
  std::span<const CommandPacket> packets, const FailureModel & failure, double time,
  std::mt19937_64 & rng)
{
  std::vector<bool> out;
  out.reserve(packets.size());
  for (const auto & p : packets) {
    const double u = unit_draw(rng);
    const bool dropped = u < failure.drop_probability;
    out.push_back(!failure.in_outage(p.robot_id, time) && !dropped);
  }
  return out;
}

/// Lossy link owning its random stream.
class Channel
{
public:
  explicit Channel(FailureModel failure)
  : failure_(std::move(failure)), rng_(failure_.seed)
  {
    failure_.validate();
  }

  std::vector<bool> deliver(std::span<const CommandPacket> packets, double time)
  {
    return channel_deliver(packets, failure_, time, rng_);
  }

  const FailureModel & failure() const {return failure_;}

private:
  FailureModel failure_;
  std::mt19937_64 rng_;
};

}  // namespace safe_horizon::sim

#endif  // SAFE_HORIZON__SIM__CHANNEL_HPP_
