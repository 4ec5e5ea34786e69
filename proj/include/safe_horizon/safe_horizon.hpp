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

#ifndef SAFE_HORIZON__SAFE_HORIZON_HPP_
#define SAFE_HORIZON__SAFE_HORIZON_HPP_

#include "safe_horizon/ellipse.hpp"
#include "safe_horizon/format.hpp"
#include "safe_horizon/geometry.hpp"
#include "safe_horizon/horizon.hpp"
#include "safe_horizon/sim/channel.hpp"
#include "safe_horizon/sim/decision_maker.hpp"
#include "safe_horizon/sim/packet.hpp"
#include "safe_horizon/sim/robot.hpp"
#include "safe_horizon/sim/scenario.hpp"
#include "safe_horizon/sim/scenarios.hpp"
#include "safe_horizon/sim/simulation.hpp"
#include "safe_horizon/types.hpp"
#include "safe_horizon/unicycle.hpp"
#include "safe_horizon/verify.hpp"

#endif  // SAFE_HORIZON__SAFE_HORIZON_HPP_
