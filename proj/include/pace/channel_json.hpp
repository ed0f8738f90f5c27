// SPDX-License-Identifier: Apache-2.0
//
// pacesim: link-level simulator for periodic analog channel estimation
// Copyright (C) 2026 The pacesim authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

#include <json.hpp>

#include "pace/system_model.hpp"

namespace pace
{

// JSON mapping for the model types. Complex numbers are [re, im] pairs.
// Reading is an overlay: keys that are absent keep the value already held by the target.

void to_json(nlohmann::json &j, const SystemParams &p);
void from_json(const nlohmann::json &j, SystemParams &p);

void to_json(nlohmann::json &j, const ArrayGeometry &g);
void from_json(const nlohmann::json &j, ArrayGeometry &g);

void to_json(nlohmann::json &j, const Mpc &m);
void from_json(const nlohmann::json &j, Mpc &m);

void to_json(nlohmann::json &j, const ChannelSnapshot &s);
void from_json(const nlohmann::json &j, ChannelSnapshot &s);

nlohmann::json complex_to_json(cd z);
cd complex_from_json(const nlohmann::json &j);

} // namespace pace
