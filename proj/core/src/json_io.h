// Copyright 2026 The MRF Authors
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

#ifndef MRF_SRC_JSON_IO_H_
#define MRF_SRC_JSON_IO_H_

#include <string>

#include "json.hpp"
#include "mrf/forest.h"
#include "mrf/split_selection.h"
#include "mrf/tree.h"

namespace mrf::internal {

using OrderedJson = nlohmann::ordered_json;

OrderedJson TreeToJsonValue(const Tree& tree);
Tree TreeFromJsonValue(const nlohmann::json& value);

// Numbers for finite values, the string "inf" otherwise.
OrderedJson ConcentrationToJson(Concentration c);
Concentration ConcentrationFromJson(const nlohmann::json& value);

OrderedJson MrfConfigToJson(const MrfConfig& config);
MrfConfig MrfConfigFromJson(const nlohmann::json& value);
OrderedJson BaselineConfigToJson(const BaselineConfig& config);
BaselineConfig BaselineConfigFromJson(const nlohmann::json& value);

nlohmann::json ParseJson(const std::string& text, const std::string& what);

}  // namespace mrf::internal

#endif  // MRF_SRC_JSON_IO_H_
