// Copyright (c) 2026, The augbias Authors. All rights reserved.
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


#include "augbias/common.hpp"

#include <cmath>
#include <sstream>

namespace augbias {

Strength::Strength(double percent) : percent_(percent) {
  if (!std::isfinite(percent) || percent <= 0.0 || percent > 100.0) {
    std::ostringstream msg;
    msg << "strength must be a percentage in (0, 100], got " << percent;
    throw ValidationError(msg.str());
  }
}

std::string to_string(Strength s) {
  std::ostringstream out;
  out << s.percent();
  return out.str();
}

std::string_view to_string(LabelMode mode) {
  return mode == LabelMode::original ? "original" : "real";
}

LabelMode parse_label_mode(std::string_view text) {
  if (text == "original" || text == "or") return LabelMode::original;
  if (text == "real" || text == "multilabel" || text == "ReaL") return LabelMode::multilabel;
  throw ValidationError("unknown label mode '" + std::string(text) + "' (expected original|real)");
}

}  // namespace augbias
