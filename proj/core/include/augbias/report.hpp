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


#ifndef AUGBIAS_REPORT_HPP_
#define AUGBIAS_REPORT_HPP_

#include <string>
#include <string_view>

namespace augbias {

/// Markdown rendering of any JSON artifact written by the toolkit, chosen by
/// its "kind" field. The manifest timestamp is not rendered.
std::string render_markdown(std::string_view artifact_json);

}  // namespace augbias

#endif  // AUGBIAS_REPORT_HPP_
