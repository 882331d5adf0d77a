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


#ifndef AUGBIAS_COMMON_HPP_
#define AUGBIAS_COMMON_HPP_

#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace augbias {

using ClassId = std::string;
using SampleId = std::string;

/// Raised for malformed or inconsistent inputs. The CLI maps it to exit code 1.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when a computation cannot proceed (e.g. training diverged). Exit code 2.
class InternalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Augmentation strength: the lower bound of the crop scale, in percent.
/// Smaller values mean stronger augmentation; 100 disables cropping.
class Strength {
 public:
  explicit Strength(double percent);

  static Strength from_fraction(double fraction) { return Strength(fraction * 100.0); }

  double percent() const { return percent_; }
  double fraction() const { return percent_ / 100.0; }

  auto operator<=>(const Strength&) const = default;

 private:
  double percent_;
};

std::string to_string(Strength s);

/// Which label source a metric is evaluated against.
enum class LabelMode { original, multilabel };

std::string_view to_string(LabelMode mode);
LabelMode parse_label_mode(std::string_view text);

}  // namespace augbias

#endif  // AUGBIAS_COMMON_HPP_
