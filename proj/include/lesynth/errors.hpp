// Copyright 2026 The lesynth Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace lesynth {

// Error taxonomy mirrors the CLI exit-code contract:
// InputError -> exit 2, NumericError -> exit 3.
class InputError : public std::runtime_error {
   public:
    explicit InputError(const std::string &msg) : std::runtime_error(msg) {}
};

class NumericError : public std::runtime_error {
   public:
    explicit NumericError(const std::string &msg) : std::runtime_error(msg) {}
};

}  // namespace lesynth
