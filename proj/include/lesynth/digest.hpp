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

#include <cstdint>
#include <cstdio>
#include <string>
#include <string_view>

#include "lesynth/coupling.hpp"
#include "lesynth/ladder.hpp"

namespace lesynth {

// Content digests used to refuse replays of a compiled program against a
// target or coupling model other than the ones it was compiled for. FNV-1a
// over a canonical decimal rendering; collision resistance is not a goal.

inline std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

inline std::string hex64(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return std::string(buf);
}

namespace detail {
inline void append_num(std::string &s, double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g;", v);
    s += buf;
}
}  // namespace detail

inline std::string state_digest(const JointState &s) {
    std::string canon = "state;" + std::to_string(s.n_max()) + ";";
    for (const auto &a : s.raw()) {
        detail::append_num(canon, a.real());
        detail::append_num(canon, a.imag());
    }
    return hex64(fnv1a64(canon));
}

inline std::string model_digest(const CouplingModel &m) {
    std::string canon = "model;";
    detail::append_num(canon, m.omega0);
    detail::append_num(canon, m.eta);
    detail::append_num(canon, m.trap_freq);
    detail::append_num(canon, m.hyperfine_split);
    return hex64(fnv1a64(canon));
}

}  // namespace lesynth
