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
#include <random>

namespace lesynth {

// Seeded randomness for the measurement models. Distributions are hand-rolled
// on top of the engine's uniform output so that a dataset replays identically
// for a given seed regardless of the standard library's distribution
// implementations. Monte-Carlo scans derive one sub-seed per sample point, so
// points may be evaluated in any order (or concurrently) without changing the
// result.
class Rng {
   public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    // Uniform in [0, 1).
    double uniform() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    // Standard normal via Box-Muller; draws come in cached pairs.
    double normal() {
        if (have_cached_) {
            have_cached_ = false;
            return cached_;
        }
        double u1 = uniform();
        while (u1 <= 0.0) {
            u1 = uniform();
        }
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 2.0 * 3.14159265358979323846 * u2;
        cached_ = r * std::sin(a);
        have_cached_ = true;
        return r * std::cos(a);
    }

    // Binomial draw as a sum of Bernoulli trials; shot counts here are small
    // enough that the O(shots) cost is irrelevant.
    int binomial(int shots, double p) {
        if (p <= 0.0) {
            return 0;
        }
        if (p >= 1.0) {
            return shots;
        }
        int hits = 0;
        for (int i = 0; i < shots; ++i) {
            if (uniform() < p) {
                ++hits;
            }
        }
        return hits;
    }

    // splitmix64 mix of (seed, index); stable sub-stream derivation.
    static std::uint64_t subseed(std::uint64_t seed, std::uint64_t index) {
        std::uint64_t z = seed + 0x9e3779b97f4a7c15ull * (index + 1);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

   private:
    std::mt19937_64 engine_;
    bool have_cached_ = false;
    double cached_ = 0.0;
};

}  // namespace lesynth
