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

#include "lesynth/kernels/kernels.hpp"

#include <cmath>
#include <cstdlib>

namespace lesynth::kernels {

namespace {

void scalar_sincos(const double *x, double *s, double *c, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        s[i] = std::sin(x[i]);
        c[i] = std::cos(x[i]);
    }
}

void scalar_exp_neg(const double *x, double *out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        double v = x[i];
        if (v > 700.0) v = 700.0;
        if (v < -700.0) v = -700.0;
        out[i] = std::exp(-v);
    }
}

double scalar_dot(const double *a, const double *b, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        acc += a[i] * b[i];
    }
    return acc;
}

const Backend kScalar{"scalar", scalar_sincos, scalar_exp_neg, scalar_dot};

const Backend *pick_default() {
    if (std::getenv("LESYNTH_NO_SIMD") != nullptr) {
        return &kScalar;
    }
    if (const Backend *avx2 = avx2_backend()) {
        return avx2;
    }
    return &kScalar;
}

const Backend *&active_slot() {
    static const Backend *active = pick_default();
    return active;
}

}  // namespace

const Backend &scalar_backend() { return kScalar; }

const Backend &active_backend() { return *active_slot(); }

bool set_active_backend(std::string_view name) {
    if (name == "scalar") {
        active_slot() = &kScalar;
        return true;
    }
    if (name == "avx2") {
        if (const Backend *avx2 = avx2_backend()) {
            active_slot() = avx2;
            return true;
        }
        return false;
    }
    return false;
}

}  // namespace lesynth::kernels
