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

#include <cstddef>
#include <string_view>

namespace lesynth::kernels {

// Array kernels for the data-parallel inner loops of the curve fitter
// (per-iteration sin/cos/exp tables over the sample grid). The scalar
// backend is the libm reference; the AVX2 backend is selected at runtime
// when the CPU supports it and must agree with the reference within the
// tolerances pinned in the equivalence tests.
//
// Selection: AVX2 when available unless the LESYNTH_NO_SIMD environment
// variable is set; set_active_backend() overrides either way.

struct Backend {
    const char *name;

    // s[i] = sin(x[i]), c[i] = cos(x[i]). Accurate for |x| <= 1e6.
    void (*sincos)(const double *x, double *s, double *c, std::size_t n);

    // out[i] = exp(-x[i]) with x clamped to [-700, 700].
    void (*exp_neg)(const double *x, double *out, std::size_t n);

    // Plain dot product.
    double (*dot)(const double *a, const double *b, std::size_t n);
};

const Backend &scalar_backend();

// Null when this build or CPU has no AVX2 path.
const Backend *avx2_backend();

const Backend &active_backend();

// "scalar" or "avx2"; returns false if the named backend is unavailable.
bool set_active_backend(std::string_view name);

}  // namespace lesynth::kernels
