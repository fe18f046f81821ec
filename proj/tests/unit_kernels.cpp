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

#include <doctest.h>

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "lesynth/kernels/kernels.hpp"

using namespace lesynth::kernels;

TEST_CASE("scalar backend matches libm by construction") {
    const Backend &kb = scalar_backend();
    const std::vector<double> x = {-3.5, 0.0, 0.25, 700.5, -12.0};
    std::vector<double> s(x.size()), c(x.size()), e(x.size());
    kb.sincos(x.data(), s.data(), c.data(), x.size());
    kb.exp_neg(x.data(), e.data(), x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        CHECK(s[i] == std::sin(x[i]));
        CHECK(c[i] == std::cos(x[i]));
        const double clamped = std::min(std::max(x[i], -700.0), 700.0);
        CHECK(e[i] == std::exp(-clamped));
    }
}

TEST_CASE("avx2 backend is equivalent to the scalar reference") {
    const Backend *avx2 = avx2_backend();
    if (avx2 == nullptr) {
        MESSAGE("AVX2 unavailable on this host; equivalence vacuously skipped");
        return;
    }
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> wide(-1e4, 1e4);
    std::uniform_real_distribution<double> exp_range(-650.0, 650.0);

    // Deliberately awkward lengths to exercise the tails.
    for (std::size_t n : {1u, 3u, 4u, 7u, 128u, 1001u}) {
        std::vector<double> x(n), s_ref(n), c_ref(n), s_simd(n), c_simd(n);
        std::vector<double> xe(n), e_ref(n), e_simd(n);
        for (std::size_t i = 0; i < n; ++i) {
            x[i] = wide(rng);
            xe[i] = exp_range(rng);
        }
        scalar_backend().sincos(x.data(), s_ref.data(), c_ref.data(), n);
        avx2->sincos(x.data(), s_simd.data(), c_simd.data(), n);
        scalar_backend().exp_neg(xe.data(), e_ref.data(), n);
        avx2->exp_neg(xe.data(), e_simd.data(), n);
        for (std::size_t i = 0; i < n; ++i) {
            CHECK(std::abs(s_simd[i] - s_ref[i]) < 1e-13);
            CHECK(std::abs(c_simd[i] - c_ref[i]) < 1e-13);
            CHECK(std::abs(e_simd[i] - e_ref[i]) <=
                  1e-12 * std::max(e_ref[i], 1e-300));
        }
    }

    // Arguments beyond the fast path's range reduction hand off to libm.
    std::vector<double> huge = {3.2e7, -8.9e8, 1.5e6, 2.0};
    std::vector<double> s1(huge.size()), c1(huge.size()), s2(huge.size()), c2(huge.size());
    scalar_backend().sincos(huge.data(), s1.data(), c1.data(), huge.size());
    avx2->sincos(huge.data(), s2.data(), c2.data(), huge.size());
    for (std::size_t i = 0; i < huge.size(); ++i) {
        CHECK(std::abs(s1[i] - s2[i]) < 1e-12);
        CHECK(std::abs(c1[i] - c2[i]) < 1e-12);
    }
}

TEST_CASE("dot product equivalence and correctness") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> dist(-2.0, 2.0);
    for (std::size_t n : {1u, 5u, 64u, 257u}) {
        std::vector<double> a(n), b(n);
        for (std::size_t i = 0; i < n; ++i) {
            a[i] = dist(rng);
            b[i] = dist(rng);
        }
        const double ref = scalar_backend().dot(a.data(), b.data(), n);
        if (const Backend *avx2 = avx2_backend()) {
            const double simd = avx2->dot(a.data(), b.data(), n);
            CHECK(std::abs(simd - ref) < 1e-12 * (1.0 + std::abs(ref)) * n);
        }
    }
}

TEST_CASE("backend selection is switchable at runtime") {
    const std::string original = active_backend().name;
    CHECK(set_active_backend("scalar"));
    CHECK(std::string(active_backend().name) == "scalar");
    if (avx2_backend() != nullptr) {
        CHECK(set_active_backend("avx2"));
        CHECK(std::string(active_backend().name) == "avx2");
    } else {
        CHECK(!set_active_backend("avx2"));
    }
    CHECK(!set_active_backend("neon"));
    CHECK(set_active_backend(original));
}
