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

// AVX2/FMA variants of the fit kernels. Argument reduction and kernel
// polynomials follow the classic fdlibm/cephes double-precision routines;
// lanes are only trusted for |x| <= 1e6 (sincos), beyond which the block
// falls back to libm. This file is compiled with -mavx2 -mfma and must not
// be entered unless the CPU reports both features.

#include "lesynth/kernels/kernels.hpp"

#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

#include <cmath>
#include <cstring>

namespace lesynth::kernels {

namespace {

constexpr double kTwoOverPi = 6.36619772367581382433e-01;
constexpr double kPio2_1 = 1.57079632673412561417e+00;   // first 33 bits of pi/2
constexpr double kPio2_1t = 6.07710050650619224932e-11;  // pi/2 - kPio2_1

// sin/cos minimax kernels on [-pi/4, pi/4] (fdlibm coefficients).
constexpr double S1 = -1.66666666666666324348e-01;
constexpr double S2 = 8.33333333332248946124e-03;
constexpr double S3 = -1.98412698298579493134e-04;
constexpr double S4 = 2.75573137070700676789e-06;
constexpr double S5 = -2.50507602534068634195e-08;
constexpr double S6 = 1.58969099521155010221e-10;

constexpr double C1 = 4.16666666666666019037e-02;
constexpr double C2 = -1.38888888888741095749e-03;
constexpr double C3 = 2.48015872894767294178e-05;
constexpr double C4 = -2.75573143513906633035e-07;
constexpr double C5 = 2.08757232129817482790e-09;
constexpr double C6 = -1.13596475577881948265e-11;

// exp(x) rational approximation (cephes), valid after reduction by ln 2.
constexpr double kLog2E = 1.4426950408889634073599;
constexpr double kExpC1 = 6.93145751953125e-1;
constexpr double kExpC2 = 1.42860682030941723212e-6;
constexpr double EP0 = 1.26177193074810590878e-4;
constexpr double EP1 = 3.02994407707441961300e-2;
constexpr double EP2 = 9.99999999999999999910e-1;
constexpr double EQ0 = 3.00198505138664455042e-6;
constexpr double EQ1 = 2.52448340349684104192e-3;
constexpr double EQ2 = 2.27265548208155028766e-1;
constexpr double EQ3 = 2.00000000000000000005e0;

inline __m256d sign_flip(__m256d v, __m256d mask) {
    return _mm256_xor_pd(v, _mm256_and_pd(mask, _mm256_set1_pd(-0.0)));
}

// One 4-lane block; x must satisfy |x| <= 1e6 in every lane.
inline void sincos4(__m256d x, __m256d *s_out, __m256d *c_out) {
    const __m256d fn = _mm256_round_pd(
        _mm256_mul_pd(x, _mm256_set1_pd(kTwoOverPi)),
        _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
    __m256d r = _mm256_fnmadd_pd(fn, _mm256_set1_pd(kPio2_1), x);
    r = _mm256_fnmadd_pd(fn, _mm256_set1_pd(kPio2_1t), r);

    const __m256d z = _mm256_mul_pd(r, r);

    __m256d ps = _mm256_set1_pd(S6);
    ps = _mm256_fmadd_pd(ps, z, _mm256_set1_pd(S5));
    ps = _mm256_fmadd_pd(ps, z, _mm256_set1_pd(S4));
    ps = _mm256_fmadd_pd(ps, z, _mm256_set1_pd(S3));
    ps = _mm256_fmadd_pd(ps, z, _mm256_set1_pd(S2));
    ps = _mm256_fmadd_pd(ps, z, _mm256_set1_pd(S1));
    const __m256d ksin = _mm256_fmadd_pd(_mm256_mul_pd(r, z), ps, r);

    __m256d pc = _mm256_set1_pd(C6);
    pc = _mm256_fmadd_pd(pc, z, _mm256_set1_pd(C5));
    pc = _mm256_fmadd_pd(pc, z, _mm256_set1_pd(C4));
    pc = _mm256_fmadd_pd(pc, z, _mm256_set1_pd(C3));
    pc = _mm256_fmadd_pd(pc, z, _mm256_set1_pd(C2));
    pc = _mm256_fmadd_pd(pc, z, _mm256_set1_pd(C1));
    __m256d kcos = _mm256_fmadd_pd(_mm256_mul_pd(z, z), pc,
                                   _mm256_fnmadd_pd(z, _mm256_set1_pd(0.5),
                                                    _mm256_set1_pd(1.0)));

    // Quadrant bookkeeping: q&1 swaps sin/cos, q&2 flips sin, (q+1)&2 flips cos.
    const __m256i q = _mm256_cvtepi32_epi64(_mm256_cvtpd_epi32(fn));
    const __m256i one = _mm256_set1_epi64x(1);
    const __m256i two = _mm256_set1_epi64x(2);
    const __m256d swap = _mm256_castsi256_pd(_mm256_cmpeq_epi64(
        _mm256_and_si256(q, one), one));
    const __m256d flip_s = _mm256_castsi256_pd(_mm256_cmpeq_epi64(
        _mm256_and_si256(q, two), two));
    const __m256d flip_c = _mm256_castsi256_pd(_mm256_cmpeq_epi64(
        _mm256_and_si256(_mm256_add_epi64(q, one), two), two));

    const __m256d s_raw = _mm256_blendv_pd(ksin, kcos, swap);
    const __m256d c_raw = _mm256_blendv_pd(kcos, ksin, swap);
    *s_out = sign_flip(s_raw, flip_s);
    *c_out = sign_flip(c_raw, flip_c);
}

void avx2_sincos(const double *x, double *s, double *c, std::size_t n) {
    const __m256d limit = _mm256_set1_pd(1e6);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d vx = _mm256_loadu_pd(x + i);
        const __m256d mag = _mm256_andnot_pd(_mm256_set1_pd(-0.0), vx);
        if (_mm256_movemask_pd(_mm256_cmp_pd(mag, limit, _CMP_GT_OQ)) != 0) {
            for (int k = 0; k < 4; ++k) {
                s[i + k] = std::sin(x[i + k]);
                c[i + k] = std::cos(x[i + k]);
            }
            continue;
        }
        __m256d vs, vc;
        sincos4(vx, &vs, &vc);
        _mm256_storeu_pd(s + i, vs);
        _mm256_storeu_pd(c + i, vc);
    }
    if (i < n) {
        double xin[4] = {0, 0, 0, 0};
        double sb[4], cb[4];
        std::memcpy(xin, x + i, (n - i) * sizeof(double));
        bool big = false;
        for (std::size_t k = 0; k < n - i; ++k) {
            big = big || std::abs(xin[k]) > 1e6;
        }
        if (big) {
            for (std::size_t k = 0; k < n - i; ++k) {
                s[i + k] = std::sin(xin[k]);
                c[i + k] = std::cos(xin[k]);
            }
        } else {
            __m256d vs, vc;
            sincos4(_mm256_loadu_pd(xin), &vs, &vc);
            _mm256_storeu_pd(sb, vs);
            _mm256_storeu_pd(cb, vc);
            std::memcpy(s + i, sb, (n - i) * sizeof(double));
            std::memcpy(c + i, cb, (n - i) * sizeof(double));
        }
    }
}

inline __m256d exp4(__m256d x) {
    // Clamp, then e^x = 2^k * expm(r) with x = k ln2 + r.
    x = _mm256_min_pd(x, _mm256_set1_pd(700.0));
    x = _mm256_max_pd(x, _mm256_set1_pd(-700.0));

    const __m256d fk = _mm256_round_pd(
        _mm256_mul_pd(x, _mm256_set1_pd(kLog2E)),
        _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
    __m256d r = _mm256_fnmadd_pd(fk, _mm256_set1_pd(kExpC1), x);
    r = _mm256_fnmadd_pd(fk, _mm256_set1_pd(kExpC2), r);

    const __m256d z = _mm256_mul_pd(r, r);
    __m256d p = _mm256_set1_pd(EP0);
    p = _mm256_fmadd_pd(p, z, _mm256_set1_pd(EP1));
    p = _mm256_fmadd_pd(p, z, _mm256_set1_pd(EP2));
    p = _mm256_mul_pd(p, r);
    __m256d q = _mm256_set1_pd(EQ0);
    q = _mm256_fmadd_pd(q, z, _mm256_set1_pd(EQ1));
    q = _mm256_fmadd_pd(q, z, _mm256_set1_pd(EQ2));
    q = _mm256_fmadd_pd(q, z, _mm256_set1_pd(EQ3));
    const __m256d e = _mm256_add_pd(
        _mm256_set1_pd(1.0),
        _mm256_mul_pd(_mm256_set1_pd(2.0),
                      _mm256_div_pd(p, _mm256_sub_pd(q, p))));

    const __m256i k64 = _mm256_cvtepi32_epi64(_mm256_cvtpd_epi32(fk));
    const __m256i bits = _mm256_slli_epi64(
        _mm256_add_epi64(k64, _mm256_set1_epi64x(1023)), 52);
    return _mm256_mul_pd(e, _mm256_castsi256_pd(bits));
}

void avx2_exp_neg(const double *x, double *out, std::size_t n) {
    std::size_t i = 0;
    const __m256d neg = _mm256_set1_pd(-0.0);
    for (; i + 4 <= n; i += 4) {
        const __m256d vx = _mm256_xor_pd(_mm256_loadu_pd(x + i), neg);
        _mm256_storeu_pd(out + i, exp4(vx));
    }
    if (i < n) {
        double xin[4] = {0, 0, 0, 0};
        double ob[4];
        std::memcpy(xin, x + i, (n - i) * sizeof(double));
        _mm256_storeu_pd(ob, exp4(_mm256_xor_pd(_mm256_loadu_pd(xin), neg)));
        std::memcpy(out + i, ob, (n - i) * sizeof(double));
    }
}

double avx2_dot(const double *a, const double *b, std::size_t n) {
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
        acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4), acc1);
    }
    for (; i + 4 <= n; i += 4) {
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
    }
    const __m256d acc = _mm256_add_pd(acc0, acc1);
    alignas(32) double lanes[4];
    _mm256_store_pd(lanes, acc);
    double total = lanes[0] + lanes[1] + lanes[2] + lanes[3];
    for (; i < n; ++i) {
        total += a[i] * b[i];
    }
    return total;
}

const Backend kAvx2{"avx2", avx2_sincos, avx2_exp_neg, avx2_dot};

}  // namespace

const Backend *avx2_backend() {
    static const Backend *detected = [] {
        return (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma"))
                   ? &kAvx2
                   : static_cast<const Backend *>(nullptr);
    }();
    return detected;
}

}  // namespace lesynth::kernels

#else  // non-x86 builds have no AVX2 path

namespace lesynth::kernels {
const Backend *avx2_backend() { return nullptr; }
}  // namespace lesynth::kernels

#endif
