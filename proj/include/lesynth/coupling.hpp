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

#include <vector>

#include "lesynth/ladder.hpp"

namespace lesynth {

// Spin-motion coupling physics. A drive tuned to sideband order dn couples
// |down,n> with |up,n'> and the coherent exchange rate depends on both n and
// |n - n'| through the Lamb-Dicke factor and a generalized Laguerre
// polynomial:
//
//   Omega(n_lower, d) = omega0 * exp(-eta^2/2) * eta^d
//                       * sqrt(n_lower! / (n_lower+d)!) * L_{n_lower}^{d}(eta^2)
//
// with n_lower the smaller Fock index of the pair and d = |n - n'|. The value
// is signed: Laguerre sign flips are phase flips of the effective coupling and
// are folded into rotation phases where a nonnegative angle is required.

struct CouplingModel {
    double omega0 = 0.0;  // base Rabi frequency, rad/s
    double eta = 0.0;     // Lamb-Dicke parameter, dimensionless

    // Metadata only; never enters the rotating-frame dynamics.
    double trap_freq = 2.9e6;          // Hz
    double hyperfine_split = 1.25e9;   // Hz

    void validate() const;
};

// Default drive strength used when a caller gives no explicit value.
inline constexpr double kDefaultOmega0 = 2.0 * 3.14159265358979323846 * 5.0e5;

// One rotation pulse. Couples |down,n> <-> |up,n - delta_n>; ref_pair is the
// Fock index n (down side) of the pair whose rotation angle equals `area`.
struct Pulse {
    int delta_n = 0;
    int ref_pair = 0;
    double area = 0.0;   // rad, >= 0
    double phase = 0.0;  // rad
    bool noop = false;   // explicit zero-area placeholder in canonical programs

    void validate() const;
    int partner_of(int n_down) const { return n_down - delta_n; }
};

// A pulse decomposed into the independent two-state rotations it drives.
struct PairRotation {
    int n_down = 0;
    int n_up = 0;
    double theta = 0.0;  // rad, >= 0
    double phi = 0.0;    // rad
};

struct PairSpec {
    int n_lower = 0;
    int abs_dn = 0;
};

// Generalized Laguerre polynomial L_n^alpha(x) by the stable three-term
// forward recurrence. Guarded at n <= 64.
double laguerre(int n, int alpha, double x);

// Signed pair coupling rate, rad/s. abs_dn in {0, 1, 2}.
double rabi_rate(const CouplingModel &m, int n_lower, int abs_dn);

// Same rate addressed by the two Fock indices of the pair; symmetric in the
// argument order by construction (single code path keyed on the smaller one).
double rabi_rate_pair(const CouplingModel &m, int n_a, int n_b);

// Smallest eta in (0, 2) for which |rate(a)/rate(b)| matches target_ratio,
// located by bracketed bisection on rate(a) - target*rate(b).
double eta_from_ratio(double target_ratio, PairSpec pair_a, PairSpec pair_b);

// Builds a model with eta calibrated so that the (3,1)/(0,1) sideband rate
// ratio equals `ratio` (0.60 reproduces the published coupling strength).
CouplingModel calibrated_model(double ratio = 0.60, double omega0 = kDefaultOmega0);

// All two-state rotations driven by `p` on a ladder truncated at n_max.
// theta_n = area * Omega_pair(n) / Omega_pair(ref); phi is shared, with a pi
// offset absorbing negative rate ratios so that every theta is nonnegative.
// Pairs whose partner index would fall outside [0, n_max] are omitted.
std::vector<PairRotation> pair_rotations(const CouplingModel &m, const Pulse &p,
                                         int n_max);

// Pair enumeration in the analysis convention used by Rabi/fringe scans:
// scan_dn couples |down,n> <-> |up,n + scan_dn>. Lists pairs with both
// indices in [0, n_top], ordered by ascending down-side index.
struct ScanPair {
    int n_down = 0;
    int n_up = 0;
    double rate = 0.0;  // signed, rad/s
};
std::vector<ScanPair> scan_pairs(const CouplingModel &m, int scan_dn, int n_top);

}  // namespace lesynth
