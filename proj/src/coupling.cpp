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

#include "lesynth/coupling.hpp"

#include <cmath>
#include <string>

#include "lesynth/errors.hpp"

namespace lesynth {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

void CouplingModel::validate() const {
    if (!(omega0 > 0.0) || !std::isfinite(omega0)) {
        throw InputError("omega0 must be positive and finite");
    }
    if (!(eta >= 0.0) || !(eta < 2.0)) {
        throw InputError("eta must satisfy 0 <= eta < 2");
    }
}

void Pulse::validate() const {
    if (delta_n < -2 || delta_n > 2) {
        throw InputError("delta_n must be in {-2,-1,0,1,2}");
    }
    if (ref_pair < 0) {
        throw InputError("ref_pair must be nonnegative");
    }
    if (ref_pair - delta_n < 0) {
        throw InputError("referenced pair does not exist (ref_pair - delta_n < 0)");
    }
    if (!(area >= 0.0) || !std::isfinite(area)) {
        throw InputError("pulse area must be nonnegative and finite");
    }
    if (!std::isfinite(phase)) {
        throw InputError("pulse phase must be finite");
    }
}

double laguerre(int n, int alpha, double x) {
    if (n < 0 || alpha < 0) {
        throw InputError("laguerre requires n >= 0 and alpha >= 0");
    }
    if (n > 64) {
        throw NumericError("laguerre degree guard exceeded (n > 64)");
    }
    if (!std::isfinite(x)) {
        throw InputError("laguerre argument must be finite");
    }
    if (n == 0) {
        return 1.0;
    }
    double prev = 1.0;                    // L_0
    double cur = 1.0 + alpha - x;         // L_1
    for (int k = 1; k < n; ++k) {
        const double next =
            ((2.0 * k + 1.0 + alpha - x) * cur - (k + alpha) * prev) / (k + 1.0);
        prev = cur;
        cur = next;
    }
    return cur;
}

double rabi_rate(const CouplingModel &m, int n_lower, int abs_dn) {
    m.validate();
    if (n_lower < 0) {
        throw InputError("n_lower must be nonnegative");
    }
    if (abs_dn < 0 || abs_dn > 2) {
        throw InputError("abs_dn must be in {0,1,2}");
    }
    const double x = m.eta * m.eta;
    double factorial_ratio = 1.0;  // sqrt(n! / (n+d)!)
    for (int k = 1; k <= abs_dn; ++k) {
        factorial_ratio /= static_cast<double>(n_lower + k);
    }
    factorial_ratio = std::sqrt(factorial_ratio);
    return m.omega0 * std::exp(-0.5 * x) * std::pow(m.eta, abs_dn) *
           factorial_ratio * laguerre(n_lower, abs_dn, x);
}

double rabi_rate_pair(const CouplingModel &m, int n_a, int n_b) {
    const int d = std::abs(n_a - n_b);
    if (d > 2) {
        throw InputError("pair separation must be at most 2");
    }
    return rabi_rate(m, std::min(n_a, n_b), d);
}

double eta_from_ratio(double target_ratio, PairSpec pair_a, PairSpec pair_b) {
    if (!(target_ratio > 0.0) || !std::isfinite(target_ratio)) {
        throw InputError("target ratio must be positive and finite");
    }
    if (pair_a.n_lower == pair_b.n_lower && pair_a.abs_dn == pair_b.abs_dn) {
        throw InputError("degenerate pair: ratio is identically 1");
    }
    CouplingModel probe{1.0, 0.0};
    const auto mismatch = [&](double eta) {
        probe.eta = eta;
        return rabi_rate(probe, pair_a.n_lower, pair_a.abs_dn) -
               target_ratio * rabi_rate(probe, pair_b.n_lower, pair_b.abs_dn);
    };

    // Scan (0, 2) for the first sign change, then bisect. Zeros of the
    // denominator rate are harmless here since the mismatch stays smooth.
    constexpr int kGrid = 4096;
    constexpr double kEtaMin = 1e-6;
    constexpr double kEtaMax = 2.0 - 1e-9;
    double lo = kEtaMin;
    double f_lo = mismatch(lo);
    double hi = 0.0;
    double f_hi = 0.0;
    bool bracketed = false;
    for (int i = 1; i <= kGrid; ++i) {
        hi = kEtaMin + (kEtaMax - kEtaMin) * static_cast<double>(i) / kGrid;
        f_hi = mismatch(hi);
        if (f_lo == 0.0 || f_lo * f_hi < 0.0) {
            bracketed = true;
            break;
        }
        lo = hi;
        f_lo = f_hi;
    }
    if (!bracketed) {
        throw NumericError("eta_from_ratio: no root in (0, 2) for the requested ratio");
    }
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double f_mid = mismatch(mid);
        if (f_mid == 0.0) {
            return mid;
        }
        if (f_lo * f_mid < 0.0) {
            hi = mid;
        } else {
            lo = mid;
            f_lo = f_mid;
        }
    }
    const double eta = 0.5 * (lo + hi);
    probe.eta = eta;
    const double check = rabi_rate(probe, pair_a.n_lower, pair_a.abs_dn) /
                         rabi_rate(probe, pair_b.n_lower, pair_b.abs_dn);
    if (std::abs(check - target_ratio) > 1e-10) {
        throw NumericError("eta_from_ratio: bisection failed to reach tolerance");
    }
    return eta;
}

CouplingModel calibrated_model(double ratio, double omega0) {
    CouplingModel m;
    m.omega0 = omega0;
    m.eta = eta_from_ratio(ratio, PairSpec{3, 1}, PairSpec{0, 1});
    m.validate();
    return m;
}

std::vector<PairRotation> pair_rotations(const CouplingModel &m, const Pulse &p,
                                         int n_max) {
    m.validate();
    p.validate();
    if (p.ref_pair > n_max) {
        throw InputError("reference pair exceeds n_max");
    }
    std::vector<PairRotation> out;
    if (p.area == 0.0) {
        return out;  // identity; nothing rotates
    }
    const double ref_rate =
        rabi_rate_pair(m, p.ref_pair, p.partner_of(p.ref_pair));
    if (std::abs(ref_rate) < 1e-12 * m.omega0) {
        throw NumericError("reference pair rate is zero; pulse area undefined");
    }
    for (int n_down = 0; n_down <= n_max; ++n_down) {
        const int n_up = p.partner_of(n_down);
        if (n_up < 0 || n_up > n_max) {
            continue;  // partner level absent; these basis states stay untouched
        }
        const double ratio = rabi_rate_pair(m, n_down, n_up) / ref_rate;
        double theta = p.area * ratio;
        double phi = p.phase;
        if (theta < 0.0) {
            theta = -theta;
            phi += kPi;
        }
        out.push_back(PairRotation{n_down, n_up, theta, phi});
    }
    return out;
}

std::vector<ScanPair> scan_pairs(const CouplingModel &m, int scan_dn, int n_top) {
    if (scan_dn < -2 || scan_dn > 2) {
        throw InputError("scan_dn must be in {-2,-1,0,1,2}");
    }
    std::vector<ScanPair> out;
    for (int n_down = std::max(0, -scan_dn); n_down <= n_top; ++n_down) {
        const int n_up = n_down + scan_dn;
        if (n_up < 0 || n_up > n_top) {
            continue;
        }
        out.push_back(ScanPair{n_down, n_up, rabi_rate_pair(m, n_down, n_up)});
    }
    return out;
}

}  // namespace lesynth
