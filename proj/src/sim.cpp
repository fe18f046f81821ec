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

#include "lesynth/sim.hpp"

#include <cmath>

#include "lesynth/digest.hpp"
#include "lesynth/errors.hpp"
#include "lesynth/rng.hpp"

namespace lesynth {

namespace {
constexpr double kTwoPi = 2.0 * 3.14159265358979323846;
}

void NoiseModel::validate() const {
    if (decay_osc && !(*decay_osc > 0.0)) {
        throw InputError("decay_osc must be positive when set");
    }
    if (!(prep_error >= 0.0) || !(prep_error < 1.0)) {
        throw InputError("prep_error must be in [0, 1)");
    }
    if (amp_jitter < 0.0 || phase_jitter < 0.0) {
        throw InputError("jitter magnitudes must be nonnegative");
    }
}

NoiseModel NoiseModel::none() {
    NoiseModel n;
    n.prep_error = 0.0;
    return n;
}

JointState apply_pulse(const JointState &s, const Pulse &p, const CouplingModel &m) {
    const auto rotations = pair_rotations(m, p, s.n_max());
    std::vector<std::complex<double>> amps = s.raw();
    const std::complex<double> minus_i(0.0, -1.0);
    for (const auto &rot : rotations) {
        const std::size_t i_down = JointState::index_of(Spin::down, rot.n_down, s.n_max());
        const std::size_t i_up = JointState::index_of(Spin::up, rot.n_up, s.n_max());
        const double c = std::cos(0.5 * rot.theta);
        const double sn = std::sin(0.5 * rot.theta);
        const std::complex<double> e_minus = std::polar(1.0, -rot.phi);
        const std::complex<double> e_plus = std::polar(1.0, rot.phi);
        const std::complex<double> a = amps[i_down];
        const std::complex<double> b = amps[i_up];
        amps[i_down] = c * a + minus_i * e_minus * sn * b;
        amps[i_up] = minus_i * e_plus * sn * a + c * b;
    }
    return JointState::from_amplitudes(s.n_max(), std::move(amps));
}

std::vector<JointState> run_program(const JointState &s0, const PulseProgram &prog,
                                    const CouplingModel &m,
                                    bool allow_digest_mismatch) {
    if (!allow_digest_mismatch && model_digest(m) != prog.model_digest) {
        throw InputError(
            "coupling model digest does not match the program "
            "(pass the override flag to run anyway)");
    }
    std::vector<JointState> trajectory;
    trajectory.reserve(prog.effective_size() + 1);
    trajectory.push_back(s0);
    for (const auto &pulse : prog.pulses) {
        if (pulse.noop) {
            continue;
        }
        trajectory.push_back(apply_pulse(trajectory.back(), pulse, m));
    }
    return trajectory;
}

ScanSignal scan_signal(const JointState &s, int scan_dn, const CouplingModel &m) {
    const int n_top = s.n_max() + std::abs(scan_dn);
    const JointState padded = s.padded(n_top);
    const auto pairs = scan_pairs(m, scan_dn, n_top);

    ScanSignal sig;
    std::vector<bool> down_paired(n_top + 1, false);
    for (const auto &pair : pairs) {
        down_paired[pair.n_down] = true;
        const std::complex<double> a = padded.amp(Spin::down, pair.n_down);
        const std::complex<double> b = padded.amp(Spin::up, pair.n_up);
        const double pa = std::norm(a);
        const double pb = std::norm(b);
        sig.offset += 0.5 * (pa + pb);
        ScanComponent comp;
        comp.n_down = pair.n_down;
        comp.freq = std::abs(pair.rate);
        comp.cos_amp = 0.5 * (pa - pb);
        comp.sin_amp = -std::imag(a * std::conj(b)) * (pair.rate < 0.0 ? -1.0 : 1.0);
        sig.components.push_back(comp);
    }
    // down-spin states without a partner never leave |down>.
    for (int n = 0; n <= n_top; ++n) {
        if (!down_paired[n]) {
            sig.offset += std::norm(padded.amp(Spin::down, n));
        }
    }
    return sig;
}

namespace {

double eval_scan_signal(const ScanSignal &sig, double t,
                        const std::optional<double> &decay_osc,
                        bool per_component, double shared_rate) {
    double p = sig.offset;
    for (const auto &comp : sig.components) {
        double env = 1.0;
        if (decay_osc) {
            const double rate = per_component ? comp.freq / (*decay_osc * kTwoPi)
                                              : shared_rate;
            env = std::exp(-rate * t);
        }
        p += env * (comp.cos_amp * std::cos(comp.freq * t) +
                    comp.sin_amp * std::sin(comp.freq * t));
    }
    return p;
}

}  // namespace

RabiDataset simulate_rabi_scan(const JointState &s, int scan_dn,
                               const std::vector<double> &times,
                               const NoiseModel &noise, const CouplingModel &m,
                               int shots) {
    noise.validate();
    if (times.empty()) {
        throw InputError("scan needs at least one time point");
    }
    for (std::size_t i = 0; i < times.size(); ++i) {
        if (times[i] < 0.0 || (i > 0 && times[i] <= times[i - 1])) {
            throw InputError("times must be nonnegative and strictly increasing");
        }
    }
    if (shots < 0) {
        throw InputError("shots must be nonnegative");
    }

    const ScanSignal sig = scan_signal(s, scan_dn, m);
    const ScanSignal ground_sig =
        scan_signal(JointState::ground(s.n_max()), scan_dn, m);

    // Shared envelope referenced to the scan's first pair (the lowest-index
    // transition the drive couples).
    double shared_rate = 0.0;
    if (noise.decay_osc) {
        const auto pairs = scan_pairs(m, scan_dn, s.n_max() + std::abs(scan_dn));
        if (pairs.empty() || std::abs(pairs.front().rate) < 1e-12 * m.omega0) {
            throw NumericError("scan reference rate is zero; envelope undefined");
        }
        shared_rate = std::abs(pairs.front().rate) / (*noise.decay_osc * kTwoPi);
    }

    RabiDataset out;
    out.scan_dn = scan_dn;
    out.times = times;
    out.shots = shots;
    out.p_down.resize(times.size());
    for (std::size_t i = 0; i < times.size(); ++i) {
        double p = eval_scan_signal(sig, times[i], noise.decay_osc,
                                    noise.per_component_decay, shared_rate);
        if (noise.prep_error > 0.0) {
            const double pg =
                eval_scan_signal(ground_sig, times[i], noise.decay_osc,
                                 noise.per_component_decay, shared_rate);
            p = (1.0 - noise.prep_error) * p + noise.prep_error * pg;
        }
        p = std::min(1.0, std::max(0.0, p));
        if (shots > 0) {
            Rng rng(Rng::subseed(noise.seed, i));
            p = static_cast<double>(rng.binomial(shots, p)) / shots;
        }
        out.p_down[i] = p;
    }
    return out;
}

FringeDataset simulate_fringe_scan(const JointState &s, double analysis_area,
                                   const std::vector<double> &phases,
                                   const NoiseModel &noise, const CouplingModel &m,
                                   int shots, bool mixture_mode,
                                   double coherence_scale) {
    noise.validate();
    if (phases.empty()) {
        throw InputError("fringe scan needs at least one phase");
    }
    if (!(analysis_area >= 0.0)) {
        throw InputError("analysis area must be nonnegative");
    }
    if (coherence_scale < 0.0) {
        throw InputError("coherence_scale must be nonnegative");
    }
    const double coh = mixture_mode ? 0.0 : coherence_scale;

    const int n_top = s.n_max() + 2;
    const JointState padded = s.padded(n_top);
    const auto pairs = scan_pairs(m, 2, n_top);
    const double ref_rate = rabi_rate_pair(m, 0, 2);
    if (std::abs(ref_rate) < 1e-12 * m.omega0) {
        throw NumericError("analysis reference rate is zero");
    }

    // Per-pair constants; the phase only enters the interference term.
    struct PairTerm {
        double static_part;
        double re_coh;  // Re(a conj(b)) * sin(theta)
        double im_coh;  // Im(a conj(b)) * sin(theta)
    };
    std::vector<PairTerm> terms;
    double baseline = 0.0;
    std::vector<bool> down_paired(n_top + 1, false);
    for (const auto &pair : pairs) {
        down_paired[pair.n_down] = true;
        const std::complex<double> a = padded.amp(Spin::down, pair.n_down);
        const std::complex<double> b = padded.amp(Spin::up, pair.n_up);
        const double theta = analysis_area * pair.rate / ref_rate;
        const double c = std::cos(0.5 * theta);
        const double sn = std::sin(0.5 * theta);
        const std::complex<double> ab = a * std::conj(b);
        terms.push_back(PairTerm{c * c * std::norm(a) + sn * sn * std::norm(b),
                                 std::real(ab) * std::sin(theta),
                                 std::imag(ab) * std::sin(theta)});
    }
    for (int n = 0; n <= n_top; ++n) {
        if (!down_paired[n]) {
            baseline += std::norm(padded.amp(Spin::down, n));
        }
    }

    FringeDataset out;
    out.phases = phases;
    out.shots = shots;
    out.p_down.resize(phases.size());
    for (std::size_t i = 0; i < phases.size(); ++i) {
        const double cph = std::cos(phases[i]);
        const double sph = std::sin(phases[i]);
        double p = baseline;
        for (const auto &term : terms) {
            // -Im(a conj(b) e^{i phi}) = -(im*cos + re*sin)
            p += term.static_part - coh * (term.im_coh * cph + term.re_coh * sph);
        }
        p = std::min(1.0, std::max(0.0, p));
        if (shots > 0) {
            Rng rng(Rng::subseed(noise.seed, i));
            p = static_cast<double>(rng.binomial(shots, p)) / shots;
        }
        out.p_down[i] = p;
    }
    return out;
}

PulseProgram perturb_program(const PulseProgram &prog, const NoiseModel &noise) {
    noise.validate();
    PulseProgram out = prog;
    Rng rng(noise.seed);
    for (auto &pulse : out.pulses) {
        if (pulse.noop) {
            continue;
        }
        if (noise.amp_jitter > 0.0) {
            pulse.area = std::max(0.0, pulse.area * (1.0 + noise.amp_jitter * rng.normal()));
        }
        if (noise.phase_jitter > 0.0) {
            pulse.phase += noise.phase_jitter * rng.normal();
        }
    }
    return out;
}

}  // namespace lesynth
