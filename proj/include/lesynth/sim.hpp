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
#include <optional>
#include <vector>

#include "lesynth/compiler.hpp"
#include "lesynth/coupling.hpp"
#include "lesynth/ladder.hpp"

namespace lesynth {

// Measurement imperfection knobs. Dataset decay damps the oscillatory part of
// the analytic signal (it is a fit-model envelope, not amplitude damping of
// the state); prep_error mixes the signal toward the ground-state response;
// jitters perturb pulse parameters when a program replica is drawn.
struct NoiseModel {
    // 1/e envelope time in oscillation periods of the scan's first pair.
    std::optional<double> decay_osc;

    // Probability that initialization missed |down,0>.
    double prep_error = 0.001;

    double amp_jitter = 0.0;    // relative sigma of per-pulse area error
    double phase_jitter = 0.0;  // sigma of per-pulse phase error, rad
    std::uint64_t seed = 0;

    // When set, each signal component decays after decay_osc periods of its
    // own frequency instead of sharing the first pair's time constant.
    bool per_component_decay = false;

    void validate() const;

    static NoiseModel none();
};

// Sampled probability-vs-time record for one coupling order. scan_dn uses the
// analysis convention |down,n> <-> |up,n+scan_dn>. shots == 0 marks an exact
// (sampling disabled) dataset.
struct RabiDataset {
    int scan_dn = 0;
    std::vector<double> times;   // s, strictly increasing
    std::vector<double> p_down;
    int shots = 0;
};

// Sampled probability-vs-analysis-phase record.
struct FringeDataset {
    std::vector<double> phases;  // rad
    std::vector<double> p_down;
    int shots = 0;
};

// Applies every pair rotation of the pulse. The coupled pairs are disjoint,
// so sequential 2x2 application is exact; norm is preserved to 1e-12.
JointState apply_pulse(const JointState &s, const Pulse &p, const CouplingModel &m);

// States along the program: the initial state first, then one entry per
// effective (non-noop) pulse. Refuses a model whose digest does not match the
// program unless allow_digest_mismatch is set.
std::vector<JointState> run_program(const JointState &s0, const PulseProgram &prog,
                                    const CouplingModel &m,
                                    bool allow_digest_mismatch = false);

// Analytic P_down(t) for a drive of order scan_dn applied to s for time t,
// with envelope decay and preparation-error mixing, then binomial sampling
// with `shots` per point (shots == 0 keeps the exact probabilities).
// Deterministic given noise.seed; each point uses its own sub-seed.
RabiDataset simulate_rabi_scan(const JointState &s, int scan_dn,
                               const std::vector<double> &times,
                               const NoiseModel &noise, const CouplingModel &m,
                               int shots);

// P_down after an analysis pulse on the |down,n> <-> |up,n+2> ladder with the
// given area at the (down 0, up 2) reference pair, swept over `phases`.
// coherence_scale in [0,1] scales the interference terms between coupled
// pairs; mixture_mode forces it to zero (the dephased, population-only
// counterpart of s, which shows no phase sensitivity at all). Only the
// sampling part of `noise` applies here (shots and seed); decay and
// preparation error model scan-duration effects, not the analysis pulse.
FringeDataset simulate_fringe_scan(const JointState &s, double analysis_area,
                                   const std::vector<double> &phases,
                                   const NoiseModel &noise, const CouplingModel &m,
                                   int shots, bool mixture_mode = false,
                                   double coherence_scale = 1.0);

// Noisy replica of a program: per-pulse area scaled by (1 + N(0, amp_jitter))
// and phase offset by N(0, phase_jitter), using noise.seed.
PulseProgram perturb_program(const PulseProgram &prog, const NoiseModel &noise);

// Exact oscillatory decomposition of a Rabi scan signal (used by both the
// scan synthesizer and tests): P(t) = offset + env(t) * sum_k [cos_amp_k *
// cos(|w_k| t) + sin_amp_k * sin(|w_k| t)].
struct ScanComponent {
    int n_down = 0;
    double freq = 0.0;  // |rate|, rad/s
    double cos_amp = 0.0;
    double sin_amp = 0.0;
};
struct ScanSignal {
    double offset = 0.0;
    std::vector<ScanComponent> components;
};
ScanSignal scan_signal(const JointState &s, int scan_dn, const CouplingModel &m);

}  // namespace lesynth
