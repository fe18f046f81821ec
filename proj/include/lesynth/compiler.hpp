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

#include <complex>
#include <string>
#include <vector>

#include "lesynth/coupling.hpp"
#include "lesynth/ladder.hpp"

namespace lesynth {

// Pulse-sequence synthesis by ladder clearing.
//
// To generate a target joint state from |down,0>, first solve the inverse
// problem: walk the occupied levels from the top down and, per level k, merge
// |up,k> into |down,k> with a carrier rotation, then transfer |down,k> into
// |up,k-1> with a first-sideband rotation. Each rotation is solved from the
// amplitudes of the state re-simulated up to that point, since every pulse
// also rotates all other coupled pairs at ratio-scaled angles. |down,0> is a
// fixed point of the sideband step (its partner level does not exist), so the
// walk terminates there. Running the recorded sequence backwards with every
// phase advanced by pi generates the target from the ground state.

enum class Direction { clearing, generation };

const char *to_string(Direction d);
Direction direction_from_string(std::string_view name);

struct PulseProgram {
    std::vector<Pulse> pulses;  // execution order
    Direction direction = Direction::clearing;
    std::string target_digest;
    std::string model_digest;

    // Embedded compile-time inputs; the digests above refer to these and are
    // re-verified on load and on execution.
    JointState target;
    CouplingModel model;

    std::size_t effective_size() const;
};

// Rotation that zeroes `a` of the ordered pair (a, b) under the fixed
// convention
//   a' = cos(theta/2) a - i e^{-i phi} sin(theta/2) b
//   b' = -i e^{+i phi} sin(theta/2) a + cos(theta/2) b
// leaving |b'| = sqrt(|a|^2 + |b|^2). `trivial` is set when a is already
// zero (nothing to clear), including the degenerate both-zero case.
struct ClearSolution {
    double theta = 0.0;
    double phi = 0.0;
    bool trivial = false;
};

ClearSolution solve_clear(std::complex<double> a, std::complex<double> b);

// Mirror problem: zero `b` of the ordered pair (a, b) under the same
// convention (used by the carrier step, which clears the up side).
ClearSolution solve_clear_upper(std::complex<double> a, std::complex<double> b);

// Program that maps `target` to |down,0> with fidelity >= 1 - 1e-9 under
// noiseless simulation. Canonical shape: per level, carrier then sideband,
// with explicit zero-area no-ops keeping the alternation intact.
PulseProgram compile_clearing(const JointState &target, const CouplingModel &m);

// Reversed pulse order, each phase shifted by pi (areas unchanged), direction
// flag flipped. Exact inverse of the original under the fixed convention.
PulseProgram invert_program(const PulseProgram &p);

// invert_program(compile_clearing(target, m)).
PulseProgram compile_generation(const JointState &target, const CouplingModel &m);

}  // namespace lesynth
