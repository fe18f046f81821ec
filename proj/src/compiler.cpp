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

#include "lesynth/compiler.hpp"

#include <cmath>

#include "lesynth/digest.hpp"
#include "lesynth/errors.hpp"
#include "lesynth/sim.hpp"

namespace lesynth {

namespace {
constexpr double kPi = 3.14159265358979323846;

double wrap_2pi(double phase) {
    double w = std::fmod(phase, 2.0 * kPi);
    if (w < 0.0) {
        w += 2.0 * kPi;
    }
    return w;
}
}  // namespace

const char *to_string(Direction d) {
    return d == Direction::clearing ? "clearing" : "generation";
}

Direction direction_from_string(std::string_view name) {
    if (name == "clearing") {
        return Direction::clearing;
    }
    if (name == "generation") {
        return Direction::generation;
    }
    throw InputError("unknown direction '" + std::string(name) + "'");
}

std::size_t PulseProgram::effective_size() const {
    std::size_t count = 0;
    for (const auto &p : pulses) {
        if (!p.noop) {
            ++count;
        }
    }
    return count;
}

ClearSolution solve_clear(std::complex<double> a, std::complex<double> b) {
    const double ma = std::abs(a);
    const double mb = std::abs(b);
    if (ma == 0.0) {
        return ClearSolution{0.0, 0.0, true};
    }
    const double theta = 2.0 * std::atan2(ma, mb);
    // phi makes the two contributions to a' interfere destructively; with
    // b = 0 the angle is a full pi and phi is immaterial (canonically 0).
    const double phi = mb == 0.0 ? 0.0 : std::arg(b) - std::arg(a) + 0.5 * kPi;
    return ClearSolution{theta, wrap_2pi(phi), false};
}

ClearSolution solve_clear_upper(std::complex<double> a, std::complex<double> b) {
    const double ma = std::abs(a);
    const double mb = std::abs(b);
    if (mb == 0.0) {
        return ClearSolution{0.0, 0.0, true};
    }
    const double theta = 2.0 * std::atan2(mb, ma);
    const double phi = ma == 0.0 ? 0.0 : std::arg(b) - std::arg(a) - 0.5 * kPi;
    return ClearSolution{theta, wrap_2pi(phi), false};
}

PulseProgram compile_clearing(const JointState &target, const CouplingModel &m) {
    m.validate();
    const int n_max = target.n_max();

    PulseProgram prog{
        {}, Direction::clearing, state_digest(target), model_digest(m), target, m};

    JointState state = target;
    const std::size_t pulse_limit = 2 * static_cast<std::size_t>(n_max + 1) + 1;

    auto emit = [&](const Pulse &pulse) {
        prog.pulses.push_back(pulse);
        if (!pulse.noop) {
            state = apply_pulse(state, pulse, m);
        }
        if (prog.pulses.size() > pulse_limit) {
            throw NumericError("clearing did not converge within the pulse budget");
        }
    };

    int level = state.max_occupied_level();
    while (level > 0 || (level == 0 && state.occupied(Spin::up, 0))) {
        const int k = level;

        // Carrier: merge |up,k> into |down,k>.
        const ClearSolution carrier =
            solve_clear_upper(state.amp(Spin::down, k), state.amp(Spin::up, k));
        if (carrier.trivial) {
            emit(Pulse{0, k, 0.0, 0.0, true});
        } else {
            emit(Pulse{0, k, carrier.theta, carrier.phi, false});
        }

        if (k == 0) {
            break;  // nothing below to transfer into
        }

        // Sideband: transfer |down,k> into |up,k-1>.
        const ClearSolution side =
            solve_clear(state.amp(Spin::down, k), state.amp(Spin::up, k - 1));
        if (side.trivial) {
            emit(Pulse{1, k, 0.0, 0.0, true});
        } else {
            emit(Pulse{1, k, side.theta, side.phi, false});
        }

        const int next = state.max_occupied_level();
        if (next >= k) {
            throw NumericError("clearing stalled at level " + std::to_string(k));
        }
        level = next;
    }

    if (fidelity_pure(state, JointState::ground(n_max)) < 1.0 - 1e-9) {
        throw NumericError("clearing finished away from the ground state");
    }
    return prog;
}

PulseProgram invert_program(const PulseProgram &p) {
    PulseProgram out = p;
    out.direction = p.direction == Direction::clearing ? Direction::generation
                                                       : Direction::clearing;
    out.pulses.assign(p.pulses.rbegin(), p.pulses.rend());
    for (auto &pulse : out.pulses) {
        if (!pulse.noop) {
            pulse.phase = wrap_2pi(pulse.phase + kPi);
        }
    }
    return out;
}

PulseProgram compile_generation(const JointState &target, const CouplingModel &m) {
    return invert_program(compile_clearing(target, m));
}

}  // namespace lesynth
