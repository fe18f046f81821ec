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

#include "lesynth/ladder.hpp"

#include <cmath>
#include <set>

#include "lesynth/errors.hpp"

namespace lesynth {

const char *to_string(Spin s) { return s == Spin::down ? "down" : "up"; }

Spin spin_from_string(std::string_view name) {
    if (name == "down") {
        return Spin::down;
    }
    if (name == "up") {
        return Spin::up;
    }
    throw InputError("unknown spin label '" + std::string(name) +
                     "' (expected \"down\" or \"up\")");
}

std::size_t JointState::index_of(Spin s, int n, int n_max) {
    return static_cast<std::size_t>(s == Spin::down ? 0 : n_max + 1) +
           static_cast<std::size_t>(n);
}

JointState::JointState(int n_max, std::vector<std::complex<double>> amps)
    : n_max_(n_max), amps_(std::move(amps)) {}

JointState JointState::ground(int n_max) {
    if (n_max < 0) {
        throw InputError("n_max must be nonnegative");
    }
    std::vector<std::complex<double>> amps(2 * (n_max + 1), 0.0);
    amps[0] = 1.0;
    return JointState(n_max, std::move(amps));
}

JointState JointState::from_amplitudes(int n_max,
                                       std::vector<std::complex<double>> amps) {
    if (n_max < 0) {
        throw InputError("n_max must be nonnegative");
    }
    if (amps.size() != static_cast<std::size_t>(2 * (n_max + 1))) {
        throw InputError("amplitude vector has wrong length for n_max");
    }
    double norm_sq = 0.0;
    for (const auto &a : amps) {
        if (!std::isfinite(a.real()) || !std::isfinite(a.imag())) {
            throw InputError("non-finite amplitude");
        }
        norm_sq += std::norm(a);
    }
    if (std::abs(norm_sq - 1.0) > 1e-9) {
        throw InputError("state vector is not normalized");
    }
    return JointState(n_max, std::move(amps));
}

std::complex<double> JointState::amp(Spin s, int n) const {
    if (n < 0 || n > n_max_) {
        throw InputError("Fock index out of range");
    }
    return amps_[index_of(s, n, n_max_)];
}

double JointState::norm() const {
    double norm_sq = 0.0;
    for (const auto &a : amps_) {
        norm_sq += std::norm(a);
    }
    return std::sqrt(norm_sq);
}

bool JointState::occupied(Spin s, int n) const {
    return std::abs(amp(s, n)) > kSupportEpsilon;
}

int JointState::max_occupied_level() const {
    for (int n = n_max_; n >= 0; --n) {
        if (occupied(Spin::down, n) || occupied(Spin::up, n)) {
            return n;
        }
    }
    return -1;
}

JointState JointState::padded(int new_n_max) const {
    if (new_n_max < n_max_) {
        throw InputError("padded() cannot shrink a state");
    }
    std::vector<std::complex<double>> amps(2 * (new_n_max + 1), 0.0);
    for (int n = 0; n <= n_max_; ++n) {
        amps[index_of(Spin::down, n, new_n_max)] = amps_[index_of(Spin::down, n, n_max_)];
        amps[index_of(Spin::up, n, new_n_max)] = amps_[index_of(Spin::up, n, n_max_)];
    }
    return JointState(new_n_max, std::move(amps));
}

JointState make_state(int n_max, const std::vector<AmplitudeEntry> &entries) {
    if (n_max < 0) {
        throw InputError("n_max must be nonnegative");
    }
    if (entries.empty()) {
        throw InputError("entry list is empty");
    }
    std::vector<std::complex<double>> amps(2 * (n_max + 1), 0.0);
    std::set<std::pair<int, int>> seen;
    for (const auto &e : entries) {
        if (e.n < 0 || e.n > n_max) {
            throw InputError("Fock index " + std::to_string(e.n) +
                             " out of range for n_max=" + std::to_string(n_max));
        }
        if (!std::isfinite(e.amplitude.real()) || !std::isfinite(e.amplitude.imag())) {
            throw InputError("non-finite amplitude at (" +
                             std::string(to_string(e.spin)) + "," +
                             std::to_string(e.n) + ")");
        }
        if (!seen.insert({static_cast<int>(e.spin), e.n}).second) {
            throw InputError("duplicate entry for (" +
                             std::string(to_string(e.spin)) + "," +
                             std::to_string(e.n) + ")");
        }
        amps[JointState::index_of(e.spin, e.n, n_max)] = e.amplitude;
    }
    double norm_sq = 0.0;
    for (const auto &a : amps) {
        norm_sq += std::norm(a);
    }
    if (norm_sq == 0.0) {
        throw InputError("all entries are zero");
    }
    const double inv = 1.0 / std::sqrt(norm_sq);
    for (auto &a : amps) {
        a *= inv;
    }
    return JointState::from_amplitudes(n_max, std::move(amps));
}

std::complex<double> overlap(const JointState &a, const JointState &b) {
    const int n_max = std::max(a.n_max(), b.n_max());
    std::complex<double> acc = 0.0;
    for (int n = 0; n <= n_max; ++n) {
        for (Spin s : {Spin::down, Spin::up}) {
            const std::complex<double> va = n <= a.n_max() ? a.amp(s, n) : 0.0;
            const std::complex<double> vb = n <= b.n_max() ? b.amp(s, n) : 0.0;
            acc += std::conj(va) * vb;
        }
    }
    return acc;
}

double fidelity_pure(const JointState &a, const JointState &b) {
    return std::norm(overlap(a, b));
}

double PopulationTable::sum() const {
    double acc = 0.0;
    for (double v : p) {
        acc += v;
    }
    return acc;
}

PopulationTable populations(const JointState &s) {
    PopulationTable table(s.n_max());
    for (std::size_t i = 0; i < s.raw().size(); ++i) {
        table.p[i] = std::norm(s.raw()[i]);
    }
    return table;
}

}  // namespace lesynth
