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
#include <string_view>
#include <vector>

namespace lesynth {

// Two-level (spin-1/2) internal state tensored with a truncated
// harmonic-oscillator (Fock) ladder. Amplitudes are stored densely over the
// 2*(n_max+1) basis states; n_max stays small in this toolkit so no sparse
// machinery is warranted.

enum class Spin { down = 0, up = 1 };

const char *to_string(Spin s);
Spin spin_from_string(std::string_view name);

struct AmplitudeEntry {
    Spin spin;
    int n;
    std::complex<double> amplitude;
};

class JointState {
   public:
    // Amplitudes with modulus at or below this threshold are treated as exact
    // zeros by support queries (the compiler's termination test relies on it).
    static constexpr double kSupportEpsilon = 1e-12;

    static JointState ground(int n_max);

    // Takes a raw amplitude vector (layout: all |down,n> then all |up,n>).
    // The vector must already be normalized to 1e-9; no renormalization.
    static JointState from_amplitudes(int n_max,
                                      std::vector<std::complex<double>> amps);

    int n_max() const { return n_max_; }
    std::size_t dim() const { return amps_.size(); }

    std::complex<double> amp(Spin s, int n) const;
    const std::vector<std::complex<double>> &raw() const { return amps_; }

    double norm() const;
    bool occupied(Spin s, int n) const;

    // Highest Fock index occupied in either spin, -1 for an all-zero vector
    // (which cannot occur for a validated state).
    int max_occupied_level() const;

    // Same state on a larger ladder, new amplitudes zero.
    JointState padded(int new_n_max) const;

    static std::size_t index_of(Spin s, int n, int n_max);

   private:
    JointState(int n_max, std::vector<std::complex<double>> amps);

    int n_max_;
    std::vector<std::complex<double>> amps_;
};

// Builds a normalized state from sparse entries. Unspecified amplitudes are
// zero. Rejects out-of-range indices, duplicate (spin, n) keys, non-finite
// amplitudes and all-zero entry lists.
JointState make_state(int n_max, const std::vector<AmplitudeEntry> &entries);

std::complex<double> overlap(const JointState &a, const JointState &b);

// |<a|b>|^2; invariant under a global phase of either argument. States of
// unequal n_max are compared with the shorter one zero-padded.
double fidelity_pure(const JointState &a, const JointState &b);

struct PopulationTable {
    int n_max = 0;
    std::vector<double> p;      // layout matches JointState
    std::vector<double> sigma;  // standard uncertainties, zero for exact states

    explicit PopulationTable(int n_max_arg)
        : n_max(n_max_arg),
          p(2 * (n_max_arg + 1), 0.0),
          sigma(2 * (n_max_arg + 1), 0.0) {}

    double &prob(Spin s, int n) { return p[JointState::index_of(s, n, n_max)]; }
    double prob(Spin s, int n) const { return p[JointState::index_of(s, n, n_max)]; }
    double &unc(Spin s, int n) { return sigma[JointState::index_of(s, n, n_max)]; }
    double unc(Spin s, int n) const { return sigma[JointState::index_of(s, n, n_max)]; }
    double sum() const;
};

PopulationTable populations(const JointState &s);

}  // namespace lesynth
