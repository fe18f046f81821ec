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

#include <Eigen/Dense>
#include <vector>

#include "lesynth/coupling.hpp"
#include "lesynth/ladder.hpp"
#include "lesynth/sim.hpp"

namespace lesynth {

// Analysis pipeline: recover populations, one targeted coherence, and a
// fidelity from measurement records.
//
// A Rabi record is fit to
//   P(t) = offset + sum_k A_k cos(omega_base * r_k * t + phi_k) * exp(-t/tau)
// where the frequency ratios r_k are pinned by the coupling model and only
// the overall scale omega_base floats. The signed cosine-quadrature
// amplitude A_k cos(phi_k) of pair k measures (p_down - p_up)/2 for that
// pair; sine-quadrature content is absorbed by phi_k and deliberately
// excluded from population inference (valid when the scan couplings do not
// connect coherent amplitude pairs, which holds for the targets here).

struct RabiFitComponent {
    int n_down = 0;       // down-side Fock index of the pair
    double amplitude = 0.0;  // A_k >= 0
    double phase = 0.0;      // phi_k, rad
    double freq_ratio = 1.0; // r_k, fixed by the model
};

struct RabiFit {
    int scan_dn = 0;
    double omega_base = 0.0;  // rad/s
    double tau = 0.0;         // s; +inf when no decay is detected
    double offset = 0.0;
    std::vector<RabiFitComponent> components;
    double residual_rms = 0.0;  // unweighted RMS of y - f
    bool degenerate = false;    // Jacobian rank-deficient at the optimum

    // Covariance over the reported free parameters, ordered
    // [omega_base, tau, offset, A_0, phi_0, A_1, phi_1, ...].
    Eigen::MatrixXd covariance;

    // Signed cosine-quadrature amplitude of component k.
    double cos_amplitude(std::size_t k) const;
    double cos_amplitude_sigma(std::size_t k) const;
};

// Fit model evaluated at t, clipped to [0, 1] (reporting-time clip only; the
// fitter itself never clips).
double rabi_signal(const RabiFit &fit, double t);

// Weighted damped-multi-cosine fit (Levenberg-Marquardt with a 16-point
// omega_base multi-start grid spanning +-20% of the model prediction).
// Weights come from per-point binomial sigma floored at 1/(2*shots); exact
// datasets (shots == 0) are fit unweighted. The accepted omega_base must
// land within 10% of the prediction; sparse spectra leave the scale
// identifiable only up to a ratio-slot reassignment, which the window
// resolves in favor of the calibrated assignment.
RabiFit fit_rabi(const RabiDataset &d, const CouplingModel &m, int n_pairs);

struct PopulationInversion {
    PopulationTable table;            // nonnegative, renormalized to sum 1
    std::vector<double> unprojected;  // raw least-squares solution
};

// Stacks the amplitude and offset constraints of all provided fits with the
// unit-sum condition into one constrained weighted least-squares problem.
// Fits for at least scan_dn in {0, +1} are needed to determine every level.
PopulationInversion invert_populations(const std::vector<RabiFit> &fits, int n_max);

struct FringeFit {
    double contrast = 0.0;  // peak-to-peak, >= 0
    double offset = 0.0;
    double phase0 = 0.0;
    double sigma_contrast = 0.0;
    double sigma_offset = 0.0;
    double sigma_phase0 = 0.0;
};

// Least-squares fit of offset + (contrast/2) cos(phase - phase0). Needs at
// least 8 points covering (almost) a full turn.
FringeFit fringe_contrast(const FringeDataset &d);

struct FidelityReport {
    double f = 0.0;
    double sigma_f = 0.0;
    double rho11 = 0.0;   // population of the target's first basis state
    double rho22 = 0.0;   // population of the second
    double coh_re = 0.0;  // real off-diagonal between them
};

// F = alpha^2 rho11 + beta^2 rho22 + 2 alpha beta coh_re for a two-term
// target alpha|s1,n1> + beta|s2,n2> with real coefficients. Rejects
// |coh_re| > sqrt(rho11 rho22) as unphysical.
FidelityReport fidelity_estimate(const PopulationTable &pops, double coh_re,
                                 double coh_sigma, const JointState &target);

}  // namespace lesynth
