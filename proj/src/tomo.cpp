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

#include "lesynth/tomo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "lesynth/errors.hpp"
#include "lesynth/kernels/kernels.hpp"

namespace lesynth {

namespace {

constexpr double kPi = 3.14159265358979323846;

struct FitPair {
    int n_down;
    double ratio;  // |rate| / |rate of pair 0|
};

std::vector<FitPair> fit_pairs(const CouplingModel &m, int scan_dn, int n_pairs) {
    const int n_start = std::max(0, -scan_dn);
    const double base =
        std::abs(rabi_rate_pair(m, n_start, n_start + scan_dn));
    if (base < 1e-12 * m.omega0) {
        throw NumericError("first scan pair has zero rate; ratios undefined");
    }
    std::vector<FitPair> pairs;
    pairs.reserve(n_pairs);
    for (int k = 0; k < n_pairs; ++k) {
        const int n_down = n_start + k;
        pairs.push_back(FitPair{
            n_down, std::abs(rabi_rate_pair(m, n_down, n_down + scan_dn)) / base});
    }
    return pairs;
}

// Internal fit coordinates: [omega_base, rho = 1/tau, offset, C_0, S_0, ...]
// with the cosine/sine quadrature pair (C, S) instead of (A, phi); the
// reported polar form is recovered at the end. This keeps the A ~ 0 case
// regular during iteration.
class RabiModel {
   public:
    RabiModel(const RabiDataset &d, std::vector<FitPair> pairs)
        : times_(d.times), y_(d.p_down), pairs_(std::move(pairs)) {
        n_ = times_.size();
        k_ = pairs_.size();
        p_ = 3 + 2 * k_;
        sw_.resize(n_);
        if (d.shots > 0) {
            const double floor_sigma = 1.0 / (2.0 * d.shots);
            for (std::size_t i = 0; i < n_; ++i) {
                const double p = y_[i];
                const double sigma =
                    std::max(std::sqrt(std::max(p * (1.0 - p), 0.0) / d.shots),
                             floor_sigma);
                sw_[i] = 1.0 / sigma;
            }
        } else {
            std::fill(sw_.begin(), sw_.end(), 1.0);
        }
        cos_.resize(k_ * n_);
        sin_.resize(k_ * n_);
        env_.resize(n_);
        osc_.resize(n_);
        arg_.resize(n_);
    }

    std::size_t n() const { return n_; }
    std::size_t num_params() const { return p_; }
    const std::vector<FitPair> &pairs() const { return pairs_; }

    // Fills the trig/envelope tables for the given parameters.
    void tabulate(const Eigen::VectorXd &p) {
        const auto &kb = kernels::active_backend();
        for (std::size_t k = 0; k < k_; ++k) {
            const double w = p[0] * pairs_[k].ratio;
            for (std::size_t i = 0; i < n_; ++i) {
                arg_[i] = w * times_[i];
            }
            kb.sincos(arg_.data(), sin_.data() + k * n_, cos_.data() + k * n_, n_);
        }
        for (std::size_t i = 0; i < n_; ++i) {
            arg_[i] = p[1] * times_[i];
        }
        kb.exp_neg(arg_.data(), env_.data(), n_);
        for (std::size_t i = 0; i < n_; ++i) {
            double osc = 0.0;
            for (std::size_t k = 0; k < k_; ++k) {
                osc += p[3 + 2 * k] * cos_[k * n_ + i] +
                       p[4 + 2 * k] * sin_[k * n_ + i];
            }
            osc_[i] = osc;
        }
    }

    double model_at(const Eigen::VectorXd &p, std::size_t i) const {
        return p[2] + env_[i] * osc_[i];
    }

    double ssr(const Eigen::VectorXd &p) {
        tabulate(p);
        double acc = 0.0;
        for (std::size_t i = 0; i < n_; ++i) {
            const double r = sw_[i] * (y_[i] - model_at(p, i));
            acc += r * r;
        }
        return acc;
    }

    void residual_and_jacobian(const Eigen::VectorXd &p, Eigen::VectorXd &r,
                               Eigen::MatrixXd &jac) {
        tabulate(p);
        for (std::size_t i = 0; i < n_; ++i) {
            const double f = model_at(p, i);
            r[i] = sw_[i] * (y_[i] - f);
            double dfdw = 0.0;
            for (std::size_t k = 0; k < k_; ++k) {
                dfdw += pairs_[k].ratio *
                        (-p[3 + 2 * k] * sin_[k * n_ + i] +
                         p[4 + 2 * k] * cos_[k * n_ + i]);
            }
            dfdw *= env_[i] * times_[i];
            const double neg_sw = -sw_[i];
            jac(i, 0) = neg_sw * dfdw;
            jac(i, 1) = neg_sw * (-times_[i] * env_[i] * osc_[i]);
            jac(i, 2) = neg_sw;
            for (std::size_t k = 0; k < k_; ++k) {
                jac(i, 3 + 2 * k) = neg_sw * env_[i] * cos_[k * n_ + i];
                jac(i, 4 + 2 * k) = neg_sw * env_[i] * sin_[k * n_ + i];
            }
        }
    }

    // Weighted linear solve for (offset, C_k, S_k) at fixed omega and rho.
    Eigen::VectorXd linear_init(double omega, double rho) {
        Eigen::VectorXd p = Eigen::VectorXd::Zero(p_);
        p[0] = omega;
        p[1] = rho;
        tabulate(p);
        const std::size_t dim = 1 + 2 * k_;
        Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(dim, dim);
        Eigen::VectorXd rhs = Eigen::VectorXd::Zero(dim);
        Eigen::VectorXd row(dim);
        for (std::size_t i = 0; i < n_; ++i) {
            row[0] = 1.0;
            for (std::size_t k = 0; k < k_; ++k) {
                row[1 + 2 * k] = env_[i] * cos_[k * n_ + i];
                row[2 + 2 * k] = env_[i] * sin_[k * n_ + i];
            }
            const double w = sw_[i] * sw_[i];
            gram.noalias() += w * row * row.transpose();
            rhs.noalias() += (w * y_[i]) * row;
        }
        gram.diagonal().array() += 1e-12 * gram.trace() / dim;
        const Eigen::VectorXd sol = gram.ldlt().solve(rhs);
        p[2] = sol[0];
        for (std::size_t k = 0; k < k_; ++k) {
            p[3 + 2 * k] = sol[1 + 2 * k];
            p[4 + 2 * k] = sol[2 + 2 * k];
        }
        return p;
    }

    double unweighted_rms(const Eigen::VectorXd &p) {
        tabulate(p);
        double acc = 0.0;
        for (std::size_t i = 0; i < n_; ++i) {
            const double r = y_[i] - model_at(p, i);
            acc += r * r;
        }
        return std::sqrt(acc / static_cast<double>(n_));
    }

   private:
    const std::vector<double> &times_;
    const std::vector<double> &y_;
    std::vector<FitPair> pairs_;
    std::size_t n_ = 0, k_ = 0, p_ = 0;
    std::vector<double> sw_;
    std::vector<double> cos_, sin_, env_, osc_, arg_;
};

struct LmResult {
    Eigen::VectorXd p;
    double ssr = std::numeric_limits<double>::infinity();
    bool ok = false;
};

LmResult levenberg_marquardt(RabiModel &model, Eigen::VectorXd p0) {
    const std::size_t n = model.n();
    const std::size_t np = model.num_params();
    Eigen::VectorXd r(n);
    Eigen::MatrixXd jac(n, np);

    LmResult res;
    res.p = std::move(p0);
    res.ssr = model.ssr(res.p);
    if (!std::isfinite(res.ssr)) {
        return res;
    }

    double lambda = 1e-3;
    for (int iter = 0; iter < 250; ++iter) {
        model.residual_and_jacobian(res.p, r, jac);
        const Eigen::MatrixXd h = jac.transpose() * jac;
        const Eigen::VectorXd g = jac.transpose() * r;
        const double diag_floor = 1e-12 * (h.trace() / np + 1e-300);

        bool stepped = false;
        while (lambda < 1e10) {
            Eigen::MatrixXd damped = h;
            damped.diagonal() += lambda * (h.diagonal().array() + diag_floor).matrix();
            const Eigen::VectorXd delta = damped.ldlt().solve(-g);
            const Eigen::VectorXd trial = res.p + delta;
            const double trial_ssr = model.ssr(trial);
            if (std::isfinite(trial_ssr) && trial_ssr <= res.ssr) {
                const double gain = res.ssr - trial_ssr;
                res.p = trial;
                res.ssr = trial_ssr;
                lambda = std::max(lambda / 3.0, 1e-12);
                stepped = true;
                if (gain <= 1e-14 * (res.ssr + 1e-30)) {
                    res.ok = true;
                    return res;
                }
                break;
            }
            lambda *= 4.0;
        }
        if (!stepped) {
            res.ok = true;  // damping exhausted; current point is the optimum
            return res;
        }
    }
    res.ok = true;
    return res;
}

}  // namespace

double RabiFit::cos_amplitude(std::size_t k) const {
    return components[k].amplitude * std::cos(components[k].phase);
}

double RabiFit::cos_amplitude_sigma(std::size_t k) const {
    const std::size_t ia = 3 + 2 * k;
    const std::size_t ip = 4 + 2 * k;
    const double a = components[k].amplitude;
    const double ph = components[k].phase;
    const double ga = std::cos(ph);
    const double gp = -a * std::sin(ph);
    const double var = ga * ga * covariance(ia, ia) + gp * gp * covariance(ip, ip) +
                       2.0 * ga * gp * covariance(ia, ip);
    return std::sqrt(std::max(var, 0.0));
}

double rabi_signal(const RabiFit &fit, double t) {
    double p = fit.offset;
    const double env = std::isfinite(fit.tau) ? std::exp(-t / fit.tau) : 1.0;
    for (const auto &comp : fit.components) {
        p += comp.amplitude *
             std::cos(fit.omega_base * comp.freq_ratio * t + comp.phase) * env;
    }
    return std::min(1.0, std::max(0.0, p));
}

RabiFit fit_rabi(const RabiDataset &d, const CouplingModel &m, int n_pairs) {
    m.validate();
    if (n_pairs < 1 || n_pairs > 8) {
        throw InputError("n_pairs must be in [1, 8]");
    }
    const std::size_t np = 3 + 2 * static_cast<std::size_t>(n_pairs);
    if (d.times.size() < 4 * np) {
        throw InputError("need at least 4x(free parameter count) = " +
                         std::to_string(4 * np) + " data points");
    }
    if (d.times.size() != d.p_down.size()) {
        throw InputError("times and p_down must have equal length");
    }

    auto pairs = fit_pairs(m, d.scan_dn, n_pairs);
    const int n_start = std::max(0, -d.scan_dn);
    const double omega_pred =
        std::abs(rabi_rate_pair(m, n_start, n_start + d.scan_dn));
    const double span = d.times.back() - d.times.front();
    if (!(span > 0.0)) {
        throw InputError("degenerate time span");
    }

    RabiModel model(d, pairs);

    // Multi-start over omega_base: beat signals have local minima in
    // frequency, so a single start is not trustworthy. Runs that settle more
    // than 10% away from the calibrated prediction are discarded: when few
    // components carry amplitude, omega_base is identifiable only up to a
    // ratio reassignment, and the window pins the physical assignment (the
    // nearest wrong assignment sits >= 16% away for the ratios used here,
    // while the estimation noise on omega_base is well under 1%).
    constexpr int kStarts = 16;
    LmResult best;
    double best_omega = 0.0;
    for (int j = 0; j < kStarts; ++j) {
        const double omega = omega_pred * (0.8 + 0.4 * j / (kStarts - 1.0));
        Eigen::VectorXd p0 = model.linear_init(omega, 1.0 / span);
        LmResult run = levenberg_marquardt(model, std::move(p0));
        if (!run.ok || !std::isfinite(run.ssr)) {
            continue;
        }
        if (run.p[0] < 0.9 * omega_pred || run.p[0] > 1.1 * omega_pred) {
            continue;
        }
        const bool better =
            run.ssr < best.ssr * (1.0 - 1e-12) ||
            (std::abs(run.ssr - best.ssr) <= 1e-12 * std::max(best.ssr, 1e-300) &&
             run.p[0] < best_omega);
        if (!best.ok || better) {
            best = std::move(run);
            best_omega = best.p[0];
        }
    }
    if (!best.ok) {
        throw NumericError(
            "rabi fit did not converge inside the calibration window "
            "(omega_base within 10% of the model prediction); recalibrate the "
            "coupling model if the data's frequency scale has drifted");
    }

    // Covariance of the internal parameters from the final Jacobian. Exact
    // datasets carry no sampling uncertainty, so only the rank information is
    // kept for them.
    Eigen::VectorXd r(model.n());
    Eigen::MatrixXd jac(model.n(), np);
    model.residual_and_jacobian(best.p, r, jac);
    const Eigen::MatrixXd h = jac.transpose() * jac;
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(h);
    const bool degenerate = cod.rank() < static_cast<Eigen::Index>(np);
    const Eigen::MatrixXd cov_internal =
        d.shots > 0 ? Eigen::MatrixXd(cod.pseudoInverse())
                    : Eigen::MatrixXd(Eigen::MatrixXd::Zero(np, np));

    RabiFit fit;
    fit.scan_dn = d.scan_dn;
    fit.omega_base = best.p[0];
    fit.offset = best.p[2];
    fit.degenerate = degenerate;
    fit.residual_rms = model.unweighted_rms(best.p);

    const double rho = best.p[1];
    const bool no_decay = !(rho * span > 1e-9);
    fit.tau = no_decay ? std::numeric_limits<double>::infinity() : 1.0 / rho;

    // Polar components and the jacobian of the reparametrization
    // (C, S) -> (A, phi), rho -> tau.
    Eigen::MatrixXd gmat = Eigen::MatrixXd::Zero(np, np);
    gmat(0, 0) = 1.0;
    gmat(1, 1) = no_decay ? 0.0 : -1.0 / (rho * rho);
    gmat(2, 2) = 1.0;
    for (int k = 0; k < n_pairs; ++k) {
        const double c = best.p[3 + 2 * k];
        const double s = best.p[4 + 2 * k];
        const double a = std::hypot(c, s);
        RabiFitComponent comp;
        comp.n_down = pairs[k].n_down;
        comp.freq_ratio = pairs[k].ratio;
        comp.amplitude = a;
        comp.phase = std::atan2(-s, c);
        fit.components.push_back(comp);
        if (a > 1e-300) {
            gmat(3 + 2 * k, 3 + 2 * k) = c / a;
            gmat(3 + 2 * k, 4 + 2 * k) = s / a;
            gmat(4 + 2 * k, 3 + 2 * k) = s / (a * a);
            gmat(4 + 2 * k, 4 + 2 * k) = -c / (a * a);
        } else {
            gmat(3 + 2 * k, 3 + 2 * k) = 1.0;
            gmat(4 + 2 * k, 4 + 2 * k) = 1.0;
            fit.degenerate = true;
        }
    }
    fit.covariance = gmat * cov_internal * gmat.transpose();
    return fit;
}

PopulationInversion invert_populations(const std::vector<RabiFit> &fits, int n_max) {
    if (fits.empty()) {
        throw InputError("no fits provided");
    }
    if (n_max < 0) {
        throw InputError("n_max must be nonnegative");
    }
    const int dim = 2 * (n_max + 1);

    std::vector<Eigen::VectorXd> rows;
    std::vector<double> rhs;
    std::vector<double> sigmas;

    for (const auto &fit : fits) {
        // Amplitude constraints: A_k cos(phi_k) = (p_down - p_up)/2.
        for (std::size_t k = 0; k < fit.components.size(); ++k) {
            const int n_down = fit.components[k].n_down;
            const int n_up = n_down + fit.scan_dn;
            Eigen::VectorXd row = Eigen::VectorXd::Zero(dim);
            bool touches = false;
            if (n_down <= n_max) {
                row[JointState::index_of(Spin::down, n_down, n_max)] += 0.5;
                touches = true;
            }
            if (n_up >= 0 && n_up <= n_max) {
                row[JointState::index_of(Spin::up, n_up, n_max)] -= 0.5;
                touches = true;
            }
            if (!touches) {
                continue;  // pair entirely above the requested ladder
            }
            rows.push_back(std::move(row));
            rhs.push_back(fit.cos_amplitude(k));
            sigmas.push_back(fit.cos_amplitude_sigma(k));
        }
        // Offset constraint: sum over coupled pairs of (p_down + p_up)/2 plus
        // the down-spin levels the scan cannot move.
        Eigen::VectorXd row = Eigen::VectorXd::Zero(dim);
        std::vector<bool> down_covered(n_max + 1, false);
        for (const auto &comp : fit.components) {
            const int n_down = comp.n_down;
            const int n_up = n_down + fit.scan_dn;
            if (n_down <= n_max) {
                row[JointState::index_of(Spin::down, n_down, n_max)] += 0.5;
                down_covered[n_down] = true;
            }
            if (n_up >= 0 && n_up <= n_max) {
                row[JointState::index_of(Spin::up, n_up, n_max)] += 0.5;
            }
        }
        for (int n = 0; n < std::min(std::max(0, -fit.scan_dn), n_max + 1); ++n) {
            if (!down_covered[n]) {
                row[JointState::index_of(Spin::down, n, n_max)] += 1.0;
            }
        }
        rows.push_back(std::move(row));
        rhs.push_back(fit.offset);
        sigmas.push_back(std::sqrt(std::max(fit.covariance(2, 2), 0.0)));
    }

    const int n_rows = static_cast<int>(rows.size());
    Eigen::MatrixXd a(n_rows, dim);
    Eigen::VectorXd b(n_rows);
    Eigen::VectorXd w(n_rows);
    for (int i = 0; i < n_rows; ++i) {
        a.row(i) = rows[i];
        b[i] = rhs[i];
        const double sigma = std::max(sigmas[i], 1e-8);
        w[i] = 1.0 / (sigma * sigma);
    }

    // Rank check on the weighted system plus the unit-sum row; report the
    // basis states a deficient system cannot pin down.
    Eigen::MatrixXd a_ext(n_rows + 1, dim);
    a_ext.topRows(n_rows) = w.cwiseSqrt().asDiagonal() * a;
    a_ext.row(n_rows).setOnes();
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(a_ext, Eigen::ComputeFullV);
    const double tol = 1e-10 * svd.singularValues()[0] *
                       std::max(a_ext.rows(), a_ext.cols());
    int rank = 0;
    for (int i = 0; i < svd.singularValues().size(); ++i) {
        if (svd.singularValues()[i] > tol) {
            ++rank;
        }
    }
    if (rank < dim) {
        std::string levels;
        for (int j = rank; j < dim; ++j) {
            const Eigen::VectorXd v = svd.matrixV().col(j);
            for (int i = 0; i < dim; ++i) {
                if (std::abs(v[i]) > 1e-6) {
                    const Spin s = i <= n_max ? Spin::down : Spin::up;
                    const int n = i <= n_max ? i : i - (n_max + 1);
                    const std::string tag =
                        std::string("(") + to_string(s) + "," + std::to_string(n) + ")";
                    if (levels.find(tag) == std::string::npos) {
                        levels += (levels.empty() ? "" : " ") + tag;
                    }
                }
            }
        }
        throw InputError("population inversion underdetermined for n_max=" +
                         std::to_string(n_max) + "; unconstrained levels: " + levels);
    }

    // Equality-constrained weighted least squares via the KKT system.
    const Eigen::MatrixXd h = a.transpose() * w.asDiagonal() * a;
    const Eigen::VectorXd g = a.transpose() * (w.asDiagonal() * b);
    Eigen::MatrixXd kkt = Eigen::MatrixXd::Zero(dim + 1, dim + 1);
    kkt.topLeftCorner(dim, dim) = h;
    kkt.topRightCorner(dim, 1).setOnes();
    kkt.bottomLeftCorner(1, dim).setOnes();
    Eigen::VectorXd kkt_rhs = Eigen::VectorXd::Zero(dim + 1);
    kkt_rhs.head(dim) = g;
    kkt_rhs[dim] = 1.0;
    const Eigen::VectorXd sol = kkt.fullPivLu().solve(kkt_rhs);
    const Eigen::VectorXd x = sol.head(dim);

    const Eigen::MatrixXd kkt_inv = kkt.fullPivLu().inverse();
    const Eigen::MatrixXd proj = kkt_inv.topLeftCorner(dim, dim);
    const Eigen::MatrixXd cov = proj * h * proj.transpose();

    PopulationInversion out{PopulationTable(n_max), {}};
    out.unprojected.assign(x.data(), x.data() + dim);

    // Nonnegativity by projection, then renormalize.
    double total = 0.0;
    for (int i = 0; i < dim; ++i) {
        out.table.p[i] = std::max(x[i], 0.0);
        total += out.table.p[i];
    }
    if (total <= 0.0) {
        throw NumericError("population projection collapsed to zero");
    }
    for (int i = 0; i < dim; ++i) {
        out.table.p[i] /= total;
        out.table.sigma[i] = std::sqrt(std::max(cov(i, i), 0.0));
    }
    return out;
}

FringeFit fringe_contrast(const FringeDataset &d) {
    if (d.phases.size() < 8) {
        throw InputError("fringe fit needs at least 8 phase points");
    }
    if (d.phases.size() != d.p_down.size()) {
        throw InputError("phases and p_down must have equal length");
    }
    const auto [mn, mx] = std::minmax_element(d.phases.begin(), d.phases.end());
    if (*mx - *mn < 0.875 * 2.0 * kPi) {
        throw InputError("fringe phases must span (nearly) a full turn");
    }

    const std::size_t n = d.phases.size();
    Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(3, 3);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(3);
    Eigen::Vector3d row;
    for (std::size_t i = 0; i < n; ++i) {
        row << 1.0, std::cos(d.phases[i]), std::sin(d.phases[i]);
        double wgt = 1.0;
        if (d.shots > 0) {
            const double p = d.p_down[i];
            const double sigma =
                std::max(std::sqrt(std::max(p * (1.0 - p), 0.0) / d.shots),
                         1.0 / (2.0 * d.shots));
            wgt = 1.0 / (sigma * sigma);
        }
        gram.noalias() += wgt * row * row.transpose();
        rhs.noalias() += wgt * d.p_down[i] * row;
    }
    const Eigen::Vector3d sol = gram.ldlt().solve(rhs);
    // An exact dataset (shots == 0) carries no sampling uncertainty; the
    // unit-weight covariance would be a meaningless formal error.
    Eigen::Matrix3d cov = Eigen::Matrix3d::Zero();
    if (d.shots > 0) {
        cov = gram.inverse();
    }

    const double a = sol[1];
    const double b = sol[2];
    const double half = std::hypot(a, b);

    FringeFit fit;
    fit.offset = sol[0];
    fit.contrast = 2.0 * half;
    fit.phase0 = std::atan2(b, a);
    fit.sigma_offset = std::sqrt(std::max(cov(0, 0), 0.0));
    if (half > 1e-300) {
        const double da = a / half;
        const double db = b / half;
        fit.sigma_contrast = 2.0 * std::sqrt(std::max(
            da * da * cov(1, 1) + db * db * cov(2, 2) + 2.0 * da * db * cov(1, 2),
            0.0));
        const double pa = -b / (half * half);
        const double pb = a / (half * half);
        fit.sigma_phase0 = std::sqrt(std::max(
            pa * pa * cov(1, 1) + pb * pb * cov(2, 2) + 2.0 * pa * pb * cov(1, 2),
            0.0));
    } else {
        fit.sigma_contrast = 2.0 * std::sqrt(std::max(cov(1, 1) + cov(2, 2), 0.0));
        fit.sigma_phase0 = kPi;
    }
    return fit;
}

FidelityReport fidelity_estimate(const PopulationTable &pops, double coh_re,
                                 double coh_sigma, const JointState &target) {
    std::vector<std::pair<Spin, int>> support;
    for (int n = 0; n <= target.n_max(); ++n) {
        for (Spin s : {Spin::down, Spin::up}) {
            if (target.occupied(s, n)) {
                support.push_back({s, n});
            }
        }
    }
    if (support.size() != 2) {
        throw InputError("fidelity estimate requires a two-term target state");
    }
    const std::complex<double> a1 = target.amp(support[0].first, support[0].second);
    const std::complex<double> a2 = target.amp(support[1].first, support[1].second);
    const std::complex<double> rel = std::conj(a1) * a2;
    if (std::abs(std::imag(rel)) > 1e-9 * std::abs(rel)) {
        throw InputError("two-term target must have real relative amplitudes");
    }
    const double alpha = std::abs(a1);
    const double beta = std::abs(a2);

    auto level_prob = [&](Spin s, int n) {
        if (n > pops.n_max) {
            throw InputError("population table does not cover the target support");
        }
        return std::make_pair(pops.prob(s, n), pops.unc(s, n));
    };
    const auto [rho11, s11] = level_prob(support[0].first, support[0].second);
    const auto [rho22, s22] = level_prob(support[1].first, support[1].second);

    if (std::abs(coh_re) > std::sqrt(rho11 * rho22) + 1e-12) {
        throw NumericError("coherence exceeds sqrt(rho11*rho22); unphysical");
    }

    FidelityReport rep;
    rep.rho11 = rho11;
    rep.rho22 = rho22;
    rep.coh_re = coh_re;
    rep.f = alpha * alpha * rho11 + beta * beta * rho22 + 2.0 * alpha * beta * coh_re;
    rep.sigma_f = std::sqrt(std::pow(alpha * alpha * s11, 2) +
                            std::pow(beta * beta * s22, 2) +
                            std::pow(2.0 * alpha * beta * coh_sigma, 2));
    return rep;
}

}  // namespace lesynth
