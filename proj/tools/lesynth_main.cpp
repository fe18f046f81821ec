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

// Command-line surface. Subcommands: compile, simulate, tomo, fringe,
// reproduce. Exit codes: 0 success, 2 input error, 3 numeric failure.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "lesynth/digest.hpp"
#include "lesynth/errors.hpp"
#include "lesynth/io.hpp"
#include "lesynth/reproduce.hpp"
#include "lesynth/rng.hpp"
#include "lesynth/tomo.hpp"

using namespace lesynth;

namespace {

constexpr double kPi = 3.14159265358979323846;

// Accepts plain radians ("1.5708") or multiples of pi ("0.5pi", "pi").
double parse_angle(const std::string &text) {
    std::string t = text;
    double scale = 1.0;
    if (t.size() >= 2 && t.substr(t.size() - 2) == "pi") {
        scale = kPi;
        t = t.substr(0, t.size() - 2);
        if (t.empty()) {
            t = "1";
        }
    }
    try {
        std::size_t used = 0;
        const double value = std::stod(t, &used);
        if (used != t.size()) {
            throw InputError("cannot parse angle '" + text + "'");
        }
        return value * scale;
    } catch (const std::logic_error &) {
        throw InputError("cannot parse angle '" + text + "'");
    }
}

struct ModelFlags {
    std::optional<double> eta;
    std::vector<double> calibrate;  // ratio, n_a, n_b
    double omega0 = kDefaultOmega0;
    double trap_freq = 2.9e6;
    double hyperfine_split = 1.25e9;

    void attach(CLI::App *cmd) {
        auto *eta_opt = cmd->add_option("--eta", eta, "Lamb-Dicke parameter");
        auto *cal_opt = cmd->add_option(
            "--calibrate-ratio", calibrate,
            "RATIO N_A N_B: choose eta so the first-sideband rate ratio "
            "(N_A,1)/(N_B,1) equals RATIO")
                            ->expected(3);
        eta_opt->excludes(cal_opt);
        cmd->add_option("--omega0", omega0, "base Rabi frequency, rad/s");
        cmd->add_option("--trap-freq", trap_freq, "trap frequency metadata, Hz");
        cmd->add_option("--hyperfine-split", hyperfine_split,
                        "hyperfine splitting metadata, Hz");
    }

    CouplingModel build() const {
        CouplingModel m;
        m.omega0 = omega0;
        m.trap_freq = trap_freq;
        m.hyperfine_split = hyperfine_split;
        if (eta && !calibrate.empty()) {
            throw InputError("pass exactly one of --eta / --calibrate-ratio");
        }
        if (eta) {
            m.eta = *eta;
        } else if (!calibrate.empty()) {
            m.eta = eta_from_ratio(
                calibrate[0],
                PairSpec{static_cast<int>(std::lround(calibrate[1])), 1},
                PairSpec{static_cast<int>(std::lround(calibrate[2])), 1});
        } else {
            throw InputError("pass exactly one of --eta / --calibrate-ratio");
        }
        m.validate();
        return m;
    }
};

struct NoiseFlags {
    std::optional<double> decay_osc;
    double prep_error = 0.0;
    double amp_jitter = 0.0;
    double phase_jitter = 0.0;
    std::uint64_t seed = 0;
    bool per_component = false;

    void attach(CLI::App *cmd) {
        cmd->add_option("--decay-osc", decay_osc,
                        "1/e envelope time in reference oscillation periods");
        cmd->add_option("--prep-error", prep_error,
                        "probability the initial state missed (down,0)");
        cmd->add_option("--amp-jitter", amp_jitter,
                        "relative sigma of per-pulse area error");
        cmd->add_option("--phase-jitter", phase_jitter,
                        "sigma of per-pulse phase error, rad");
        cmd->add_option("--seed", seed, "random seed");
        cmd->add_flag("--per-component-decay", per_component,
                      "each component decays after decay-osc of its own periods");
    }

    NoiseModel build() const {
        NoiseModel n;
        n.decay_osc = decay_osc;
        n.prep_error = prep_error;
        n.amp_jitter = amp_jitter;
        n.phase_jitter = phase_jitter;
        n.seed = seed;
        n.per_component_decay = per_component;
        n.validate();
        return n;
    }
};

std::vector<double> scan_time_grid(const CouplingModel &m, int scan_dn, int points,
                                   double periods) {
    if (points < 2) {
        throw InputError("need at least 2 scan points");
    }
    const int n_start = std::max(0, -scan_dn);
    const double rate = std::abs(rabi_rate_pair(m, n_start, n_start + scan_dn));
    if (rate <= 0.0) {
        throw NumericError("scan reference rate is zero");
    }
    const double span = periods * 2.0 * kPi / rate;
    std::vector<double> times(points);
    for (int i = 0; i < points; ++i) {
        times[i] = span * i / (points - 1.0);
    }
    return times;
}

// The derivation-order pulse table (the canonical step labels run in the
// clearing direction; a generation document stores the same pulses reversed).
void print_pulse_table(const PulseProgram &prog) {
    const PulseProgram table = prog.direction == Direction::clearing
                                   ? prog
                                   : invert_program(prog);
    std::printf("step  type      ref  area/pi   phase/rad\n");
    int step = 0;
    for (const auto &p : table.pulses) {
        if (p.noop) {
            continue;
        }
        ++step;
        std::printf("%-5d %-9s %-4d %-9.4f %-9.4f\n", step,
                    p.delta_n == 0 ? "carrier" : "sideband", p.ref_pair,
                    p.area / kPi, p.phase);
    }
    if (step == 0) {
        std::printf("(empty program)\n");
    }
}

// Resolve a state either from a target spec or from simulating a program.
// Program sources carry their own coupling model; mixing it with explicit
// model flags would silently analyze with a model the program was not
// compiled for, so that combination is rejected.
JointState load_source_state(const std::string &state_path,
                             const std::string &program_path,
                             const CouplingModel *&model_out,
                             std::optional<CouplingModel> &model_store,
                             std::optional<JointState> &target_store) {
    if (!state_path.empty() && !program_path.empty()) {
        throw InputError("pass only one of --state / --program");
    }
    if (!state_path.empty()) {
        JointState s = read_target_file(state_path);
        target_store = s;
        return s;
    }
    if (!program_path.empty()) {
        if (model_out != nullptr) {
            throw InputError("--program embeds its coupling model; drop "
                             "--eta / --calibrate-ratio");
        }
        const PulseProgram prog = read_program_file(program_path);
        model_store = prog.model;
        model_out = &*model_store;
        target_store = prog.target;
        const JointState start = prog.direction == Direction::generation
                                     ? JointState::ground(prog.target.n_max())
                                     : prog.target;
        return run_program(start, prog, prog.model).back();
    }
    throw InputError("pass one of --state / --program");
}

int cmd_compile(const std::string &target_path, const ModelFlags &mf,
                const std::string &out_path, const std::string &direction) {
    const CouplingModel model = mf.build();
    const JointState target = read_target_file(target_path);
    const Direction dir = direction_from_string(direction);
    const PulseProgram prog = dir == Direction::generation
                                  ? compile_generation(target, model)
                                  : compile_clearing(target, model);
    std::printf("eta = %.6f, omega0 = %g rad/s\n", model.eta, model.omega0);
    std::printf("%s program: %zu effective pulses\n", to_string(prog.direction),
                prog.effective_size());
    print_pulse_table(prog);
    if (!out_path.empty()) {
        write_program_file(out_path, prog);
        std::printf("wrote %s\n", out_path.c_str());
    }
    return 0;
}

int cmd_simulate(const std::string &program_path, const std::string &trajectory_csv,
                 const NoiseFlags &nf, bool force) {
    const PulseProgram prog = read_program_file(program_path);
    const NoiseModel noise = nf.build();
    PulseProgram to_run = prog;
    if (noise.amp_jitter > 0.0 || noise.phase_jitter > 0.0) {
        to_run = perturb_program(prog, noise);
    }
    const JointState start = prog.direction == Direction::generation
                                 ? JointState::ground(prog.target.n_max())
                                 : prog.target;
    const auto trajectory = run_program(start, to_run, prog.model, force);
    if (!trajectory_csv.empty()) {
        write_trajectory_csv(trajectory_csv, trajectory);
        std::printf("wrote %s (%zu steps)\n", trajectory_csv.c_str(),
                    trajectory.size());
    }
    const JointState &reference = prog.direction == Direction::generation
                                      ? prog.target
                                      : JointState::ground(prog.target.n_max());
    std::printf("final fidelity vs %s: %.12f\n",
                prog.direction == Direction::generation ? "target" : "ground state",
                fidelity_pure(trajectory.back(), reference));
    return 0;
}

int cmd_tomo(const std::string &state_path, const std::string &program_path,
             const ModelFlags &mf, const NoiseFlags &nf, int shots, int points,
             double periods, std::vector<int> deltas,
             const std::vector<std::string> &csv_inputs,
             const std::string &out_prefix) {
    std::optional<CouplingModel> model_store;
    std::optional<JointState> target_store;
    const CouplingModel *model_ptr = nullptr;
    std::optional<CouplingModel> flag_model;
    if (mf.eta || !mf.calibrate.empty()) {
        flag_model = mf.build();
        model_ptr = &*flag_model;
    }

    std::vector<RabiFit> fits;
    int n_max = 3;

    if (!csv_inputs.empty()) {
        if (model_ptr == nullptr) {
            throw InputError("--data requires an explicit model (--eta or "
                             "--calibrate-ratio)");
        }
        for (const auto &spec : csv_inputs) {
            const auto colon = spec.find(':');
            if (colon == std::string::npos) {
                throw InputError("--data expects DELTA:FILE, got '" + spec + "'");
            }
            const int scan_dn = std::stoi(spec.substr(0, colon));
            const RabiDataset d = read_rabi_csv(spec.substr(colon + 1), scan_dn);
            fits.push_back(fit_rabi(d, *model_ptr, std::min(n_max + 1, 8)));
        }
    } else {
        const JointState source = load_source_state(
            state_path, program_path, model_ptr, model_store, target_store);
        if (model_ptr == nullptr) {
            throw InputError("pass --eta or --calibrate-ratio (or --program, "
                             "which embeds its model)");
        }
        n_max = source.n_max();
        const NoiseModel noise = nf.build();
        for (std::size_t i = 0; i < deltas.size(); ++i) {
            const int scan_dn = deltas[i];
            const auto times = scan_time_grid(*model_ptr, scan_dn, points, periods);
            NoiseModel point_noise = noise;
            point_noise.seed = Rng::subseed(noise.seed, 1000 + i);
            const RabiDataset d = simulate_rabi_scan(source, scan_dn, times,
                                                     point_noise, *model_ptr, shots);
            const std::string tag =
                scan_dn == 0 ? "0" : (scan_dn > 0 ? "p" : "m") +
                                         std::to_string(std::abs(scan_dn));
            write_scan_csv(out_prefix + "_rabi_dn" + tag + ".csv", d.times,
                           d.p_down, d.shots);
            RabiFit fit = fit_rabi(d, *model_ptr, std::min(n_max + 1, 8));
            write_text_file(out_prefix + "_fit_dn" + tag + ".json",
                            rabi_fit_to_json(fit).dump(2) + "\n");
            fits.push_back(std::move(fit));
        }
    }

    const PopulationInversion inv = invert_populations(fits, n_max);
    const std::string pop_path = out_prefix + "_populations.csv";
    write_population_csv(pop_path, inv.table);
    std::printf("wrote %s\n", pop_path.c_str());
    std::printf("spin  n  p            sigma\n");
    for (Spin s : {Spin::down, Spin::up}) {
        for (int n = 0; n <= n_max; ++n) {
            std::printf("%-5s %-2d %-12.6f %-12.6f\n", to_string(s), n,
                        inv.table.prob(s, n), inv.table.unc(s, n));
        }
    }
    if (target_store) {
        double acc = 0.0;
        for (int n = 0; n <= target_store->n_max() && n <= n_max; ++n) {
            for (Spin s : {Spin::down, Spin::up}) {
                if (target_store->occupied(s, n)) {
                    acc += inv.table.prob(s, n);
                }
            }
        }
        std::printf("target-state probability: %.4f\n", acc);
    }
    return 0;
}

int cmd_fringe(const std::string &state_path, const std::string &program_path,
               const ModelFlags &mf, const std::string &area_text, int phase_points,
               bool mixture, double coh_scale, int shots, std::uint64_t seed,
               const std::string &cal_area_text, const std::string &out_csv) {
    std::optional<CouplingModel> model_store;
    std::optional<JointState> target_store;
    const CouplingModel *model_ptr = nullptr;
    std::optional<CouplingModel> flag_model;
    if (mf.eta || !mf.calibrate.empty()) {
        flag_model = mf.build();
        model_ptr = &*flag_model;
    }
    const JointState source = load_source_state(state_path, program_path, model_ptr,
                                                model_store, target_store);
    if (model_ptr == nullptr) {
        throw InputError("pass --eta or --calibrate-ratio (or --program)");
    }
    if (phase_points < 8) {
        throw InputError("need at least 8 phase points");
    }

    const double area = parse_angle(area_text);
    const double cal_area = cal_area_text.empty() ? area : parse_angle(cal_area_text);
    std::vector<double> phases(phase_points);
    for (int i = 0; i < phase_points; ++i) {
        phases[i] = 2.0 * kPi * i / phase_points;
    }
    NoiseModel noise = NoiseModel::none();
    noise.seed = seed;

    const FringeDataset d = simulate_fringe_scan(source, area, phases, noise,
                                                 *model_ptr, shots, mixture,
                                                 coh_scale);
    if (!out_csv.empty()) {
        write_scan_csv(out_csv, d.phases, d.p_down, d.shots);
        std::printf("wrote %s\n", out_csv.c_str());
    }
    const FringeFit fit = fringe_contrast(d);
    std::printf("contrast = %.6f +- %.6f\n", fit.contrast, fit.sigma_contrast);
    std::printf("offset   = %.6f +- %.6f\n", fit.offset, fit.sigma_offset);
    std::printf("phase0   = %.6f rad\n", fit.phase0);

    // Coherence from contrast; an exact pi/2 analysis pulse has unit factor.
    const double cal = std::sin(cal_area);
    if (std::abs(cal) < 1e-12) {
        throw NumericError("calibration area has no fringe response");
    }
    const double coh_re = 0.5 * fit.contrast / cal;
    const double coh_sigma = 0.5 * fit.sigma_contrast / std::abs(cal);

    const JointState &target = target_store ? *target_store : source;
    const FidelityReport rep =
        fidelity_estimate(populations(source), coh_re, coh_sigma, target);
    std::printf("rho11 = %.4f, rho22 = %.4f, coh_re = %.4f\n", rep.rho11, rep.rho22,
                rep.coh_re);
    std::printf("fidelity F = %.4f +- %.4f\n", rep.f, rep.sigma_f);
    return 0;
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"pulse-sequence synthesis and analysis for joint spin-oscillator states"};
    app.require_subcommand(1);

    // compile
    auto *compile = app.add_subcommand("compile", "compile a pulse program for a target state");
    std::string target_path, compile_out, compile_direction = "generation";
    ModelFlags compile_model;
    compile->add_option("target", target_path, "target spec JSON")->required();
    compile_model.attach(compile);
    compile->add_option("--out", compile_out, "program JSON output path");
    compile->add_option("--direction", compile_direction,
                        "generation (default) or clearing");

    // simulate
    auto *simulate = app.add_subcommand("simulate", "run a pulse program and dump the trajectory");
    std::string program_path, trajectory_csv;
    bool force = false;
    NoiseFlags sim_noise;
    simulate->add_option("program", program_path, "program JSON")->required();
    simulate->add_option("--trajectory", trajectory_csv, "trajectory CSV output path");
    simulate->add_flag("--force", force, "run despite digest mismatch");
    sim_noise.attach(simulate);

    // tomo
    auto *tomo = app.add_subcommand("tomo", "synthesize Rabi scans and invert populations");
    std::string tomo_state, tomo_program, tomo_prefix = "tomo";
    int shots = 600, points = 180;
    double periods = 14.0;
    std::vector<int> deltas = {0, 1, -1};
    std::vector<std::string> csv_inputs;
    ModelFlags tomo_model;
    NoiseFlags tomo_noise;
    tomo->add_option("--state", tomo_state, "state spec JSON");
    tomo->add_option("--program", tomo_program, "program JSON (simulated from its initial state)");
    tomo->add_option("--shots", shots, "measurements per point (0 = exact)");
    tomo->add_option("--points", points, "time points per scan");
    tomo->add_option("--periods", periods, "scan span in reference periods");
    tomo->add_option("--deltas", deltas, "scan couplings (up index minus down index)")
        ->delimiter(',');
    tomo->add_option("--data", csv_inputs, "pre-recorded dataset DELTA:FILE (repeatable)");
    tomo->add_option("--out-prefix", tomo_prefix, "output path prefix");
    tomo_model.attach(tomo);
    tomo_noise.attach(tomo);

    // fringe
    auto *fringe = app.add_subcommand("fringe", "sweep the analysis-pulse phase and estimate fidelity");
    std::string fringe_state, fringe_program, fringe_csv, area_text = "0.5pi", cal_area_text;
    int phase_points = 32, fringe_shots = 0;
    std::uint64_t fringe_seed = 0;
    bool mixture = false;
    double coh_scale = 1.0;
    ModelFlags fringe_model;
    fringe->add_option("--state", fringe_state, "state spec JSON");
    fringe->add_option("--program", fringe_program, "program JSON");
    fringe->add_option("--area", area_text, "analysis pulse area (rad or e.g. 0.5pi)");
    fringe->add_option("--phases", phase_points, "number of phase points");
    fringe->add_flag("--mixture", mixture, "analyze the dephased (population-only) state");
    fringe->add_option("--coh-scale", coh_scale, "scale on interference terms");
    fringe->add_option("--shots", fringe_shots, "measurements per point (0 = exact)");
    fringe->add_option("--seed", fringe_seed, "random seed");
    fringe->add_option("--cal-area", cal_area_text,
                       "actual analysis area for coherence calibration");
    fringe->add_option("--out", fringe_csv, "fringe CSV output path");
    fringe_model.attach(fringe);

    // reproduce
    auto *reproduce = app.add_subcommand("reproduce", "run the whole 0/3 demonstration pipeline");
    std::string out_dir = "reproduce_out";
    std::uint64_t rep_seed = 1;
    reproduce->add_option("--out-dir", out_dir, "artifact directory");
    reproduce->add_option("--seed", rep_seed, "random seed");

    try {
        app.parse(argc, argv);
        if (compile->parsed()) {
            return cmd_compile(target_path, compile_model, compile_out,
                               compile_direction);
        }
        if (simulate->parsed()) {
            return cmd_simulate(program_path, trajectory_csv, sim_noise, force);
        }
        if (tomo->parsed()) {
            return cmd_tomo(tomo_state, tomo_program, tomo_model, tomo_noise, shots,
                            points, periods, deltas, csv_inputs, tomo_prefix);
        }
        if (fringe->parsed()) {
            return cmd_fringe(fringe_state, fringe_program, fringe_model, area_text,
                              phase_points, mixture, coh_scale, fringe_shots,
                              fringe_seed, cal_area_text, fringe_csv);
        }
        if (reproduce->parsed()) {
            const ReproduceSummary sum = run_reproduce(out_dir, rep_seed);
            std::printf("report: %s/report.md\n", out_dir.c_str());
            std::printf("eta=%.4f ratio=%.4f pulses=%zu gen_fidelity=%.9f\n",
                        sum.eta, sum.rate_ratio, sum.effective_pulses,
                        sum.generation_fidelity);
            std::printf("tomo target prob=%.4f fixture=%.4f\n",
                        sum.tomo_target_prob, sum.fixture_target_prob);
            std::printf("fringe F: pure=%.4f fixture=%.4f floor=%.4f\n",
                        sum.fringe_fidelity_pure, sum.fringe_fidelity_fixture,
                        sum.mixture_fidelity);
            return 0;
        }
        return 0;
    } catch (const CLI::ParseError &e) {
        if (e.get_exit_code() == 0) {
            return app.exit(e);  // --help and friends
        }
        (void)app.exit(e);
        return 2;
    } catch (const InputError &e) {
        std::fprintf(stderr, "input error: %s\n", e.what());
        return 2;
    } catch (const NumericError &e) {
        std::fprintf(stderr, "numeric failure: %s\n", e.what());
        return 3;
    } catch (const std::exception &e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
