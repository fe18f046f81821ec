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

#include "lesynth/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "lesynth/digest.hpp"
#include "lesynth/errors.hpp"

namespace lesynth {

std::string format_g12(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return std::string(buf);
}

namespace {

json parse_json_text(const std::string &text, const std::string &what) {
    json doc = json::parse(text, nullptr, false);
    if (doc.is_discarded()) {
        throw InputError("malformed JSON in " + what);
    }
    return doc;
}

double require_number(const json &doc, const std::string &key) {
    if (!doc.contains(key) || !doc[key].is_number()) {
        throw InputError("missing or non-numeric field '" + key + "'");
    }
    return doc[key].get<double>();
}

int require_int(const json &doc, const std::string &key) {
    if (!doc.contains(key) || !doc[key].is_number_integer()) {
        throw InputError("missing or non-integer field '" + key + "'");
    }
    return doc[key].get<int>();
}

std::string require_string(const json &doc, const std::string &key) {
    if (!doc.contains(key) || !doc[key].is_string()) {
        throw InputError("missing or non-string field '" + key + "'");
    }
    return doc[key].get<std::string>();
}

}  // namespace

json target_to_json(const JointState &s) {
    json doc;
    doc["n_max"] = s.n_max();
    json amps = json::array();
    for (Spin spin : {Spin::down, Spin::up}) {
        for (int n = 0; n <= s.n_max(); ++n) {
            const auto a = s.amp(spin, n);
            if (a == std::complex<double>(0.0, 0.0)) {
                continue;
            }
            json entry;
            entry["spin"] = to_string(spin);
            entry["n"] = n;
            entry["re"] = a.real();
            entry["im"] = a.imag();
            amps.push_back(entry);
        }
    }
    doc["amplitudes"] = std::move(amps);
    return doc;
}

JointState target_from_json(const json &doc) {
    const int n_max = require_int(doc, "n_max");
    if (!doc.contains("amplitudes") || !doc["amplitudes"].is_array()) {
        throw InputError("missing 'amplitudes' array");
    }
    std::vector<AmplitudeEntry> entries;
    for (const auto &item : doc["amplitudes"]) {
        AmplitudeEntry e;
        e.spin = spin_from_string(require_string(item, "spin"));
        e.n = require_int(item, "n");
        e.amplitude = {require_number(item, "re"), require_number(item, "im")};
        entries.push_back(e);
    }
    // Documents holding an already-normalized vector (every emitted one) are
    // reconstructed bit-exactly; rescaling by the 1 +- ulp norm would wobble
    // the content digest. Hand-written unnormalized specs take the
    // normalizing path.
    if (n_max >= 0 && !entries.empty()) {
        std::vector<std::complex<double>> amps(2 * (n_max + 1), 0.0);
        double norm_sq = 0.0;
        bool usable = true;
        std::set<std::pair<int, int>> seen;
        for (const auto &e : entries) {
            if (e.n < 0 || e.n > n_max ||
                !seen.insert({static_cast<int>(e.spin), e.n}).second) {
                usable = false;
                break;
            }
            amps[JointState::index_of(e.spin, e.n, n_max)] = e.amplitude;
            norm_sq += std::norm(e.amplitude);
        }
        if (usable && std::abs(norm_sq - 1.0) <= 1e-9) {
            return JointState::from_amplitudes(n_max, std::move(amps));
        }
    }
    return make_state(n_max, entries);
}

JointState read_target_file(const std::string &path) {
    return target_from_json(parse_json_text(read_text_file(path), path));
}

void write_target_file(const std::string &path, const JointState &s) {
    write_text_file(path, target_to_json(s).dump(2) + "\n");
}

json model_to_json(const CouplingModel &m) {
    json doc;
    doc["omega0"] = m.omega0;
    doc["eta"] = m.eta;
    doc["trap_freq"] = m.trap_freq;
    doc["hyperfine_split"] = m.hyperfine_split;
    return doc;
}

CouplingModel model_from_json(const json &doc) {
    CouplingModel m;
    m.omega0 = require_number(doc, "omega0");
    m.eta = require_number(doc, "eta");
    m.trap_freq = require_number(doc, "trap_freq");
    m.hyperfine_split = require_number(doc, "hyperfine_split");
    m.validate();
    return m;
}

json program_to_json(const PulseProgram &p) {
    json doc;
    doc["model"] = model_to_json(p.model);
    doc["direction"] = to_string(p.direction);
    json pulses = json::array();
    for (const auto &pulse : p.pulses) {
        json jp;
        jp["delta_n"] = pulse.delta_n;
        jp["ref_pair"] = pulse.ref_pair;
        jp["area"] = pulse.area;
        jp["phase"] = pulse.phase;
        jp["noop"] = pulse.noop;
        pulses.push_back(jp);
    }
    doc["pulses"] = std::move(pulses);
    doc["target_digest"] = p.target_digest;
    doc["model_digest"] = p.model_digest;
    doc["target"] = target_to_json(p.target);
    return doc;
}

PulseProgram program_from_json(const json &doc) {
    if (!doc.contains("model") || !doc.contains("target")) {
        throw InputError("program document missing 'model' or 'target'");
    }
    const CouplingModel m = model_from_json(doc["model"]);
    const JointState target = target_from_json(doc["target"]);
    const Direction dir = direction_from_string(require_string(doc, "direction"));
    if (!doc.contains("pulses") || !doc["pulses"].is_array()) {
        throw InputError("program document missing 'pulses' array");
    }
    std::vector<Pulse> pulses;
    for (const auto &jp : doc["pulses"]) {
        Pulse pulse;
        pulse.delta_n = require_int(jp, "delta_n");
        pulse.ref_pair = require_int(jp, "ref_pair");
        pulse.area = require_number(jp, "area");
        pulse.phase = require_number(jp, "phase");
        pulse.noop = jp.contains("noop") && jp["noop"].is_boolean()
                         ? jp["noop"].get<bool>()
                         : false;
        pulse.validate();
        pulses.push_back(pulse);
    }
    const std::string tdig = require_string(doc, "target_digest");
    const std::string mdig = require_string(doc, "model_digest");
    if (tdig != state_digest(target)) {
        throw InputError("target digest mismatch: document was edited or "
                         "compiled against a different target");
    }
    if (mdig != model_digest(m)) {
        throw InputError("model digest mismatch: document was edited or "
                         "compiled against a different coupling model");
    }
    return PulseProgram{std::move(pulses), dir, tdig, mdig, target, m};
}

PulseProgram read_program_file(const std::string &path) {
    return program_from_json(parse_json_text(read_text_file(path), path));
}

void write_program_file(const std::string &path, const PulseProgram &p) {
    write_text_file(path, program_to_json(p).dump(2) + "\n");
}

void write_trajectory_csv(const std::string &path,
                          const std::vector<JointState> &trajectory) {
    std::string out = "step,spin,n,re,im,prob\n";
    for (std::size_t step = 0; step < trajectory.size(); ++step) {
        const auto &s = trajectory[step];
        for (Spin spin : {Spin::down, Spin::up}) {
            for (int n = 0; n <= s.n_max(); ++n) {
                const auto a = s.amp(spin, n);
                out += std::to_string(step + 1);
                out += ",";
                out += to_string(spin);
                out += ",";
                out += std::to_string(n);
                out += ",";
                out += format_g12(a.real());
                out += ",";
                out += format_g12(a.imag());
                out += ",";
                out += format_g12(std::norm(a));
                out += "\n";
            }
        }
    }
    write_text_file(path, out);
}

void write_scan_csv(const std::string &path, const std::vector<double> &abscissa,
                    const std::vector<double> &p_down, int shots) {
    if (abscissa.size() != p_down.size()) {
        throw InputError("abscissa and p_down must have equal length");
    }
    std::string out = "abscissa,p_down,shots\n";
    for (std::size_t i = 0; i < abscissa.size(); ++i) {
        out += format_g12(abscissa[i]);
        out += ",";
        out += format_g12(p_down[i]);
        out += ",";
        out += std::to_string(shots);
        out += "\n";
    }
    write_text_file(path, out);
}

RabiDataset read_rabi_csv(const std::string &path, int scan_dn) {
    std::istringstream in(read_text_file(path));
    std::string line;
    if (!std::getline(in, line) || line != "abscissa,p_down,shots") {
        throw InputError("bad CSV header in " + path +
                         " (expected 'abscissa,p_down,shots')");
    }
    RabiDataset d;
    d.scan_dn = scan_dn;
    d.shots = 0;
    while (std::getline(in, line)) {
        if (line.empty()) {
            continue;
        }
        double t = 0.0, p = 0.0;
        int shots = 0;
        if (std::sscanf(line.c_str(), "%lf,%lf,%d", &t, &p, &shots) != 3) {
            throw InputError("bad CSV row in " + path + ": " + line);
        }
        d.times.push_back(t);
        d.p_down.push_back(p);
        d.shots = shots;
    }
    if (d.times.empty()) {
        throw InputError("empty dataset in " + path);
    }
    return d;
}

void write_population_csv(const std::string &path, const PopulationTable &t) {
    std::string out = "spin,n,p,sigma\n";
    for (Spin spin : {Spin::down, Spin::up}) {
        for (int n = 0; n <= t.n_max; ++n) {
            out += to_string(spin);
            out += ",";
            out += std::to_string(n);
            out += ",";
            out += format_g12(t.prob(spin, n));
            out += ",";
            out += format_g12(t.unc(spin, n));
            out += "\n";
        }
    }
    write_text_file(path, out);
}

json rabi_fit_to_json(const RabiFit &fit) {
    json doc;
    doc["scan_dn"] = fit.scan_dn;
    doc["omega_base"] = fit.omega_base;
    doc["tau"] = std::isfinite(fit.tau) ? json(fit.tau) : json();
    doc["offset"] = fit.offset;
    doc["residual_rms"] = fit.residual_rms;
    doc["degenerate"] = fit.degenerate;
    json comps = json::array();
    for (std::size_t k = 0; k < fit.components.size(); ++k) {
        const auto &c = fit.components[k];
        json jc;
        jc["n_down"] = c.n_down;
        jc["freq_ratio"] = c.freq_ratio;
        jc["amplitude"] = c.amplitude;
        jc["phase"] = c.phase;
        jc["cos_amplitude"] = fit.cos_amplitude(k);
        jc["cos_amplitude_sigma"] = fit.cos_amplitude_sigma(k);
        comps.push_back(jc);
    }
    doc["components"] = std::move(comps);
    return doc;
}

std::string read_text_file(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw InputError("cannot open file: " + path);
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const std::string &path, const std::string &content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw InputError("cannot write file: " + path);
    }
    out << content;
    if (!out) {
        throw InputError("write failed: " + path);
    }
}

}  // namespace lesynth
