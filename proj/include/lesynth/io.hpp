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

#include <string>
#include <vector>

#include <json.hpp>

#include "lesynth/compiler.hpp"
#include "lesynth/ladder.hpp"
#include "lesynth/sim.hpp"
#include "lesynth/tomo.hpp"

namespace lesynth {

// File formats. Target specs and pulse programs travel as JSON documents;
// plot-ready data goes out as CSV with fixed 12-significant-digit numbers so
// identical inputs always produce byte-identical files.

using json = nlohmann::ordered_json;

std::string format_g12(double v);

// { "n_max": int, "amplitudes": [ {"spin","n","re","im"}... ] }
json target_to_json(const JointState &s);
JointState target_from_json(const json &doc);
JointState read_target_file(const std::string &path);
void write_target_file(const std::string &path, const JointState &s);

// { "model": {...}, "direction", "pulses": [...], "target_digest",
//   "model_digest", "target": {...} }  — digests are re-verified on load.
json program_to_json(const PulseProgram &p);
PulseProgram program_from_json(const json &doc);
PulseProgram read_program_file(const std::string &path);
void write_program_file(const std::string &path, const PulseProgram &p);

json model_to_json(const CouplingModel &m);
CouplingModel model_from_json(const json &doc);

// CSV: "step,spin,n,re,im,prob", one block per trajectory step (1-based).
void write_trajectory_csv(const std::string &path,
                          const std::vector<JointState> &trajectory);

// CSV: "abscissa,p_down,shots".
void write_scan_csv(const std::string &path, const std::vector<double> &abscissa,
                    const std::vector<double> &p_down, int shots);
RabiDataset read_rabi_csv(const std::string &path, int scan_dn);

// CSV: "spin,n,p,sigma".
void write_population_csv(const std::string &path, const PopulationTable &t);

json rabi_fit_to_json(const RabiFit &fit);

std::string read_text_file(const std::string &path);
void write_text_file(const std::string &path, const std::string &content);

}  // namespace lesynth
