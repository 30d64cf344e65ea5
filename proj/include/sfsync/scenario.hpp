// Copyright 2026 The sfsync Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <string>

#include "sfsync/sim.hpp"

namespace sfsync {

// Scenario file format (INI-like):
//
//   [simulation]   mode = output_sync | regulated, T, dt, seed, name
//   [target]       A, B, C, nq
//   [exosystem]    Ar, Cr, x0
//   [gains]        k_poles, h_poles        e.g. [-2, -1+1i, -1-1i]
//   [agent.<i>]    A, B, C, Cm (defaults to identity, "I" accepted), x0
//   [graph]        file = <edge list path>, or inline "src dst weight" lines
//   [rootset]      members = [1, 3]
//
// Matrices are lists of rows, [[1, 0], [0, 1]]; a flat list is one row.
// Values may continue over several lines while a bracket is open. '#' starts
// a comment. Agent and node indices are 1-based.

// Parses without running assumption checks. Relative graph paths resolve
// against base_dir. Throws ParseError.
Scenario parse_scenario_text(const std::string& text, const std::string& base_dir = ".");

// Reads, parses and validates. Throws ParseError or AssumptionError.
Scenario parse_scenario(const std::string& path);

// Human-readable assumption and graph report, including nbar_d. Never throws
// for assumption failures; they are listed instead.
std::string check_report(const Scenario& s);

}  // namespace sfsync
