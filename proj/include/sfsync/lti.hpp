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

// Structural and spectral analysis of continuous-time LTI systems
//   x' = A x + B u,  y = C x,  z = Cm x.

#include <cstdint>
#include <optional>
#include <string>

#include "sfsync/linalg.hpp"

namespace sfsync {

struct LtiAgent {
  Matrix A;
  Matrix B;
  Matrix C;
  Matrix Cm;  // local measurement map
  int id = 0;

  Eigen::Index states() const { return A.rows(); }
  Eigen::Index inputs() const { return B.cols(); }
  Eigen::Index outputs() const { return C.rows(); }
  Eigen::Index measurements() const { return Cm.rows(); }

  // Throws DimensionError unless A is n x n, B is n x m, C is p x n and
  // Cm is q x n with n, p >= 1.
  void validate() const;

  // Convenience for systems without a separate local measurement (Cm = I).
  static LtiAgent from_triple(Matrix a, Matrix b, Matrix c, int id = 0);
};

struct SpectralReport {
  ComplexList eigenvalues;
  bool stabilizable = false;
  bool detectable = false;
  bool right_invertible = false;
  ComplexList invariant_zeros;
  int infinite_zero_order = 0;
};

enum class PbhMode { stabilizable, detectable, controllable, observable };

// Which observation matrix a detectable/observable test uses.
enum class Observation { output, measurement };

// All eigenvalues with multiplicity, sorted by (Re, Im).
ComplexList spectrum(const Matrix& m);

bool is_hurwitz(const Matrix& m);

// Popov-Belevitch-Hautus rank test at every eigenvalue of A. The
// stabilizable/detectable variants skip eigenvalues with Re < -kHurwitzMargin.
bool pbh_controllable(const Matrix& a, const Matrix& b, bool unstable_only);
bool pbh_observable(const Matrix& c, const Matrix& a, bool unstable_only);
bool pbh_test(const LtiAgent& agent, PbhMode mode,
              Observation channel = Observation::output);

// Finite zeros of the Rosenbrock pencil [[lambda I - A, -B], [C, 0]], i.e. the
// fixed modes of A + BF on V*/R*. Throws DegenerateSystemError if the pencil
// has deficient normal rank.
ComplexList invariant_zeros(const LtiAgent& agent);

// Relative degree of a single-output system: smallest k >= 1 with
// C A^(k-1) B != 0. Throws UnsupportedError for p != 1 and Error when every
// Markov parameter up to k = n vanishes.
int infinite_zero_order(const LtiAgent& agent);

bool is_right_invertible(const LtiAgent& agent);

SpectralReport analyze(const LtiAgent& agent);

struct PolePlacement {
  Matrix K;
  // Seed of the input-combination vector for multi-input pairs; empty when B
  // has a single column.
  std::optional<std::uint64_t> seed;
};

inline constexpr std::uint64_t kDefaultPlacementSeed = 0x5eedULL;

// K such that spectrum(A - B K) equals `desired`. Multi-input pairs are
// reduced to a single input with a seeded random combination vector.
PolePlacement place_poles_seeded(const Matrix& a, const Matrix& b,
                                 const ComplexList& desired,
                                 std::uint64_t seed = kDefaultPlacementSeed);
Matrix place_poles(const Matrix& a, const Matrix& b, const ComplexList& desired);

// Gain making A - B K Hurwitz: places the controllable part at
// `poles(dim)` and requires the uncontrollable part to be Hurwitz already
// (throws UnsupportedError otherwise). Returns a zero gain when nothing is
// controllable.
Matrix stabilizing_gain(const Matrix& a, const Matrix& b,
                        const ComplexList& pole_pool);

// Real poles {start, start - step, ...}.
ComplexList real_pole_pool(double start, double step, int count);

std::string format_complex(const Complex& z);

}  // namespace sfsync
