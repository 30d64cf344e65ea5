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

#include "sfsync/target.hpp"

#include <algorithm>
#include <sstream>

#include "sfsync/errors.hpp"

namespace sfsync {

int max_relative_degree(const std::vector<LtiAgent>& agents) {
  int nbar = 0;
  for (const LtiAgent& a : agents) {
    if (a.outputs() != 1)
      throw UnsupportedError("agent " + std::to_string(a.id) +
                             ": only single-output agents are supported");
    nbar = std::max(nbar, infinite_zero_order(a));
  }
  return nbar;
}

TargetValidation validate_target(const TargetModel& t,
                                 const std::vector<LtiAgent>& agents) {
  TargetValidation rep;
  rep.nq = t.nq;
  auto fail = [&](std::string msg) { rep.violations.push_back(std::move(msg)); };

  const Eigen::Index n = t.A.rows();
  if (n < 1 || t.A.cols() != n || t.B.rows() != n || t.C.cols() != n) {
    fail("target: inconsistent dimensions");
    return rep;
  }
  const Eigen::Index p = t.C.rows(), m = t.B.cols();

  try {
    rep.nbar_d = max_relative_degree(agents);
  } catch (const Error& e) {
    fail(e.what());
  }

  if (linalg::numerical_rank(t.C) != p) fail("target: rank(C) != p");
  if (m != p) fail("target: not square (inputs != outputs), cannot be invertible");

  if (m == p && t.nq >= 1) {
    // Uniform rank nq: C A^k B = 0 for k < nq - 1 and C A^(nq-1) B invertible.
    bool uniform = true;
    Matrix akb = t.B;
    const double scale = std::max(1.0, t.C.norm() * t.B.norm());
    for (int k = 0; k < t.nq - 1; ++k) {
      if ((t.C * akb).norm() > kRankTol * scale) uniform = false;
      akb = t.A * akb;
    }
    if (linalg::numerical_rank(Matrix(t.C * akb)) != p) uniform = false;
    if (!uniform)
      fail("target: not invertible of uniform rank " + std::to_string(t.nq));
  } else if (t.nq < 1) {
    fail("target: uniform rank must be positive");
  }

  try {
    const ComplexList zeros = invariant_zeros(t.as_system());
    if (!zeros.empty()) {
      std::ostringstream os;
      os << "target: has invariant zeros";
      for (const auto& z : zeros) os << ' ' << format_complex(z);
      fail(os.str());
    }
  } catch (const DegenerateSystemError&) {
    fail("target: degenerate system");
  }

  for (const Complex& e : spectrum(t.A)) {
    if (e.real() > kHurwitzMargin) {
      fail("target: eigenvalue " + format_complex(e) +
           " in the open right half plane");
      break;
    }
  }

  if (rep.nbar_d > 0 && t.nq < rep.nbar_d)
    fail("target: nq = " + std::to_string(t.nq) + " < nbar_d = " +
         std::to_string(rep.nbar_d));

  rep.passed = rep.violations.empty();
  return rep;
}

std::vector<std::string> exosystem_violations(const Exosystem& e) {
  std::vector<std::string> out;
  const Eigen::Index r = e.Ar.rows();
  if (r < 1 || e.Ar.cols() != r || e.Cr.cols() != r) {
    out.push_back("exosystem: inconsistent dimensions");
    return out;
  }
  if (e.xr0.size() != 0 && e.xr0.size() != r)
    out.push_back("exosystem: initial state has wrong dimension");
  if (!pbh_observable(e.Cr, e.Ar, false))
    out.push_back("exosystem: (Cr, Ar) not observable");
  for (const Complex& z : spectrum(e.Ar)) {
    if (std::abs(z.real()) > kHurwitzMargin) {
      out.push_back("exosystem: eigenvalue " + format_complex(z) +
                    " not on the imaginary axis");
      break;
    }
  }
  return out;
}

TargetModel remodel_exosystem(const Exosystem& e,
                              const std::vector<LtiAgent>& agents) {
  return remodel_exosystem(e, max_relative_degree(agents));
}

TargetModel remodel_exosystem(const Exosystem& e, int nbar_d) {
  if (e.Cr.rows() != 1)
    throw UnsupportedError("remodel_exosystem: only single-output exosystems");
  const auto bad = exosystem_violations(e);
  if (!bad.empty()) throw AssumptionError(bad);

  const int r = static_cast<int>(e.Ar.rows());
  // For p = 1 the observability index of an observable pair is r.
  const int nq = std::max(nbar_d, r);

  // charpoly(Ar) * lambda^(nq - r), lowest degree first.
  const std::vector<double> base = linalg::poly_from_roots(spectrum(e.Ar));
  std::vector<double> coeffs(nq + 1, 0.0);
  for (int k = 0; k <= r; ++k) coeffs[k + (nq - r)] = base[k];

  TargetModel t;
  t.nq = nq;
  t.A = Matrix::Zero(nq, nq);
  for (int k = 0; k + 1 < nq; ++k) t.A(k, k + 1) = 1.0;
  for (int k = 0; k < nq; ++k) {
    const double c = -coeffs[k];
    t.A(nq - 1, k) = c == 0.0 ? 0.0 : c;  // no signed zeros in the bundle
  }
  t.B = Matrix::Zero(nq, 1);
  t.B(nq - 1, 0) = 1.0;
  t.C = Matrix::Zero(1, nq);
  t.C(0, 0) = 1.0;
  return t;
}

Vector match_initial_condition(const Exosystem& e, const TargetModel& t,
                               const Vector& xr0) {
  if (xr0.size() != e.Ar.rows())
    throw DimensionError("match_initial_condition: xr0 has wrong dimension");
  // The remodeled state is the output derivative chain; map it back through
  // the target's own observability matrix in case t is not in chain form.
  const Matrix derivs = linalg::observability_matrix(e.Cr, e.Ar, t.nq) * xr0;
  const Matrix obs = linalg::observability_matrix(t.C, t.A, t.nq);
  return obs.fullPivLu().solve(derivs);
}

TargetModel integrator_chain_target(int nq) {
  if (nq < 1) throw Error("integrator_chain_target: nq must be positive");
  TargetModel t;
  t.nq = nq;
  t.A = Matrix::Zero(nq, nq);
  for (int k = 0; k + 1 < nq; ++k) t.A(k, k + 1) = 1.0;
  t.B = Matrix::Zero(nq, 1);
  t.B(nq - 1, 0) = 1.0;
  t.C = Matrix::Zero(1, nq);
  t.C(0, 0) = 1.0;
  return t;
}

}  // namespace sfsync
