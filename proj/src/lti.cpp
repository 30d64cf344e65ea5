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

#include "sfsync/lti.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "sfsync/errors.hpp"
#include "sfsync/rng.hpp"

namespace sfsync {

namespace {

using Eigen::Index;

void require_square(const Matrix& m, const char* what) {
  if (m.rows() != m.cols())
    throw DimensionError(std::string(what) + ": matrix is " +
                         std::to_string(m.rows()) + "x" +
                         std::to_string(m.cols()) + ", expected square");
}

Eigen::MatrixXcd pencil_at(const LtiAgent& s, Complex lambda) {
  const Index n = s.states(), m = s.inputs(), p = s.outputs();
  Eigen::MatrixXcd p_mat = Eigen::MatrixXcd::Zero(n + p, n + m);
  p_mat.topLeftCorner(n, n) =
      lambda * Eigen::MatrixXcd::Identity(n, n) - s.A.cast<Complex>();
  p_mat.topRightCorner(n, m) = -s.B.cast<Complex>();
  p_mat.bottomLeftCorner(p, n) = s.C.cast<Complex>();
  return p_mat;
}

// Generic evaluation points for the Rosenbrock pencil, kept away from the
// spectrum of A.
std::vector<Complex> sample_points(const Matrix& a, std::size_t count) {
  const ComplexList eig = spectrum(a);
  double radius = 1.0;
  for (const auto& e : eig) radius = std::max(radius, std::abs(e));
  std::vector<Complex> pts;
  for (int k = 0; pts.size() < count && k < 64 * static_cast<int>(count) + 64;
       ++k) {
    const Complex z(radius * (0.7071 + 0.3183 * k),
                    radius * (0.5772 + 0.1309 * k));
    bool clear = true;
    for (const auto& e : eig)
      if (std::abs(z - e) < 1e-6 * radius) clear = false;
    if (clear) pts.push_back(z);
  }
  return pts;
}

int pencil_normal_rank(const LtiAgent& s) {
  int best = 0;
  for (const Complex& z : sample_points(s.A, s.states() + 1))
    best = std::max(best, linalg::numerical_rank(pencil_at(s, z)));
  return best;
}

bool conjugate_closed(const ComplexList& poles) {
  std::vector<bool> used(poles.size(), false);
  for (std::size_t i = 0; i < poles.size(); ++i) {
    const double scale = std::max(1.0, std::abs(poles[i]));
    if (std::abs(poles[i].imag()) <= 1e-12 * scale) continue;
    bool found = false;
    for (std::size_t j = 0; j < poles.size() && !found; ++j) {
      if (j == i || used[j]) continue;
      if (std::abs(poles[j] - std::conj(poles[i])) <= 1e-9 * scale) {
        used[j] = true;
        found = true;
      }
    }
    if (!found) return false;
  }
  return true;
}

// First eigenvalue of A failing the PBH controllability test, if any.
std::optional<Complex> uncontrollable_eigenvalue(const Matrix& a,
                                                 const Matrix& b) {
  const Index n = a.rows();
  for (const Complex& lambda : spectrum(a)) {
    Eigen::MatrixXcd m(n, n + b.cols());
    m << lambda * Eigen::MatrixXcd::Identity(n, n) - a.cast<Complex>(),
        b.cast<Complex>();
    if (linalg::numerical_rank(m) < n) return lambda;
  }
  return std::nullopt;
}

// Single-input placement (Ackermann).
Matrix ackermann(const Matrix& a, const Vector& b, const ComplexList& desired) {
  const Index n = a.rows();
  Matrix ctrb(n, n);
  Vector col = b;
  for (Index k = 0; k < n; ++k) {
    ctrb.col(k) = col;
    col = a * col;
  }
  const std::vector<double> coeffs = linalg::poly_from_roots(desired);
  Matrix phi = Matrix::Identity(n, n) * coeffs[n];
  for (Index k = n; k-- > 0;) phi = phi * a + coeffs[k] * Matrix::Identity(n, n);
  Vector last = Vector::Zero(n);
  last(n - 1) = 1.0;
  const Vector q = ctrb.transpose().fullPivLu().solve(last);
  return q.transpose() * phi;
}

}  // namespace

void LtiAgent::validate() const {
  const Index n = A.rows();
  if (n < 1) throw DimensionError("agent: state dimension must be >= 1");
  require_square(A, "agent A");
  if (B.rows() != n)
    throw DimensionError("agent: B has " + std::to_string(B.rows()) +
                         " rows, expected " + std::to_string(n));
  if (C.cols() != n)
    throw DimensionError("agent: C has " + std::to_string(C.cols()) +
                         " columns, expected " + std::to_string(n));
  if (C.rows() < 1) throw DimensionError("agent: output dimension must be >= 1");
  if (Cm.cols() != n)
    throw DimensionError("agent: Cm has " + std::to_string(Cm.cols()) +
                         " columns, expected " + std::to_string(n));
}

LtiAgent LtiAgent::from_triple(Matrix a, Matrix b, Matrix c, int id) {
  LtiAgent s;
  const Index n = a.rows();
  s.A = std::move(a);
  s.B = std::move(b);
  s.C = std::move(c);
  s.Cm = Matrix::Identity(n, n);
  s.id = id;
  return s;
}

ComplexList spectrum(const Matrix& m) {
  require_square(m, "spectrum");
  if (m.rows() == 0) return {};
  Eigen::EigenSolver<Matrix> es(m, false);
  if (es.info() != Eigen::Success) throw Error("spectrum: eigensolver failed");
  ComplexList out(es.eigenvalues().begin(), es.eigenvalues().end());
  std::sort(out.begin(), out.end(), [](const Complex& x, const Complex& y) {
    if (x.real() != y.real()) return x.real() < y.real();
    return x.imag() < y.imag();
  });
  return out;
}

bool is_hurwitz(const Matrix& m) {
  for (const Complex& e : spectrum(m))
    if (!(e.real() < -kHurwitzMargin)) return false;
  return true;
}

bool pbh_controllable(const Matrix& a, const Matrix& b, bool unstable_only) {
  require_square(a, "pbh A");
  if (b.rows() != a.rows()) throw DimensionError("pbh: B row mismatch");
  const Index n = a.rows();
  for (const Complex& lambda : spectrum(a)) {
    if (unstable_only && lambda.real() < -kHurwitzMargin) continue;
    Eigen::MatrixXcd m(n, n + b.cols());
    m << lambda * Eigen::MatrixXcd::Identity(n, n) - a.cast<Complex>(),
        b.cast<Complex>();
    if (linalg::numerical_rank(m) < n) return false;
  }
  return true;
}

bool pbh_observable(const Matrix& c, const Matrix& a, bool unstable_only) {
  if (c.cols() != a.rows()) throw DimensionError("pbh: C column mismatch");
  return pbh_controllable(a.transpose(), c.transpose(), unstable_only);
}

bool pbh_test(const LtiAgent& agent, PbhMode mode, Observation channel) {
  agent.validate();
  const Matrix& obs = channel == Observation::output ? agent.C : agent.Cm;
  switch (mode) {
    case PbhMode::stabilizable:
      return pbh_controllable(agent.A, agent.B, true);
    case PbhMode::controllable:
      return pbh_controllable(agent.A, agent.B, false);
    case PbhMode::detectable:
      return pbh_observable(obs, agent.A, true);
    case PbhMode::observable:
      return pbh_observable(obs, agent.A, false);
  }
  return false;
}

ComplexList invariant_zeros(const LtiAgent& agent) {
  agent.validate();
  const Index n = agent.states(), m = agent.inputs(), p = agent.outputs();
  if (m < 1) throw DimensionError("invariant_zeros: system has no inputs");
  if (pencil_normal_rank(agent) < n + std::min(m, p))
    throw DegenerateSystemError(
        "degenerate system: Rosenbrock pencil is rank deficient for all lambda");

  const Matrix& A = agent.A;
  const Matrix& B = agent.B;
  const Matrix ker_c = linalg::null_space(agent.C);

  // V*: largest (A,B)-invariant subspace contained in ker C.
  Matrix v = ker_c;
  for (;;) {
    const Matrix target = linalg::orth(linalg::hcat(v, B));
    Matrix next = linalg::intersect(ker_c, linalg::preimage(A, target));
    if (next.cols() == v.cols()) break;
    v = std::move(next);
  }
  if (v.cols() == 0) return {};

  // R*: controllability subspace contained in V*.
  Matrix r(n, 0);
  for (;;) {
    const Matrix reach = linalg::orth(linalg::hcat(A * r, B));
    Matrix next = linalg::intersect(v, reach);
    if (next.cols() == r.cols()) break;
    r = std::move(next);
  }

  // Friend F with (A + B F) V* in V*: A v = V* alpha + B u, F v = -u.
  Matrix basis(n, v.cols() + m);
  basis << v, B;
  const Matrix coeff = basis.completeOrthogonalDecomposition().solve(A * v);
  const Matrix f = -coeff.bottomRows(m) * v.transpose();

  Matrix s = v;
  if (r.cols() > 0) s = v * linalg::complement(v.transpose() * r, v.cols());
  if (s.cols() == 0) return {};
  return spectrum(s.transpose() * (A + B * f) * s);
}

int infinite_zero_order(const LtiAgent& agent) {
  agent.validate();
  if (agent.outputs() != 1)
    throw UnsupportedError("infinite_zero_order: only single-output systems");
  const Index n = agent.states();
  const double a_norm = std::max(1.0, agent.A.norm());
  double scale = agent.C.norm() * agent.B.norm();
  Matrix akb = agent.B;  // A^(k-1) B
  for (Index k = 1; k <= n; ++k) {
    if (scale > 0.0 && (agent.C * akb).norm() > kRankTol * scale)
      return static_cast<int>(k);
    akb = agent.A * akb;
    scale *= a_norm;
  }
  throw Error("no finite relative degree: all Markov parameters vanish");
}

bool is_right_invertible(const LtiAgent& agent) {
  agent.validate();
  if (agent.inputs() < agent.outputs()) return false;
  return pencil_normal_rank(agent) == agent.states() + agent.outputs();
}

SpectralReport analyze(const LtiAgent& agent) {
  SpectralReport rep;
  rep.eigenvalues = spectrum(agent.A);
  rep.stabilizable = pbh_test(agent, PbhMode::stabilizable);
  rep.detectable = pbh_test(agent, PbhMode::detectable);
  rep.right_invertible = is_right_invertible(agent);
  try {
    rep.invariant_zeros = invariant_zeros(agent);
  } catch (const DegenerateSystemError&) {
  }
  if (agent.outputs() == 1) {
    try {
      rep.infinite_zero_order = infinite_zero_order(agent);
    } catch (const Error&) {
    }
  }
  return rep;
}

PolePlacement place_poles_seeded(const Matrix& a, const Matrix& b,
                                 const ComplexList& desired,
                                 std::uint64_t seed) {
  require_square(a, "place_poles A");
  const Index n = a.rows();
  if (b.rows() != n) throw DimensionError("place_poles: B row mismatch");
  if (b.cols() < 1) throw DimensionError("place_poles: B has no columns");
  if (static_cast<Index>(desired.size()) != n)
    throw DesignError("place_poles: " + std::to_string(desired.size()) +
                      " poles requested for a system of order " +
                      std::to_string(n));
  if (!conjugate_closed(desired))
    throw DesignError("place_poles: desired poles not closed under conjugation");
  if (n == 0) return {Matrix(b.cols(), 0), std::nullopt};

  if (const auto bad = uncontrollable_eigenvalue(a, b))
    throw DesignError("place_poles: uncontrollable pair, eigenvalue " +
                      format_complex(*bad) + " fails the PBH test");
  if (linalg::controllable_subspace(a, b).cols() < n)
    throw DesignError("place_poles: pair is numerically uncontrollable");

  if (b.cols() == 1) return {ackermann(a, b.col(0), desired), std::nullopt};

  for (std::uint64_t attempt = 0; attempt < 32; ++attempt) {
    Rng rng(seed + attempt);
    Vector g(b.cols());
    for (Index i = 0; i < g.size(); ++i) g(i) = rng.uniform(-1.0, 1.0);
    g.normalize();
    const Vector bg = b * g;
    if (linalg::controllable_subspace(a, bg).cols() < n) continue;
    return {g * ackermann(a, bg, desired), seed + attempt};
  }
  throw DesignError(
      "place_poles: no single-input reduction found for the multi-input pair");
}

Matrix place_poles(const Matrix& a, const Matrix& b, const ComplexList& desired) {
  return place_poles_seeded(a, b, desired).K;
}

Matrix stabilizing_gain(const Matrix& a, const Matrix& b,
                        const ComplexList& pole_pool) {
  require_square(a, "stabilizing_gain A");
  const Index n = a.rows();
  const Matrix q = linalg::controllable_subspace(a, b);
  const Index k = q.cols();
  if (k < n) {
    const Matrix qc = linalg::complement(q, n);
    const Matrix fixed = qc.transpose() * a * qc;
    if (!is_hurwitz(fixed)) {
      std::ostringstream os;
      os << "uncontrollable modes are not asymptotically stable:";
      for (const auto& e : spectrum(fixed)) os << ' ' << format_complex(e);
      throw UnsupportedError(os.str());
    }
  }
  if (k == 0) return Matrix::Zero(b.cols(), n);
  if (static_cast<Index>(pole_pool.size()) < k)
    throw DesignError("stabilizing_gain: pole pool too small");
  const ComplexList poles(pole_pool.begin(), pole_pool.begin() + k);
  const Matrix kc = place_poles(q.transpose() * a * q, q.transpose() * b, poles);
  return kc * q.transpose();
}

ComplexList real_pole_pool(double start, double step, int count) {
  ComplexList out;
  out.reserve(count);
  for (int i = 0; i < count; ++i) out.emplace_back(start - step * i, 0.0);
  return out;
}

std::string format_complex(const Complex& z) {
  std::ostringstream os;
  os.precision(6);
  os << z.real();
  if (z.imag() != 0.0) os << (z.imag() < 0 ? "-" : "+") << std::abs(z.imag()) << "i";
  return os.str();
}

}  // namespace sfsync
