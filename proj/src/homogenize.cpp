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

#include "sfsync/homogenize.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "sfsync/errors.hpp"

namespace sfsync {

namespace {

using Eigen::Index;

void check_target_shape(const TargetModel& t) {
  if (t.C.rows() != 1 || t.B.cols() != 1)
    throw UnsupportedError("homogenization: only single-output targets");
  if (t.states() != t.nq)
    throw UnsupportedError(
        "homogenization: target order must equal its uniform rank");
}

}  // namespace

CompensatedSystem compensate(const LtiAgent& agent, const Precompensator& pre) {
  const Index n = agent.states(), k = pre.xi_dim();
  CompensatedSystem c;
  c.A = Matrix::Zero(n + k, n + k);
  c.A.topLeftCorner(n, n) = agent.A + agent.B * pre.Dz * agent.Cm;
  c.A.topRightCorner(n, k) = agent.B * pre.Ch;
  c.A.bottomLeftCorner(k, n) = pre.Bh * agent.Cm;
  c.A.bottomRightCorner(k, k) = pre.Ah;
  c.B = Matrix::Zero(n + k, pre.Dh.cols());
  c.B.topRows(n) = agent.B * pre.Dh;
  c.B.bottomRows(k) = pre.Eh;
  c.C = Matrix::Zero(agent.outputs(), n + k);
  c.C.leftCols(n) = agent.C;
  return c;
}

HomogenizationResult design_precompensator(const LtiAgent& agent,
                                           const TargetModel& target,
                                           const HomogenizationOptions& opts) {
  agent.validate();
  if (agent.outputs() != 1)
    throw UnsupportedError("homogenization: only single-output agents");
  check_target_shape(target);

  const Index n = agent.states(), m = agent.inputs(), q = agent.measurements();
  const int nq = target.nq;
  const int r = infinite_zero_order(agent);
  if (r > nq)
    throw UnsupportedError("homogenization: relative degree " + std::to_string(r) +
                           " exceeds target uniform rank " + std::to_string(nq));
  const Index d = nq - r;

  // Target in output-derivative coordinates: y^(nq) = at * ytilde + beta * v.
  const Matrix obs_t = linalg::observability_matrix(target.C, target.A, nq);
  const Matrix at = target.C * linalg::power(target.A, nq) *
                    obs_t.fullPivLu().inverse();
  const double beta =
      (target.C * linalg::power(target.A, nq - 1) * target.B)(0, 0);

  // Agent with d input integrator stages: u = xi_1, xi_k' = xi_(k+1), xi_d' = w.
  const Index ni = m * d, ne = n + ni;
  Matrix shift = Matrix::Zero(ni, ni);
  for (Index k = 0; k + 1 < d; ++k)
    shift.block(k * m, (k + 1) * m, m, m) = Matrix::Identity(m, m);
  Matrix last = Matrix::Zero(ni, m);
  Matrix first = Matrix::Zero(m, ni);
  if (d > 0) {
    last.bottomRows(m) = Matrix::Identity(m, m);
    first.leftCols(m) = Matrix::Identity(m, m);
  }
  Matrix ae = Matrix::Zero(ne, ne);
  Matrix be = Matrix::Zero(ne, m);
  ae.topLeftCorner(n, n) = agent.A;
  if (d > 0) {
    ae.topRightCorner(n, ni) = agent.B * first;
    ae.bottomRightCorner(ni, ni) = shift;
    be.bottomRows(ni) = last;
  } else {
    be.topRows(n) = agent.B;
  }
  Matrix ce = Matrix::Zero(1, ne);
  ce.leftCols(n) = agent.C;

  // Feedback linearization along the first nonzero Markov row b.
  const Matrix phi = linalg::observability_matrix(ce, ae, nq);
  const Matrix b = ce * linalg::power(ae, nq - 1) * be;
  const Matrix b_pinv = b.transpose() / b.squaredNorm();
  const Matrix f0 = b_pinv * (at * phi - ce * linalg::power(ae, nq));
  const Matrix gv = b_pinv * beta;

  // Zero dynamics live on ker(phi), which is invariant for every feedback
  // through the null directions of b.
  Matrix feedback = f0;
  const Matrix zbasis = linalg::null_space(phi);
  if (zbasis.cols() > 0) {
    const Matrix nb = linalg::null_space(b);
    const Matrix a0 = ae + be * f0;
    const Matrix az = zbasis.transpose() * a0 * zbasis;
    const Matrix bz = zbasis.transpose() * be * nb;
    Matrix fz;
    try {
      fz = stabilizing_gain(
          az, bz,
          real_pole_pool(opts.zero_dynamics_pole_start, opts.zero_dynamics_pole_step,
                         static_cast<int>(az.rows())));
    } catch (const UnsupportedError& e) {
      throw UnsupportedError(
          "unsupported agent: internal dynamics not stabilizable (" +
          std::string(e.what()) + ")");
    }
    if (nb.cols() > 0) feedback -= nb * fz * zbasis.transpose();
  }
  const Matrix fx = feedback.leftCols(n);
  const Matrix fxi = feedback.rightCols(ni);

  Precompensator pre;
  if (linalg::numerical_rank(agent.Cm) == n) {
    // Full state available: x = Cm^+ z.
    const Matrix recover = agent.Cm.completeOrthogonalDecomposition().pseudoInverse();
    pre.Ah = shift + last * fxi;
    pre.Bh = last * fx * recover;
    pre.Eh = last * gv;
    if (d > 0) {
      pre.Ch = first;
      pre.Dz = Matrix::Zero(m, q);
      pre.Dh = Matrix::Zero(m, 1);
    } else {
      pre.Ch = Matrix::Zero(m, 0);
      pre.Dz = fx * recover;
      pre.Dh = gv;
    }
  } else {
    // Observer on z; xi = (integrators, xhat).
    Matrix lgain;
    try {
      lgain = stabilizing_gain(agent.A.transpose(), agent.Cm.transpose(),
                               real_pole_pool(opts.observer_pole_start,
                                              opts.observer_pole_step,
                                              static_cast<int>(n)))
                  .transpose();
    } catch (const UnsupportedError& e) {
      throw UnsupportedError("unsupported agent: (Cm, A) not detectable (" +
                             std::string(e.what()) + ")");
    }
    const Index nx = ni + n;
    Matrix w_of_xi(m, nx);
    w_of_xi << fxi, fx;
    Matrix cu(m, nx);
    Matrix du;
    if (d > 0) {
      cu << first, Matrix::Zero(m, n);
      du = Matrix::Zero(m, 1);
    } else {
      cu = w_of_xi;
      du = gv;
    }
    pre.Ah = Matrix::Zero(nx, nx);
    pre.Ah.topLeftCorner(ni, ni) = shift;
    pre.Ah.topRows(ni) += last * w_of_xi;
    pre.Ah.bottomRightCorner(n, n) = agent.A - lgain * agent.Cm;
    pre.Ah.bottomRows(n) += agent.B * cu;
    pre.Bh = Matrix::Zero(nx, q);
    pre.Bh.bottomRows(n) = lgain;
    pre.Eh = Matrix::Zero(nx, 1);
    pre.Eh.topRows(ni) = last * gv;
    pre.Eh.bottomRows(n) = agent.B * du;
    pre.Ch = cu;
    pre.Dz = Matrix::Zero(m, q);
    pre.Dh = du;
  }

  HomogenizationResult out{pre, verify_homogenization(agent, pre, target)};
  return out;
}

HomogenizationCertificate verify_homogenization(const LtiAgent& agent,
                                                const Precompensator& pre,
                                                const TargetModel& target) {
  agent.validate();
  const Index n = agent.states(), k = pre.xi_dim();
  if (pre.Bh.rows() != k || pre.Eh.rows() != k || pre.Ch.cols() != k ||
      pre.Ch.rows() != agent.inputs() || pre.Dz.rows() != agent.inputs() ||
      pre.Dz.cols() != agent.measurements() || pre.Dh.rows() != agent.inputs() ||
      pre.Bh.cols() != agent.measurements() || pre.Eh.cols() != pre.Dh.cols())
    throw DimensionError("verify_homogenization: pre-compensator shape mismatch");
  if (pre.Dh.cols() != target.B.cols())
    throw DimensionError("verify_homogenization: v dimension differs from target input");

  const CompensatedSystem sys = compensate(agent, pre);
  const Index nc = n + k;

  HomogenizationCertificate cert;
  {
    const double a_norm = std::max(1.0, linalg::spectral_norm(sys.A));
    double scale = linalg::spectral_norm(sys.C) * linalg::spectral_norm(sys.B);
    Matrix akb = sys.B, tkb = target.B;
    const Index terms = 2 * (nc + target.states());
    for (Index i = 0; i <= terms; ++i) {
      const double diff = (sys.C * akb - target.C * tkb).norm();
      cert.markov_error = std::max(cert.markov_error, diff / std::max(1.0, scale));
      akb = sys.A * akb;
      tkb = target.A * tkb;
      scale *= a_norm;
    }
  }

  // x_bar = T x reproduces the output and its first nq - 1 derivatives; the
  // mismatch in the nq-th derivative, divided by the target high-frequency
  // gain, is rho = R x in x_bar' = A x_bar + B (v + rho).
  const Index nq = target.nq;
  const Matrix obs_c = linalg::observability_matrix(sys.C, sys.A, nq);
  const Matrix obs_t = linalg::observability_matrix(target.C, target.A, nq);
  const Matrix T = obs_t.fullPivLu().solve(obs_c);
  cert.minimal_order = linalg::numerical_rank(T);

  Matrix a_pow = Matrix::Identity(nc, nc), t_pow = Matrix::Identity(target.states(),
                                                                    target.states());
  for (Index i = 0; i < nq; ++i) {
    a_pow = a_pow * sys.A;
    t_pow = t_pow * target.A;
  }
  Matrix t_hf = target.B;
  for (Index i = 0; i + 1 < nq; ++i) t_hf = target.A * t_hf;
  t_hf = target.C * t_hf;
  const Matrix drive = sys.C * a_pow - target.C * t_pow * T;
  const double drive_scale =
      std::max(1.0, linalg::spectral_norm(sys.C) * linalg::spectral_norm(a_pow));
  Matrix R = t_hf.completeOrthogonalDecomposition().solve(drive);
  if (drive.norm() <= 1e-9 * drive_scale) R.setZero();

  // omega: the quotient of the state seen by rho and its derivatives.
  Matrix q_rows(0, nc);
  if (R.norm() > 0.0) q_rows = linalg::controllable_subspace(sys.A.transpose(), R.transpose())
                                   .transpose();
  const Index nw = q_rows.rows();
  const Matrix a_w = q_rows * sys.A * q_rows.transpose();
  const Matrix c_w = R * q_rows.transpose();
  if (nw > 0)
    cert.input_residual =
        linalg::spectral_norm(q_rows * sys.B) / std::max(1.0, linalg::spectral_norm(sys.B));

  // Zero dynamics: the invariant subspace invisible to both x_bar and omega.
  Matrix stacked(T.rows() + nw, nc);
  stacked << T, q_rows;
  const Matrix z = linalg::null_space(stacked);
  const Matrix a_z = z.transpose() * sys.A * z;
  const Index nz = z.cols();
  if (T.rows() + nw + nz != nc)
    cert.input_residual = std::max(cert.input_residual, 1.0);

  cert.As = Matrix::Zero(nw + nz, nw + nz);
  cert.As.topLeftCorner(nw, nw) = a_w;
  cert.As.bottomRightCorner(nz, nz) = a_z;
  cert.Cs = Matrix::Zero(target.B.cols(), nw + nz);
  cert.Cs.leftCols(nw) = c_w;

  cert.hurwitz = is_hurwitz(cert.As);
  if (cert.As.rows() > 0) {
    double worst = -std::numeric_limits<double>::infinity();
    for (const Complex& e : spectrum(cert.As)) worst = std::max(worst, e.real());
    cert.decay_rate = -worst;
  }
  return cert;
}

Precompensator identity_precompensator(const LtiAgent& agent) {
  const Index m = agent.inputs(), q = agent.measurements();
  Precompensator pre;
  pre.Ah = Matrix::Zero(0, 0);
  pre.Bh = Matrix::Zero(0, q);
  pre.Eh = Matrix::Zero(0, m);
  pre.Ch = Matrix::Zero(m, 0);
  pre.Dz = Matrix::Zero(m, q);
  pre.Dh = Matrix::Identity(m, m);
  return pre;
}

bool matches_target(const LtiAgent& agent, const TargetModel& target) {
  return agent.A.rows() == target.A.rows() && agent.B.cols() == target.B.cols() &&
         agent.C.rows() == target.C.rows() && agent.A == target.A &&
         agent.B == target.B && agent.C == target.C;
}

Matrix target_coordinates(const LtiAgent& agent, const Precompensator& pre,
                          const TargetModel& target) {
  const CompensatedSystem sys = compensate(agent, pre);
  const Matrix obs_c = linalg::observability_matrix(sys.C, sys.A, target.nq);
  const Matrix obs_t = linalg::observability_matrix(target.C, target.A, target.nq);
  return obs_t.fullPivLu().solve(obs_c);
}

}  // namespace sfsync
