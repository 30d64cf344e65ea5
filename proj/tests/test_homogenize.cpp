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

#include <cmath>

#include "doctest.h"
#include "sfsync/errors.hpp"
#include "sfsync/homogenize.hpp"
#include "sfsync/rng.hpp"
#include "sfsync/sim.hpp"
#include "support.hpp"

using namespace sfsync;
using sfsync::testing::oscillator_target;
using sfsync::testing::reference_agent;

namespace {

Matrix row(std::initializer_list<double> v) {
  Matrix m(1, static_cast<Eigen::Index>(v.size()));
  Eigen::Index j = 0;
  for (double x : v) m(0, j++) = x;
  return m;
}

// Classical RK4 on x' = A x + B sin t; returns y = C x on the grid.
std::vector<double> forced_response(const Matrix& a, const Matrix& b, const Matrix& c,
                                    Vector x, double dt, int steps) {
  auto f = [&](double t, const Vector& s) -> Vector { return a * s + b.col(0) * std::sin(t); };
  std::vector<double> y;
  y.reserve(static_cast<std::size_t>(steps) + 1);
  double t = 0.0;
  for (int k = 0; k <= steps; ++k) {
    y.push_back((c * x)(0));
    const Vector k1 = f(t, x);
    const Vector k2 = f(t + dt / 2, x + dt / 2 * k1);
    const Vector k3 = f(t + dt / 2, x + dt / 2 * k2);
    const Vector k4 = f(t + dt, x + dt * k3);
    x += dt / 6 * (k1 + 2 * k2 + 2 * k3 + k4);
    t += dt;
  }
  return y;
}

}  // namespace

TEST_CASE("triple integrator gets the static law u = -x2 + v") {
  const LtiAgent a = reference_agent(2);
  const HomogenizationResult h = design_precompensator(a, oscillator_target());
  CHECK(h.pre.is_static());
  CHECK(h.pre.xi_dim() == 0);
  CHECK((h.pre.Dz - row({0, -1, 0})).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(h.pre.Dh(0, 0) == doctest::Approx(1.0));
  CHECK(h.certificate.As.rows() == 0);
  CHECK(h.certificate.markov_error < 1e-12);
  CHECK(std::isinf(h.certificate.decay_rate));
}

TEST_CASE("agent 5 gets the static law u = -x1 - 2 x2 + v") {
  const HomogenizationResult h = design_precompensator(reference_agent(5), oscillator_target());
  CHECK(h.pre.is_static());
  CHECK((h.pre.Dz - row({-1, -2, 0})).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(h.pre.Dh(0, 0) == doctest::Approx(1.0));
  CHECK(h.certificate.As.rows() == 0);
}

TEST_CASE("relative-degree-one agent needs appended integrators") {
  const LtiAgent a = reference_agent(1);
  const HomogenizationResult h = design_precompensator(a, oscillator_target());
  // Two integrator stages per input channel.
  CHECK(h.pre.xi_dim() >= 2);
  CHECK(h.certificate.markov_error < 1e-6);
  CHECK(h.certificate.valid());
  CHECK(h.certificate.decay_rate > 0.0);
}

TEST_CASE("every reference agent is homogenized with a valid certificate") {
  const TargetModel t = oscillator_target();
  for (int k = 1; k <= 5; ++k) {
    CAPTURE(k);
    const LtiAgent a = reference_agent(k);
    const HomogenizationResult h = design_precompensator(a, t);
    const HomogenizationCertificate c = verify_homogenization(a, h.pre, t);
    CHECK(c.valid());
    CHECK(c.markov_error < 1e-6);
    CHECK(c.hurwitz == (c.As.rows() == 0 || is_hurwitz(c.As)));
    if (c.As.rows() > 0) {
      double max_re = -INFINITY;
      for (const Complex& z : spectrum(c.As)) max_re = std::max(max_re, z.real());
      CHECK(c.decay_rate == doctest::Approx(-max_re));
    }
    CHECK(c.minimal_order == t.states());
  }
}

TEST_CASE("a wrong pre-compensator is caught by the Markov check") {
  const LtiAgent a = reference_agent(2);
  const TargetModel t = oscillator_target();
  Precompensator zero = identity_precompensator(a);
  zero.Dh.setZero();
  CHECK(verify_homogenization(a, zero, t).markov_error >= 1.0);
  // Plain u = v leaves the triple integrator, which misses the -y' term.
  CHECK(verify_homogenization(a, identity_precompensator(a), t).markov_error >= 1.0);
}

TEST_CASE("an agent equal to the target matches it with the identity law") {
  const TargetModel t = oscillator_target();
  const LtiAgent same = t.as_system();
  CHECK(matches_target(same, t));
  CHECK_FALSE(matches_target(reference_agent(2), t));
  const HomogenizationCertificate c = verify_homogenization(same, identity_precompensator(same), t);
  CHECK(c.markov_error == 0.0);
  CHECK(c.valid());
}

TEST_CASE("partial measurements go through the observer path") {
  const TargetModel t = oscillator_target();
  for (int k : {1, 2, 5}) {
    CAPTURE(k);
    LtiAgent a = reference_agent(k);
    a.Cm = a.C;  // only the output is measured
    const HomogenizationResult full = design_precompensator(reference_agent(k), t);
    const HomogenizationResult obs = design_precompensator(a, t);
    CHECK(obs.pre.xi_dim() == full.pre.xi_dim() + a.states());
    CHECK(obs.certificate.valid());
    CHECK(verify_homogenization(a, obs.pre, t).markov_error < 1e-6);
  }
}

TEST_CASE("undetectable measurements are rejected") {
  LtiAgent a = reference_agent(2);
  a.Cm = row({0, 0, 1});
  CHECK_THROWS_AS(design_precompensator(a, oscillator_target()), UnsupportedError);
}

TEST_CASE("unstable zero dynamics are rejected") {
  // Transfer function (s - 1) / (s^2 + s - 2 ...): invariant zero at +1.
  Matrix a(2, 2), b(2, 1), c(1, 2);
  a << 0, 1, 2, -1;
  b << 0, 1;
  c << -1, 1;
  const LtiAgent nonmin = LtiAgent::from_triple(a, b, c);
  REQUIRE(invariant_zeros(nonmin).size() == 1);
  CHECK_THROWS_AS(design_precompensator(nonmin, oscillator_target()), UnsupportedError);
}

TEST_CASE("compensated output tracks the target up to a decaying error") {
  const TargetModel t = oscillator_target();
  Rng rng(3);
  for (int k = 1; k <= 5; ++k) {
    CAPTURE(k);
    const LtiAgent a = reference_agent(k);
    const HomogenizationResult h = design_precompensator(a, t);
    const CompensatedSystem cs = compensate(a, h.pre);
    const Matrix to_xbar = target_coordinates(a, h.pre, t);
    REQUIRE(to_xbar.rows() == t.states());
    REQUIRE(to_xbar.cols() == cs.A.rows());

    Vector x0 = Vector::Zero(cs.A.rows());
    for (Eigen::Index i = 0; i < a.states(); ++i) x0(i) = rng.uniform(-1, 1);
    const Vector xbar0 = to_xbar * x0;

    const double dt = 1e-3;
    const int steps = 20000;
    const std::vector<double> y = forced_response(cs.A, cs.B, cs.C, x0, dt, steps);
    const std::vector<double> yt = forced_response(t.A, t.B, t.C, xbar0, dt, steps);

    const double rate = h.certificate.decay_rate;
    if (std::isinf(rate)) {
      double worst = 0.0;
      for (std::size_t i = 0; i < y.size(); ++i) worst = std::max(worst, std::abs(y[i] - yt[i]));
      CHECK(worst < 1e-9);
      continue;
    }
    // Envelope constant fitted on [2, 4], then required to hold on [2, 20].
    double m = 0.0;
    for (int i = 2000; i <= 4000; ++i)
      m = std::max(m, std::abs(y[static_cast<std::size_t>(i)] - yt[static_cast<std::size_t>(i)]) *
                          std::exp(rate * i * dt));
    for (int i = 2000; i <= steps; ++i) {
      const double err = std::abs(y[static_cast<std::size_t>(i)] - yt[static_cast<std::size_t>(i)]);
      CHECK(err <= 10.0 * m * std::exp(-rate * i * dt) + 1e-9);
    }
  }
}

TEST_CASE("pre-compensators do not depend on the network") {
  const TargetModel t = oscillator_target();
  for (int k = 1; k <= 5; ++k) {
    Scenario small, large;
    for (Scenario* s : {&small, &large}) {
      s->target = t;
      s->agents.push_back(reference_agent(k));
    }
    small.agents.push_back(reference_agent(2));
    for (int i = 0; i < 30; ++i) large.agents.push_back(reference_agent(1 + i % 5));
    small.graph = random_admissible_graph(2, GraphClass::spanning_tree, RootSet{}, 1);
    large.graph = random_admissible_graph(31, GraphClass::spanning_tree, RootSet{}, 2);
    const Precompensator p = design_network(small).pre.front();
    const Precompensator q = design_network(large).pre.front();
    CHECK(p.Ah == q.Ah);
    CHECK(p.Bh == q.Bh);
    CHECK(p.Eh == q.Eh);
    CHECK(p.Ch == q.Ch);
    CHECK(p.Dz == q.Dz);
    CHECK(p.Dh == q.Dh);
  }
}
