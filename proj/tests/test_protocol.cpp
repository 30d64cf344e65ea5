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


#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "sfsync/errors.hpp"
#include "sfsync/graph.hpp"
#include "sfsync/homogenize.hpp"
#include "sfsync/protocol.hpp"
#include "sfsync/sim.hpp"
#include "support.hpp"

using namespace sfsync;
using sfsync::testing::oscillator_target;
using sfsync::testing::reference_agent;
using sfsync::testing::reference_h_poles;
using sfsync::testing::reference_k_poles;

namespace {

TargetModel scalar_target() {
  return TargetModel{Matrix::Ones(1, 1), Matrix::Zero(1, 1), Matrix::Ones(1, 1), 1};
}

// Characteristic polynomial coefficients (monic, highest power first) of a
// matrix, by expanding the product of (s - lambda).
std::vector<double> poly_from_roots(const ComplexList& roots) {
  std::vector<Complex> c{1.0};
  for (const Complex& r : roots) {
    std::vector<Complex> next(c.size() + 1, 0.0);
    for (std::size_t i = 0; i < c.size(); ++i) {
      next[i] += c[i];
      next[i + 1] -= r * c[i];
    }
    c = next;
  }
  std::vector<double> out;
  for (const Complex& z : c) out.push_back(z.real());
  return out;
}

// Faddeev-LeVerrier coefficients of det(sI - M).
std::vector<double> charpoly(const Matrix& m) {
  const Eigen::Index n = m.rows();
  std::vector<double> c(static_cast<std::size_t>(n) + 1, 0.0);
  c[0] = 1.0;
  Matrix mk = Matrix::Zero(n, n);
  for (Eigen::Index k = 1; k <= n; ++k) {
    mk = m * mk + c[static_cast<std::size_t>(k - 1)] * Matrix::Identity(n, n);
    c[static_cast<std::size_t>(k)] = -(m * mk).trace() / static_cast<double>(k);
  }
  return c;
}

ProtocolRealization protocol_for(int agent, ProtocolMode mode, int iota = 0) {
  const TargetModel t = oscillator_target();
  const Gains g = design_gains(t, reference_k_poles(), reference_h_poles());
  const Precompensator pre = design_precompensator(reference_agent(agent), t).pre;
  return mode == ProtocolMode::output_sync ? build_output_protocol(agent, pre, t, g)
                                           : build_regulated_protocol(agent, pre, t, g, iota);
}

}  // namespace

TEST_CASE("scalar target gains are one") {
  const Gains g = design_gains(scalar_target(), {Complex(-1.0)}, {Complex(-1.0)});
  CHECK(g.K(0, 0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(g.H(0, 0) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("poles outside the open left half plane are refused") {
  CHECK_THROWS_AS(design_gains(scalar_target(), {Complex(0.0)}, {Complex(-1.0)}), DesignError);
  CHECK_THROWS_AS(design_gains(scalar_target(), {Complex(-1.0)}, {Complex(0.5)}), DesignError);
  CHECK_THROWS_AS(design_gains(oscillator_target(), reference_k_poles(),
                               {Complex(-1.0, 1.0), Complex(-1.0, -1.0), Complex(1e-12)}),
                  DesignError);
}

TEST_CASE("placed loops have the requested characteristic polynomials") {
  const TargetModel t = oscillator_target();
  const ComplexList kp{Complex(-1.0, 2.0), Complex(-1.0, -2.0), Complex(-4.0)};
  const ComplexList hp{Complex(-0.5), Complex(-3.0), Complex(-7.0)};
  const Gains g = design_gains(t, kp, hp);
  const auto want_k = poly_from_roots(kp), want_h = poly_from_roots(hp);
  const auto got_k = charpoly(t.A - t.B * g.K), got_h = charpoly(t.A - g.H * t.C);
  for (std::size_t i = 0; i < want_k.size(); ++i) {
    CHECK(got_k[i] == doctest::Approx(want_k[i]).epsilon(1e-9));
    CHECK(got_h[i] == doctest::Approx(want_h[i]).epsilon(1e-9));
  }
}

TEST_CASE("default pole pools are Hurwitz and distinct for every order") {
  for (int nq = 1; nq <= 8; ++nq) {
    const ComplexList k = default_k_poles(nq), h = default_h_poles(nq);
    REQUIRE(static_cast<int>(k.size()) == nq);
    REQUIRE(static_cast<int>(h.size()) == nq);
    for (int i = 0; i < nq; ++i) {
      CHECK(k[static_cast<std::size_t>(i)].real() < 0.0);
      CHECK(h[static_cast<std::size_t>(i)].real() < 0.0);
      for (int j = 0; j < i; ++j) {
        CHECK(k[static_cast<std::size_t>(i)] != k[static_cast<std::size_t>(j)]);
        CHECK(h[static_cast<std::size_t>(i)] != h[static_cast<std::size_t>(j)]);
      }
    }
    const Gains g = design_gains(integrator_chain_target(nq), k, h);
    CHECK(g.K.cols() == nq);
  }
}

TEST_CASE("a statically homogenized agent carries only estimator and chi states") {
  const ProtocolRealization r = protocol_for(2, ProtocolMode::output_sync);
  CHECK(r.xi_dim == 0);
  CHECK(r.xhat_dim == 3);
  CHECK(r.chi_dim == 3);
  CHECK(r.states() == 6);
  CHECK(r.Ac.rows() == 6);
  CHECK(r.Cu.rows() == 1);
  CHECK(r.Cu.cols() == 6);
  CHECK(r.Meta.rows() == 3);

  const ProtocolRealization r1 = protocol_for(1, ProtocolMode::output_sync);
  const auto pre = design_precompensator(reference_agent(1), oscillator_target()).pre;
  CHECK(r1.xi_dim == pre.xi_dim());
  CHECK(r1.states() == pre.xi_dim() + 6);
}

TEST_CASE("iota switches exactly the chi self-feedback terms") {
  const TargetModel t = oscillator_target();
  const Gains g = design_gains(t, reference_k_poles(), reference_h_poles());
  const ProtocolRealization r0 = protocol_for(5, ProtocolMode::regulated, 0);
  const ProtocolRealization r1 = protocol_for(5, ProtocolMode::regulated, 1);
  CHECK(r0.iota == 0);
  CHECK(r1.iota == 1);
  const Eigen::Index xh = r0.xi_dim, ch = r0.xi_dim + 3;
  const Matrix diff = r1.Ac - r0.Ac;
  CHECK((diff.block(xh, ch, 3, 3) + t.B * g.K).norm() == doctest::Approx(0.0));
  CHECK((diff.block(ch, ch, 3, 3) + Matrix::Identity(3, 3)).norm() == doctest::Approx(0.0));
  Matrix rest = diff;
  rest.block(xh, ch, 3, 3).setZero();
  rest.block(ch, ch, 3, 3).setZero();
  CHECK(rest.norm() == 0.0);
  CHECK(r1.Bzeta == r0.Bzeta);
  CHECK(r1.Bzhat == r0.Bzhat);
  CHECK(r1.Cu == r0.Cu);
  CHECK_THROWS(build_regulated_protocol(1, design_precompensator(reference_agent(5), t).pre, t,
                                        g, 2));
}

TEST_CASE("isolated scalar loop has the target, estimator and chi spectra") {
  const TargetModel t = scalar_target();
  const Gains g = design_gains(t, {Complex(-1.0)}, {Complex(-2.0)});
  const LtiAgent a = t.as_system();
  const Precompensator pre = identity_precompensator(a);
  const ProtocolRealization r = build_output_protocol(1, pre, t, g);
  // With no neighbours zeta and zhat vanish: x' = A x + B (Cu s + Dz y).
  const Eigen::Index ns = r.states();
  Matrix cl = Matrix::Zero(1 + ns, 1 + ns);
  cl.block(0, 0, 1, 1) = a.A + a.B * r.Dz * a.Cm;
  cl.block(0, 1, 1, ns) = a.B * r.Cu;
  cl.block(1, 0, ns, 1) = r.Bz * a.Cm;
  cl.block(1, 1, ns, ns) = r.Ac;
  std::vector<double> re;
  for (const Complex& z : spectrum(cl)) {
    CHECK(std::abs(z.imag()) < 1e-9);
    re.push_back(z.real());
  }
  std::sort(re.begin(), re.end());
  REQUIRE(re.size() == 3);
  CHECK(re[0] == doctest::Approx(-2.0));
  CHECK(re[1] == doctest::Approx(-1.0));
  CHECK(re[2] == doctest::Approx(0.0));
}

TEST_CASE("bundles round-trip bit for bit") {
  for (int agent = 1; agent <= 5; ++agent) {
    for (int iota = 0; iota <= 1; ++iota) {
      const ProtocolRealization r = protocol_for(agent, ProtocolMode::regulated, iota);
      const std::string text = serialize_bundle(r);
      const ProtocolRealization back = parse_bundle(text);
      CHECK(back.mode == r.mode);
      CHECK(back.iota == r.iota);
      CHECK(back.xi_dim == r.xi_dim);
      CHECK(back.Ac == r.Ac);
      CHECK(back.Bzeta == r.Bzeta);
      CHECK(back.Bzhat == r.Bzhat);
      CHECK(back.Bz == r.Bz);
      CHECK(back.Cu == r.Cu);
      CHECK(back.Dz == r.Dz);
      CHECK(back.Meta == r.Meta);
      CHECK(serialize_bundle(back) == text);
    }
  }
}

TEST_CASE("malformed bundles are parse errors") {
  const std::string good = serialize_bundle(protocol_for(2, ProtocolMode::output_sync));
  CHECK_THROWS_AS(parse_bundle("mode output_sync\n"), ParseError);
  CHECK_THROWS_AS(parse_bundle("mode sideways\ndims 0 1 1\n"), ParseError);
  CHECK_THROWS_AS(parse_bundle(good + "bogus 1\n"), ParseError);
  std::string truncated = good.substr(0, good.rfind('\n', good.size() - 2) + 1);
  CHECK_THROWS_AS(parse_bundle(truncated), ParseError);
}

TEST_CASE("protocol of an agent does not depend on the network around it") {
  auto bundle_in = [](const DiGraph& g, int n) {
    Scenario s;
    for (int i = 0; i < n; ++i) {
      LtiAgent a = reference_agent(i == 1 ? 2 : 1 + (i % 5));
      a.id = i + 1;
      s.agents.push_back(a);
    }
    s.graph = g;
    s.target = oscillator_target();
    s.k_poles = reference_k_poles();
    s.h_poles = reference_h_poles();
    return serialize_bundle(design_network(s).protocols[1]);
  };
  const std::string small = bundle_in(DiGraph::from_edges(3, {{0, 1}, {1, 2}}), 3);
  const std::string ring = bundle_in(DiGraph::from_edges(4, {{0, 1}, {1, 2}, {2, 3}, {3, 0}}), 4);
  RandomGraphOptions o;
  const std::string big =
      bundle_in(random_admissible_graph(12, GraphClass::spanning_tree, RootSet{}, 5, o), 12);
  CHECK(small == ring);
  CHECK(small == big);
}
