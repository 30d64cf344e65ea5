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

#include "sfsync/linalg.hpp"

#include <algorithm>

#include "sfsync/errors.hpp"

namespace sfsync::linalg {

namespace {

template <typename M>
int rank_from_singular_values(const M& sv, double scale = 0.0) {
  if (sv.size() == 0) return 0;
  const double top = std::max<double>(sv(0), scale);
  if (!(top > 0.0)) return 0;
  int r = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > kRankTol * top) ++r;
  return r;
}

}  // namespace

int numerical_rank(const Matrix& m) {
  if (m.size() == 0) return 0;
  Eigen::JacobiSVD<Matrix> svd(m);
  return rank_from_singular_values(svd.singularValues());
}

int numerical_rank(const Eigen::MatrixXcd& m) {
  if (m.size() == 0) return 0;
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
  return rank_from_singular_values(svd.singularValues());
}

double spectral_norm(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  return Eigen::JacobiSVD<Matrix>(m).singularValues()(0);
}

Matrix orth(const Matrix& m) {
  if (m.cols() == 0 || m.rows() == 0) return Matrix(m.rows(), 0);
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeThinU);
  const int r = rank_from_singular_values(svd.singularValues());
  return svd.matrixU().leftCols(r);
}

Matrix null_space(const Matrix& m, double scale) {
  const Eigen::Index n = m.cols();
  if (n == 0) return Matrix(0, 0);
  if (m.rows() == 0) return Matrix::Identity(n, n);
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeFullV);
  const int r = rank_from_singular_values(svd.singularValues(), scale);
  return svd.matrixV().rightCols(n - r);
}

Matrix complement(const Matrix& q, Eigen::Index n) {
  if (q.cols() == 0) return Matrix::Identity(n, n);
  return null_space(q.transpose());
}

Matrix hcat(const Matrix& a, const Matrix& b) {
  if (a.cols() == 0) return b;
  if (b.cols() == 0) return a;
  if (a.rows() != b.rows()) throw DimensionError("hcat: row mismatch");
  Matrix out(a.rows(), a.cols() + b.cols());
  out << a, b;
  return out;
}

Matrix vcat(const Matrix& a, const Matrix& b) {
  if (a.rows() == 0) return b;
  if (b.rows() == 0) return a;
  if (a.cols() != b.cols()) throw DimensionError("vcat: column mismatch");
  Matrix out(a.rows() + b.rows(), a.cols());
  out << a, b;
  return out;
}

Matrix intersect(const Matrix& u, const Matrix& v) {
  const Eigen::Index n = std::max(u.rows(), v.rows());
  if (u.cols() == 0 || v.cols() == 0) return Matrix(n, 0);
  Matrix stacked(n, u.cols() + v.cols());
  stacked << u, -v;
  const Matrix ns = null_space(stacked);
  if (ns.cols() == 0) return Matrix(n, 0);
  return orth(u * ns.topRows(u.cols()));
}

Matrix preimage(const Matrix& a, const Matrix& w) {
  if (w.cols() == 0) return null_space(a);
  const Matrix proj =
      Matrix::Identity(a.rows(), a.rows()) - w * w.transpose();
  // When w spans nearly everything, proj * a is pure roundoff; measure it
  // against a itself.
  return null_space(proj * a, a.norm());
}

Matrix controllable_subspace(const Matrix& a, const Matrix& b) {
  Matrix v = orth(b);
  while (v.cols() > 0 && v.cols() < a.rows()) {
    Matrix next = orth(hcat(v, a * v));
    if (next.cols() == v.cols()) break;
    v = std::move(next);
  }
  return v;
}

Matrix unobservable_subspace(const Matrix& c, const Matrix& a) {
  const Matrix obs = controllable_subspace(a.transpose(), c.transpose());
  return complement(obs, a.rows());
}

Matrix power(const Matrix& a, int k) {
  Matrix out = Matrix::Identity(a.rows(), a.cols());
  for (int i = 0; i < k; ++i) out = out * a;
  return out;
}

Matrix observability_matrix(const Matrix& c, const Matrix& a, int blocks) {
  Matrix out(c.rows() * blocks, a.cols());
  Matrix row = c;
  for (int k = 0; k < blocks; ++k) {
    out.middleRows(k * c.rows(), c.rows()) = row;
    row = row * a;
  }
  return out;
}

std::vector<double> poly_from_roots(const ComplexList& roots) {
  std::vector<Complex> c{Complex(1.0)};
  for (const Complex& r : roots) {
    std::vector<Complex> next(c.size() + 1, Complex(0.0));
    for (std::size_t i = 0; i < c.size(); ++i) {
      next[i + 1] += c[i];
      next[i] -= r * c[i];
    }
    c = std::move(next);
  }
  std::vector<double> out(c.size());
  for (std::size_t i = 0; i < c.size(); ++i) out[i] = c[i].real();
  return out;
}

}  // namespace sfsync::linalg
