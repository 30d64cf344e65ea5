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

#include <complex>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

namespace sfsync {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Complex = std::complex<double>;
using ComplexList = std::vector<Complex>;

// Eigenvalues with |Re| <= kHurwitzMargin count as lying on the imaginary axis.
inline constexpr double kHurwitzMargin = 1e-9;
// Singular values below kRankTol * sigma_max are treated as zero.
inline constexpr double kRankTol = 1e-9;

namespace linalg {

int numerical_rank(const Matrix& m);
int numerical_rank(const Eigen::MatrixXcd& m);

// Largest singular value; 0 for empty matrices.
double spectral_norm(const Matrix& m);
// Orthonormal basis of range(m); n x 0 when m is numerically zero.
Matrix orth(const Matrix& m);
// Orthonormal basis of ker(m). Singular values are compared against
// kRankTol * max(sigma_max, scale).
Matrix null_space(const Matrix& m, double scale = 0.0);
// Orthonormal basis of the orthogonal complement of range(q) in R^n.
Matrix complement(const Matrix& q, Eigen::Index n);
Matrix intersect(const Matrix& u, const Matrix& v);
// {x : a x in range(w)}
Matrix preimage(const Matrix& a, const Matrix& w);
Matrix hcat(const Matrix& a, const Matrix& b);
Matrix vcat(const Matrix& a, const Matrix& b);

// Smallest A-invariant subspace containing range(B).
Matrix controllable_subspace(const Matrix& a, const Matrix& b);
// Largest A-invariant subspace inside ker(C).
Matrix unobservable_subspace(const Matrix& c, const Matrix& a);

Matrix power(const Matrix& a, int k);

// [c; c a; ...; c a^(rows-1)]
Matrix observability_matrix(const Matrix& c, const Matrix& a, int blocks);

// Monic polynomial coefficients (lowest degree first, leading 1 included) with
// the given roots. Imaginary residue from conjugate pairs is dropped.
std::vector<double> poly_from_roots(const ComplexList& roots);

}  // namespace linalg
}  // namespace sfsync
