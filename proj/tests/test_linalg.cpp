// Copyright 2026 The qmeas Authors
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

#include <doctest.h>

#include <cmath>
#include <numbers>

#include <qmeas/linalg.hpp>
#include <qmeas/random.hpp>

using namespace qmeas;

namespace {

double max_abs(const CMatrix& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace

TEST_CASE("kron identity cases") {
  CHECK(max_abs(kron(identity2(), identity2()) - CMatrix::Identity(4, 4)) == 0.0);

  const CMatrix zi = kron(pauli_z(), identity2());
  CMatrix expected = CMatrix::Zero(4, 4);
  expected.diagonal() << 1, 1, -1, -1;
  CHECK(max_abs(zi - expected) == 0.0);
}

TEST_CASE("kron basis action") {
  CVector e00 = CVector::Zero(4);
  e00[0] = 1.0;
  CVector e11 = CVector::Zero(4);
  e11[3] = 1.0;
  CHECK((kron(pauli_x(), pauli_x()) * e00 - e11).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("kron refuses oversized results") {
  const CMatrix big = CMatrix::Identity(64, 64);
  CHECK_THROWS_AS(kron(big, big, /*max_dim=*/1024), ValidationError);
}

TEST_CASE("expm_hermitian at zero scale is the identity") {
  Rng rng(7);
  const CMatrix h = random_hermitian(5, rng);
  CHECK(max_abs(expm_hermitian(h, 0.0) - CMatrix::Identity(5, 5)) < 1e-14);
}

TEST_CASE("expm_hermitian of pauli_x at pi flips the sign") {
  const CMatrix u = expm_hermitian(pauli_x(), std::numbers::pi);
  CHECK(max_abs(u + CMatrix::Identity(2, 2)) < 1e-14);
}

TEST_CASE("expm_hermitian produces unitaries") {
  Rng rng(11);
  for (int trial = 0; trial < 10; ++trial) {
    const CMatrix h = random_hermitian(6, rng);
    const CMatrix u = expm_hermitian(h, 0.7);
    CHECK(max_abs(u * u.adjoint() - CMatrix::Identity(6, 6)) < 1e-12);
  }
}

TEST_CASE("expm_hermitian inverse pairing") {
  Rng rng(13);
  for (double t : {0.3, 1.0, 4.2}) {
    const CMatrix h = random_hermitian(4, rng);
    const CMatrix forward = expm_hermitian(h, t);
    const CMatrix backward = expm_hermitian(h, -t);
    CHECK(max_abs(forward * backward - CMatrix::Identity(4, 4)) < 1e-12);
  }
}

TEST_CASE("expm_hermitian halving identity") {
  // Independent route: exp(i t H) must equal exp(i t/2 H) squared.
  Rng rng(17);
  const CMatrix h = random_hermitian(5, rng);
  const CMatrix whole = expm_hermitian(h, 1.3);
  const CMatrix half = expm_hermitian(h, 0.65);
  CHECK(max_abs(whole - half * half) < 1e-13);
}

TEST_CASE("expm_hermitian rejects non-Hermitian generators") {
  CMatrix bad(2, 2);
  bad << 0.0, 1.0, 0.0, 0.0;
  CHECK_THROWS_AS(expm_hermitian(bad, 1.0), ValidationError);
}

TEST_CASE("trace_product basics") {
  CHECK(trace_product(CMatrix::Identity(7, 7), CMatrix::Identity(7, 7)).real() ==
        doctest::Approx(7.0));

  CMatrix p = CMatrix::Zero(3, 3);
  p(0, 0) = 1.0;
  p(2, 2) = 1.0;
  CHECK(std::abs(trace_product(p, p) - p.trace()) < 1e-15);
}

TEST_CASE("trace_product matches the naive product trace") {
  Rng rng(23);
  for (int trial = 0; trial < 20; ++trial) {
    const CMatrix a = random_gaussian(4, 4, rng);
    const CMatrix b = random_gaussian(4, 4, rng);
    const Complex naive = (a * b).trace();
    CHECK(std::abs(trace_product(a, b) - naive) < 1e-13);
  }
}

TEST_CASE("trace_product rejects mismatched dimensions") {
  CHECK_THROWS_AS(trace_product(CMatrix::Identity(2, 2), CMatrix::Identity(3, 3)),
                  ValidationError);
}

TEST_CASE("trace of a Kronecker product factorizes") {
  Rng rng(29);
  for (int trial = 0; trial < 10; ++trial) {
    const CMatrix a = random_gaussian(3, 3, rng);
    const CMatrix b = random_gaussian(4, 4, rng);
    const Complex lhs = kron(a, b).trace();
    const Complex rhs = a.trace() * b.trace();
    CHECK(std::abs(lhs - rhs) < 1e-12);
  }
}

TEST_CASE("density operator validation accepts polarized site states") {
  for (double m : {-1.0, -0.5, 0.0, 0.5, 1.0}) {
    const CMatrix state = 0.5 * (identity2() + m * pauli_z());
    CHECK_NOTHROW(DensityOperator{state});
  }
}

TEST_CASE("density operator validation rejects unphysical inputs") {
  // Polarization beyond 1 produces a negative eigenvalue.
  CHECK_THROWS_AS(DensityOperator{CMatrix(0.5 * (identity2() + 1.5 * pauli_z()))},
                  ValidationError);
  // Wrong trace.
  CHECK_THROWS_AS(DensityOperator{CMatrix(2.0 * identity2())}, ValidationError);
  // Not Hermitian.
  CMatrix skew(2, 2);
  skew << 0.5, 0.3, -0.3, 0.5;
  CHECK_THROWS_AS(DensityOperator{skew}, ValidationError);
}

TEST_CASE("projector validation") {
  CMatrix p = CMatrix::Zero(2, 2);
  p(0, 0) = 1.0;
  CHECK_NOTHROW(Projector{p});
  CHECK_THROWS_AS(Projector{CMatrix(0.5 * identity2())}, ValidationError);
}
