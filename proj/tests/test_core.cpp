// Copyright 2026 The dressim Authors
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

#include <catch2/catch_amalgamated.hpp>
#include <cmath>

#include "dressim/core.hpp"
#include "dressim/errors.hpp"
#include "testutil.hpp"

namespace dressim {
namespace test_core {

using Catch::Matchers::WithinAbs;
using test::mat2;
using test::max_abs;

TEST_CASE("Basis dimensions and labels") {
  CHECK(dimension(Basis::Lab2) == 2);
  CHECK(dimension(Basis::Rot4) == 4);
  CHECK(dimension(Basis::Dressed5) == 5);
  CHECK(dimension(Basis::DressedST5) == 5);
  CHECK(dimension(Basis::Dressed6) == 6);
  CHECK(dimension(Basis::Exchange2) == 2);
  CHECK(ket_labels(Basis::DressedST5)[2] == "s11");
  CHECK(ket_labels(Basis::Dressed5)[4] == "tminus");
  CHECK(basis_name(Basis::Dressed2) == "Dressed2");
}

SCENARIO("StateVector invariants") {
  GIVEN("An unnormalised amplitude vector") {
    CVector v(2);
    v << 1.0, 1.0;
    THEN("The checked constructor rejects it") {
      REQUIRE_THROWS_AS(StateVector(v, Basis::Rot2), ContractViolation);
    }
    THEN("normalized() fixes it") {
      const auto psi = StateVector::normalized(v, Basis::Rot2);
      REQUIRE_THAT(psi.norm(), WithinAbs(1.0, 1e-15));
      REQUIRE_THAT(psi.populations()(0), WithinAbs(0.5, 1e-15));
    }
  }
  GIVEN("A vector of the wrong length") {
    CVector v = CVector::Zero(3);
    v(0) = 1.0;
    REQUIRE_THROWS_AS(StateVector(v, Basis::Rot4), ContractViolation);
  }
  GIVEN("A basis ket") {
    const auto psi = StateVector::basis_state(Basis::Dressed5, 3);
    REQUIRE(psi.populations()(3) == 1.0);
    REQUIRE(psi.populations().sum() == 1.0);
    REQUIRE_THROWS_AS(StateVector::basis_state(Basis::Dressed5, 5),
                      ContractViolation);
  }
}

TEST_CASE("Operator constructors check their invariants") {
  REQUIRE_THROWS_AS(HermitianOperator(mat2(0, 1, 2, 0), Basis::Rot2),
                    ContractViolation);
  REQUIRE_THROWS_AS(HermitianOperator(mat2(0, 1, 1, 0), Basis::Rot4),
                    ContractViolation);
  REQUIRE_NOTHROW(HermitianOperator(mat2(1, kI, -kI, 2), Basis::Rot2));
  REQUIRE_THROWS_AS(UnitaryOperator(mat2(1, 1, 0, 1), Basis::Rot2),
                    ContractViolation);
  REQUIRE_NOTHROW(UnitaryOperator(pauli::hadamard(), Basis::Rot2));
}

TEST_CASE("Pauli algebra") {
  const CMatrix I = pauli::identity();
  CHECK(max_abs(pauli::x() * pauli::y() - kI * pauli::z()) < 1e-15);
  CHECK(max_abs(pauli::hadamard() * pauli::z() * pauli::hadamard() -
                pauli::x()) < 1e-15);
  CHECK(max_abs(pauli::hadamard() * pauli::y() * pauli::hadamard() +
                pauli::y()) < 1e-15);
  CHECK(max_abs(pauli::rotation({1, 0, 0}, kPi) + kI * pauli::x()) < 1e-15);
  CHECK(max_abs(pauli::rotation({0, 0, 2}, 0.0) - I) < 1e-15);
  REQUIRE_THROWS_AS(pauli::rotation({0, 0, 0}, 1.0), ContractViolation);
}

TEST_CASE("kron matches the elementwise definition") {
  const CMatrix a = mat2(1, 2.0 * kI, 3, 4);
  const CMatrix b = pauli::z();
  CHECK(max_abs(kron(a, b) - test::kron_oracle(a, b)) == 0.0);
  CHECK(max_abs(kron(pauli::x(), pauli::identity()).block(0, 2, 2, 2) -
                pauli::identity()) == 0.0);
}

TEST_CASE("tensor chooses the two-qubit basis") {
  const HermitianOperator zr(pauli::z(), Basis::Rot2);
  const HermitianOperator zd(pauli::z(), Basis::Dressed2);
  CHECK(tensor(zr, zr).basis() == Basis::Rot4);
  CHECK(tensor(zd, zd).basis() == Basis::Dressed4);
  REQUIRE_THROWS_AS(tensor(zr, zd), BasisMismatch);
}

SCENARIO("Propagator of a two-level Hamiltonian") {
  const double f = 3.7e6;
  const HermitianOperator h(0.5 * f * pauli::x(), Basis::Rot2);
  GIVEN("A time t") {
    const double t = 0.13e-6;
    THEN("It matches cos(pi f t) I - i sin(pi f t) X") {
      const CMatrix oracle = std::cos(kPi * f * t) * pauli::identity() -
                             kI * std::sin(kPi * f * t) * pauli::x();
      REQUIRE(max_abs(propagator(h, t).matrix() - oracle) < 1e-13);
    }
    THEN("It composes additively in time") {
      const auto u = propagator(h, t) * propagator(h, 2.0 * t);
      REQUIRE(max_abs(u.matrix() - propagator(h, 3.0 * t).matrix()) < 1e-13);
    }
  }
  GIVEN("Zero or negative time") {
    REQUIRE(max_abs(propagator(h, 0.0).matrix() - pauli::identity()) == 0.0);
    REQUIRE_THROWS_AS(propagator(h, -1e-9), ContractViolation);
  }
}

TEST_CASE("eigh returns ascending values and reconstructs the matrix") {
  CMatrix m(4, 4);
  m << 2, kI, 0, 0.3, -kI, -1, 0.5, 0, 0, 0.5, 4, 1.0 - kI, 0.3, 0, 1.0 + kI,
      0.5;
  const auto dec = eigh(HermitianOperator(m, Basis::Rot4));
  for (Eigen::Index k = 1; k < 4; ++k) {
    CHECK(dec.values(k) >= dec.values(k - 1));
  }
  const CMatrix& v = dec.vectors.matrix();
  CHECK(max_abs(v * dec.values.asDiagonal() * v.adjoint() - m) < 1e-13);
  // Trace is basis independent.
  CHECK_THAT(dec.values.sum(), WithinAbs(5.5, 1e-13));
}

TEST_CASE("gate_fidelity") {
  const UnitaryOperator x(pauli::x(), Basis::Rot2);
  const UnitaryOperator id = UnitaryOperator::identity(Basis::Rot2);
  const UnitaryOperator phased(std::exp(kI * 0.7) * pauli::x(), Basis::Rot2);
  CHECK_THAT(gate_fidelity(x, x), WithinAbs(1.0, 1e-15));
  CHECK_THAT(gate_fidelity(phased, x), WithinAbs(1.0, 1e-15));
  CHECK_THAT(gate_fidelity(x, id), WithinAbs(0.0, 1e-15));
  // Rotation by a about x: |Tr|^2/4 = cos^2(a/2)
  const UnitaryOperator r(pauli::rotation({1, 0, 0}, 0.3), Basis::Rot2);
  CHECK_THAT(gate_fidelity(r, id), WithinAbs(std::pow(std::cos(0.15), 2), 1e-15));
  REQUIRE_THROWS_AS(
      gate_fidelity(x, UnitaryOperator::identity(Basis::Rot4)),
      ContractViolation);
}

TEST_CASE("Unitary products respect basis tags") {
  const UnitaryOperator a(pauli::x(), Basis::Rot2);
  const UnitaryOperator b(pauli::x(), Basis::Dressed2);
  REQUIRE_THROWS_AS(a * b, BasisMismatch);
  REQUIRE(max_abs((a * a).matrix() - pauli::identity()) == 0.0);
  REQUIRE_THROWS_AS(a.apply(StateVector::basis_state(Basis::Dressed2, 0)),
                    BasisMismatch);
  const auto flipped = a.apply(StateVector::basis_state(Basis::Rot2, 0));
  REQUIRE(flipped.populations()(1) == 1.0);
}

TEST_CASE("change_basis conjugates by w") {
  const CMatrix w = pauli::hadamard();
  CHECK(max_abs(change_basis(pauli::z(), w) - pauli::x()) < 1e-15);
}

}  // namespace test_core
}  // namespace dressim
