#include <doctest.h>

#include <random>

#include "nuq/dense.hpp"
#include "nuq/fermion.hpp"
#include "nuq/models.hpp"
#include "nuq/pauli.hpp"
#include "support/fock_oracle.hpp"

using namespace nuq;

namespace {

PauliString random_string(std::mt19937_64& rng, int n) {
  const std::uint64_t mask = (n == 64) ? ~0ull : ((1ull << n) - 1);
  return PauliString(n, rng() & mask, rng() & mask,
                     static_cast<int>(rng() % 4));
}

PauliSum random_sum(std::mt19937_64& rng, int n, int terms) {
  PauliSum s(n);
  for (int k = 0; k < terms; ++k) {
    const double re = static_cast<double>(rng() % 2000) / 1000.0 - 1.0;
    const double im = static_cast<double>(rng() % 2000) / 1000.0 - 1.0;
    s.add(random_string(rng, n), {re, im});
  }
  return s;
}

}  // namespace

TEST_CASE("pauli string products") {
  const int n = 1;
  const auto X = PauliString::single(n, 0, 'X');
  const auto Y = PauliString::single(n, 0, 'Y');
  const auto Z = PauliString::single(n, 0, 'Z');

  SUBCASE("X * Y = +i Z") {
    const auto p = multiply(X, Y);
    CHECK(p.label() == "Z");
    CHECK(p.phase() == cplx{0.0, 1.0});
  }
  SUBCASE("Z * Z = I") {
    const auto p = multiply(Z, Z);
    CHECK(p.label() == "I");
    CHECK(p.phase() == cplx{1.0, 0.0});
  }
  SUBCASE("(X0 Z1) * (Z0 Z1) = -i Y0") {
    const auto a = PauliString::from_label("XZ");
    const auto b = PauliString::from_label("ZZ");
    const auto p = multiply(a, b);
    CHECK(p.label() == "YI");
    CHECK(p.phase() == cplx{0.0, -1.0});
  }
  SUBCASE("size mismatch throws") {
    CHECK_THROWS_AS(multiply(X, PauliString::from_label("XX")),
                    std::invalid_argument);
  }
}

TEST_CASE("pauli multiplication is associative on random triples") {
  std::mt19937_64 rng(71);
  for (int trial = 0; trial < 300; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 6);
    const auto a = random_string(rng, n);
    const auto b = random_string(rng, n);
    const auto c = random_string(rng, n);
    const auto left = multiply(multiply(a, b), c);
    const auto right = multiply(a, multiply(b, c));
    CHECK(left == right);  // exact phase equality
  }
}

TEST_CASE("add_scaled realizes the two-piece interpolation limits") {
  std::mt19937_64 rng(5);
  const PauliSum ha = random_sum(rng, 3, 6);
  const PauliSum hb = random_sum(rng, 3, 6);
  const PauliSum zero(3);

  auto interpolate = [&](double x) {
    return add_scaled(add_scaled(zero, 1.0 - x, ha), x, hb);
  };
  CHECK(interpolate(0.0) == ha);
  CHECK(interpolate(1.0) == hb);

  SUBCASE("H + (-1) H cancels to the empty sum") {
    CHECK(add_scaled(ha, -1.0, ha).empty());
  }
  SUBCASE("size mismatch throws") {
    CHECK_THROWS_AS(add_scaled(ha, 1.0, random_sum(rng, 4, 2)),
                    std::invalid_argument);
  }
}

TEST_CASE("commutators") {
  PauliSum z0(2), z1(2), x0(2);
  z0.add(PauliString::from_label("ZI"));
  z1.add(PauliString::from_label("IZ"));
  x0.add(PauliString::from_label("XI"));

  CHECK(commutator(z0, z1).empty());

  const PauliSum c = commutator(x0, z0);
  CHECK(c.size() == 1);
  CHECK(c.coefficient({1, 1}) == cplx{0.0, -2.0});  // -2i Y0

  std::mt19937_64 rng(9);
  const PauliSum h = random_sum(rng, 4, 10);
  CHECK(commutator(h, h).empty());
}

TEST_CASE("jordan-wigner identities") {
  SUBCASE("number operator: cdag_0 c_0 = (I - Z0)/2") {
    const auto n0 = jordan_wigner(
        fermion_product(fermion_dagger(0), fermion_annihilate(0)), 1);
    PauliSum expected(1);
    expected.add(PauliString::from_label("I"), 0.5);
    expected.add(PauliString::from_label("Z"), -0.5);
    CHECK(approx_equal(n0, expected, 1e-15));
  }
  SUBCASE("adjacent hopping: cdag_1 c_0 + h.c. = (X0X1 + Y0Y1)/2") {
    const FermionTerm up = fermion_product(fermion_dagger(1),
                                           fermion_annihilate(0));
    const auto hop = jordan_wigner({up, fermion_adjoint(up)}, 2);
    PauliSum expected(2);
    expected.add(PauliString::from_label("XX"), 0.5);
    expected.add(PauliString::from_label("YY"), 0.5);
    CHECK(approx_equal(hop, expected, 1e-15));
  }
  SUBCASE("mode out of range") {
    CHECK_THROWS_AS(jordan_wigner(fermion_dagger(3), 2), std::out_of_range);
  }
}

TEST_CASE("jordan-wigner matches the fock-space oracle for J0 at N=8") {
  const auto ops = build_collective_ops(2);
  const auto oracle = testing::fock_agassi({1.0, 0.0, 0.0, 0.0, 2});
  const Eigen::MatrixXcd mapped = to_dense_matrix(ops.j_zero);
  CHECK((mapped - oracle.j_zero).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("jordan-wigner preserves anticommutation on 6 modes") {
  const int n = 6;
  std::vector<PauliSum> c, cdag;
  for (int p = 0; p < n; ++p) {
    c.push_back(jordan_wigner(fermion_annihilate(p), n));
    cdag.push_back(jordan_wigner(fermion_dagger(p), n));
  }
  PauliSum identity(n);
  identity.add({0, 0}, 1.0);
  for (int p = 0; p < n; ++p) {
    for (int q = 0; q < n; ++q) {
      PauliSum anti = multiply(c[p], cdag[q]);
      anti.add(multiply(cdag[q], c[p]));
      if (p == q) {
        CHECK(approx_equal(anti, identity, 1e-14));
      } else {
        CHECK(anti.empty());
      }
      PauliSum anti_cc = multiply(c[p], c[q]);
      anti_cc.add(multiply(c[q], c[p]));
      CHECK(anti_cc.empty());
    }
  }
}

TEST_CASE("hermitian fermion combinations map to real coefficients") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 4 + static_cast<int>(rng() % 3);
    FermionTerm t;
    t.coefficient = {static_cast<double>(rng() % 100) / 50.0 - 1.0,
                     static_cast<double>(rng() % 100) / 50.0 - 1.0};
    const int len = 1 + static_cast<int>(rng() % 4);
    for (int k = 0; k < len; ++k) {
      t.factors.push_back(
          {static_cast<int>(rng() % n), (rng() % 2) == 0});
    }
    const auto mapped = jordan_wigner({t, fermion_adjoint(t)}, n);
    CHECK(mapped.max_abs_imag() < 1e-12);
  }
}

TEST_CASE("dense expansion") {
  SUBCASE("identity on one site") {
    PauliSum s(1);
    s.add({0, 0}, 1.0);
    CHECK(to_dense_matrix(s).isApprox(Eigen::MatrixXcd::Identity(2, 2)));
  }
  SUBCASE("Z0 on two sites is diag(+1,-1,+1,-1)") {
    PauliSum s(2);
    s.add(PauliString::from_label("ZI"));
    const Eigen::MatrixXcd m = to_dense_matrix(s);
    const Eigen::Vector4cd d = m.diagonal();
    CHECK(d(0) == cplx{1, 0});
    CHECK(d(1) == cplx{-1, 0});
    CHECK(d(2) == cplx{1, 0});
    CHECK(d(3) == cplx{-1, 0});
    CHECK(m.cwiseAbs().sum() == doctest::Approx(4.0));
  }
  SUBCASE("noninteracting Agassi minimum is -2 over the Fock space") {
    const PauliSum h = build_agassi({1.0, 0.0, 0.0, 0.0, 2});
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(to_dense_matrix(h));
    CHECK(es.eigenvalues()(0) == doctest::Approx(-2.0).epsilon(1e-12));
  }
  SUBCASE("hermitian input gives hermitian matrix") {
    std::mt19937_64 rng(33);
    PauliSum s(4);
    for (int k = 0; k < 8; ++k) {
      s.add(random_string(rng, 4),
            {static_cast<double>(rng() % 100) / 50.0 - 1.0, 0.0});
    }
    PauliSum herm = s;
    herm.add(s.adjoint());
    const Eigen::MatrixXcd m = to_dense_matrix(herm);
    CHECK((m - m.adjoint()).cwiseAbs().maxCoeff() < 1e-14);
  }
  SUBCASE("linearity matches the dense combination") {
    std::mt19937_64 rng(44);
    const PauliSum a = random_sum(rng, 3, 5);
    const PauliSum b = random_sum(rng, 3, 5);
    const cplx coeff{0.7, -0.3};
    const Eigen::MatrixXcd lhs = to_dense_matrix(add_scaled(a, coeff, b));
    const Eigen::MatrixXcd rhs = to_dense_matrix(a) + coeff * to_dense_matrix(b);
    CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-13);
  }
  SUBCASE("site cap enforced") {
    PauliSum s(15);
    s.add({0, 0}, 1.0);
    CHECK_THROWS_AS(to_dense_matrix(s), std::length_error);
  }
}

TEST_CASE("pauli sum serialization round-trips") {
  std::mt19937_64 rng(55);
  for (int trial = 0; trial < 25; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 8);
    const PauliSum s = random_sum(rng, n, 6);
    if (s.empty()) continue;
    const PauliSum back = parse_pauli_sum(serialize(s));
    CHECK(back == s);  // 17 significant digits round-trip exactly
  }
}
