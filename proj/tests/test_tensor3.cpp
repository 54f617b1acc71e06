#include <cmath>
#include <random>

#include "doctest.h"
#include "vefluid/errors.hpp"
#include "vefluid/linsolve.hpp"
#include "vefluid/tensor3.hpp"

using namespace vefluid;

namespace {

SymTensor3 random_spd(std::mt19937_64& gen) {
  std::normal_distribution<double> n(0.0, 1.0);
  Tensor3 a;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) a(i, j) = n(gen);
  return sym(a * transpose(a)) + 0.5 * SymTensor3::identity();
}

Tensor3 random_tensor(std::mt19937_64& gen) {
  std::normal_distribution<double> n(0.0, 1.0);
  Tensor3 a;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) a(i, j) = n(gen);
  return a;
}

double max_abs_diff(const Tensor3& a, const Tensor3& b) {
  double m = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) m = std::max(m, std::abs(a(i, j) - b(i, j)));
  return m;
}

}  // namespace

TEST_CASE("invariants of simple stretches") {
  SymTensor3 b = SymTensor3::diag(2.0, 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0));
  auto inv = invariants(b);
  CHECK(inv.I == doctest::Approx(3.41421).epsilon(1e-5));
  CHECK(inv.II == doctest::Approx(3.32843).epsilon(1e-5));
  CHECK(inv.III == doctest::Approx(1.0).epsilon(1e-12));

  inv = invariants(SymTensor3::diag(4.0, 0.5, 0.5));
  CHECK(inv.I == doctest::Approx(5.0));
  CHECK(inv.II == doctest::Approx(4.25));
  CHECK(inv.III == doctest::Approx(1.0));
}

TEST_CASE("invariants are the coefficients of the characteristic polynomial") {
  std::mt19937_64 gen(7);
  for (int k = 0; k < 50; ++k) {
    const SymTensor3 b = random_spd(gen);
    const auto inv = invariants(b);
    const auto e = eig_sym(b);
    const double l0 = e.values[0], l1 = e.values[1], l2 = e.values[2];
    CHECK(inv.I == doctest::Approx(l0 + l1 + l2).epsilon(1e-12));
    CHECK(inv.II == doctest::Approx(l0 * l1 + l1 * l2 + l0 * l2).epsilon(1e-11));
    CHECK(inv.III == doctest::Approx(l0 * l1 * l2).epsilon(1e-11));
  }
}

TEST_CASE("Jacobi eigendecomposition reconstructs and orders") {
  std::mt19937_64 gen(11);
  for (int k = 0; k < 100; ++k) {
    const SymTensor3 b = random_spd(gen);
    const auto e = eig_sym(b);
    CHECK(e.values[0] >= e.values[1]);
    CHECK(e.values[1] >= e.values[2]);
    const Tensor3 rec = e.vectors * Tensor3::diag(e.values[0], e.values[1], e.values[2]) *
                        transpose(e.vectors);
    CHECK(max_abs_diff(rec, b.full()) < 1e-12 * norm(b));
    CHECK(max_abs_diff(transpose(e.vectors) * e.vectors, Tensor3::identity()) < 1e-13);
  }
}

TEST_CASE("repeated eigenvalues") {
  const auto e = eig_sym(SymTensor3::diag(2.0, 2.0, 2.0));
  CHECK(e.values[0] == 2.0);
  CHECK(e.values[2] == 2.0);
  const auto f = eig_sym(SymTensor3::diag(1.0, 3.0, 1.0));
  CHECK(f.values[0] == doctest::Approx(3.0));
  CHECK(f.values[2] == doctest::Approx(1.0));
}

TEST_CASE("square root of SPD tensors") {
  const SymTensor3 v = spd_sqrt(SymTensor3::diag(4.0, 9.0, 0.25));
  CHECK(v.xx == doctest::Approx(2.0));
  CHECK(v.yy == doctest::Approx(3.0));
  CHECK(v.zz == doctest::Approx(0.5));

  std::mt19937_64 gen(3);
  for (int k = 0; k < 50; ++k) {
    const SymTensor3 b = random_spd(gen);
    const SpdRoots r = spd_roots(b);
    CHECK(max_abs_diff(product(r.sqrt, r.sqrt), b.full()) < 1e-12 * norm(b));
    CHECK(max_abs_diff(product(r.sqrt, r.invSqrt), Tensor3::identity()) < 1e-11);
    CHECK(max_abs_diff(product(b, r.inv), Tensor3::identity()) < 1e-11);
  }
}

TEST_CASE("non-SPD input is rejected") {
  CHECK_THROWS_AS(spd_sqrt(SymTensor3::diag(1.0, -1.0, 1.0)), DomainError);
  CHECK_THROWS_AS(spd_sqrt(SymTensor3::diag(1.0, 0.0, 1.0)), DomainError);
  CHECK_THROWS_AS(inverse(Tensor3::diag(1.0, 0.0, 1.0)), DegeneracyError);
}

TEST_CASE("upper convected derivative of the identity under extension") {
  const SymTensor3 r = ucd(SymTensor3::identity(), SymTensor3::zero(), Tensor3::diag(1.0, -0.5, -0.5));
  CHECK(r.xx == doctest::Approx(-2.0));
  CHECK(r.yy == doctest::Approx(1.0));
  CHECK(r.zz == doctest::Approx(1.0));
  CHECK(r.xy == 0.0);
}

TEST_CASE("coordinate maps are isometries") {
  std::mt19937_64 gen(5);
  for (int k = 0; k < 50; ++k) {
    const SymTensor3 a = sym(random_tensor(gen));
    const SymTensor3 b = sym(random_tensor(gen));
    const auto ca = sym_coords(a), cb = sym_coords(b);
    double dot = 0.0;
    for (std::size_t i = 0; i < 6; ++i) dot += ca[i] * cb[i];
    CHECK(dot == doctest::Approx(inner(a, b)).epsilon(1e-12));
    CHECK(norm(from_sym_coords(ca) - a) < 1e-14);

    const SymTensor3 d = deviator(a);
    const auto cd = dev_coords(d);
    double n2 = 0.0;
    for (double c : cd) n2 += c * c;
    CHECK(std::sqrt(n2) == doctest::Approx(norm(d)).epsilon(1e-12));
    CHECK(norm(from_dev_coords(cd) - d) < 1e-14);
  }
}

TEST_CASE("algebraic identities") {
  std::mt19937_64 gen(9);
  for (int k = 0; k < 50; ++k) {
    const Tensor3 a = random_tensor(gen), b = random_tensor(gen);
    CHECK(det(a * b) == doctest::Approx(det(a) * det(b)).epsilon(1e-10));
    CHECK(std::abs(trace(deviator(a))) < 1e-14);
    CHECK(max_abs_diff(sym(a).full() + skew(a), a) < 1e-15);
    CHECK(max_abs_diff(a * inverse(a), Tensor3::identity()) < 1e-9);
    const auto c = checked_sym(sym(a).full());
    CHECK(c.relativeSkew == 0.0);
    CHECK(checked_sym(skew(a)).relativeSkew > 0.5);
  }
}

TEST_CASE("dense LU solves and reports conditioning") {
  DenseLU lu({4, 1, 0, 1, 3, 1, 0, 1, 2}, 3);
  const auto x = lu.solve({1, 2, 3});
  CHECK(4 * x[0] + x[1] == doctest::Approx(1.0));
  CHECK(x[0] + 3 * x[1] + x[2] == doctest::Approx(2.0));
  CHECK(x[1] + 2 * x[2] == doctest::Approx(3.0));
  CHECK(lu.condition() >= 1.0);
  CHECK_THROWS_AS(DenseLU({1, 2, 2, 4}, 2), DegeneracyError);
}
