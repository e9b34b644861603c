#include "doctest.h"

#include "bt/lattice.hpp"
#include "support/oracles.hpp"

using namespace bt;

namespace {

Matrix mat(const FieldModel& m, std::vector<std::vector<std::string>> rows) {
  Matrix a(m, rows.size(), rows[0].size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows[i].size(); ++j) a(i, j) = m.parse_element(rows[i][j]);
  return a;
}

} // namespace

TEST_CASE("canonical_form examples") {
  const auto& Q2 = FieldModel::padic(2);
  CHECK(canonical_form(Matrix::identity(Q2, 3)) == Matrix::identity(Q2, 3));
  CHECK(canonical_form(Matrix::pi_diagonal(Q2, {2, 2})) == Matrix::identity(Q2, 2));

  Matrix b = mat(Q2, {{"1", "0"}, {"1", "2"}});
  Matrix c = canonical_form(b);
  CHECK(c == mat(Q2, {{"2", "1"}, {"0", "1"}}));
  CHECK(oracle::residue_image(b, 3) == oracle::residue_image(c, 3));
  CHECK(canonical_form(c) == c);
  CHECK_THROWS(canonical_form(mat(Q2, {{"1", "2"}, {"2", "4"}})));
}

TEST_CASE("canonical form is stable under unimodular changes and scaling") {
  for (const FieldModel* m : {&FieldModel::padic(2), &FieldModel::padic(3), &FieldModel::laurent(2),
                              &FieldModel::laurent(4)}) {
    Rng rng(101);
    for (int t = 0; t < 125; ++t) {
      std::size_t n = 2 + rng.below(2);
      Matrix b = oracle::random_invertible(*m, n, rng);
      Matrix u = oracle::random_unimodular(*m, n, rng);
      FieldElement s = m->pi_pow(rng.range(-3, 3)) * m->lift_digit(1 + static_cast<GfElem>(rng.below(m->residue_size() - 1)));
      Matrix c1 = canonical_form(b);
      Matrix c2 = canonical_form((b * u).scaled(s));
      REQUIRE(c1 == c2);
      REQUIRE(canonical_form(c1) == c1);
      // the canonical matrix spans the scaled input lattice
      Matrix ratio = c1.inverse() * b;
      long shift = ratio.min_valuation();
      Matrix scaled = ratio.scaled(m->pi_pow(-shift));
      REQUIRE(scaled.det().valuation() == 0);
    }
  }
}

TEST_CASE("canonical form matches the residue-image oracle") {
  const auto& Q3 = FieldModel::padic(3);
  Rng rng(5);
  for (int t = 0; t < 30; ++t) {
    Matrix b(Q3, 2, 2);
    for (std::size_t i = 0; i < 2; ++i)
      for (std::size_t j = 0; j < 2; ++j) b(i, j) = Q3.from_int(rng.range(0, 26));
    if (b.det().is_zero() || b.det().valuation() > 2 || b.min_valuation() > 0) continue;
    Matrix c = canonical_form(b);
    REQUIRE(oracle::residue_image(b, 3) == oracle::residue_image(c, 3));
  }
}

TEST_CASE("index") {
  const auto& Q2 = FieldModel::padic(2);
  CHECK(lattice_index(Matrix::identity(Q2, 2), Matrix::pi_diagonal(Q2, {1, 0})) == 1);
  CHECK(lattice_index(Matrix::identity(Q2, 2), Matrix::identity(Q2, 2)) == 0);
  CHECK(lattice_index(Matrix::identity(Q2, 3), Matrix::pi_diagonal(Q2, {1, 1, 1})) == 3);
  CHECK_THROWS(lattice_index(Matrix::pi_diagonal(Q2, {1, 0}), Matrix::identity(Q2, 2)));

  const auto& F3 = FieldModel::laurent(3);
  Rng rng(9);
  for (int t = 0; t < 50; ++t) {
    Matrix M = oracle::random_invertible(F3, 3, rng);
    Matrix L = M * oracle::random_invertible(F3, 3, rng).scaled(F3.pi_pow(4));
    Matrix N = L * Matrix::pi_diagonal(F3, {0, 1, 2});
    if (!(M.inverse() * L).is_integral()) continue;
    REQUIRE(lattice_index(M, L) + lattice_index(L, N) == lattice_index(M, N));
  }
}

TEST_CASE("dual and label") {
  const auto& Q2 = FieldModel::padic(2);
  auto o = VertexClass::standard(Q2, 3);
  CHECK(dual(o) == o);
  CHECK(label(o) == 0);
  auto v = VertexClass::from_basis(Matrix::pi_diagonal(Q2, {0, 1}));
  CHECK(label(v) == 1);
  CHECK(dual(v) == VertexClass::from_basis(Matrix::pi_diagonal(Q2, {1, 0})));
  Rng rng(3);
  for (int t = 0; t < 100; ++t) {
    auto x = VertexClass::from_basis(oracle::random_invertible(Q2, 3, rng));
    REQUIRE(dual(dual(x)) == x);
    REQUIRE((label(dual(x)) + label(x)) % 3 == 0);
    REQUIRE(label(VertexClass::from_basis(x.matrix().scaled(Q2.from_int(2)))) == label(x));
  }
}

TEST_CASE("gaussian binomials: enumeration, product formula and brute-force spans") {
  for (std::uint32_t q : {2u, 3u}) {
    const auto& F = FieldModel::padic(q);
    for (int d = 1; d <= 3; ++d) {
      auto o = VertexClass::standard(F, d + 1);
      for (int w = 1; w <= d; ++w) {
        auto nb = neighbors_by_colength(o, w);
        std::uint64_t formula = gaussian_binomial(d + 1, w, q);
        REQUIRE(nb.size() == formula);
        REQUIRE(oracle::count_subspaces(q, d + 1, w) == formula);
        REQUIRE(gaussian_binomial(d + 1, w, q) == gaussian_binomial(d + 1, d + 1 - w, q));
        std::set<std::vector<std::uint32_t>> keys;
        for (auto& v : nb) {
          keys.insert(v.key());
          REQUIRE(undirected_distance(o, v) == 1);
          REQUIRE(label(v) == w % (d + 1));
          REQUIRE(f_distance(o, v) == w);
        }
        REQUIRE(keys.size() == nb.size());
      }
    }
  }
  CHECK(gaussian_binomial(2, 1, 2) == 3);
  CHECK(gaussian_binomial(3, 1, 2) == 7);
  CHECK(gaussian_binomial(3, 2, 2) == 7);
  CHECK(gaussian_binomial(4, 2, 3) == 130);
}

TEST_CASE("neighbor labels from a non-standard vertex") {
  const auto& F4 = FieldModel::laurent(4);
  Rng rng(17);
  auto v = VertexClass::from_basis(oracle::random_invertible(F4, 3, rng));
  for (int w = 1; w <= 2; ++w) {
    auto nb = neighbors_by_colength(v, w);
    REQUIRE(nb.size() == gaussian_binomial(3, w, 4));
    for (auto& x : nb) {
      REQUIRE(label(x) == (label(v) + w) % 3);
      REQUIRE(undirected_distance(v, x) == 1);
    }
  }
}

TEST_CASE("subspace enumeration order") {
  GaloisField F(2, 1);
  auto s = enumerate_subspaces(F, 2, 1);
  REQUIRE(s.size() == 3);
  CHECK(s[0] == std::vector<std::vector<GfElem>>{{1, 0}});
  CHECK(s[1] == std::vector<std::vector<GfElem>>{{1, 1}});
  CHECK(s[2] == std::vector<std::vector<GfElem>>{{0, 1}});
}
