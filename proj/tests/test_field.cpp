#include "doctest.h"

#include "bt/field.hpp"
#include "bt/random.hpp"
#include "support/oracles.hpp"

using namespace bt;

using oracle::random_element;

TEST_CASE("valuation examples") {
  const auto& Q2 = FieldModel::padic(2);
  CHECK(Q2.from_int(12).valuation() == 2);
  CHECK(Q2.one().valuation() == 0);
  CHECK(Q2.zero().valuation() == kInfiniteValuation);
  CHECK(FieldElement(Q2, mpq_class(3, 8)).valuation() == -3);
  const auto& F2 = FieldModel::laurent(2);
  CHECK(F2.parse_element("t^2/(1+t)").valuation() == 2);
  CHECK(F2.one().valuation() == 0);
  CHECK(F2.uniformizer().valuation() == 1);
}

TEST_CASE("residue field modulus is the smallest irreducible") {
  CHECK(GaloisField(2, 3).modulus() == std::vector<std::uint32_t>{1, 0, 1, 1});
  CHECK(GaloisField(2, 2).modulus() == std::vector<std::uint32_t>{1, 1, 1});
  CHECK(GaloisField(3, 2).modulus() == std::vector<std::uint32_t>{1, 0, 1});
  GaloisField F9(3, 2);
  for (GfElem a = 1; a < F9.size(); ++a) CHECK(F9.mul(a, F9.inv(a)) == 1);
}

TEST_CASE("valuation axioms on random pairs") {
  for (const FieldModel* m : {&FieldModel::padic(2), &FieldModel::padic(3), &FieldModel::laurent(2),
                              &FieldModel::laurent(4), &FieldModel::laurent(9)}) {
    Rng rng(7);
    for (int i = 0; i < 1000; ++i) {
      FieldElement x = random_element(*m, rng), y = random_element(*m, rng);
      long vx = x.valuation(), vy = y.valuation();
      if (x.is_zero() || y.is_zero()) {
        CHECK((x * y).is_zero());
        continue;
      }
      REQUIRE((x * y).valuation() == vx + vy);
      long vs = (x + y).valuation();
      REQUIRE(vs >= std::min(vx, vy));
      if (vx != vy) REQUIRE(vs == std::min(vx, vy));
    }
  }
}

TEST_CASE("enumerate_residues") {
  const auto& Q2 = FieldModel::padic(2);
  auto r = Q2.enumerate_residues(2);
  REQUIRE(r.size() == 4);
  for (int i = 0; i < 4; ++i) CHECK(r[i] == Q2.from_int(i));
  const auto& F2 = FieldModel::laurent(2);
  auto s = F2.enumerate_residues(2);
  REQUIRE(s.size() == 4);
  CHECK(s[0].to_string() == "0");
  CHECK(s[1].to_string() == "1");
  CHECK(s[2].to_string() == "t");
  CHECK(s[3].to_string() == "1+t");
  CHECK(FieldModel::padic(3).enumerate_residues(1).size() == 3);

  for (const FieldModel* m : {&FieldModel::padic(2), &FieldModel::padic(3), &FieldModel::laurent(2),
                              &FieldModel::laurent(4), &FieldModel::laurent(3)}) {
    for (int k = 1; k <= 4; ++k) {
      auto list = m->enumerate_residues(k);
      if (list.size() > 256) break;
      for (std::size_t i = 0; i < list.size(); ++i) {
        REQUIRE(list[i].valuation() >= 0);
        REQUIRE(list[i].reduce_mod(k) == list[i]);
        for (std::size_t j = i + 1; j < list.size(); ++j) REQUIRE((list[i] - list[j]).valuation() < k);
      }
    }
  }
}

TEST_CASE("reduce_mod and digits") {
  const auto& Q3 = FieldModel::padic(3);
  FieldElement x(Q3, mpq_class(1, 2));  // 1/2 = 2 + 1*3 + 1*9 + ... in Z_3
  CHECK(x.digits(3) == std::vector<GfElem>{2, 1, 1});
  CHECK(x.reduce_mod(2) == Q3.from_int(5));
  CHECK(x.residue() == 2);
  const auto& F2 = FieldModel::laurent(2);
  auto y = F2.parse_element("1/(1+t)");
  CHECK(y.digits(4) == std::vector<GfElem>{1, 1, 1, 1});
  CHECK(y.reduce_mod(3).to_string() == "1+t+t^2");
}

TEST_CASE("parse and print") {
  const auto& F4 = FieldModel::laurent(4);
  auto x = F4.parse_element("(1+w*t)/(t^2)");
  CHECK(x.valuation() == -2);
  CHECK(F4.parse_element(x.to_string()) == x);
  CHECK(F4.parse_element("(1+w)*t^2").to_string() == "(1+w)*t^2");
  const auto& Q5 = FieldModel::padic(5);
  CHECK(Q5.parse_element("-7/10").valuation() == -1);
  CHECK(Q5.parse_element("-7/10").to_string() == "-7/10");
  CHECK_THROWS(F4.parse_element("1+"));
  CHECK_THROWS(FieldModel::laurent(2).parse_element("w"));
  CHECK_THROWS(FieldModel::parse("laurent:6"));
}

TEST_CASE("embed examples") {
  const auto& F2 = FieldModel::laurent(2);
  auto e2 = ExtensionDescriptor::make(F2, 2, 1);
  auto s2 = e2.embed(F2.uniformizer());
  CHECK(s2 == e2.field().pi_pow(2));
  CHECK(s2.valuation() == 2);
  CHECK(s2.to_string() == "s^2");

  auto f2 = ExtensionDescriptor::make(F2, 1, 2);
  auto y = f2.embed(F2.parse_element("1+t"));
  CHECK(y.to_string() == "1+t");
  CHECK(y.model().residue_size() == 4);

  auto ef = ExtensionDescriptor::make(F2, 2, 2);
  auto z = ef.embed(F2.parse_element("t/(1+t)"));
  CHECK(z == ef.field().parse_element("s^2/(1+s^2)"));
  CHECK(z.valuation() == 2);
}

TEST_CASE("embed is an injective valuation-scaling ring map") {
  for (auto [q, e, f] : {std::tuple{2, 2, 1}, std::tuple{2, 1, 2}, std::tuple{2, 2, 2}, std::tuple{4, 1, 2},
                         std::tuple{3, 3, 1}}) {
    const auto& base = FieldModel::laurent(q);
    auto ext = ExtensionDescriptor::make(base, e, f);
    Rng rng(11);
    for (int i = 0; i < 200; ++i) {
      auto x = random_element(base, rng), y = random_element(base, rng);
      auto X = ext.embed(x), Y = ext.embed(y);
      REQUIRE(ext.embed(x + y) == X + Y);
      REQUIRE(ext.embed(x * y) == X * Y);
      if (!x.is_zero()) REQUIRE(X.valuation() == e * x.valuation());
      if (!(x == y)) REQUIRE(!(X == Y));
      auto back = ext.restrict(X);
      REQUIRE(back.has_value());
      REQUIRE(*back == x);
    }
  }
}

TEST_CASE("extension coordinates") {
  const auto& F2 = FieldModel::laurent(2);
  auto ext = ExtensionDescriptor::make(F2, 2, 2);
  const auto& K = ext.field();
  // basis w^a s^b with index a*e + b
  auto c = ext.coordinates(K.parse_element("w*s + t"));
  REQUIRE(c.size() == 4);
  CHECK(c[0] == F2.uniformizer());
  CHECK(c[1].is_zero());
  CHECK(c[2].is_zero());
  CHECK(c[3] == F2.one());
  CHECK_FALSE(ext.restrict(K.parse_element("s")).has_value());

  auto f8 = ExtensionDescriptor::make(FieldModel::laurent(4), 1, 2);
  Rng rng(3);
  for (int i = 0; i < 50; ++i) {
    auto x = random_element(f8.field(), rng);
    auto co = f8.coordinates(x);
    FieldElement sum = f8.field().zero();
    FieldElement w = f8.field().parse_element("w");
    FieldElement wp = f8.field().one();
    for (auto& ci : co) {
      sum = sum + f8.embed(ci) * wp;
      wp = wp * w;
    }
    REQUIRE(sum == x);
  }
}
