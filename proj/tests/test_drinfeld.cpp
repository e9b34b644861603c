#include "doctest.h"

#include <map>
#include <tuple>

#include "bt/drinfeld.hpp"
#include "bt/random.hpp"
#include "support/oracles.hpp"

using namespace bt;

namespace doctest {
template <>
struct StringMaker<AbsValue> {
  static String convert(const AbsValue& a) { return a.to_string().c_str(); }
};
} // namespace doctest

namespace {

const ExtensionDescriptor& ext_of(int q, int e, int f) {
  static std::map<std::tuple<int, int, int>, ExtensionDescriptor> cache;
  auto key = std::make_tuple(q, e, f);
  auto it = cache.find(key);
  if (it == cache.end()) it = cache.emplace(key, ExtensionDescriptor::make(FieldModel::laurent(q), e, f)).first;
  return it->second;
}

RigidPoint point(const ExtensionDescriptor& ext, std::vector<std::vector<std::string>> text) {
  std::vector<std::vector<FieldElement>> c;
  for (auto& row : text) {
    c.emplace_back();
    for (auto& s : row) c.back().push_back(ext.field().parse_element(s));
  }
  return RigidPoint::make(ext, c);
}

Polynomial parse(const RigidPoint& x, const std::string& s) { return parse_polynomial(s, x.ext.field(), x.layout()); }

mpq_class Q(long a, long b = 1) {
  mpq_class r(a, b);
  r.canonicalize();
  return r;
}


} // namespace

TEST_CASE("absolute value evaluation") {
  auto x = point(ext_of(2, 2, 1), {{"s"}});
  CHECK(eval_abs(x, parse(x, "t_{1,1}")).exponent == Q(1, 2));
  CHECK(eval_abs(x, parse(x, "1")).exponent == 0);
  CHECK(eval_abs(x, parse(x, "t_{1,1}^2 + t*t_{1,1}")).exponent == 1);
  CHECK(eval_abs(x, parse(x, "t_{1,1} - s")).zero);
  CHECK(eval_abs(x, parse(x, "T_{1,0}*T_{1,1}^3/t")).exponent == Q(1, 2));
  CHECK_THROWS_AS(parse(x, "t_{1,1}/t_{1,1}"), std::invalid_argument);
  CHECK_THROWS_AS(parse(x, "t_{2,1}"), std::invalid_argument);
}

TEST_CASE("rigid point validation") {
  const auto& ext = ext_of(2, 1, 2);
  CHECK_NOTHROW(point(ext, {{"w"}}));
  CHECK_THROWS_AS(point(ext, {{"1+t"}}), std::invalid_argument);
  const auto& ext3 = ext_of(2, 1, 3);
  CHECK_THROWS_AS(point(ext3, {{"w", "t*w"}}), std::invalid_argument);
  CHECK_NOTHROW(point(ext3, {{"w", "t*w^2"}}));
}

TEST_CASE("multiplicativity and ultrametric inequality") {
  Rng rng(17);
  std::vector<const ExtensionDescriptor*> exts{&ext_of(2, 2, 1), &ext_of(2, 1, 2), &ext_of(3, 2, 1), &ext_of(2, 2, 2)};
  std::vector<std::string> atoms{"t_{1,1}", "t", "s", "1", "w", "t_{1,1}^2"};
  int equal_cases = 0;
  for (int it = 0; it < 1000; ++it) {
    const auto& ext = *exts[it % exts.size()];
    auto x = random_rigid_point(ext, {1}, rng);
    auto random_poly = [&]() {
      std::string s;
      int terms = 1 + static_cast<int>(rng.below(3));
      for (int k = 0; k < terms; ++k) {
        std::string a = atoms[rng.below(atoms.size())];
        if ((a == "s" && ext.ramification() == 1) || (a == "w" && ext.residue_degree() == 1)) a = "t";
        std::string b = atoms[rng.below(2)];
        s += (k ? "+" : "") + a + "*" + b;
      }
      return parse(x, s);
    };
    auto p = random_poly(), q = random_poly();
    auto ap = eval_abs(x, p), aq = eval_abs(x, q);
    auto apq = eval_abs(x, p * q);
    if (ap.zero || aq.zero)
      CHECK(apq.zero);
    else
      CHECK(apq.exponent == ap.exponent + aq.exponent);
    auto sum = eval_abs(x, p + q);
    CHECK(abs_le(sum, max_abs(ap, aq)));
    if (!(ap == aq)) {
      CHECK(sum == max_abs(ap, aq));
      ++equal_cases;
    }
  }
  CHECK(equal_cases > 100);
}

TEST_CASE("omega membership examples") {
  auto x = point(ext_of(2, 1, 2), {{"w"}});
  CHECK(omega_membership(x, 1, true));
  CHECK(omega_membership(x, 1, false));
  auto y = point(ext_of(2, 1, 2), {{"t*w"}});
  CHECK(omega_membership(y, 1, true));
  CHECK_FALSE(omega_membership(y, 1, false));
  CHECK(omega_membership(y, 2, false));
  auto z = point(ext_of(2, 1, 2), {{"1+t^3*w"}});
  CHECK_FALSE(omega_membership(z, 2, true));
  CHECK(omega_membership(z, 3, true));
  CHECK(omega_depth(z, 5) == 3);
  OmegaOptions tiny;
  tiny.budget = 10;
  CHECK_THROWS_AS(omega_membership(z, 3, true, tiny), BudgetExceeded);
}

TEST_CASE("omega membership matches the exact oracle") {
  Rng rng(23);
  std::vector<const ExtensionDescriptor*> exts{&ext_of(2, 2, 1), &ext_of(2, 1, 2), &ext_of(3, 2, 1)};
  for (int it = 0; it < 24; ++it) {
    const auto& ext = *exts[it % exts.size()];
    auto x = random_rigid_point(ext, {1}, rng, 2);
    for (int n = 1; n <= 2; ++n) {
      CHECK(omega_membership(x, n, true) == oracle::membership(x, n, true, n + 2));
      CHECK(omega_membership(x, n, false) == oracle::membership(x, n, false, n + 2));
    }
  }
}

TEST_CASE("filtration inclusions") {
  Rng rng(29);
  std::vector<const ExtensionDescriptor*> exts{&ext_of(2, 2, 1), &ext_of(2, 1, 2), &ext_of(2, 1, 3), &ext_of(3, 1, 2)};
  for (int it = 0; it < 30; ++it) {
    const auto& ext = *exts[it % exts.size()];
    std::vector<int> dims{ext.degree() >= 3 && it % 2 ? 2 : 1};
    auto x = random_rigid_point(ext, dims, rng, 2);
    bool prev_closed = false;
    for (int n = 1; n <= 3; ++n) {
      bool closed = omega_membership(x, n, true);
      bool open = omega_membership(x, n, false);
      CHECK((!open || closed));
      CHECK((!prev_closed || closed));
      prev_closed = closed;
    }
  }
}

TEST_CASE("membership for random valid points") {
  Rng rng(31);
  std::vector<const ExtensionDescriptor*> exts{&ext_of(2, 2, 1), &ext_of(2, 1, 2), &ext_of(3, 2, 1), &ext_of(2, 2, 2)};
  for (int it = 0; it < 50; ++it) {
    const auto& ext = *exts[it % exts.size()];
    auto x = random_rigid_point(ext, {1}, rng);
    CHECK(omega_depth(x, 3) >= 1);
  }
}

TEST_CASE("tau coordinates") {
  auto o = point(ext_of(2, 1, 2), {{"w"}});
  CHECK(tau_coordinates(o).exponents[0] == std::vector<mpq_class>{0, 0});
  auto x = point(ext_of(2, 1, 2), {{"t*w"}});
  CHECK(tau_coordinates(x).exponents[0] == std::vector<mpq_class>{0, 1});
  CHECK(tau_coordinates(x).is_integral());
  auto h = point(ext_of(2, 2, 1), {{"s"}});
  CHECK(tau_coordinates(h).exponents[0] == std::vector<mpq_class>{0, Q(1, 2)});
  CHECK_FALSE(tau_coordinates(h).is_integral());
}

namespace {


} // namespace

TEST_CASE("diagonalize norm examples") {
  const auto& F2 = FieldModel::laurent(2);
  auto x = point(ext_of(2, 1, 2), {{"w"}});
  auto d = diagonalize_norm(x, 0, 1);
  CHECK(d.basis == Matrix::identity(F2, 2));
  CHECK(d.exponents == std::vector<mpq_class>{0, 0});
  CHECK(d.checked > 0);

  auto h = point(ext_of(2, 2, 1), {{"s"}});
  auto dh = diagonalize_norm(h, 0, 1);
  CHECK(dh.basis == Matrix::identity(F2, 2));
  CHECK(dh.exponents == std::vector<mpq_class>{0, Q(1, 2)});

  auto p3 = point(ext_of(2, 1, 3), {{"w", "t*w^2"}});
  auto d3 = diagonalize_norm(p3, 0, 1);
  CHECK(d3.basis == Matrix::identity(F2, 3));
  CHECK(d3.exponents == std::vector<mpq_class>{0, 0, 1});

  // 1 + t w needs one reduction step
  auto g = point(ext_of(2, 1, 2), {{"1+t*w"}});
  auto dg = diagonalize_norm(g, 0, 1);
  CHECK(dg.exponents == std::vector<mpq_class>{0, 1});
  CHECK(dg.basis(0, 1) == F2.from_int(-1));
  CHECK(oracle::diagonal(g, 0, dg, 2));

  auto deep = point(ext_of(2, 1, 2), {{"1+t^3*w"}});
  try {
    diagonalize_norm(deep, 0, 1);
    FAIL("expected DepthInsufficient");
  } catch (const DepthInsufficient& e) {
    CHECK(e.retry_depth == 3);
  }
}

TEST_CASE("diagonalize norm re-verified at the next depth") {
  Rng rng(37);
  std::vector<const ExtensionDescriptor*> exts{&ext_of(2, 2, 1), &ext_of(2, 1, 2), &ext_of(3, 2, 1), &ext_of(2, 1, 3)};
  for (int it = 0; it < 16; ++it) {
    const auto& ext = *exts[it % exts.size()];
    std::vector<int> dims{ext.degree() >= 3 ? 2 : 1};
    auto x = random_rigid_point(ext, dims, rng);
    int n = omega_depth(x, 3);
    while (n == 0) {
      x = random_rigid_point(ext, dims, rng);
      n = omega_depth(x, 3);
    }
    auto d = diagonalize_norm(x, 0, n);
    CHECK(oracle::diagonal(x, 0, d, n + 1));

    // the diagonal basis carries the restricted norm: j(tau(x)) agrees on linear forms
    auto b = GaussSeminorm::of_point(ext, ApartmentPoint{{d.basis}, {d.exponents}});
    for (int k = 0; k < 5; ++k) {
      std::string s;
      for (int j = 0; j <= dims[0]; ++j) s += (j ? "+" : "") + std::string(rng.coin() ? "t*" : "") + std::to_string(rng.below(2) + (j == 0)) + "*T_{1," + std::to_string(j) + "}";
      auto p = parse_polynomial(s, ext.base(), x.layout());
      CHECK(gauss_eval(b, p) == eval_abs(x, p));
    }
  }
}

TEST_CASE("gauss seminorm") {
  const auto& ext = ext_of(2, 2, 1);
  const auto& k = ext.base();
  VariableLayout l{{1}};
  auto origin = GaussSeminorm::of_point(ext, ApartmentPoint{{Matrix::identity(k, 2)}, {{0, 0}}});
  CHECK(gauss_eval(origin, parse_polynomial("T_{1,0}+T_{1,1}", k, l)).exponent == 0);
  auto b = GaussSeminorm::of_point(ext, ApartmentPoint{{Matrix::identity(k, 2)}, {{0, 1}}});
  CHECK(gauss_eval(b, parse_polynomial("t_{1,1}^2", k, l)).exponent == 2);
  CHECK(gauss_eval(b, parse_polynomial("T_{1,0}^2 + t^3*T_{1,1}", k, l)).exponent == 0);

  Rng rng(41);
  for (int it = 0; it < 20; ++it) {
    Matrix B(k, 2, 2);
    do {
      for (int r = 0; r < 2; ++r)
        for (int c = 0; c < 2; ++c) B(r, c) = k.from_int(static_cast<long>(rng.below(2))) * k.pi_pow(rng.range(-1, 1));
    } while (B.rank() < 2);
    std::vector<mpq_class> r{Q(rng.range(-2, 2), 2), Q(rng.range(-2, 2), 2)};
    auto g = GaussSeminorm::of_point(ext, ApartmentPoint{{B}, {r}});
    CHECK(tau_of(g).exponents[0] == r);
    // random linear form: max over the terms in the e basis
    FieldElement a0 = k.from_int(1 + static_cast<long>(rng.below(1))) * k.pi_pow(rng.range(-1, 2));
    FieldElement a1 = k.from_int(1) * k.pi_pow(rng.range(-1, 2));
    Polynomial p(k, l);
    for (int j = 0; j < 2; ++j) {
      Polynomial form(k, l);
      for (int kk = 0; kk < 2; ++kk) form = form + Polynomial::variable(k, l, 0, kk).scaled(B(kk, j));
      p = p + form.scaled(j ? a1 : a0);
    }
    mpq_class expected = std::min(mpq_class(a0.valuation()) + r[0], mpq_class(a1.valuation()) + r[1]);
    CHECK(gauss_eval(g, p).exponent == expected);
  }
}

TEST_CASE("deformation retraction") {
  Rng rng(43);
  std::vector<const ExtensionDescriptor*> exts{&ext_of(2, 2, 1), &ext_of(2, 1, 2), &ext_of(3, 2, 1)};
  TExponent zero_t;
  zero_t.infinite = true;
  TExponent one_t;
  for (int it = 0; it < 40; ++it) {
    const auto& ext = *exts[it % exts.size()];
    auto x = random_rigid_point(ext, {1}, rng);
    std::string s = "t_{1,1}^2 + (1+t)*t_{1,1}^3 + s";
    if (ext.ramification() == 1) s = "t_{1,1}^2 + (1+t)*t_{1,1}^3 + w*t_{1,1} + t";
    auto p = parse(x, s);
    CHECK(deform(x, zero_t, p) == eval_abs(x, p));
    // rho_1 = max_N |a_N| rho(x)^N
    AbsValue expected = AbsValue::of_zero();
    auto P = p.dehomogenized();
    for (const auto& [n, c] : P.terms()) {
      AbsValue v = AbsValue::from_valuation(c.valuation(), ext.ramification());
      mpq_class vx(x.coords[0][0].valuation(), ext.ramification());
      vx.canonicalize();
      v.exponent += n[1] * vx;
      expected = max_abs(expected, v);
    }
    CHECK(deform(x, one_t, p) == expected);
  }
  auto x = point(ext_of(2, 1, 2), {{"t*w"}});
  CHECK(deform(x, one_t, parse(x, "t_{1,1}+1")).exponent == 0);
  CHECK(deform(x, one_t, parse(x, "t_{1,1}+t^2")).exponent == 1);
}

TEST_CASE("linear forms are constant along the path for diagonal points") {
  Rng rng(47);
  std::vector<const ExtensionDescriptor*> exts{&ext_of(2, 2, 1), &ext_of(2, 1, 2), &ext_of(2, 2, 2), &ext_of(3, 1, 3)};
  std::vector<TExponent> ts(4);
  ts[1].value = Q(1, 2);
  ts[2].value = 1;
  ts[3].value = 2;
  for (int it = 0; it < 20; ++it) {
    const auto& ext = *exts[it % exts.size()];
    int d = std::min(2, ext.degree() - 1);
    auto x = random_diagonal_point(ext, {d}, rng);
    auto db = diagonalize_norm(x, 0, omega_depth(x, 3));
    CHECK(db.basis == Matrix::identity(ext.base(), d + 1));
    for (int k = 0; k < 4; ++k) {
      std::string s = std::to_string(rng.below(2)) + "*t^" + std::to_string(rng.below(3));
      for (int j = 1; j <= d; ++j) s += "+" + std::to_string(1 + rng.below(1)) + "*t^" + std::to_string(rng.below(3)) + "*t_{1," + std::to_string(j) + "}";
      auto p = parse_polynomial(s, ext.base(), x.layout());
      auto base = eval_abs(x, p);
      for (const auto& t : ts) CHECK(deform(x, t, p) == base);
      // coordinates read off the deformed seminorm stay put
      for (int j = 1; j <= d; ++j)
        for (const auto& t : ts) CHECK(deform(x, t, parse(x, "t_{1," + std::to_string(j) + "}")).exponent == tau_coordinates(x).exponents[0][j]);
    }
  }
}

TEST_CASE("dual coordinates") {
  const auto& F2 = FieldModel::laurent(2);
  auto b = BuildingDescriptor::uniform(F2, 1, 1);
  auto o = point_of(origin(b));
  CHECK(dual_coords(o, 0) == std::vector<mpq_class>{0, 0});
  auto p = lambda_point(b, {{0, 1}});
  CHECK(dual_coords(p, 0) == std::vector<mpq_class>{0, -1});

  Rng rng(53);
  auto b3 = BuildingDescriptor::uniform(F2, 3, 1);
  for (int it = 0; it < 30; ++it) {
    std::vector<mpq_class> ex{0};
    for (int j = 0; j < 3; ++j) ex.emplace_back(rng.range(-3, 3));
    auto v = vertex_of(lambda_point(b3, {ex}));
    auto dual_point = point_of(involution_lambda(v, {true})).normalized();
    CHECK(dual_coords(point_of(v).normalized(), 0) == dual_point.exponents[0]);
  }
}
