#include "doctest.h"

#include <map>
#include <set>

#include "bt/autdecomp.hpp"
#include "support/oracles.hpp"

using namespace bt;

namespace {

// brute force over all vertex permutations
std::size_t brute_force_automorphisms(const ProductGraph& g) {
  std::vector<std::size_t> p(g.size());
  for (std::size_t i = 0; i < p.size(); ++i) p[i] = i;
  std::size_t count = 0;
  do {
    bool ok = true;
    for (std::size_t a = 0; a < p.size() && ok; ++a)
      for (std::size_t b = a + 1; b < p.size() && ok; ++b) ok = g.adjacent(a, b) == g.adjacent(p[a], p[b]);
    if (ok) ++count;
  } while (std::next_permutation(p.begin(), p.end()));
  return count;
}

// every ordered size sequence with entries >= 2 and product <= limit
void size_sequences(std::size_t limit, std::vector<int>& cur, std::size_t prod, std::vector<std::vector<int>>& out) {
  if (!cur.empty()) out.push_back(cur);
  for (int a = 2; prod * a <= limit; ++a) {
    cur.push_back(a);
    size_sequences(limit, cur, prod * a, out);
    cur.pop_back();
  }
}

std::vector<PolyVertex> apartment_vertices(const Ball& ball) {
  std::vector<PolyVertex> out;
  for (std::size_t id = 0; id < ball.size(); ++id) {
    auto x = ball.vertex(id);
    if (in_standard_apartment(x)) out.push_back(x);
  }
  return out;
}

Matrix power(const Matrix& a, long n) {
  Matrix base = n < 0 ? a.inverse() : a;
  Matrix r = Matrix::identity(a.model(), a.rows());
  for (long k = 0; k < std::labs(n); ++k) r = r * base;
  return r;
}

std::vector<PolyVertex> delta_vertices(const BuildingDescriptor& b) { return basic_chamber(b).vertices; }

} // namespace

TEST_CASE("product graph indexing") {
  ProductGraph g({2, 3});
  CHECK(g.size() == 6);
  for (std::size_t u = 0; u < g.size(); ++u) CHECK(g.index(g.tuple(u)) == u);
  CHECK(g.adjacent(g.index({0, 0}), g.index({0, 2})));
  CHECK_FALSE(g.adjacent(g.index({0, 0}), g.index({1, 2})));
  CHECK_THROWS_AS(ProductGraph({1, 3}), std::invalid_argument);
}

TEST_CASE("decompose identity and swap") {
  ProductGraph g({2, 3});
  std::vector<std::size_t> id(g.size());
  for (std::size_t u = 0; u < id.size(); ++u) id[u] = u;
  auto h = decompose_hom(g, g, id);
  CHECK(h.mu == std::vector<int>{0, 1});
  CHECK(h.g[0] == std::vector<int>{0, 1});
  CHECK(h.g[1] == std::vector<int>{0, 1, 2});

  ProductGraph sq({2, 2});
  std::vector<std::size_t> swap(4);
  for (std::size_t u = 0; u < 4; ++u) {
    auto t = sq.tuple(u);
    swap[u] = sq.index({t[1], t[0]});
  }
  CHECK(decompose_hom(sq, sq, swap).mu == std::vector<int>{1, 0});

  auto all = enumerate_automorphisms(sq, 100);
  CHECK(all.size() == 8);
  CHECK(brute_force_automorphisms(sq) == 8);
  std::set<std::pair<std::vector<int>, std::vector<std::vector<int>>>> forms;
  for (const auto& f : all) {
    auto d = decompose_hom(sq, sq, f);
    CHECK(reconstruct(sq, sq, d) == f);
    forms.insert({d.mu, d.g});
  }
  CHECK(forms.size() == 8);
}

TEST_CASE("automorphism group of [2]x[3]") {
  ProductGraph g({2, 3});
  CHECK(brute_force_automorphisms(g) == 12);
  CHECK(enumerate_automorphisms(g, 1000).size() == 12);
  CHECK(count_automorphisms(g) == 12);
  CHECK(automorphism_formula({2, 3}) == 12);
  CHECK_THROWS_AS(enumerate_automorphisms(g, 5), BudgetExceeded);
}

TEST_CASE("all products with at most 16 vertices") {
  std::vector<std::vector<int>> seqs;
  std::vector<int> cur;
  size_sequences(16, cur, 1, seqs);
  Rng rng(7);
  for (const auto& sizes : seqs) {
    CAPTURE(sizes.size());
    ProductGraph g(sizes);
    std::uint64_t expected = automorphism_formula(sizes);
    CHECK(count_automorphisms(g) == expected);
    if (g.size() <= 8) CHECK(brute_force_automorphisms(g) == expected);
    std::vector<std::vector<std::size_t>> autos;
    if (expected <= 50000)
      autos = enumerate_automorphisms(g, expected);
    else
      for (int k = 0; k < 200; ++k) autos.push_back(random_automorphism(g, rng));
    if (expected <= 50000) CHECK(autos.size() == expected);
    std::set<std::pair<std::vector<int>, std::vector<std::vector<int>>>> forms;
    for (const auto& f : autos) {
      auto d = decompose_hom(g, g, f);
      for (std::size_t i = 0; i < sizes.size(); ++i) CHECK(sizes[d.mu[i]] == sizes[i]);
      for (int a : d.alpha) CHECK(a == -1);
      CHECK(reconstruct(g, g, d) == f);
      forms.insert({d.mu, d.g});
    }
    if (expected <= 50000) CHECK(forms.size() == expected);
  }
}

TEST_CASE("random automorphisms round trip") {
  Rng rng(11);
  std::vector<std::vector<int>> shapes{{2, 2, 2}, {3, 3}, {2, 3, 2}, {4, 2, 4}, {3, 3, 3}, {5}};
  for (int k = 0; k < 200; ++k) {
    ProductGraph g(shapes[k % shapes.size()]);
    auto f = random_automorphism(g, rng);
    CHECK(reconstruct(g, g, decompose_hom(g, g, f)) == f);
  }
}

TEST_CASE("injective homomorphisms into larger products") {
  ProductGraph src({2, 3}), dst({3, 2, 4});
  std::vector<std::size_t> f(src.size());
  for (std::size_t u = 0; u < src.size(); ++u) {
    auto t = src.tuple(u);
    f[u] = dst.index({1, t[0], (t[1] + 1) % 4});
  }
  auto h = decompose_hom(src, dst, f);
  CHECK(h.mu == std::vector<int>{1, 2});
  CHECK(h.alpha == std::vector<int>{1, -1, -1});
  CHECK(reconstruct(src, dst, h) == f);
}

TEST_CASE("decomposition errors") {
  ProductGraph g({2, 2});
  try {
    decompose_hom(g, g, {0, 0, 1, 2});
    FAIL("expected an error");
  } catch (const DecompositionError& e) {
    CHECK(e.kind == DecompositionError::Kind::NotInjective);
  }
  try {
    // (0,0)->(0,0), (1,0)->(1,1) is not an edge
    decompose_hom(g, g, {0, 3, 2, 1});
    FAIL("expected an error");
  } catch (const DecompositionError& e) {
    CHECK(e.kind == DecompositionError::Kind::NotHomomorphism);
    CHECK(!g.adjacent(std::vector<std::size_t>{0, 3, 2, 1}[e.a], std::vector<std::size_t>{0, 3, 2, 1}[e.b]));
  }
  // the 4-cycle embeds in K_4 without a product decomposition
  ProductGraph k4({4});
  try {
    decompose_hom(g, k4, {0, 1, 2, 3});
    FAIL("expected an error");
  } catch (const DecompositionError& e) {
    CHECK(e.kind == DecompositionError::Kind::NoDecomposition);
  }
}

TEST_CASE("label action classification") {
  const auto& F2 = FieldModel::laurent(2);
  BuildingDescriptor b({{&F2, 2}, {&F2, 1}});
  auto ball = make_ball(b, origin(b), 2);

  std::vector<Matrix> id{Matrix::identity(F2, 3), Matrix::identity(F2, 2)};
  auto la = label_action({AutGenerator::group(id)}, ball);
  CHECK(la.motion[0] == LabelMotion::Rotation);
  CHECK(la.motion[1] == LabelMotion::Both);
  CHECK(la.offset == std::vector<int>{0, 0});
  CHECK(la.labels_factor);
  CHECK(la.vertices_checked == ball.size());

  auto refl = label_action({AutGenerator::lambda({true, true})}, ball);
  CHECK(refl.motion[0] == LabelMotion::Reflection);
  CHECK(refl.offset == std::vector<int>{0, 0});
  CHECK(refl.labels_factor);

  auto sh = label_action({AutGenerator::shift(0, 1)}, ball);
  CHECK(sh.motion[0] == LabelMotion::Rotation);
  CHECK(sh.offset == std::vector<int>{1, 0});
  CHECK(sh.p[0] == std::vector<int>{1, 2, 0});

  BuildingDescriptor b2 = BuildingDescriptor::uniform(FieldModel::padic(3), 2, 1);
  auto ball2 = make_ball(b2, origin(b2), 2);
  auto r2 = label_action({AutGenerator::lambda({true})}, ball2);
  CHECK(r2.motion[0] == LabelMotion::Reflection);

  AutWord far{AutGenerator::group({Matrix::pi_diagonal(F2, {0, 3, 3}), Matrix::identity(F2, 2)})};
  CHECK_THROWS_AS(label_action(far, ball), WindowTooSmall);
  try {
    label_action(far, ball);
  } catch (const WindowTooSmall& e) {
    CHECK(e.required_radius > 2);
  }
}

TEST_CASE("label action stable under group precomposition") {
  const auto& F2 = FieldModel::laurent(2);
  Rng rng(5);
  std::vector<std::pair<BuildingDescriptor, std::vector<AutWord>>> cases{
      {BuildingDescriptor({{&F2, 2}, {&F2, 1}}),
       {{AutGenerator::shift(0, 1)}, {AutGenerator::lambda({true, false})},
        {AutGenerator::lambda({false, true}), AutGenerator::shift(0, -1)}}},
      {BuildingDescriptor::uniform(F2, 1, 2), {{AutGenerator::exchange({1, 0})}, {AutGenerator::shift(1, 1), AutGenerator::exchange({1, 0})}}}};
  for (const auto& [b, words] : cases) {
    auto ball = make_ball(b, origin(b), 3);
    for (const auto& w : words) {
      auto base = label_action(w, ball);
      for (int k = 0; k < 3; ++k) {
        std::vector<Matrix> g;
        for (const auto& f : b.factors) g.push_back(oracle::random_unimodular(*f.field, f.d + 1, rng));
        auto la = label_action(compose(w, {AutGenerator::group(g)}), ball);
        CHECK(la.motion == base.motion);
        CHECK(la.mu == base.mu);
        CHECK(la.labels_factor);
      }
    }
  }
}

TEST_CASE("normal form examples") {
  const auto& F2 = FieldModel::laurent(2);
  BuildingDescriptor b = BuildingDescriptor::uniform(F2, 1, 2);
  auto ball = make_ball(b, origin(b), 4);

  auto nf = normal_form({AutGenerator::exchange({1, 0})}, ball);
  CHECK(nf.verified);
  CHECK(nf.mu == std::vector<int>{1, 0});
  CHECK(nf.r == std::vector<bool>{false, false});
  for (const auto& g : nf.g) CHECK(g == Matrix::identity(F2, 2));
  CHECK(nf.apartment_vertices_checked > 10);

  Rng rng(3);
  std::vector<Matrix> mono{random_monomial(F2, 2, rng), random_monomial(F2, 2, rng)};
  auto nf2 = normal_form({AutGenerator::lambda({true, false}), AutGenerator::group(mono)}, ball);
  CHECK(nf2.verified);
  CHECK(nf2.r == std::vector<bool>{true, false});
  CHECK(nf2.mu == std::vector<int>{0, 1});

  BuildingDescriptor b3({{&F2, 2}, {&F2, 1}});
  auto ball3 = make_ball(b3, origin(b3), 2);
  auto nf3 = normal_form({AutGenerator::shift(0, 2)}, ball3);
  CHECK(nf3.verified);
  CHECK(nf3.shift_powers == std::vector<long>{-2, 0});
  CHECK(nf3.restoring[0] == Matrix::identity(F2, 3));
  CHECK(nf3.g[0] == shift_generator(F2, 2).inverse() * shift_generator(F2, 2).inverse());
}

TEST_CASE("normal form on random words") {
  Rng rng(21);
  std::vector<BuildingDescriptor> shapes{BuildingDescriptor::uniform(FieldModel::laurent(2), 1, 2),
                                         BuildingDescriptor::uniform(FieldModel::padic(2), 2, 1),
                                         BuildingDescriptor({{&FieldModel::laurent(2), 2}, {&FieldModel::laurent(2), 1}})};
  int verified = 0, too_small = 0;
  for (const auto& b : shapes) {
    auto ball = make_ball(b, origin(b), 2);
    for (int k = 0; k < 12; ++k) {
      auto w = random_apartment_word(b, rng, 3);
      if (k % 3 == 0) {
        std::vector<Matrix> g;
        for (const auto& f : b.factors) g.push_back(oracle::random_unimodular(*f.field, f.d + 1, rng));
        w.push_back(AutGenerator::group(g));
      }
      try {
        auto nf = normal_form(w, ball);
        CHECK(nf.verified);
        if (!nf.verified) MESSAGE(nf.violations.front());
        for (std::size_t i = 0; i < b.r(); ++i)
          CHECK(nf.g[i] == power(shift_generator(*b.factors[i].field, b.factors[i].d), nf.shift_powers[i]) * nf.restoring[i]);
        ++verified;
      } catch (const WindowTooSmall& e) {
        CHECK(e.required_radius > 2);
        ++too_small;
      }
    }
  }
  CHECK(verified > 20);
}

TEST_CASE("gallery propagation reproduces the labelling") {
  const auto& F2 = FieldModel::laurent(2);
  BallOptions opt;
  opt.chambers = true;
  for (const auto& b : {BuildingDescriptor::uniform(F2, 2, 1), BuildingDescriptor::uniform(F2, 1, 2),
                        BuildingDescriptor::uniform(FieldModel::padic(3), 1, 1)}) {
    auto ball = make_ball(b, origin(b), 2, opt);
    auto rep = gallery_labels(ball);
    CHECK(rep.chambers_reached == ball.chambers.size());
    CHECK(rep.conflicts == 0);
    CHECK(rep.mismatches == 0);
    std::set<int> covered;
    for (const auto& c : ball.chambers) covered.insert(c.begin(), c.end());
    CHECK(rep.vertices_labelled == covered.size());
    CHECK(rep.vertices_labelled * 2 > ball.size());
  }
}

TEST_CASE("maps agreeing on one chamber agree on the apartment") {
  Rng rng(13);
  for (const auto& b : {BuildingDescriptor::uniform(FieldModel::laurent(2), 2, 1), BuildingDescriptor::uniform(FieldModel::laurent(2), 1, 2)}) {
    auto ball = make_ball(b, origin(b), 2);
    auto lambda = apartment_vertices(ball);
    auto delta = delta_vertices(b);
    for (int k = 0; k < 10; ++k) {
      auto w = random_apartment_word(b, rng, 3);
      auto w2 = compose(w, random_chamber_fixing_word(b, rng));
      REQUIRE(agree_on(b, w, w2, delta));
      CHECK(agree_on(b, w, w2, lambda));
    }
    // grouping by the action on the basic chamber
    std::map<std::vector<PolyVertex>, std::vector<AutWord>> buckets;
    for (int k = 0; k < 60; ++k) {
      auto w = random_apartment_word(b, rng, 2);
      std::vector<PolyVertex> key;
      for (const auto& x : delta) key.push_back(apply_word(b, w, x));
      buckets[key].push_back(w);
    }
    for (const auto& [key, words] : buckets)
      for (std::size_t i = 1; i < words.size(); ++i) CHECK(agree_on(b, words[0], words[i], lambda));
  }

  // the target apartment must be thin: an Iwahori element fixes the chamber
  // but moves the apartment
  const auto& F2 = FieldModel::laurent(2);
  auto b = BuildingDescriptor::uniform(F2, 1, 1);
  auto ball = make_ball(b, origin(b), 2);
  Matrix u = Matrix::identity(F2, 2);
  u(1, 0) = F2.uniformizer();
  AutWord iwahori{AutGenerator::group({u})};
  CHECK(agree_on(b, {}, iwahori, delta_vertices(b)));
  CHECK_FALSE(agree_on(b, {}, iwahori, apartment_vertices(ball)));
}
