#include "doctest.h"

#include <set>

#include "bt/subdivision.hpp"
#include "support/oracles.hpp"

using namespace bt;

namespace {

// alcove of a generic point (x_0 = 0, distinct nonzero fractional parts)
AlcoveChart alcove_of(const std::vector<mpq_class>& x) {
  int d = static_cast<int>(x.size()) - 1;
  std::vector<std::pair<mpq_class, int>> fr;
  for (int j = 1; j <= d; ++j) {
    mpz_class fl;
    mpz_fdiv_q(fl.get_mpz_t(), x[j].get_num_mpz_t(), x[j].get_den_mpz_t());
    fr.emplace_back(x[j] - fl, j);
  }
  std::sort(fr.begin(), fr.end());
  AlcoveChart c;
  c.d = d;
  c.sigma = {0};
  c.a = {0};
  for (auto& [f, j] : fr) {
    c.sigma.push_back(j);
    mpz_class fl;
    mpz_fdiv_q(fl.get_mpz_t(), x[j].get_num_mpz_t(), x[j].get_den_mpz_t());
    c.a.push_back(-fl.get_si());
  }
  return c;
}

bool generic(const std::vector<mpq_class>& x) {
  std::set<mpq_class> seen{mpq_class(0)};
  for (std::size_t j = 1; j < x.size(); ++j) {
    mpz_class fl;
    mpz_fdiv_q(fl.get_mpz_t(), x[j].get_num_mpz_t(), x[j].get_den_mpz_t());
    if (!seen.insert(x[j] - fl).second) return false;
  }
  return true;
}

// all points with x_0 = 0 and x_j in [0, N] with denominator D
std::vector<std::vector<mpq_class>> grid(int d, int N, int D) {
  std::vector<std::vector<mpq_class>> out;
  std::vector<int> k(d, 0);
  for (;;) {
    std::vector<mpq_class> x{mpq_class(0)};
    for (int j = 0; j < d; ++j) x.push_back(mpq_class(k[j], D));
    for (auto& q : x) q.canonicalize();
    out.push_back(x);
    int j = 0;
    while (j < d && ++k[j] > N * D) k[j++] = 0;
    if (j == d) break;
  }
  return out;
}

} // namespace

TEST_CASE("eta_chambers examples") {
  CHECK(eta_chambers(1, 3).size() == 3);
  CHECK(eta_chambers(2, 2).size() == 4);
  CHECK(eta_chambers(3, 2).size() == 8);
  CHECK(eta_chambers(2, 1).size() == 1);
  CHECK_THROWS_AS(eta_chambers(5, 2), BudgetExceeded);
}

TEST_CASE("eta_chambers matches the generic-point oracle and covers eta_N") {
  for (int d = 1; d <= 3; ++d)
    for (int N = 1; N <= 3; ++N) {
      auto charts = eta_chambers(d, N);
      long expect = 1;
      for (int i = 0; i < d; ++i) expect *= N;
      REQUIRE(static_cast<long>(charts.size()) == expect);
      std::set<AlcoveChart> hit;
      for (const auto& x : grid(d, N, d + 3)) {
        if (!in_eta(x, N) || !generic(x)) continue;
        hit.insert(alcove_of(x));
      }
      REQUIRE(std::set<AlcoveChart>(charts.begin(), charts.end()) == hit);
      for (const auto& x : grid(d, N, 2 * N)) {
        if (!in_eta(x, N)) continue;
        int count = 0;
        for (const auto& c : charts) count += c.contains(x);
        REQUIRE(count >= 1);
        if (generic(x)) REQUIRE(count == 1);
      }
      // chamber barycenters are interior to exactly one chart
      for (const auto& c : charts) {
        std::vector<mpq_class> bary(d + 1, 0);
        for (const auto& v : c.vertices())
          for (int j = 0; j <= d; ++j) bary[j] += mpq_class(v[j], d + 1);
        int count = 0;
        for (const auto& o : charts) count += o.contains(bary);
        REQUIRE(count == 1);
      }
    }
}

TEST_CASE("subdivide_ball") {
  const auto& F2 = FieldModel::laurent(2);
  BallOptions opt;
  opt.chambers = true;
  auto b1 = BuildingDescriptor::uniform(F2, 1, 1);

  auto tree2 = make_ball(b1, origin(b1), 2, opt);
  auto same = subdivide_ball(tree2, {{1}});
  CHECK(same.points.size() == tree2.size());
  CHECK(same.cells.size() == tree2.chambers.size());
  CHECK(same.edges.size() == tree2.edges.size());

  auto tree1 = make_ball(b1, origin(b1), 1, opt);
  auto one = subdivide_ball(tree1, {{2}}, {0});
  CHECK(one.points.size() == 3);
  CHECK(one.edges.size() == 2);
  int mids = 0;
  for (const auto& p : one.points)
    if (p.weights[0].size() == 2) {
      ++mids;
      CHECK(p.weights[0][0].second == mpq_class(1, 2));
    }
  CHECK(mids == 1);
  auto all = subdivide_ball(tree1, {{2}});
  CHECK(all.points.size() == 7);
  CHECK(all.edges.size() == 6);

  auto b11 = BuildingDescriptor::uniform(F2, 1, 2);
  auto sq = make_ball(b11, origin(b11), 2, opt);
  std::vector<int> delta;
  for (auto& v : basic_chamber(b11).vertices) delta.push_back(sq.find(v));
  std::sort(delta.begin(), delta.end());
  int id = static_cast<int>(std::find(sq.chambers.begin(), sq.chambers.end(), delta) - sq.chambers.begin());
  REQUIRE(id < static_cast<int>(sq.chambers.size()));
  auto halves = subdivide_ball(sq, {{2, 1}}, {id});
  CHECK(halves.cells.size() == 2);
  CHECK(halves.points.size() == 6);
  CHECK(halves.edges.size() == 7);
}

TEST_CASE("subdivided points agree across shared faces") {
  auto b = BuildingDescriptor::uniform(FieldModel::padic(2), 2, 1);
  BallOptions opt;
  opt.chambers = true;
  auto ball = make_ball(b, origin(b), 2, opt);
  auto sub = subdivide_ball(ball, {{2}});
  std::set<int> verts;
  std::set<std::pair<int, int>> edges;
  for (const auto& c : ball.chambers) {
    for (int v : c) verts.insert(v);
    for (int x : c)
      for (int y : c)
        if (x < y) edges.emplace(x, y);
  }
  CHECK(sub.points.size() == verts.size() + edges.size());
  CHECK(sub.cells.size() == 4 * ball.chambers.size());
  for (const auto& p : sub.points)
    for (const auto& x : p.coords[0]) REQUIRE(mpq_class(2 * x).get_den() == 1);
}

TEST_CASE("marking-preserving exchange maps extend to subdivisions") {
  auto b = BuildingDescriptor::uniform(FieldModel::laurent(2), 1, 2);
  BallOptions opt;
  opt.chambers = true;
  auto ball = make_ball(b, origin(b), 3, opt);
  for (auto [m1, m2, expect] : {std::tuple{2, 2, true}, std::tuple{3, 3, true}, std::tuple{2, 1, false}}) {
    auto sub = subdivide_ball(ball, {{m1, m2}});
    std::map<std::vector<std::vector<std::pair<int, mpq_class>>>, int> idx;
    for (std::size_t i = 0; i < sub.points.size(); ++i) idx[sub.points[i].weights] = static_cast<int>(i);
    std::set<std::vector<int>> cells(sub.cells.begin(), sub.cells.end());
    bool chambered = true;
    for (const auto& c : sub.cells) {
      std::vector<int> img;
      for (int p : c) {
        auto w = sub.points[p].weights;
        std::swap(w[0], w[1]);
        auto it = idx.find(w);
        if (it == idx.end()) {
          chambered = false;
          break;
        }
        img.push_back(it->second);
      }
      if (!chambered) break;
      std::sort(img.begin(), img.end());
      if (!cells.count(img)) chambered = false;
    }
    CHECK(chambered == expect);
  }
}

TEST_CASE("nu and delta") {
  const auto& F2 = FieldModel::laurent(2);
  auto ram = ExtensionDescriptor::make(F2, 2, 1);
  auto unr = ExtensionDescriptor::make(F2, 1, 2);
  auto both = ExtensionDescriptor::make(F2, 2, 2);
  const auto& K = ram.field();

  CHECK(nu_embed(VertexClass::standard(F2, 3), ram) == VertexClass::standard(K, 3));
  auto v = VertexClass::from_basis(Matrix::pi_diagonal(F2, {0, 1}));
  auto img = nu_embed(v, ram);
  CHECK(img == VertexClass::from_basis(Matrix::pi_diagonal(K, {0, 2})));
  CHECK(undirected_distance(img, VertexClass::standard(K, 2)) == 2);

  // unramified quadratic: the origin has q^2+1 neighbors, q+1 of them are images
  auto o = VertexClass::standard(F2, 2);
  std::set<VertexClass> images;
  for (auto& n : all_neighbors(o)) images.insert(nu_embed(n, unr));
  auto big = all_neighbors(nu_embed(o, unr));
  int missed = 0;
  for (auto& n : big) missed += !images.count(n);
  CHECK(big.size() == 5);
  CHECK(missed == 2);

  Rng rng(21);
  auto bd = BuildingDescriptor::uniform(F2, 2, 1);
  for (const ExtensionDescriptor* ext : {&ram, &unr, &both}) {
    for (int t = 0; t < 100; ++t) {
      PolyVertex x{VertexClass::from_basis(oracle::random_invertible(F2, 3, rng))};
      PolyVertex y{VertexClass::from_basis(oracle::random_invertible(F2, 3, rng))};
      auto nx = nu_embed(x, *ext);
      REQUIRE(vertex_of(delta_restrict(point_of(nx), *ext)) == x);
      REQUIRE(undirected_distance(nx, nu_embed(y, *ext)) == ext->ramification() * undirected_distance(x, y));
    }
  }
  // half-integral image of an odd coordinate
  auto bK = BuildingDescriptor::uniform(K, 1, 1);
  auto p = delta_restrict(lambda_point(bK, {{mpq_class(0), mpq_class(1)}}), ram);
  CHECK(p.exponents[0][1] == mpq_class(1, 2));
  CHECK(&p.basis[0].model() == &F2);
  auto u = delta_restrict(lambda_point(BuildingDescriptor::uniform(unr.field(), 1, 1), {{mpq_class(0), mpq_class(3)}}), unr);
  CHECK(u.exponents[0][1] == 3);
  // a basis not defined over the base field
  ApartmentPoint bad = lambda_point(bK, {{mpq_class(0), mpq_class(1)}});
  bad.basis[0](0, 1) = K.parse_element("s");
  CHECK_THROWS(delta_restrict(bad, ram));
  CHECK_THROWS(ExtensionDescriptor::make(FieldModel::padic(2), 2, 1));
}

TEST_CASE("nu on balls: simplicial when unramified, distance e when ramified") {
  const auto& F2 = FieldModel::laurent(2);
  BallOptions opt;
  for (int d : {1, 2}) {
    auto b = BuildingDescriptor::uniform(F2, d, 1);
    auto ball = make_ball(b, origin(b), 1, opt);
    for (auto [e, f] : {std::pair{1, 2}, std::pair{2, 1}, std::pair{3, 1}}) {
      auto ext = ExtensionDescriptor::make(F2, e, f);
      for (const auto& edge : ball.edges) {
        auto x = nu_embed(ball.vertex(edge.from), ext), y = nu_embed(ball.vertex(edge.to), ext);
        REQUIRE(undirected_distance(x, y) == e);
      }
    }
  }
}

TEST_CASE("verify_induced_structure") {
  const auto& F2 = FieldModel::laurent(2);
  BallOptions opt;
  opt.chambers = true;
  auto b1 = BuildingDescriptor::uniform(F2, 1, 1);
  auto ball1 = make_ball(b1, origin(b1), 1, opt);
  auto r1 = verify_induced_structure(ball1, ExtensionDescriptor::make(F2, 1, 1));
  CHECK(r1.pass);
  auto r2 = verify_induced_structure(ball1, ExtensionDescriptor::make(F2, 2, 1));
  CHECK(r2.pass);
  CHECK(r2.chambers_checked == 3);
  CHECK(r2.subchambers_checked == 6);
  CHECK(r2.points_mapped == 7);

  auto b2 = BuildingDescriptor::uniform(F2, 2, 1);
  auto ball2 = make_ball(b2, origin(b2), 1, opt);
  auto r3 = verify_induced_structure(ball2, ExtensionDescriptor::make(F2, 2, 1));
  CHECK(r3.pass);
  CHECK(r3.subchambers_checked == 4 * r3.chambers_checked);
  auto r4 = verify_induced_structure(ball2, ExtensionDescriptor::make(F2, 2, 2));
  CHECK(r4.pass);
}
