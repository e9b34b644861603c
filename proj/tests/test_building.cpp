#include "doctest.h"

#include <deque>
#include <map>

#include "bt/building.hpp"
#include "support/oracles.hpp"

using namespace bt;

namespace {

PolyVertex random_vertex(const BuildingDescriptor& b, Rng& rng) {
  PolyVertex x;
  for (const auto& f : b.factors)
    x.push_back(VertexClass::from_basis(oracle::random_invertible(*f.field, f.d + 1, rng)));
  return x;
}

std::vector<mpq_class> ints(std::initializer_list<long> v) {
  std::vector<mpq_class> out;
  for (long x : v) out.emplace_back(x);
  return out;
}

// directed distances from `from` following edges whose label increases by one unit
std::map<int, int> directed_bfs(const Ball& ball, int from) {
  std::vector<std::vector<int>> out(ball.size());
  for (const auto& e : ball.edges) {
    if (e.directed) out[e.from].push_back(e.to);
    if (e.reverse_directed) out[e.to].push_back(e.from);
  }
  std::map<int, int> dist{{from, 0}};
  std::deque<int> queue{from};
  while (!queue.empty()) {
    int v = queue.front();
    queue.pop_front();
    for (int w : out[v])
      if (!dist.count(w)) {
        dist[w] = dist[v] + 1;
        queue.push_back(w);
      }
  }
  return dist;
}

} // namespace

TEST_CASE("basic chamber") {
  const auto& Q2 = FieldModel::padic(2);
  auto b1 = BuildingDescriptor::uniform(Q2, 1, 1);
  auto c = basic_chamber(b1);
  REQUIRE(c.vertices.size() == 2);
  CHECK(c.vertices[0][0] == VertexClass::standard(Q2, 2));
  CHECK(c.vertices[1][0] == VertexClass::from_basis(Matrix::pi_diagonal(Q2, {0, 1})));
  CHECK(is_face(b1, c.vertices));

  auto b2 = BuildingDescriptor::uniform(Q2, 2, 1);
  std::set<int> labels;
  for (auto& v : basic_chamber(b2).vertices) labels.insert(labelling_C(v)[0]);
  CHECK(labels == std::set<int>{0, 1, 2});

  auto b11 = BuildingDescriptor::uniform(Q2, 1, 2);
  CHECK(basic_chamber(b11).vertices.size() == 4);
  CHECK(is_face(b11, basic_chamber(b11).vertices));
}

TEST_CASE("is_face") {
  const auto& Q2 = FieldModel::padic(2);
  auto b = BuildingDescriptor::uniform(Q2, 1, 1);
  auto o = VertexClass::standard(Q2, 2);
  auto scaled = VertexClass::from_basis(Matrix::pi_diagonal(Q2, {1, 1}));
  CHECK_FALSE(is_face(b, {{o}, {scaled}}));
  CHECK(is_face(b, {{o}}));

  auto b2 = BuildingDescriptor::uniform(FieldModel::laurent(2), 2, 1);
  auto ball = make_ball(b2, origin(b2), 2);
  Rng rng(1);
  int far = 0;
  for (std::size_t i = 0; i < ball.size() && far < 20; ++i)
    for (std::size_t j = 0; j < ball.size() && far < 20; ++j) {
      auto x = ball.vertex(i), y = ball.vertex(j);
      long d = undirected_distance(x, y);
      bool face = is_face(b2, {x, y});
      REQUIRE(face == (d == 1));
      if (distance_f(x, y) >= 3) ++far;
    }
  CHECK(far == 20);
}

TEST_CASE("ball sizes") {
  const auto& F2 = FieldModel::laurent(2);
  auto b = BuildingDescriptor::uniform(F2, 1, 1);
  CHECK(make_ball(b, origin(b), 1).size() == 4);
  CHECK(make_ball(b, origin(b), 0).size() == 1);
  CHECK(make_ball(b, origin(b), 2).size() == 10);
  auto b11 = BuildingDescriptor::uniform(F2, 1, 2);
  auto ball = make_ball(b11, origin(b11), 1);
  CHECK(ball.size() == 7);
  CHECK(ball.edges.size() == 6);
  auto b3 = BuildingDescriptor::uniform(FieldModel::padic(3), 1, 1);
  CHECK(make_ball(b3, origin(b3), 1).size() == 5);

  BallOptions tight;
  tight.budget = 4;
  CHECK_THROWS_AS(make_ball(b3, origin(b3), 2, tight), BudgetExceeded);
}

TEST_CASE("ball edges and chambers are faces") {
  auto b = BuildingDescriptor({Factor{&FieldModel::padic(2), 2}, Factor{&FieldModel::laurent(2), 1}});
  BallOptions opt;
  opt.chambers = true;
  auto ball = make_ball(b, origin(b), 2, opt);
  for (const auto& e : ball.edges) {
    REQUIRE(undirected_distance(ball.vertex(e.from), ball.vertex(e.to)) == 1);
    REQUIRE(ball.dist[e.from] <= 2);
  }
  REQUIRE(!ball.chambers.empty());
  for (const auto& c : ball.chambers) {
    REQUIRE(c.size() == 6);
    std::vector<PolyVertex> vs;
    for (int id : c) vs.push_back(ball.vertex(id));
    REQUIRE(is_face(b, vs));
  }
  // the basic chamber is present
  std::vector<int> delta;
  for (auto& v : basic_chamber(b).vertices) delta.push_back(ball.find(v));
  std::sort(delta.begin(), delta.end());
  CHECK(std::find(ball.chambers.begin(), ball.chambers.end(), delta) != ball.chambers.end());
}

TEST_CASE("distance_f and directed BFS") {
  const auto& Q2 = FieldModel::padic(2);
  auto b1 = BuildingDescriptor::uniform(Q2, 1, 1);
  CHECK(distance_f(origin(b1), origin(b1)) == 0);
  CHECK(distance_f(origin(b1), {VertexClass::from_basis(Matrix::pi_diagonal(Q2, {0, 1}))}) == 1);
  auto b2 = BuildingDescriptor::uniform(Q2, 2, 1);
  PolyVertex y{VertexClass::from_basis(Matrix::pi_diagonal(Q2, {1, 1, 0}))};
  CHECK(distance_f(origin(b2), y) == 2);
  CHECK(distance_f(y, origin(b2)) == 1);

  auto ball = make_ball(b2, origin(b2), 3);
  for (int from : {0, 1, 5}) {
    auto dist = directed_bfs(ball, from);
    auto x = ball.vertex(from);
    for (std::size_t id = 0; id < ball.size(); ++id) {
      if (ball.dist[id] > 2 || undirected_distance(x, ball.vertex(id)) > 2) continue;
      REQUIRE(dist.count(static_cast<int>(id)));
      REQUIRE(dist[static_cast<int>(id)] == distance_f(x, ball.vertex(id)));
    }
  }
}

TEST_CASE("directed edges are exactly the label-increasing adjacent pairs") {
  for (auto [q, d, r] : {std::tuple{2u, 1, 2}, std::tuple{2u, 2, 1}, std::tuple{3u, 2, 1}, std::tuple{2u, 3, 1}}) {
    auto b = BuildingDescriptor::uniform(FieldModel::padic(q), d, r);
    auto ball = make_ball(b, origin(b), d == 3 ? 1 : 2);
    for (const auto& e : ball.edges) {
      auto x = ball.vertex(e.from), y = ball.vertex(e.to);
      REQUIRE(e.directed == (distance_f(x, y) == 1));
      REQUIRE(e.reverse_directed == (distance_f(y, x) == 1));
      auto cx = labelling_C(x), cy = labelling_C(y);
      int changed = 0;
      for (std::size_t i = 0; i < cx.size(); ++i) changed += cx[i] != cy[i];
      REQUIRE(changed == 1);
    }
  }
}

TEST_CASE("project_apartment") {
  const auto& F2 = FieldModel::laurent(2);
  auto b = BuildingDescriptor::uniform(F2, 1, 1);
  std::vector<Matrix> std_basis{Matrix::identity(F2, 2)};
  PolyVertex v{VertexClass::from_basis(Matrix::pi_diagonal(F2, {0, 3}))};
  CHECK(vertex_of(project_apartment(v, std_basis)) == v);
  Matrix m(F2, 2, 2);
  m(0, 0) = F2.one();
  m(1, 0) = F2.one();
  m(1, 1) = F2.uniformizer();
  PolyVertex x{VertexClass::from_basis(m)};
  auto p = project_apartment(x, std_basis);
  CHECK(vertex_of(p) == origin(b));
  // f-argmin oracle over the standard apartment window
  long best = kInfiniteValuation;
  int ties = 0;
  PolyVertex arg;
  for (long a = -4; a <= 4; ++a) {
    PolyVertex y{VertexClass::from_basis(Matrix::pi_diagonal(F2, {0, a}))};
    long f = distance_f(x, y);
    if (f < best) {
      best = f;
      arg = y;
      ties = 0;
    } else if (f == best) {
      ++ties;
    }
  }
  CHECK(ties == 0);
  CHECK(arg == origin(b));

  // commutes with the diagonal torus
  auto b3 = BuildingDescriptor::uniform(FieldModel::padic(3), 2, 1);
  std::vector<Matrix> id3{Matrix::identity(FieldModel::padic(3), 3)};
  Rng rng(4);
  for (int t = 0; t < 100; ++t) {
    auto y = random_vertex(b3, rng);
    std::vector<long> e{rng.range(-2, 2), rng.range(-2, 2), rng.range(-2, 2)};
    std::vector<Matrix> g{Matrix::pi_diagonal(FieldModel::padic(3), e)};
    REQUIRE(vertex_of(project_apartment(act(g, y), id3)) == act(g, vertex_of(project_apartment(y, id3))));
  }
}

TEST_CASE("group action") {
  const auto& Q3 = FieldModel::padic(3);
  auto b = BuildingDescriptor::uniform(Q3, 2, 1);
  Rng rng(8);
  std::vector<Matrix> id{Matrix::identity(Q3, 3)};
  for (int t = 0; t < 100; ++t) {
    auto x = random_vertex(b, rng), y = random_vertex(b, rng);
    REQUIRE(act(id, x) == x);
    std::vector<Matrix> g{oracle::random_invertible(Q3, 3, rng)};
    REQUIRE(distance_f(act(g, x), act(g, y)) == distance_f(x, y));
    long vdet = g[0].det().valuation();
    REQUIRE(((labelling_C(act(g, x))[0] - labelling_C(x)[0] - vdet) % 3 + 3) % 3 == 0);
    std::vector<Matrix> h{oracle::random_invertible(Q3, 3, rng)};
    REQUIRE(act(h, act(g, x)) == act({h[0] * g[0]}, x));
  }
  // the shift generator rotates the basic chamber
  for (int d = 1; d <= 3; ++d) {
    auto bd = BuildingDescriptor::uniform(Q3, d, 1);
    std::vector<Matrix> f{shift_generator(Q3, d)};
    for (int k = 0; k <= d; ++k) {
      auto img = act(f, PolyVertex{basic_vertex(Q3, d, k)});
      REQUIRE(img[0] == basic_vertex(Q3, d, (k + 1) % (d + 1)));
    }
    auto x = random_vertex(bd, rng);
    REQUIRE(labelling_C(act(f, x))[0] == (labelling_C(x)[0] + 1) % (d + 1));
  }
}

TEST_CASE("involution") {
  const auto& Q2 = FieldModel::padic(2);
  auto b = BuildingDescriptor({Factor{&Q2, 2}, Factor{&FieldModel::laurent(2), 1}});
  CHECK(involution_lambda(origin(b), {true, true}) == origin(b));
  Rng rng(12);
  for (int t = 0; t < 200; ++t) {
    auto x = random_vertex(b, rng);
    REQUIRE(involution_lambda(involution_lambda(x, {true, true}), {true, true}) == x);
    auto y = involution_lambda(x, {true, false});
    auto cx = labelling_C(x), cy = labelling_C(y);
    REQUIRE((cx[0] + cy[0]) % 3 == 0);
    REQUIRE(cx[1] == cy[1]);
  }
  // exponent negation on the standard apartment
  auto p = lambda_point(b, {ints({0, 2, -1}), ints({0, 3})});
  auto q = lambda_point(b, {ints({0, -2, 1}), ints({0, -3})});
  CHECK(involution_lambda(vertex_of(p), {true, true}) == vertex_of(q));
}

TEST_CASE("sigma_mu") {
  const auto& F2 = FieldModel::laurent(2);
  auto b = BuildingDescriptor::uniform(F2, 2, 2);
  auto p = lambda_point(b, {ints({0, 1, 2}), ints({0, 0, 5})});
  CHECK(sigma_mu(b, p, {0, 1}) == p);
  auto s = sigma_mu(b, p, {1, 0});
  CHECK(s.exponents[0] == ints({0, 0, 5}));
  CHECK(sigma_mu(b, s, {1, 0}) == p);
  // swap maps the basic chamber onto itself and swaps labels
  for (auto& v : basic_chamber(b).vertices) {
    auto img = vertex_of(sigma_mu(b, point_of(v), {1, 0}));
    auto cv = labelling_C(v), ci = labelling_C(img);
    REQUIRE(ci == LabelVector{cv[1], cv[0]});
    REQUIRE(labelling_D(b, ci) == img);
  }
  auto mixed = BuildingDescriptor({Factor{&F2, 1}, Factor{&F2, 2}});
  CHECK_THROWS(sigma_mu(mixed, lambda_point(mixed, {ints({0, 1}), ints({0, 1, 2})}), {1, 0}));
}

TEST_CASE("labelling C and D") {
  auto b = BuildingDescriptor({Factor{&FieldModel::padic(2), 2}, Factor{&FieldModel::padic(3), 1}});
  CHECK(labelling_C(origin(b)) == LabelVector{0, 0});
  CHECK(labelling_D(b, {0, 0}) == origin(b));
  for (auto& v : basic_chamber(b).vertices) REQUIRE(labelling_D(b, labelling_C(v)) == v);
  for (int a = 0; a < 3; ++a)
    for (int c = 0; c < 2; ++c) REQUIRE(labelling_C(labelling_D(b, {a, c})) == LabelVector{a, c});
}
