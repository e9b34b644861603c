#include "bt/building.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <numeric>
#include <set>

namespace bt {

BuildingDescriptor::BuildingDescriptor(std::vector<Factor> f) : factors(std::move(f)) {
  if (factors.empty()) throw std::invalid_argument("a building needs at least one factor");
  for (const auto& x : factors) {
    if (x.field == nullptr) throw std::invalid_argument("factor without a field");
    if (x.d < 1) throw std::invalid_argument("factor dimension must be >= 1");
  }
}

BuildingDescriptor BuildingDescriptor::uniform(const FieldModel& k, int d, int r) {
  return BuildingDescriptor(std::vector<Factor>(static_cast<std::size_t>(r), Factor{&k, d}));
}

bool operator==(const BuildingDescriptor& a, const BuildingDescriptor& b) {
  if (a.r() != b.r()) return false;
  for (std::size_t i = 0; i < a.r(); ++i)
    if (a.factors[i].field != b.factors[i].field || a.factors[i].d != b.factors[i].d) return false;
  return true;
}

std::size_t PolyVertexHash::operator()(const PolyVertex& v) const {
  std::size_t h = 0;
  for (const auto& x : v) h = h * 1000003u ^ VertexHash{}(x);
  return h;
}

ApartmentPoint ApartmentPoint::normalized() const {
  ApartmentPoint p = *this;
  for (auto& x : p.exponents) {
    mpq_class s = x.front();
    for (auto& y : x) y -= s;
  }
  return p;
}

bool ApartmentPoint::is_integral() const {
  for (const auto& x : exponents)
    for (const auto& y : x)
      if (y.get_den() != 1) return false;
  return true;
}

bool operator==(const ApartmentPoint& a, const ApartmentPoint& b) {
  if (a.basis.size() != b.basis.size()) return false;
  auto na = a.normalized(), nb = b.normalized();
  for (std::size_t i = 0; i < a.basis.size(); ++i)
    if (!(a.basis[i] == b.basis[i]) || na.exponents[i] != nb.exponents[i]) return false;
  return true;
}

PolyVertex origin(const BuildingDescriptor& b) {
  PolyVertex x;
  for (const auto& f : b.factors) x.push_back(VertexClass::standard(*f.field, f.d + 1));
  return x;
}

ApartmentPoint lambda_point(const BuildingDescriptor& b, const std::vector<std::vector<mpq_class>>& x) {
  if (x.size() != b.r()) throw std::invalid_argument("apartment point: factor count mismatch");
  ApartmentPoint p;
  for (std::size_t i = 0; i < b.r(); ++i) {
    if (x[i].size() != static_cast<std::size_t>(b.factors[i].d + 1))
      throw std::invalid_argument("apartment point: coordinate count mismatch");
    p.basis.push_back(Matrix::identity(*b.factors[i].field, x[i].size()));
  }
  p.exponents = x;
  return p;
}

PolyVertex vertex_of(const ApartmentPoint& p) {
  PolyVertex x;
  for (std::size_t i = 0; i < p.basis.size(); ++i) {
    std::vector<long> e;
    for (const auto& y : p.exponents[i]) {
      if (y.get_den() != 1) throw std::invalid_argument("apartment point is not a vertex");
      e.push_back(-y.get_num().get_si());
    }
    x.push_back(VertexClass::from_basis(p.basis[i] * Matrix::pi_diagonal(p.basis[i].model(), e)));
  }
  return x;
}

ApartmentPoint point_of(const PolyVertex& x) {
  ApartmentPoint p;
  for (const auto& v : x) {
    std::vector<long> neg;
    std::vector<mpq_class> ex;
    for (long a : v.exponents()) {
      neg.push_back(-a);
      ex.emplace_back(-a);
    }
    p.basis.push_back(v.matrix() * Matrix::pi_diagonal(v.model(), neg));
    p.exponents.push_back(ex);
  }
  return p;
}

VertexClass basic_vertex(const FieldModel& k, int d, int label) {
  std::vector<long> e(d + 1, 0);
  for (int j = d + 1 - label; j <= d; ++j) e[j] = 1;
  return VertexClass::from_basis(Matrix::pi_diagonal(k, e));
}

PolyFace basic_chamber(const BuildingDescriptor& b) {
  PolyFace face;
  std::vector<std::vector<VertexClass>> per;
  for (const auto& f : b.factors) {
    std::vector<VertexClass> c;
    for (int k = 0; k <= f.d; ++k) c.push_back(basic_vertex(*f.field, f.d, k));
    per.push_back(std::move(c));
    face.dims.push_back(f.d);
  }
  std::vector<std::size_t> idx(b.r(), 0);
  for (;;) {
    PolyVertex v;
    for (std::size_t i = 0; i < b.r(); ++i) v.push_back(per[i][idx[i]]);
    face.vertices.push_back(std::move(v));
    std::size_t i = b.r();
    while (i > 0) {
      --i;
      if (++idx[i] < per[i].size()) break;
      idx[i] = 0;
      if (i == 0) return face;
    }
  }
}

std::optional<std::vector<Matrix>> simplex_chain(const std::vector<VertexClass>& classes) {
  if (classes.empty()) return std::vector<Matrix>{};
  const Matrix& L0 = classes.front().matrix();
  const FieldModel& m = L0.model();
  std::size_t n = L0.rows();
  Matrix L0inv = L0.inverse();
  std::vector<std::pair<long, Matrix>> reps{{0, L0}};
  for (std::size_t k = 1; k < classes.size(); ++k) {
    Matrix B = classes[k].matrix();
    if (B.rows() != n) return std::nullopt;
    long c = (L0inv * B).min_valuation();
    Matrix rep = B.scaled(m.pi_pow(-c));
    Matrix back = rep.inverse() * L0.scaled(m.uniformizer());
    if (!back.is_integral()) return std::nullopt;
    long idx = (L0inv * rep).det().valuation();
    if (idx <= 0 || idx >= static_cast<long>(n)) return std::nullopt;
    reps.emplace_back(idx, std::move(rep));
  }
  std::sort(reps.begin(), reps.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  for (std::size_t k = 1; k < reps.size(); ++k) {
    if (reps[k].first == reps[k - 1].first) return std::nullopt;
    if (!(reps[k - 1].second.inverse() * reps[k].second).is_integral()) return std::nullopt;
  }
  std::vector<Matrix> out;
  for (auto& r : reps) out.push_back(std::move(r.second));
  return out;
}

bool is_face(const BuildingDescriptor& b, const std::vector<PolyVertex>& vertices) {
  if (vertices.empty()) return false;
  std::set<PolyVertex> unique(vertices.begin(), vertices.end());
  if (unique.size() != vertices.size()) return false;
  for (const auto& v : vertices)
    if (v.size() != b.r()) return false;
  std::vector<std::vector<VertexClass>> per(b.r());
  for (std::size_t i = 0; i < b.r(); ++i) {
    std::set<VertexClass> s;
    for (const auto& v : vertices) s.insert(v[i]);
    per[i].assign(s.begin(), s.end());
    if (!simplex_chain(per[i])) return false;
  }
  std::size_t product = 1;
  for (const auto& p : per) product *= p.size();
  return product == vertices.size();
}

Matrix adapted_basis(const std::vector<Matrix>& chain) {
  const Matrix& L0 = chain.front();
  const FieldModel& m = L0.model();
  const GaloisField& F = m.residue_field();
  std::size_t n = L0.rows();
  Matrix L0inv = L0.inverse();
  // residue images W_j of the chain members, largest first, then {0}
  std::vector<std::vector<std::vector<GfElem>>> spaces;
  for (const auto& L : chain) {
    Matrix c = L0inv * L;
    std::vector<std::vector<GfElem>> cols;
    for (std::size_t j = 0; j < c.cols(); ++j) {
      std::vector<GfElem> col(n);
      for (std::size_t i = 0; i < n; ++i) col[i] = c(i, j).residue();
      cols.push_back(col);
    }
    spaces.push_back(cols);
  }
  // basis vectors, built from the smallest subspace outward
  std::vector<std::vector<GfElem>> basis;
  auto independent_with = [&](const std::vector<GfElem>& v) {
    // rank test over F by elimination on a copy
    std::vector<std::vector<GfElem>> rows = basis;
    rows.push_back(v);
    std::size_t rank = 0;
    for (std::size_t col = 0; col < n && rank < rows.size(); ++col) {
      std::size_t piv = rank;
      while (piv < rows.size() && rows[piv][col] == 0) ++piv;
      if (piv == rows.size()) continue;
      std::swap(rows[piv], rows[rank]);
      GfElem inv = F.inv(rows[rank][col]);
      for (std::size_t r = rank + 1; r < rows.size(); ++r) {
        GfElem f = F.mul(rows[r][col], inv);
        for (std::size_t k = 0; k < n; ++k) rows[r][k] = F.sub(rows[r][k], F.mul(f, rows[rank][k]));
      }
      ++rank;
    }
    return rank == rows.size();
  };
  for (std::size_t s = spaces.size(); s-- > 0;)
    for (const auto& v : spaces[s])
      if (independent_with(v)) basis.push_back(v);
  for (std::size_t i = 0; i < n && basis.size() < n; ++i) {
    std::vector<GfElem> e(n, 0);
    e[i] = 1;
    if (independent_with(e)) basis.push_back(e);
  }
  Matrix lift(m, n, n);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < n; ++i)
      if (basis[j][i] != 0) lift(i, j) = m.lift_digit(basis[j][i]);
  return L0 * lift;
}

LabelVector labelling_C(const PolyVertex& x) {
  LabelVector c;
  for (const auto& v : x) c.push_back(label(v));
  return c;
}

PolyVertex labelling_D(const BuildingDescriptor& b, const LabelVector& lab) {
  if (lab.size() != b.r()) throw std::invalid_argument("label vector length mismatch");
  PolyVertex x;
  for (std::size_t i = 0; i < b.r(); ++i) {
    int n = b.factors[i].d + 1;
    x.push_back(basic_vertex(*b.factors[i].field, b.factors[i].d, ((lab[i] % n) + n) % n));
  }
  return x;
}

long distance_f(const PolyVertex& x, const PolyVertex& y) {
  long s = 0;
  for (std::size_t i = 0; i < x.size(); ++i) s += f_distance(x[i], y[i]);
  return s;
}

long undirected_distance(const PolyVertex& x, const PolyVertex& y) {
  long s = 0;
  for (std::size_t i = 0; i < x.size(); ++i) s += undirected_distance(x[i], y[i]);
  return s;
}

ApartmentPoint project_apartment(const PolyVertex& x, const std::vector<Matrix>& bases) {
  if (bases.size() != x.size()) throw std::invalid_argument("projection: basis count mismatch");
  ApartmentPoint p;
  for (std::size_t f = 0; f < x.size(); ++f) {
    Matrix u = x[f].matrix().inverse() * bases[f];
    std::vector<mpq_class> m;
    for (std::size_t j = 0; j < u.cols(); ++j) {
      long mv = kInfiniteValuation;
      for (std::size_t i = 0; i < u.rows(); ++i) mv = std::min(mv, u(i, j).valuation());
      m.emplace_back(mv);
    }
    p.basis.push_back(bases[f]);
    p.exponents.push_back(std::move(m));
  }
  return p.normalized();
}

PolyVertex act(const std::vector<Matrix>& g, const PolyVertex& x) {
  if (g.size() != x.size()) throw std::invalid_argument("group element: factor count mismatch");
  PolyVertex y;
  for (std::size_t i = 0; i < x.size(); ++i) y.push_back(act(g[i], x[i]));
  return y;
}

Matrix shift_generator(const FieldModel& k, int d) {
  Matrix f(k, d + 1, d + 1);
  f(d, 0) = k.uniformizer();
  for (int j = 1; j <= d; ++j) f(j - 1, j) = k.one();
  return f;
}

PolyVertex involution_lambda(const PolyVertex& x, const std::vector<bool>& mask) {
  if (mask.size() != x.size()) throw std::invalid_argument("involution mask length mismatch");
  PolyVertex y = x;
  for (std::size_t i = 0; i < x.size(); ++i)
    if (mask[i]) y[i] = dual(x[i]);
  return y;
}

ApartmentPoint sigma_mu(const BuildingDescriptor& b, const ApartmentPoint& p, const std::vector<int>& mu) {
  std::size_t r = b.r();
  if (mu.size() != r) throw std::invalid_argument("sigma_mu: permutation length mismatch");
  std::vector<bool> seen(r, false);
  for (int j : mu) {
    if (j < 0 || static_cast<std::size_t>(j) >= r || seen[j]) throw std::invalid_argument("sigma_mu: not a permutation");
    seen[j] = true;
  }
  ApartmentPoint out;
  for (std::size_t i = 0; i < r; ++i) {
    if (b.factors[i].d != b.factors[mu[i]].d) throw std::invalid_argument("sigma_mu: dimension mismatch");
    out.basis.push_back(Matrix::identity(*b.factors[i].field, b.factors[i].d + 1));
    out.exponents.push_back(p.exponents[mu[i]]);
  }
  return out;
}

// ---------------------------------------------------------------------------

std::vector<VertexClass> all_neighbors(const VertexClass& v) {
  std::vector<VertexClass> out;
  for (int w = 1; w < static_cast<int>(v.rank()); ++w) {
    auto nb = neighbors_by_colength(v, w);
    out.insert(out.end(), std::make_move_iterator(nb.begin()), std::make_move_iterator(nb.end()));
  }
  return out;
}

int FactorStore::find(const VertexClass& v) const {
  auto it = index.find(v);
  return it == index.end() ? -1 : it->second;
}

PolyVertex Ball::vertex(std::size_t id) const {
  PolyVertex x;
  for (std::size_t i = 0; i < stores.size(); ++i) x.push_back(stores[i].vertices[tuples[id][i]]);
  return x;
}

LabelVector Ball::label(std::size_t id) const {
  LabelVector c;
  for (std::size_t i = 0; i < stores.size(); ++i) c.push_back(stores[i].labels[tuples[id][i]]);
  return c;
}

std::uint64_t Ball::tuple_key(const std::vector<int>& t) const {
  std::uint64_t k = 0;
  for (std::size_t i = stores.size(); i-- > 0;) k = k * stores[i].vertices.size() + static_cast<std::uint64_t>(t[i]);
  return k;
}

int Ball::find_tuple(const std::vector<int>& t) const {
  for (int x : t)
    if (x < 0) return -1;
  auto it = tuple_index.find(tuple_key(t));
  return it == tuple_index.end() ? -1 : it->second;
}

int Ball::find(const PolyVertex& x) const {
  if (x.size() != stores.size()) return -1;
  std::vector<int> t;
  for (std::size_t i = 0; i < x.size(); ++i) t.push_back(stores[i].find(x[i]));
  return find_tuple(t);
}

namespace {

FactorStore grow_factor(const Factor& f, const VertexClass& center, int radius, const BallOptions& opt) {
  FactorStore s;
  s.factor = f;
  auto add = [&](const VertexClass& v, int dist) {
    int id = static_cast<int>(s.vertices.size());
    s.vertices.push_back(v);
    s.dist.push_back(dist);
    s.labels.push_back(label(v));
    s.index.emplace(v, id);
    if (s.vertices.size() > opt.max_vertices)
      throw BudgetExceeded("ball exceeds " + std::to_string(opt.max_vertices) + " vertices in one factor");
    return id;
  };
  add(center, 0);
  s.neighbors.resize(1);
  for (std::size_t head = 0; head < s.vertices.size(); ++head) {
    bool expand = s.dist[head] < radius;
    if (!expand && !opt.edges && !opt.chambers) continue;
    std::vector<int> nb;
    for (const auto& w : all_neighbors(s.vertices[head])) {
      int id = s.find(w);
      if (id < 0 && expand) id = add(w, s.dist[head] + 1);
      if (id >= 0) nb.push_back(id);
    }
    s.neighbors.resize(s.vertices.size());
    if (opt.edges || opt.chambers) s.neighbors[head] = std::move(nb);
  }
  s.neighbors.resize(s.vertices.size());
  if (opt.chambers) {
    int n = f.d + 1;
    std::vector<std::set<int>> adj(s.vertices.size());
    for (std::size_t v = 0; v < s.vertices.size(); ++v) adj[v].insert(s.neighbors[v].begin(), s.neighbors[v].end());
    std::vector<int> clique;
    std::function<void(int)> extend = [&](int last) {
      if (static_cast<int>(clique.size()) == n) {
        s.chambers.push_back(clique);
        return;
      }
      for (int c : adj[last]) {
        if (c <= last) continue;
        bool ok = true;
        for (int x : clique)
          if (!adj[x].count(c)) {
            ok = false;
            break;
          }
        if (!ok) continue;
        clique.push_back(c);
        extend(c);
        clique.pop_back();
      }
    };
    for (int v = 0; v < static_cast<int>(s.vertices.size()); ++v) {
      clique = {v};
      extend(v);
    }
  }
  return s;
}

} // namespace

Ball make_ball(const BuildingDescriptor& b, const PolyVertex& center, int radius, const BallOptions& opt) {
  if (radius < 0) throw std::invalid_argument("radius must be nonnegative");
  if (center.size() != b.r()) throw std::invalid_argument("center has the wrong number of factors");
  long cost = 0;
  for (const auto& f : b.factors)
    cost = std::max(cost, static_cast<long>(radius) * f.d * static_cast<long>(f.field->residue_size()));
  if (cost > opt.budget)
    throw BudgetExceeded("ball cost radius*d*q = " + std::to_string(cost) + " exceeds budget " +
                         std::to_string(opt.budget));
  Ball ball;
  ball.descriptor = b;
  ball.radius = radius;
  for (std::size_t i = 0; i < b.r(); ++i) {
    if (center[i].rank() != static_cast<std::size_t>(b.factors[i].d + 1) ||
        &center[i].model() != b.factors[i].field)
      throw std::invalid_argument("center component does not match its factor");
    ball.stores.push_back(grow_factor(b.factors[i], center[i], radius, opt));
  }
  // product tuples with total distance <= radius, ordered by distance then ids
  std::vector<std::pair<int, std::vector<int>>> all;
  std::vector<int> t(b.r(), 0);
  std::function<void(std::size_t, int)> rec = [&](std::size_t i, int used) {
    if (i == b.r()) {
      all.emplace_back(used, t);
      if (all.size() > opt.max_vertices) throw BudgetExceeded("ball exceeds the vertex budget");
      return;
    }
    const auto& s = ball.stores[i];
    for (int v = 0; v < static_cast<int>(s.vertices.size()); ++v) {
      if (used + s.dist[v] > radius) continue;
      t[i] = v;
      rec(i + 1, used + s.dist[v]);
    }
  };
  rec(0, 0);
  std::sort(all.begin(), all.end());
  for (auto& [d, tup] : all) {
    ball.tuple_index.emplace(ball.tuple_key(tup), static_cast<int>(ball.tuples.size()));
    ball.dist.push_back(d);
    ball.tuples.push_back(std::move(tup));
  }
  if (opt.edges) {
    for (std::size_t id = 0; id < ball.size(); ++id) {
      for (std::size_t i = 0; i < b.r(); ++i) {
        const auto& s = ball.stores[i];
        int from = ball.tuples[id][i];
        int n = b.factors[i].d + 1;
        for (int nb : s.neighbors[from]) {
          auto u = ball.tuples[id];
          u[i] = nb;
          int other = ball.find_tuple(u);
          if (other <= static_cast<int>(id)) continue;
          bool fwd = s.labels[nb] == (s.labels[from] + 1) % n;
          bool rev = s.labels[from] == (s.labels[nb] + 1) % n;
          ball.edges.push_back({static_cast<int>(id), other, static_cast<int>(i), fwd, rev});
        }
      }
    }
  }
  if (opt.chambers) {
    std::vector<std::size_t> idx(b.r(), 0);
    std::vector<std::vector<int>> span_max(b.r());
    for (std::size_t i = 0; i < b.r(); ++i)
      for (const auto& c : ball.stores[i].chambers) {
        int m = 0;
        for (int v : c) m = std::max(m, ball.stores[i].dist[v]);
        span_max[i].push_back(m);
      }
    std::function<void(std::size_t, int)> combo = [&](std::size_t i, int used) {
      if (i == b.r()) {
        std::vector<std::vector<int>> parts;
        for (std::size_t f = 0; f < b.r(); ++f) parts.push_back(ball.stores[f].chambers[idx[f]]);
        std::vector<int> ids;
        std::vector<int> tup(b.r());
        std::function<void(std::size_t)> prod = [&](std::size_t f) {
          if (f == b.r()) {
            ids.push_back(ball.find_tuple(tup));
            return;
          }
          for (int v : parts[f]) {
            tup[f] = v;
            prod(f + 1);
          }
        };
        prod(0);
        std::sort(ids.begin(), ids.end());
        ball.chambers.push_back(std::move(ids));
        return;
      }
      for (std::size_t c = 0; c < ball.stores[i].chambers.size(); ++c) {
        if (used + span_max[i][c] > radius) continue;
        idx[i] = c;
        combo(i + 1, used + span_max[i][c]);
      }
    };
    combo(0, 0);
    std::sort(ball.chambers.begin(), ball.chambers.end());
  }
  return ball;
}

} // namespace bt
