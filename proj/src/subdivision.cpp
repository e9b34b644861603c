#include "bt/subdivision.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <set>

namespace bt {

std::vector<std::vector<long>> AlcoveChart::vertices() const {
  std::vector<std::vector<long>> out;
  for (int j = 0; j <= d; ++j) {
    std::vector<long> x(d + 1, 0);
    for (int k = 0; k <= d; ++k) {
      long y = k >= d + 1 - j ? 1 : 0;
      x[sigma[k]] = y - a[k];
    }
    out.push_back(std::move(x));
  }
  return out;
}

bool AlcoveChart::contains(const std::vector<mpq_class>& x) const {
  std::vector<mpq_class> y(d + 1);
  for (int k = 0; k <= d; ++k) y[k] = x[sigma[k]] + a[k];
  for (int k = 0; k < d; ++k)
    if (y[k] > y[k + 1]) return false;
  return y[d] <= y[0] + 1;
}

bool in_eta(const std::vector<mpq_class>& x, int N) {
  for (std::size_t k = 0; k + 1 < x.size(); ++k)
    if (x[k] > x[k + 1]) return false;
  return x.back() <= x.front() + N;
}

std::vector<AlcoveChart> eta_chambers(int d, int N) {
  if (d < 1 || N < 1) throw std::invalid_argument("eta_chambers needs d >= 1 and N >= 1");
  if (d > kMaxEtaDimension || N > kMaxEtaDilation)
    throw BudgetExceeded("eta_chambers limited to d <= " + std::to_string(kMaxEtaDimension) +
                         " and N <= " + std::to_string(kMaxEtaDilation));
  std::vector<AlcoveChart> out;
  std::vector<int> rest(d);
  std::iota(rest.begin(), rest.end(), 1);
  long w = N + 1;
  do {
    AlcoveChart c;
    c.d = d;
    c.sigma = {0};
    c.sigma.insert(c.sigma.end(), rest.begin(), rest.end());
    c.a.assign(d + 1, -w);
    c.a[0] = 0;
    for (;;) {
      bool inside = true;
      for (const auto& v : c.vertices()) {
        std::vector<mpq_class> q(v.begin(), v.end());
        if (!in_eta(q, N)) {
          inside = false;
          break;
        }
      }
      if (inside) out.push_back(c);
      int k = d;
      while (k >= 1 && c.a[k] == w) c.a[k--] = -w;
      if (k < 1) break;
      ++c.a[k];
    }
  } while (std::next_permutation(rest.begin(), rest.end()));
  std::sort(out.begin(), out.end());
  return out;
}

ChamberChart chamber_chart(const FactorStore& store, const std::vector<int>& chamber) {
  std::vector<VertexClass> classes;
  for (int id : chamber) classes.push_back(store.vertices[id]);
  auto chain = simplex_chain(classes);
  if (!chain || chain->size() != static_cast<std::size_t>(store.factor.d + 1))
    throw std::invalid_argument("chamber without an apartment chart");
  ChamberChart c;
  c.basis = adapted_basis(*chain);
  for (const auto& rep : *chain) c.order.push_back(store.find(VertexClass::from_basis(rep)));
  return c;
}

namespace {

using Weights = std::vector<std::pair<int, mpq_class>>;

// barycentric weights on the chain of a chart for integral lattice exponents b in eta_M
Weights weights_of(const std::vector<long>& b_in, int M, const std::vector<int>& order) {
  int d = static_cast<int>(b_in.size()) - 1;
  std::vector<long> b = b_in;
  for (auto& x : b) x -= b_in[0];
  Weights w;
  auto push = [&](int j, long num) {
    if (num != 0) w.emplace_back(order[j], mpq_class(num, M));
  };
  push(0, M - b[d]);
  for (int j = 1; j <= d; ++j) push(j, b[d + 1 - j] - b[d - j]);
  for (auto& p : w) p.second.canonicalize();
  std::sort(w.begin(), w.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
  return w;
}

std::vector<int> factor_part(const Ball& ball, const std::vector<int>& ids, std::size_t f) {
  std::set<int> s;
  for (int id : ids) s.insert(ball.tuples[id][f]);
  return {s.begin(), s.end()};
}

} // namespace

SubdividedComplex subdivide_ball(const Ball& ball, const Marking& marking, const std::vector<int>& chamber_ids) {
  std::size_t r = ball.stores.size();
  if (marking.m.size() != r) throw std::invalid_argument("marking must give one number per factor");
  for (int x : marking.m)
    if (x < 1) throw std::invalid_argument("marking numbers must be positive");
  SubdividedComplex out;
  out.marking = marking;

  std::vector<int> chosen = chamber_ids;
  if (chosen.empty()) {
    chosen.resize(ball.chambers.size());
    std::iota(chosen.begin(), chosen.end(), 0);
  }
  // per factor: sub-points and sub-cells of every factor chamber used
  struct FactorSub {
    std::map<Weights, int> index;
    std::vector<Weights> points;
    std::vector<std::vector<mpq_class>> coords;
    std::map<std::vector<int>, std::vector<std::vector<int>>> cells;
  };
  std::vector<FactorSub> fs(r);
  std::vector<std::vector<std::vector<int>>> parts(chosen.size());
  for (std::size_t c = 0; c < chosen.size(); ++c) {
    if (chosen[c] < 0 || static_cast<std::size_t>(chosen[c]) >= ball.chambers.size())
      throw std::out_of_range("chamber id out of range");
    for (std::size_t f = 0; f < r; ++f) {
      auto part = factor_part(ball, ball.chambers[chosen[c]], f);
      parts[c].push_back(part);
      auto& sub = fs[f];
      if (sub.cells.count(part)) continue;
      int M = marking.m[f];
      int d = ball.stores[f].factor.d;
      auto chart = chamber_chart(ball.stores[f], part);
      std::vector<std::vector<int>> cells;
      for (const auto& alc : eta_chambers(d, M)) {
        std::vector<int> cell;
        for (const auto& b : alc.vertices()) {
          Weights w = weights_of(b, M, chart.order);
          auto it = sub.index.find(w);
          if (it == sub.index.end()) {
            it = sub.index.emplace(w, static_cast<int>(sub.points.size())).first;
            sub.points.push_back(w);
            std::vector<mpq_class> x;
            for (long bj : b) x.emplace_back(mpq_class(-(bj - b[0]), M));
            for (auto& q : x) q.canonicalize();
            sub.coords.push_back(std::move(x));
          }
          cell.push_back(it->second);
        }
        std::sort(cell.begin(), cell.end());
        cells.push_back(std::move(cell));
      }
      sub.cells.emplace(part, std::move(cells));
    }
  }
  // product cells
  std::map<std::vector<int>, int> pindex;
  std::set<std::tuple<int, int, int>> edges;
  std::set<std::vector<int>> cellset;
  for (std::size_t c = 0; c < chosen.size(); ++c) {
    std::vector<const std::vector<std::vector<int>>*> fcells;
    for (std::size_t f = 0; f < r; ++f) fcells.push_back(&fs[f].cells.at(parts[c][f]));
    std::vector<std::size_t> pick(r, 0);
    for (bool more = true; more;) {
      std::vector<std::vector<int>> tuples{{}};
      for (std::size_t f = 0; f < r; ++f) {
        std::vector<std::vector<int>> next;
        for (const auto& t : tuples)
          for (int p : (*fcells[f])[pick[f]]) {
            auto u = t;
            u.push_back(p);
            next.push_back(std::move(u));
          }
        tuples = std::move(next);
      }
      std::vector<int> cell;
      for (const auto& t : tuples) {
        auto it = pindex.find(t);
        if (it == pindex.end()) {
          it = pindex.emplace(t, static_cast<int>(out.points.size())).first;
          SubPoint sp;
          for (std::size_t f = 0; f < r; ++f) {
            sp.weights.push_back(fs[f].points[t[f]]);
            sp.coords.push_back(fs[f].coords[t[f]]);
          }
          out.points.push_back(std::move(sp));
        }
        cell.push_back(it->second);
      }
      for (std::size_t a = 0; a < tuples.size(); ++a)
        for (std::size_t b = a + 1; b < tuples.size(); ++b) {
          int diff = -1, count = 0;
          for (std::size_t f = 0; f < r; ++f)
            if (tuples[a][f] != tuples[b][f]) {
              diff = static_cast<int>(f);
              ++count;
            }
          if (count != 1) continue;
          int x = cell[a], y = cell[b];
          edges.emplace(std::min(x, y), std::max(x, y), diff);
        }
      std::sort(cell.begin(), cell.end());
      cellset.insert(std::move(cell));
      more = false;
      for (std::size_t f = r; f-- > 0;) {
        if (++pick[f] < fcells[f]->size()) {
          more = true;
          break;
        }
        pick[f] = 0;
      }
    }
  }
  out.cells.assign(cellset.begin(), cellset.end());
  for (const auto& [a, b, f] : edges) out.edges.push_back({a, b, f});
  return out;
}

VertexClass nu_embed(const VertexClass& v, const ExtensionDescriptor& ext) {
  if (&v.model() != &ext.base()) throw std::invalid_argument("nu: vertex is not over the base field");
  const Matrix& B = v.matrix();
  Matrix E(ext.field(), B.rows(), B.cols());
  for (std::size_t i = 0; i < B.rows(); ++i)
    for (std::size_t j = 0; j < B.cols(); ++j) E(i, j) = ext.embed(B(i, j));
  return VertexClass::from_basis(E);
}

PolyVertex nu_embed(const PolyVertex& v, const ExtensionDescriptor& ext) {
  PolyVertex out;
  for (const auto& x : v) out.push_back(nu_embed(x, ext));
  return out;
}

ApartmentPoint delta_restrict(const ApartmentPoint& p, const ExtensionDescriptor& ext) {
  ApartmentPoint out;
  for (std::size_t f = 0; f < p.basis.size(); ++f) {
    const Matrix& B = p.basis[f];
    if (&B.model() != &ext.field()) throw std::invalid_argument("delta: point is not over the extension field");
    Matrix R(ext.base(), B.rows(), B.cols());
    for (std::size_t i = 0; i < B.rows(); ++i)
      for (std::size_t j = 0; j < B.cols(); ++j) {
        auto x = ext.restrict(B(i, j));
        if (!x) throw std::domain_error("delta: basis is not defined over the base field");
        R(i, j) = *x;
      }
    out.basis.push_back(std::move(R));
    std::vector<mpq_class> e;
    for (const auto& x : p.exponents[f]) {
      mpq_class y = x / ext.ramification();
      y.canonicalize();
      e.push_back(y);
    }
    out.exponents.push_back(std::move(e));
  }
  return out;
}

InducedReport verify_induced_structure(const Ball& ball, const ExtensionDescriptor& ext) {
  InducedReport rep;
  int e = ext.ramification();
  auto fail = [&](const std::string& why) {
    if (rep.pass) rep.counterexample = why;
    rep.pass = false;
  };
  for (std::size_t f = 0; f < ball.stores.size() && rep.pass; ++f) {
    const auto& store = ball.stores[f];
    if (store.factor.field != &ext.base()) throw std::invalid_argument("ball is not over the base field");
    int d = store.factor.d;
    std::map<Weights, VertexClass> image;
    std::map<std::vector<std::uint32_t>, Weights> preimage;
    auto charts = eta_chambers(d, e);
    for (const auto& chamber : store.chambers) {
      auto chart = chamber_chart(store, chamber);
      Matrix E(ext.field(), chart.basis.rows(), chart.basis.cols());
      for (std::size_t i = 0; i < E.rows(); ++i)
        for (std::size_t j = 0; j < E.cols(); ++j) E(i, j) = ext.embed(chart.basis(i, j));
      ++rep.chambers_checked;
      for (const auto& alc : charts) {
        std::vector<VertexClass> verts;
        for (const auto& b : alc.vertices()) {
          VertexClass v = VertexClass::from_basis(E * Matrix::pi_diagonal(ext.field(), b));
          Weights w = weights_of(b, e, chart.order);
          auto it = image.find(w);
          if (it == image.end()) {
            image.emplace(w, v);
            auto [pit, fresh] = preimage.emplace(v.key(), w);
            if (!fresh && pit->second != w) fail("two subdivided points map to one vertex in factor " + std::to_string(f));
            ++rep.points_mapped;
          } else if (!(it->second == v)) {
            fail("a subdivided point has two images in factor " + std::to_string(f));
          }
          if (w.size() == 1 && !(v == nu_embed(store.vertices[w[0].first], ext)))
            fail("an original vertex is not sent to its nu-image in factor " + std::to_string(f));
          verts.push_back(std::move(v));
        }
        ++rep.subchambers_checked;
        auto chain = simplex_chain(verts);
        if (!chain || chain->size() != static_cast<std::size_t>(d + 1)) {
          fail("sub-chamber of chamber " + std::to_string(rep.chambers_checked - 1) + " in factor " +
               std::to_string(f) + " is not a chamber of the extension building");
        }
      }
    }
  }
  return rep;
}

} // namespace bt
