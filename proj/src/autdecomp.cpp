#include "bt/autdecomp.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <sstream>

namespace bt {

ProductGraph::ProductGraph(std::vector<int> sizes) : sizes_(std::move(sizes)) {
  if (sizes_.empty()) throw std::invalid_argument("product graph needs at least one factor");
  for (int a : sizes_) {
    if (a < 2) throw std::invalid_argument("product graph factor sizes must be at least 2");
    total_ *= static_cast<std::size_t>(a);
  }
}

std::vector<int> ProductGraph::tuple(std::size_t id) const {
  std::vector<int> t(sizes_.size());
  for (std::size_t i = 0; i < sizes_.size(); ++i) {
    t[i] = static_cast<int>(id % sizes_[i]);
    id /= sizes_[i];
  }
  return t;
}

std::size_t ProductGraph::index(const std::vector<int>& t) const {
  std::size_t id = 0;
  for (std::size_t i = sizes_.size(); i-- > 0;) {
    int x = ((t[i] % sizes_[i]) + sizes_[i]) % sizes_[i];
    id = id * sizes_[i] + x;
  }
  return id;
}

bool ProductGraph::adjacent(std::size_t a, std::size_t b) const {
  int diff = 0;
  for (int s : sizes_) {
    if (a % s != b % s) ++diff;
    a /= s;
    b /= s;
  }
  return diff == 1;
}

namespace {

std::string tuple_text(const ProductGraph& g, std::size_t id) {
  std::ostringstream os;
  auto t = g.tuple(id);
  os << "(";
  for (std::size_t i = 0; i < t.size(); ++i) os << (i ? "," : "") << t[i];
  os << ")";
  return os.str();
}

} // namespace

HomDecomposition decompose_hom(const ProductGraph& src, const ProductGraph& dst, const std::vector<std::size_t>& f) {
  using Kind = DecompositionError::Kind;
  if (f.size() != src.size()) throw std::invalid_argument("vertex map size does not match the source graph");
  std::vector<std::size_t> preimage(dst.size(), SIZE_MAX);
  for (std::size_t u = 0; u < f.size(); ++u) {
    if (f[u] >= dst.size()) throw std::invalid_argument("vertex map leaves the target graph");
    if (preimage[f[u]] != SIZE_MAX)
      throw DecompositionError(Kind::NotInjective, preimage[f[u]], u,
                               "not injective: " + tuple_text(src, preimage[f[u]]) + " and " + tuple_text(src, u) + " share an image");
    preimage[f[u]] = u;
  }
  for (std::size_t u = 0; u < src.size(); ++u) {
    auto t = src.tuple(u);
    for (std::size_t i = 0; i < t.size(); ++i)
      for (int c = t[i] + 1; c < src.sizes()[i]; ++c) {
        auto s = t;
        s[i] = c;
        std::size_t v = src.index(s);
        if (!dst.adjacent(f[u], f[v]))
          throw DecompositionError(Kind::NotHomomorphism, u, v,
                                   "not edge-preserving: edge " + tuple_text(src, u) + " -- " + tuple_text(src, v));
      }
  }

  std::size_t n = src.factors(), m = dst.factors();
  auto y0 = dst.tuple(f[0]);
  HomDecomposition h;
  h.mu.assign(n, -1);
  h.g.resize(n);
  std::vector<int> owner(m, -1);
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<int> e(n, 0);
    h.g[i].assign(src.sizes()[i], 0);
    for (int t = 1; t < src.sizes()[i]; ++t) {
      e[i] = t;
      std::size_t u = src.index(e);
      auto y = dst.tuple(f[u]);
      int j = -1;
      for (std::size_t k = 0; k < m; ++k)
        if (y[k] != y0[k]) j = static_cast<int>(k);
      if (h.mu[i] == -1) h.mu[i] = j;
      if (h.mu[i] != j)
        throw DecompositionError(Kind::NoDecomposition, 0, u, "no product decomposition: factor directions mix at " + tuple_text(src, u));
      h.g[i][t] = y[j];
    }
    h.g[i][0] = y0[h.mu[i]];
    if (owner[h.mu[i]] != -1) {
      std::vector<int> both(n, 0);
      both[i] = 1;
      both[owner[h.mu[i]]] = 1;
      throw DecompositionError(Kind::NoDecomposition, 0, src.index(both),
                               "no product decomposition: two factors collapse onto one target direction");
    }
    owner[h.mu[i]] = static_cast<int>(i);
  }
  h.alpha.assign(m, -1);
  for (std::size_t j = 0; j < m; ++j)
    if (owner[j] == -1) h.alpha[j] = y0[j];

  auto rebuilt = reconstruct(src, dst, h);
  for (std::size_t u = 0; u < src.size(); ++u)
    if (rebuilt[u] != f[u])
      throw DecompositionError(Kind::NoDecomposition, u, u, "no product decomposition: reconstruction differs at " + tuple_text(src, u));
  return h;
}

std::vector<std::size_t> reconstruct(const ProductGraph& src, const ProductGraph& dst, const HomDecomposition& h) {
  std::vector<std::size_t> out(src.size());
  std::vector<int> y(dst.factors());
  for (std::size_t u = 0; u < src.size(); ++u) {
    auto t = src.tuple(u);
    for (std::size_t j = 0; j < y.size(); ++j) y[j] = h.alpha[j];
    for (std::size_t i = 0; i < t.size(); ++i) y[h.mu[i]] = h.g[i][t[i]];
    out[u] = dst.index(y);
  }
  return out;
}

namespace {

// Backtracking over bijections that preserve adjacency and non-adjacency.
// Vertices below `fixed` map to themselves; `visit` returns false to stop.
class AutSearch {
public:
  explicit AutSearch(const ProductGraph& g) : g_(g), n_(g.size()), adj_(n_ * n_) {
    for (std::size_t a = 0; a < n_; ++a)
      for (std::size_t b = 0; b < n_; ++b) adj_[a * n_ + b] = g.adjacent(a, b);
  }

  bool run(std::size_t fixed, const std::function<bool(const std::vector<std::size_t>&)>& visit) {
    img_.assign(n_, 0);
    used_.assign(n_, false);
    for (std::size_t k = 0; k < fixed; ++k) {
      img_[k] = k;
      used_[k] = true;
    }
    visit_ = &visit;
    return extend(fixed);
  }

  /// Whether an automorphism fixes 0..k-1 and sends k to w.
  bool exists(std::size_t k, std::size_t w) {
    img_.assign(n_, 0);
    used_.assign(n_, false);
    for (std::size_t i = 0; i < k; ++i) {
      img_[i] = i;
      used_[i] = true;
    }
    if (used_[w] || !consistent(k, w)) return false;
    img_[k] = w;
    used_[w] = true;
    bool found = false;
    std::function<bool(const std::vector<std::size_t>&)> stop = [&](const std::vector<std::size_t>&) {
      found = true;
      return false;
    };
    visit_ = &stop;
    extend(k + 1);
    return found;
  }

private:
  bool consistent(std::size_t k, std::size_t w) const {
    for (std::size_t i = 0; i < k; ++i)
      if (adj_[i * n_ + k] != adj_[img_[i] * n_ + w]) return false;
    return true;
  }

  // returns false once the visitor asks to stop
  bool extend(std::size_t k) {
    if (k == n_) return (*visit_)(img_);
    for (std::size_t w = 0; w < n_; ++w) {
      if (used_[w] || !consistent(k, w)) continue;
      img_[k] = w;
      used_[w] = true;
      bool go = extend(k + 1);
      used_[w] = false;
      if (!go) return false;
    }
    return true;
  }

  const ProductGraph& g_;
  std::size_t n_;
  std::vector<char> adj_;
  std::vector<std::size_t> img_;
  std::vector<char> used_;
  const std::function<bool(const std::vector<std::size_t>&)>* visit_ = nullptr;
};

} // namespace

std::vector<std::vector<std::size_t>> enumerate_automorphisms(const ProductGraph& g, std::size_t limit) {
  std::vector<std::vector<std::size_t>> out;
  AutSearch search(g);
  bool over = false;
  search.run(0, [&](const std::vector<std::size_t>& f) {
    if (out.size() == limit) {
      over = true;
      return false;
    }
    out.push_back(f);
    return true;
  });
  if (over) throw BudgetExceeded("more than " + std::to_string(limit) + " automorphisms");
  return out;
}

std::uint64_t count_automorphisms(const ProductGraph& g) {
  AutSearch search(g);
  std::uint64_t total = 1;
  for (std::size_t k = 0; k < g.size(); ++k) {
    std::uint64_t orbit = 0;
    for (std::size_t w = k; w < g.size(); ++w)
      if (search.exists(k, w)) ++orbit;
    total *= orbit;
  }
  return total;
}

std::uint64_t automorphism_formula(const std::vector<int>& sizes) {
  std::uint64_t total = 1;
  std::map<int, int> multiplicity;
  for (int a : sizes) {
    for (int k = 2; k <= a; ++k) total *= k;
    ++multiplicity[a];
  }
  for (auto [a, m] : multiplicity)
    for (int k = 2; k <= m; ++k) total *= k;
  return total;
}

std::vector<std::size_t> random_automorphism(const ProductGraph& g, Rng& rng) {
  std::size_t n = g.factors();
  std::map<int, std::vector<int>> classes;
  for (std::size_t i = 0; i < n; ++i) classes[g.sizes()[i]].push_back(static_cast<int>(i));
  std::vector<int> mu(n);
  for (auto& [a, members] : classes) {
    auto shuffled = members;
    for (std::size_t k = shuffled.size(); k > 1; --k) std::swap(shuffled[k - 1], shuffled[rng.below(k)]);
    for (std::size_t k = 0; k < members.size(); ++k) mu[members[k]] = shuffled[k];
  }
  std::vector<std::vector<int>> p(n);
  for (std::size_t i = 0; i < n; ++i) {
    p[i].resize(g.sizes()[i]);
    for (int t = 0; t < g.sizes()[i]; ++t) p[i][t] = t;
    for (std::size_t k = p[i].size(); k > 1; --k) std::swap(p[i][k - 1], p[i][rng.below(k)]);
  }
  std::vector<std::size_t> f(g.size());
  std::vector<int> y(n);
  for (std::size_t u = 0; u < g.size(); ++u) {
    auto t = g.tuple(u);
    for (std::size_t i = 0; i < n; ++i) y[mu[i]] = p[i][t[i]];
    f[u] = g.index(y);
  }
  return f;
}

// ---------------------------------------------------------------------------
// words

AutGenerator AutGenerator::group(std::vector<Matrix> m) {
  AutGenerator g;
  g.kind = Kind::Group;
  g.matrices = std::move(m);
  return g;
}

AutGenerator AutGenerator::lambda(std::vector<bool> mask) {
  AutGenerator g;
  g.kind = Kind::Lambda;
  g.mask = std::move(mask);
  return g;
}

AutGenerator AutGenerator::exchange(std::vector<int> mu) {
  AutGenerator g;
  g.kind = Kind::Exchange;
  g.mu = std::move(mu);
  return g;
}

AutGenerator AutGenerator::shift(int factor, long power) {
  AutGenerator g;
  g.kind = Kind::Shift;
  g.factor = factor;
  g.power = power;
  return g;
}

namespace {

Matrix matrix_power(const Matrix& a, long n) {
  Matrix base = n < 0 ? a.inverse() : a;
  unsigned long e = n < 0 ? static_cast<unsigned long>(-n) : static_cast<unsigned long>(n);
  Matrix r = Matrix::identity(a.model(), a.rows());
  while (e) {
    if (e & 1) r = r * base;
    base = base * base;
    e >>= 1;
  }
  return r;
}

Matrix shift_power(const Factor& f, long n) { return matrix_power(shift_generator(*f.field, f.d), n); }

} // namespace

void check_word(const BuildingDescriptor& b, const AutWord& w) {
  std::size_t r = b.r();
  for (const auto& h : w) {
    switch (h.kind) {
    case AutGenerator::Kind::Group:
      if (h.matrices.size() != r) throw std::invalid_argument("group element needs one matrix per factor");
      for (std::size_t i = 0; i < r; ++i) {
        const auto& m = h.matrices[i];
        std::size_t n = b.factors[i].d + 1;
        if (m.model_ptr() != b.factors[i].field || m.rows() != n || m.cols() != n)
          throw std::invalid_argument("group element matrix does not match factor " + std::to_string(i));
        if (m.rank() != n) throw std::invalid_argument("group element matrix is singular");
      }
      break;
    case AutGenerator::Kind::Lambda:
      if (h.mask.size() != r) throw std::invalid_argument("lambda mask needs one entry per factor");
      break;
    case AutGenerator::Kind::Exchange: {
      if (h.mu.size() != r) throw std::invalid_argument("exchange needs one index per factor");
      std::vector<bool> seen(r, false);
      for (std::size_t i = 0; i < r; ++i) {
        int j = h.mu[i];
        if (j < 0 || static_cast<std::size_t>(j) >= r || seen[j]) throw std::invalid_argument("exchange is not a permutation");
        seen[j] = true;
        if (b.factors[i].field != b.factors[j].field || b.factors[i].d != b.factors[j].d)
          throw std::invalid_argument("exchange between factors with different fields or dimensions");
      }
      break;
    }
    case AutGenerator::Kind::Shift:
      if (h.factor < 0 || static_cast<std::size_t>(h.factor) >= r) throw std::invalid_argument("shift factor out of range");
      break;
    }
  }
}

PolyVertex apply_word(const BuildingDescriptor& b, const AutWord& w, const PolyVertex& x) {
  PolyVertex y = x;
  for (auto it = w.rbegin(); it != w.rend(); ++it) {
    const auto& h = *it;
    switch (h.kind) {
    case AutGenerator::Kind::Group:
      y = act(h.matrices, y);
      break;
    case AutGenerator::Kind::Lambda:
      y = involution_lambda(y, h.mask);
      break;
    case AutGenerator::Kind::Exchange: {
      PolyVertex z(y.size());
      for (std::size_t i = 0; i < y.size(); ++i) z[i] = y[h.mu[i]];
      y = std::move(z);
      break;
    }
    case AutGenerator::Kind::Shift:
      y[h.factor] = act(shift_power(b.factors[h.factor], h.power), y[h.factor]);
      break;
    }
  }
  return y;
}

const char* to_string(LabelMotion m) {
  switch (m) {
  case LabelMotion::Rotation: return "rotation";
  case LabelMotion::Reflection: return "reflection";
  case LabelMotion::Both: return "rotation+reflection";
  }
  return "?";
}

namespace {

int mod(long a, int n) { return static_cast<int>(((a % n) + n) % n); }

ProductGraph label_graph(const BuildingDescriptor& b) {
  std::vector<int> sizes;
  for (const auto& f : b.factors) sizes.push_back(f.d + 1);
  return ProductGraph(sizes);
}

int required_radius(const Ball& ball, const std::vector<PolyVertex>& points) {
  PolyVertex center = ball.vertex(0);
  long r = 0;
  for (const auto& p : points) r = std::max(r, undirected_distance(center, p));
  return static_cast<int>(r);
}

} // namespace

LabelAction label_action(const AutWord& w, const Ball& ball) {
  const auto& b = ball.descriptor;
  check_word(b, w);
  ProductGraph graph = label_graph(b);
  std::size_t r = b.r();

  std::vector<PolyVertex> delta, image;
  std::vector<std::size_t> f(graph.size());
  bool escaped = false;
  for (std::size_t u = 0; u < graph.size(); ++u) {
    auto x = labelling_D(b, graph.tuple(u));
    auto y = apply_word(b, w, x);
    if (ball.find(x) < 0 || ball.find(y) < 0) escaped = true;
    f[u] = graph.index(labelling_C(y));
    delta.push_back(std::move(x));
    image.push_back(std::move(y));
  }
  if (escaped) {
    auto all = delta;
    all.insert(all.end(), image.begin(), image.end());
    int need = required_radius(ball, all);
    throw WindowTooSmall("image of the basic chamber leaves the ball; radius " + std::to_string(need) + " required", need);
  }

  HomDecomposition h = decompose_hom(graph, graph, f);
  LabelAction out;
  out.mu.assign(r, 0);
  out.p.resize(r);
  out.motion.resize(r);
  out.offset.assign(r, 0);
  for (std::size_t j = 0; j < r; ++j) {
    std::size_t i = h.mu[j];
    out.mu[i] = static_cast<int>(j);
    out.p[i] = h.g[j];
  }

  for (std::size_t i = 0; i < r; ++i) {
    int n = b.factors[i].d + 1;
    const auto& p = out.p[i];
    bool up = true, down = true;
    for (int t = 0; t < n; ++t) {
      int step = mod(p[(t + 1) % n] - p[t], n);
      up = up && step == 1;
      down = down && step == n - 1;
    }
    if (!up && !down) throw std::logic_error("label permutation of factor " + std::to_string(i) + " is neither a rotation nor a reflection");
    out.motion[i] = up && down ? LabelMotion::Both : (up ? LabelMotion::Rotation : LabelMotion::Reflection);
    out.offset[i] = mod(p[0], n);

    // neighbor-count signature: colength-one neighbors of a source vertex
    // land at a single label offset whose Gaussian count matches
    std::size_t j = out.mu[i];
    const auto& src = b.factors[j];
    std::uint64_t q = src.field->residue_size();
    for (int t = 0; t <= src.d; ++t) {
      LabelVector lv(r, 0);
      lv[j] = t;
      auto x = labelling_D(b, lv);
      auto y = apply_word(b, w, x);
      int base = labelling_C(y)[i];
      int offset = -1;
      std::uint64_t count = 0;
      for (const auto& nb : neighbors_by_colength(x[j], 1)) {
        auto x2 = x;
        x2[j] = nb;
        int o = mod(labelling_C(apply_word(b, w, x2))[i] - base, n);
        if (offset == -1) offset = o;
        if (o != offset) throw std::logic_error("neighbor labels of one vertex land at different offsets");
        ++count;
      }
      if (count != gaussian_binomial(n, offset, q))
        throw std::logic_error("neighbor count does not match the Gaussian binomial of its label offset");
      bool sig_up = offset == 1, sig_down = offset == n - 1;
      if (sig_up != up || sig_down != down)
        throw std::logic_error("label permutation and neighbor-count signature disagree in factor " + std::to_string(i));
    }
  }

  for (std::size_t id = 0; id < ball.size(); ++id) {
    auto x = ball.vertex(id);
    auto lhs = labelling_C(apply_word(b, w, x));
    auto rhs = labelling_C(apply_word(b, w, labelling_D(b, labelling_C(x))));
    if (lhs != rhs) out.labels_factor = false;
    ++out.vertices_checked;
  }
  return out;
}

bool in_standard_apartment(const VertexClass& v) {
  const auto& m = v.matrix();
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      if (i != j && !m(i, j).is_zero()) return false;
  return true;
}

NormalForm normal_form(const AutWord& w, const Ball& ball) {
  const auto& b = ball.descriptor;
  LabelAction la = label_action(w, ball);
  std::size_t r = b.r();

  // frame of each factor: phi([D]) in factor i is [P_i D^{eps_i}] with D
  // taken from factor src_i, for D diagonal
  std::vector<Matrix> P;
  std::vector<int> eps(r, 1), src(r);
  for (std::size_t i = 0; i < r; ++i) {
    P.push_back(Matrix::identity(*b.factors[i].field, b.factors[i].d + 1));
    src[i] = static_cast<int>(i);
  }
  for (auto it = w.rbegin(); it != w.rend(); ++it) {
    const auto& h = *it;
    switch (h.kind) {
    case AutGenerator::Kind::Group:
      for (std::size_t i = 0; i < r; ++i) P[i] = h.matrices[i] * P[i];
      break;
    case AutGenerator::Kind::Lambda:
      for (std::size_t i = 0; i < r; ++i)
        if (h.mask[i]) {
          P[i] = P[i].inverse().transpose();
          eps[i] = -eps[i];
        }
      break;
    case AutGenerator::Kind::Exchange: {
      auto P2 = P;
      auto e2 = eps;
      auto s2 = src;
      for (std::size_t i = 0; i < r; ++i) {
        P2[i] = P[h.mu[i]];
        e2[i] = eps[h.mu[i]];
        s2[i] = src[h.mu[i]];
      }
      P = std::move(P2);
      eps = std::move(e2);
      src = std::move(s2);
      break;
    }
    case AutGenerator::Kind::Shift:
      P[h.factor] = shift_power(b.factors[h.factor], h.power) * P[h.factor];
      break;
    }
  }

  NormalForm out;
  out.mu = src;
  out.r.assign(r, false);
  out.shift_powers.assign(r, 0);
  for (std::size_t i = 0; i < r; ++i) {
    out.g.push_back(P[i].inverse());
    out.r[i] = eps[i] == -1;
    if (la.mu[i] != src[i])
      out.violations.push_back("factor " + std::to_string(i) + ": label action permutes from factor " + std::to_string(la.mu[i]) +
                               ", frame from factor " + std::to_string(src[i]));
    if (la.motion[i] != LabelMotion::Both && (la.motion[i] == LabelMotion::Reflection) != out.r[i])
      out.violations.push_back("factor " + std::to_string(i) + ": label motion disagrees with the frame orientation");
    long a = out.r[i] ? 0 : la.offset[i];
    out.shift_powers[i] = -a;
    out.restoring.push_back(shift_power(b.factors[i], a) * out.g[i]);
  }

  for (std::size_t id = 0; id < ball.size(); ++id) {
    auto x = ball.vertex(id);
    if (!in_standard_apartment(x)) continue;
    ++out.apartment_vertices_checked;
    auto y = involution_lambda(act(out.g, apply_word(b, w, x)), out.r);
    for (std::size_t i = 0; i < r; ++i)
      if (!(y[i] == x[src[i]])) {
        out.violations.push_back("vertex " + std::to_string(id) + " factor " + std::to_string(i) + " is not sent to factor " +
                                 std::to_string(src[i]) + " of the argument");
        break;
      }
  }
  out.verified = out.violations.empty();
  return out;
}

} // namespace bt

namespace bt {

bool in_standard_apartment(const PolyVertex& x) {
  return std::all_of(x.begin(), x.end(), [](const VertexClass& v) { return in_standard_apartment(v); });
}

GalleryReport gallery_labels(const Ball& ball) {
  const auto& b = ball.descriptor;
  std::size_t r = b.r();
  GalleryReport rep;
  std::size_t nc = ball.chambers.size();

  // per chamber and factor: sorted store ids of the factor simplex
  std::vector<std::vector<std::vector<int>>> parts(nc, std::vector<std::vector<int>>(r));
  for (std::size_t c = 0; c < nc; ++c) {
    for (int id : ball.chambers[c])
      for (std::size_t f = 0; f < r; ++f) parts[c][f].push_back(ball.tuples[id][f]);
    for (auto& p : parts[c]) {
      std::sort(p.begin(), p.end());
      p.erase(std::unique(p.begin(), p.end()), p.end());
    }
  }

  // panels: one factor simplex missing one vertex
  std::map<std::vector<int>, std::vector<std::pair<std::size_t, int>>> panels;
  auto panel_key = [&](std::size_t c, std::size_t f, int drop) {
    std::vector<int> key{static_cast<int>(f)};
    for (std::size_t g = 0; g < r; ++g) {
      for (int v : parts[c][g])
        if (!(g == f && v == drop)) key.push_back(v);
      key.push_back(-1);
    }
    return key;
  };
  for (std::size_t c = 0; c < nc; ++c)
    for (std::size_t f = 0; f < r; ++f)
      for (int v : parts[c][f]) panels[panel_key(c, f, v)].push_back({c, v});

  PolyFace delta = basic_chamber(b);
  std::vector<int> delta_ids;
  for (const auto& x : delta.vertices) {
    int id = ball.find(x);
    if (id < 0) throw std::invalid_argument("gallery propagation needs the basic chamber inside the ball");
    delta_ids.push_back(id);
  }
  std::sort(delta_ids.begin(), delta_ids.end());
  auto start = std::find(ball.chambers.begin(), ball.chambers.end(), delta_ids);
  if (start == ball.chambers.end()) throw std::invalid_argument("ball was built without chambers");

  std::vector<std::vector<int>> flabel(r);
  for (std::size_t f = 0; f < r; ++f) flabel[f].assign(ball.stores[f].vertices.size(), -1);
  std::size_t c0 = start - ball.chambers.begin();
  for (int id : delta_ids) {
    auto lv = labelling_C(ball.vertex(id));
    for (std::size_t f = 0; f < r; ++f) flabel[f][ball.tuples[id][f]] = lv[f];
  }

  std::vector<char> seen(nc, 0);
  std::vector<std::size_t> queue{c0};
  seen[c0] = 1;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    std::size_t c = queue[head];
    for (std::size_t f = 0; f < r; ++f) {
      int n = b.factors[f].d + 1;
      for (int drop : parts[c][f]) {
        for (auto [c2, fresh] : panels[panel_key(c, f, drop)]) {
          if (seen[c2]) continue;
          std::vector<char> used(n, 0);
          for (int v : parts[c][f])
            if (v != drop) used[flabel[f][v]] = 1;
          int missing = static_cast<int>(std::find(used.begin(), used.end(), 0) - used.begin());
          if (flabel[f][fresh] == -1)
            flabel[f][fresh] = missing;
          else if (flabel[f][fresh] != missing)
            ++rep.conflicts;
          seen[c2] = 1;
          queue.push_back(c2);
        }
      }
    }
  }
  rep.chambers_reached = queue.size();

  rep.labels.assign(ball.size(), {});
  std::vector<char> covered(ball.size(), 0);
  for (std::size_t c : queue)
    for (int id : ball.chambers[c]) covered[id] = 1;
  for (std::size_t id = 0; id < ball.size(); ++id) {
    if (!covered[id]) continue;
    LabelVector lv(r);
    for (std::size_t f = 0; f < r; ++f) lv[f] = flabel[f][ball.tuples[id][f]];
    ++rep.vertices_labelled;
    if (lv != labelling_C(ball.vertex(id))) ++rep.mismatches;
    rep.labels[id] = std::move(lv);
  }
  return rep;
}

Matrix random_monomial(const FieldModel& k, std::size_t n, Rng& rng, long spread) {
  std::vector<std::size_t> perm(n);
  for (std::size_t i = 0; i < n; ++i) perm[i] = i;
  for (std::size_t i = n; i > 1; --i) std::swap(perm[i - 1], perm[rng.below(i)]);
  std::uint64_t q = k.residue_size();
  Matrix m(k, n, n);
  for (std::size_t j = 0; j < n; ++j) {
    auto unit = k.lift_digit(static_cast<GfElem>(1 + rng.below(q - 1)));
    m(perm[j], j) = unit * k.pi_pow(rng.range(-spread, spread));
  }
  return m;
}

namespace {

std::vector<int> random_exchange(const BuildingDescriptor& b, Rng& rng) {
  std::size_t r = b.r();
  std::vector<int> mu(r);
  for (std::size_t i = 0; i < r; ++i) mu[i] = static_cast<int>(i);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = i + 1; j < r; ++j)
      if (b.factors[i].field == b.factors[j].field && b.factors[i].d == b.factors[j].d && rng.coin()) std::swap(mu[i], mu[j]);
  return mu;
}

std::vector<bool> random_mask(std::size_t r, Rng& rng) {
  std::vector<bool> m(r);
  for (std::size_t i = 0; i < r; ++i) m[i] = rng.coin();
  return m;
}

} // namespace

AutWord random_apartment_word(const BuildingDescriptor& b, Rng& rng, int length) {
  AutWord w;
  for (int k = 0; k < length; ++k) {
    switch (rng.below(4)) {
    case 0: {
      std::vector<Matrix> g;
      for (const auto& f : b.factors) g.push_back(random_monomial(*f.field, f.d + 1, rng));
      w.push_back(AutGenerator::group(std::move(g)));
      break;
    }
    case 1: w.push_back(AutGenerator::lambda(random_mask(b.r(), rng))); break;
    case 2: w.push_back(AutGenerator::exchange(random_exchange(b, rng))); break;
    default:
      w.push_back(AutGenerator::shift(static_cast<int>(rng.below(b.r())), rng.coin() ? 1 : -1));
      break;
    }
  }
  return w;
}

AutWord random_chamber_fixing_word(const BuildingDescriptor& b, Rng& rng) {
  std::size_t r = b.r();
  AutWord w;
  std::vector<Matrix> units;
  for (const auto& f : b.factors) {
    std::vector<FieldElement> diag;
    long s = rng.range(-2, 2);
    for (int j = 0; j <= f.d; ++j)
      diag.push_back(f.field->lift_digit(static_cast<GfElem>(1 + rng.below(f.field->residue_size() - 1))) * f.field->pi_pow(s));
    units.push_back(Matrix::diagonal(*f.field, diag));
  }
  w.push_back(AutGenerator::group(std::move(units)));
  std::size_t i = rng.below(r);
  const auto& f = b.factors[i];
  // f^{d+1} = pi, undone by a scalar
  std::vector<Matrix> scalar;
  for (std::size_t k = 0; k < r; ++k)
    scalar.push_back(Matrix::identity(*b.factors[k].field, b.factors[k].d + 1).scaled(b.factors[k].field->pi_pow(k == i ? -1 : 0)));
  w.push_back(AutGenerator::group(std::move(scalar)));
  w.push_back(AutGenerator::shift(static_cast<int>(i), f.d + 1));
  auto mask = random_mask(r, rng);
  w.push_back(AutGenerator::lambda(mask));
  w.push_back(AutGenerator::lambda(mask));
  auto mu = random_exchange(b, rng);
  std::vector<int> inv(r);
  for (std::size_t k = 0; k < r; ++k) inv[mu[k]] = static_cast<int>(k);
  w.push_back(AutGenerator::exchange(mu));
  w.push_back(AutGenerator::exchange(inv));
  return w;
}

AutWord compose(const AutWord& u, const AutWord& v) {
  AutWord w = u;
  w.insert(w.end(), v.begin(), v.end());
  return w;
}

bool agree_on(const BuildingDescriptor& b, const AutWord& u, const AutWord& v, const std::vector<PolyVertex>& points) {
  for (const auto& x : points)
    if (apply_word(b, u, x) != apply_word(b, v, x)) return false;
  return true;
}

} // namespace bt
