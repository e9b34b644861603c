#include "bt/lattice.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace bt {

namespace {

// Hermite reduction on a working copy: returns the n x n triangular part.
Matrix triangularize(Matrix g) {
  const FieldModel& m = g.model();
  std::size_t n = g.rows(), cols = g.cols();
  if (cols < n) throw std::domain_error("generating set has too few columns");
  std::vector<std::size_t> free(cols);
  std::iota(free.begin(), free.end(), 0);
  std::vector<std::size_t> pivot_col(n);
  for (std::size_t i = n; i-- > 0;) {
    std::size_t best = cols;
    long best_v = kInfiniteValuation;
    std::size_t best_pos = 0;
    for (std::size_t pos = 0; pos < free.size(); ++pos) {
      long v = g(i, free[pos]).valuation();
      if (v < best_v) {
        best_v = v;
        best = free[pos];
        best_pos = pos;
      }
    }
    if (best == cols) throw std::domain_error("singular lattice basis");
    free.erase(free.begin() + static_cast<std::ptrdiff_t>(best_pos));
    pivot_col[i] = best;
    FieldElement unit_inv = m.pi_pow(best_v) / g(i, best);
    for (std::size_t r = 0; r <= i; ++r)
      if (!g(r, best).is_zero()) g(r, best) = g(r, best) * unit_inv;
    FieldElement piv_inv = m.pi_pow(-best_v);
    for (std::size_t c : free) {
      if (g(i, c).is_zero()) continue;
      FieldElement f = g(i, c) * piv_inv;
      for (std::size_t r = 0; r <= i; ++r)
        if (!g(r, best).is_zero()) g(r, c) -= f * g(r, best);
    }
  }
  Matrix h(m, n, n);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t r = 0; r <= j; ++r) h(r, j) = g(r, pivot_col[j]);
  return h;
}

void reduce_off_diagonal(Matrix& h) {
  std::size_t n = h.rows();
  for (std::size_t i = n; i-- > 0;) {
    long a = h(i, i).valuation();
    FieldElement inv = h.model().pi_pow(-a);
    for (std::size_t j = i + 1; j < n; ++j) {
      const FieldElement x = h(i, j);
      if (x.is_zero()) continue;
      long vx = std::min(x.valuation(), 0L);
      FieldElement rep = (x * h.model().pi_pow(-vx)).reduce_mod(static_cast<int>(a - vx)) * h.model().pi_pow(vx);
      if (rep == x) continue;
      FieldElement f = (x - rep) * inv;
      for (std::size_t r = 0; r <= i; ++r)
        if (!h(r, i).is_zero()) h(r, j) -= f * h(r, i);
    }
  }
}

} // namespace

Matrix hermite_form(const Matrix& gens) {
  Matrix h = triangularize(gens);
  reduce_off_diagonal(h);
  return h;
}

Matrix canonical_form(const Matrix& gens) {
  Matrix h = triangularize(gens);
  long mv = h.min_valuation();
  if (mv != 0) h = h.scaled(h.model().pi_pow(-mv));
  reduce_off_diagonal(h);
  return h;
}

VertexClass VertexClass::from_basis(const Matrix& gens) {
  VertexClass v;
  v.m_ = canonical_form(gens);
  std::size_t n = v.m_.rows();
  v.a_.resize(n);
  for (std::size_t i = 0; i < n; ++i) v.a_[i] = v.m_(i, i).valuation();
  for (long a : v.a_) v.key_.push_back(static_cast<std::uint32_t>(a));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      auto d = v.m_(i, j).digits(static_cast<int>(v.a_[i]));
      v.key_.insert(v.key_.end(), d.begin(), d.end());
    }
  return v;
}

VertexClass VertexClass::standard(const FieldModel& m, std::size_t n) {
  return from_basis(Matrix::identity(m, n));
}

long VertexClass::det_valuation() const { return std::accumulate(a_.begin(), a_.end(), 0L); }

std::size_t VertexHash::operator()(const VertexClass& v) const {
  std::size_t h = 1469598103934665603ull;
  for (auto x : v.key()) h = (h ^ x) * 1099511628211ull;
  return h;
}

long lattice_index(const Matrix& M, const Matrix& L) {
  Matrix c = M.inverse() * L;
  if (!c.is_integral()) throw std::domain_error("lattice index: M does not contain L");
  return c.det().valuation();
}

VertexClass dual(const VertexClass& v) { return VertexClass::from_basis(v.matrix().inverse().transpose()); }

int label(const VertexClass& v) {
  long n = static_cast<long>(v.rank());
  return static_cast<int>(((v.det_valuation() % n) + n) % n);
}

std::uint64_t gaussian_binomial(int n, int k, std::uint64_t q) {
  if (k < 0 || k > n) return 0;
  std::uint64_t num = 1, den = 1;
  for (int i = 0; i < k; ++i) {
    std::uint64_t a = 1, b = 1;
    for (int j = 0; j < n - i; ++j) a *= q;
    for (int j = 0; j < i + 1; ++j) b *= q;
    num *= a - 1;
    den *= b - 1;
  }
  return num / den;
}

std::vector<std::vector<std::vector<GfElem>>> enumerate_subspaces(const GaloisField& F, int n, int k) {
  std::vector<std::vector<std::vector<GfElem>>> out;
  if (k < 0 || k > n) return out;
  std::vector<int> piv(k);
  std::iota(piv.begin(), piv.end(), 0);
  for (;;) {
    // free positions: row r, column c > piv[r] not a pivot column
    std::vector<std::pair<int, int>> slots;
    for (int r = 0; r < k; ++r)
      for (int c = piv[r] + 1; c < n; ++c)
        if (std::find(piv.begin(), piv.end(), c) == piv.end()) slots.emplace_back(r, c);
    std::vector<GfElem> vals(slots.size(), 0);
    for (;;) {
      std::vector<std::vector<GfElem>> m(k, std::vector<GfElem>(n, 0));
      for (int r = 0; r < k; ++r) m[r][piv[r]] = 1;
      for (std::size_t s = 0; s < slots.size(); ++s) m[slots[s].first][slots[s].second] = vals[s];
      out.push_back(std::move(m));
      std::size_t s = slots.size();
      while (s > 0) {
        --s;
        if (++vals[s] < F.size()) break;
        vals[s] = 0;
        if (s == 0) {
          s = slots.size() + 1;
          break;
        }
      }
      if (slots.empty() || s == slots.size() + 1) break;
    }
    int i = k - 1;
    while (i >= 0 && piv[i] == n - k + i) --i;
    if (i < 0) break;
    ++piv[i];
    for (int j = i + 1; j < k; ++j) piv[j] = piv[j - 1] + 1;
  }
  return out;
}

std::vector<VertexClass> neighbors_by_colength(const VertexClass& v, int w) {
  int n = static_cast<int>(v.rank());
  if (w < 1 || w > n - 1) throw std::out_of_range("colength must lie in 1..d");
  const FieldModel& m = v.model();
  const Matrix& B = v.matrix();
  Matrix piB = B.scaled(m.uniformizer());
  std::vector<VertexClass> out;
  for (const auto& rows : enumerate_subspaces(m.residue_field(), n, n - w)) {
    Matrix lift(m, n, rows.size());
    for (std::size_t r = 0; r < rows.size(); ++r)
      for (int c = 0; c < n; ++c)
        if (rows[r][c] != 0) lift(c, r) = m.lift_digit(rows[r][c]);
    out.push_back(VertexClass::from_basis(Matrix::hconcat(B * lift, piB)));
  }
  return out;
}

long f_distance(const Matrix& x_inverse, const VertexClass& x, const VertexClass& y) {
  const Matrix& L = y.matrix();
  std::size_t n = L.rows();
  // N = M^{-1} L; only entry valuations are needed
  long mv = kInfiniteValuation;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      FieldElement s = x.model().zero();
      for (std::size_t k = i; k <= j; ++k)
        if (!x_inverse(i, k).is_zero() && !L(k, j).is_zero()) s += x_inverse(i, k) * L(k, j);
      mv = std::min(mv, s.valuation());
    }
  long c = -mv;
  return static_cast<long>(n) * c + y.det_valuation() - x.det_valuation();
}

long f_distance(const VertexClass& x, const VertexClass& y) { return f_distance(x.matrix().inverse(), x, y); }

long undirected_distance(const VertexClass& x, const VertexClass& y) {
  Matrix n1 = x.matrix().inverse() * y.matrix();
  Matrix n2 = y.matrix().inverse() * x.matrix();
  return -n1.min_valuation() - n2.min_valuation();
}

VertexClass act(const Matrix& g, const VertexClass& v) { return VertexClass::from_basis(g * v.matrix()); }

} // namespace bt
