#pragma once

// Brute-force reference computations shared by tests and verify suites. They
// avoid the Hermite reduction and subspace enumeration they check.

#include <cstdint>
#include <set>
#include <vector>

#include "bt/drinfeld.hpp"
#include "bt/lattice.hpp"
#include "bt/random.hpp"

namespace bt::oracle {

/// Number of k-dimensional subspaces of F_p^n (p prime) by spanning every
/// increasing k-tuple of nonzero vectors and deduplicating the spans.
inline std::uint64_t count_subspaces(std::uint32_t p, int n, int k) {
  std::uint64_t total = 1;
  for (int i = 0; i < n; ++i) total *= p;
  auto decode = [&](std::uint64_t x) {
    std::vector<std::uint32_t> v(n);
    for (int i = 0; i < n; ++i) {
      v[i] = x % p;
      x /= p;
    }
    return v;
  };
  auto encode = [&](const std::vector<std::uint32_t>& v) {
    std::uint64_t x = 0;
    for (int i = n; i-- > 0;) x = x * p + v[i];
    return x;
  };
  std::set<std::vector<bool>> spans;
  std::uint64_t kdim = 1;
  for (int i = 0; i < k; ++i) kdim *= p;
  std::vector<std::uint64_t> tuple(k, 0);
  for (;;) {
    bool increasing = tuple[0] > 0;
    for (int j = 1; j < k; ++j) increasing = increasing && tuple[j - 1] < tuple[j];
    if (!increasing) {
      int j = 0;
      while (j < k && ++tuple[j] == total) tuple[j++] = 0;
      if (j == k) break;
      continue;
    }
    std::vector<bool> span(total, false);
    std::uint64_t combos = kdim;
    for (std::uint64_t c = 0; c < combos; ++c) {
      std::vector<std::uint32_t> acc(n, 0);
      std::uint64_t cc = c;
      for (int j = 0; j < k; ++j) {
        std::uint32_t coef = cc % p;
        cc /= p;
        auto v = decode(tuple[j]);
        for (int i = 0; i < n; ++i) acc[i] = (acc[i] + coef * v[i]) % p;
      }
      span[encode(acc)] = true;
    }
    std::uint64_t size = 0;
    for (bool b : span) size += b;
    if (size == kdim) spans.insert(span);
    int j = 0;
    while (j < k && ++tuple[j] == total) tuple[j++] = 0;
    if (j == k) break;
  }
  return spans.size();
}

/// Elements of the lattice spanned by the columns of B (assumed to satisfy
/// pi^depth O^n <= L <= O^n), reduced mod pi^depth, as digit keys.
inline std::set<std::vector<bt::GfElem>> residue_image(const bt::Matrix& B, int depth) {
  const auto& m = B.model();
  std::size_t n = B.rows();
  auto reps = m.enumerate_residues(depth);
  std::set<std::vector<bt::GfElem>> out;
  std::vector<std::size_t> idx(B.cols(), 0);
  for (;;) {
    std::vector<bt::GfElem> key;
    for (std::size_t i = 0; i < n; ++i) {
      bt::FieldElement s = m.zero();
      for (std::size_t j = 0; j < B.cols(); ++j) s += B(i, j) * reps[idx[j]];
      auto d = s.digits(depth);
      key.insert(key.end(), d.begin(), d.end());
    }
    out.insert(key);
    std::size_t j = 0;
    while (j < idx.size() && ++idx[j] == reps.size()) idx[j++] = 0;
    if (j == idx.size()) break;
  }
  return out;
}

/// Random element: small fractions in the p-adic model, quotients of random
/// polynomials in t in the Laurent model.
inline bt::FieldElement random_element(const bt::FieldModel& m, bt::Rng& rng) {
  if (m.is_padic()) {
    long num = rng.range(-200, 200);
    long den = rng.range(1, 60);
    return bt::FieldElement(m, mpq_class(num, den));
  }
  auto rand_poly = [&](int deg) {
    bt::GfPoly p;
    for (int i = 0; i <= deg; ++i) p.c.push_back(static_cast<bt::GfElem>(rng.below(m.residue_size())));
    p.trim();
    return p;
  };
  bt::GfPoly den = rand_poly(static_cast<int>(rng.below(4)));
  if (den.is_zero()) den = bt::poly::constant(1);
  return bt::FieldElement(m, bt::RatFunc{rand_poly(static_cast<int>(rng.below(5))), den});
}

/// Random element of GL_n(O) as a product of elementary integral operations.
inline bt::Matrix random_unimodular(const bt::FieldModel& m, std::size_t n, bt::Rng& rng) {
  bt::Matrix g = bt::Matrix::identity(m, n);
  for (int step = 0; step < 6; ++step) {
    bt::Matrix e = bt::Matrix::identity(m, n);
    std::size_t i = rng.below(n), j = rng.below(n);
    if (i == j) {
      bt::GfElem u = 1 + static_cast<bt::GfElem>(rng.below(m.residue_size() - 1));
      e(i, i) = m.lift_digit(u) + m.uniformizer() * m.from_int(rng.range(0, 3));
    } else {
      e(i, j) = m.residue_representative(rng.below(m.residue_size() * m.residue_size()), 2);
    }
    g = g * e;
  }
  return g;
}

/// Random invertible matrix with entries pi^k * (small integral element).
inline bt::Matrix random_invertible(const bt::FieldModel& m, std::size_t n, bt::Rng& rng, int spread = 2) {
  for (;;) {
    bt::Matrix g(m, n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (rng.below(3) != 0)
          g(i, j) = m.residue_representative(rng.below(m.residue_size() * m.residue_size()), 2) *
                    m.pi_pow(rng.range(-spread, spread));
    if (!g.det().is_zero()) return g;
  }
}

// Every unimodular vector with digit length `depth`, without normalization,
// checked with exact field arithmetic.
inline bool membership(const RigidPoint& x, int n, bool closed, int depth) {
  const auto& k = x.ext.base();
  int e = x.ext.ramification();
  for (std::size_t i = 0; i < x.coords.size(); ++i) {
    std::size_t dim = x.coords[i].size() + 1;
    long m = kInfiniteValuation;
    for (std::size_t j = 0; j < dim; ++j) m = std::min(m, x.value(static_cast<int>(i), static_cast<int>(j)).valuation());
    auto residues = k.enumerate_residues(depth);
    std::vector<std::size_t> idx(dim, 0);
    for (;;) {
      bool unimodular = false;
      FieldElement sum = x.ext.field().zero();
      for (std::size_t j = 0; j < dim; ++j) {
        const auto& a = residues[idx[j]];
        if (!a.is_zero() && a.valuation() == 0) unimodular = true;
        sum += x.ext.embed(a) * x.value(static_cast<int>(i), static_cast<int>(j));
      }
      if (unimodular) {
        long v = sum.valuation();
        long bound = static_cast<long>(e) * n + m;
        if (closed ? v > bound : v >= bound) return false;
      }
      std::size_t t = 0;
      while (t < dim && ++idx[t] == residues.size()) idx[t++] = 0;
      if (t == dim) break;
    }
      }
  return true;
}

// |sum a_j v_j(x)| = max_j |a_j||v_j(x)| over all a with digits of length depth
inline bool diagonal(const RigidPoint& x, int factor, const DiagonalBasis& db, int depth) {
  const auto& k = x.ext.base();
  std::size_t dim = x.coords[factor].size() + 1;
  std::vector<FieldElement> w;
  for (std::size_t j = 0; j < dim; ++j) {
    FieldElement v = x.ext.field().zero();
    for (std::size_t r = 0; r < dim; ++r) v += x.ext.embed(db.basis(r, j)) * x.value(factor, static_cast<int>(r));
    w.push_back(v);
  }
  auto residues = k.enumerate_residues(depth);
  std::vector<std::size_t> idx(dim, 0);
  int e = x.ext.ramification();
  for (;;) {
    FieldElement sum = x.ext.field().zero();
    long rhs = kInfiniteValuation;
    for (std::size_t j = 0; j < dim; ++j) {
      const auto& a = residues[idx[j]];
      if (a.is_zero()) continue;
      sum += x.ext.embed(a) * w[j];
      rhs = std::min(rhs, e * a.valuation() + w[j].valuation());
    }
    if (sum.valuation() != rhs) return false;
    std::size_t t = 0;
    while (t < dim && ++idx[t] == residues.size()) idx[t++] = 0;
    if (t == dim) break;
  }
  for (std::size_t j = 0; j < dim; ++j) {
    mpq_class r(w[j].valuation(), e);
    r.canonicalize();
    if (r != db.exponents[j]) return false;
  }
  return true;
}

} // namespace bt::oracle
