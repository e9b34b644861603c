#include "bt/gf.hpp"

#include <algorithm>
#include <stdexcept>

namespace bt {

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

bool prime_power(std::uint64_t q, std::uint32_t& p, std::uint32_t& m) {
  if (q < 2) return false;
  std::uint64_t d = 2;
  while (q % d != 0) ++d;
  p = static_cast<std::uint32_t>(d);
  m = 0;
  while (q % d == 0) {
    q /= d;
    ++m;
  }
  return q == 1;
}

namespace {

// Polynomials over F_p as plain coefficient vectors, used only while the
// field tables are being built.
using Coeffs = std::vector<std::uint32_t>;

void trim(Coeffs& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

Coeffs mod_p(const Coeffs& a, const Coeffs& b, std::uint32_t p) {
  Coeffs r = a;
  trim(r);
  std::uint32_t lead_inv = 1;
  for (std::uint32_t x = 1; x < p; ++x)
    if ((x * b.back()) % p == 1) lead_inv = x;
  while (r.size() >= b.size()) {
    std::uint32_t f = (r.back() * lead_inv) % p;
    std::size_t off = r.size() - b.size();
    for (std::size_t i = 0; i < b.size(); ++i)
      r[off + i] = (r[off + i] + p * p - f * b[i] % p) % p;
    trim(r);
  }
  return r;
}

bool next_coeffs(Coeffs& c, std::uint32_t p) {
  for (auto& x : c) {
    if (++x < p) return true;
    x = 0;
  }
  return false;
}

} // namespace

bool is_irreducible_mod_p(const std::vector<std::uint32_t>& coeffs, std::uint32_t p) {
  Coeffs g = coeffs;
  trim(g);
  int m = static_cast<int>(g.size()) - 1;
  if (m < 1) return false;
  // trial division by every monic polynomial of degree 1..m/2
  for (int k = 1; 2 * k <= m; ++k) {
    Coeffs low(k, 0);
    do {
      Coeffs f = low;
      f.push_back(1);
      if (mod_p(g, f, p).empty()) return false;
    } while (next_coeffs(low, p));
  }
  return true;
}

std::vector<std::uint32_t> smallest_irreducible(std::uint32_t p, std::uint32_t m) {
  if (m == 1) return {0, 1};
  // Lexicographic order comparing g_0 first: enumerate with g_0 as the most
  // significant digit.
  Coeffs low(m, 0);
  std::vector<Coeffs> all;
  do {
    Coeffs f = low;
    f.push_back(1);
    if (is_irreducible_mod_p(f, p)) all.push_back(f);
  } while (next_coeffs(low, p));
  if (all.empty()) throw std::logic_error("no irreducible polynomial found");
  return *std::min_element(all.begin(), all.end());
}

GaloisField::GaloisField(std::uint32_t p, std::uint32_t m) : p_(p), m_(m) {
  if (!is_prime(p)) throw std::invalid_argument("field characteristic must be prime");
  if (m < 1) throw std::invalid_argument("field degree must be positive");
  q_ = 1;
  for (std::uint32_t i = 0; i < m; ++i) q_ *= p;
  if (q_ > 4096) throw std::invalid_argument("finite field too large for table arithmetic");
  modulus_ = smallest_irreducible(p, m);

  add_.resize(std::size_t(q_) * q_);
  mul_.resize(std::size_t(q_) * q_);
  neg_.resize(q_);
  inv_.assign(q_, 0);
  std::vector<Coeffs> dig(q_);
  for (GfElem a = 0; a < q_; ++a) dig[a] = digits(a);
  for (GfElem a = 0; a < q_; ++a) {
    Coeffs n(m, 0);
    for (std::uint32_t i = 0; i < m; ++i) n[i] = (p - dig[a][i]) % p;
    neg_[a] = from_digits(n);
    for (GfElem b = 0; b < q_; ++b) {
      Coeffs s(m, 0);
      for (std::uint32_t i = 0; i < m; ++i) s[i] = (dig[a][i] + dig[b][i]) % p;
      add_[a * q_ + b] = from_digits(s);
      Coeffs prod(2 * m, 0);
      for (std::uint32_t i = 0; i < m; ++i)
        for (std::uint32_t j = 0; j < m; ++j)
          prod[i + j] = (prod[i + j] + dig[a][i] * dig[b][j]) % p;
      Coeffs r = mod_p(prod, modulus_, p);
      r.resize(m, 0);
      mul_[a * q_ + b] = from_digits(r);
    }
  }
  for (GfElem a = 1; a < q_; ++a)
    for (GfElem b = 1; b < q_; ++b)
      if (mul_[a * q_ + b] == 1) {
        inv_[a] = b;
        break;
      }
}

GfElem GaloisField::inv(GfElem a) const {
  if (a == 0) throw std::domain_error("inverse of zero in finite field");
  return inv_[a];
}

GfElem GaloisField::pow(GfElem a, std::uint64_t e) const {
  GfElem r = 1;
  while (e) {
    if (e & 1) r = mul(r, a);
    a = mul(a, a);
    e >>= 1;
  }
  return r;
}

GfElem GaloisField::from_int(std::int64_t v) const {
  std::int64_t r = v % std::int64_t(p_);
  if (r < 0) r += p_;
  return static_cast<GfElem>(r);
}

std::vector<std::uint32_t> GaloisField::digits(GfElem a) const {
  std::vector<std::uint32_t> d(m_, 0);
  for (std::uint32_t i = 0; i < m_; ++i) {
    d[i] = a % p_;
    a /= p_;
  }
  return d;
}

GfElem GaloisField::from_digits(const std::vector<std::uint32_t>& d) const {
  GfElem a = 0;
  for (std::size_t i = d.size(); i-- > 0;) a = a * p_ + d[i] % p_;
  return a;
}

std::string GaloisField::to_string(GfElem a) const {
  if (a == 0) return "0";
  auto d = digits(a);
  std::string out;
  for (std::uint32_t i = 0; i < m_; ++i) {
    if (d[i] == 0) continue;
    if (!out.empty()) out += "+";
    if (i == 0) {
      out += std::to_string(d[i]);
    } else {
      if (d[i] != 1) out += std::to_string(d[i]) + "*";
      out += "w";
      if (i > 1) out += "^" + std::to_string(i);
    }
  }
  return out;
}

int GfPoly::low_order() const {
  for (std::size_t i = 0; i < c.size(); ++i)
    if (c[i] != 0) return static_cast<int>(i);
  return -1;
}

void GfPoly::trim() {
  while (!c.empty() && c.back() == 0) c.pop_back();
}

namespace poly {

GfPoly constant(GfElem a) {
  GfPoly r;
  if (a != 0) r.c.push_back(a);
  return r;
}

GfPoly monomial(GfElem a, int deg) {
  GfPoly r;
  if (a == 0) return r;
  r.c.assign(deg + 1, 0);
  r.c[deg] = a;
  return r;
}

GfPoly add(const GaloisField& F, const GfPoly& a, const GfPoly& b) {
  GfPoly r;
  r.c.resize(std::max(a.c.size(), b.c.size()), 0);
  for (std::size_t i = 0; i < r.c.size(); ++i) {
    GfElem x = i < a.c.size() ? a.c[i] : 0;
    GfElem y = i < b.c.size() ? b.c[i] : 0;
    r.c[i] = F.add(x, y);
  }
  r.trim();
  return r;
}

GfPoly neg(const GaloisField& F, const GfPoly& a) {
  GfPoly r = a;
  for (auto& x : r.c) x = F.neg(x);
  return r;
}

GfPoly sub(const GaloisField& F, const GfPoly& a, const GfPoly& b) {
  return add(F, a, neg(F, b));
}

GfPoly mul(const GaloisField& F, const GfPoly& a, const GfPoly& b) {
  if (a.is_zero() || b.is_zero()) return {};
  GfPoly r;
  r.c.assign(a.c.size() + b.c.size() - 1, 0);
  for (std::size_t i = 0; i < a.c.size(); ++i) {
    if (a.c[i] == 0) continue;
    for (std::size_t j = 0; j < b.c.size(); ++j)
      r.c[i + j] = F.add(r.c[i + j], F.mul(a.c[i], b.c[j]));
  }
  r.trim();
  return r;
}

GfPoly scale(const GaloisField& F, const GfPoly& a, GfElem s) {
  if (s == 0) return {};
  GfPoly r = a;
  for (auto& x : r.c) x = F.mul(x, s);
  return r;
}

GfPoly shift(const GfPoly& a, int k) {
  if (a.is_zero() || k == 0) return a;
  GfPoly r;
  if (k > 0) {
    r.c.assign(k, 0);
    r.c.insert(r.c.end(), a.c.begin(), a.c.end());
  } else {
    if (static_cast<std::size_t>(-k) >= a.c.size()) return {};
    r.c.assign(a.c.begin() + (-k), a.c.end());
  }
  r.trim();
  return r;
}

void divmod(const GaloisField& F, const GfPoly& a, const GfPoly& b, GfPoly& q, GfPoly& r) {
  if (b.is_zero()) throw std::domain_error("polynomial division by zero");
  r = a;
  q.c.clear();
  if (a.degree() < b.degree()) return;
  q.c.assign(a.c.size() - b.c.size() + 1, 0);
  GfElem li = F.inv(b.lead());
  while (!r.is_zero() && r.degree() >= b.degree()) {
    int off = r.degree() - b.degree();
    GfElem f = F.mul(r.lead(), li);
    q.c[off] = f;
    for (std::size_t i = 0; i < b.c.size(); ++i)
      r.c[off + i] = F.sub(r.c[off + i], F.mul(f, b.c[i]));
    r.trim();
  }
  q.trim();
}

GfPoly monic(const GaloisField& F, const GfPoly& a) {
  if (a.is_zero()) return a;
  return scale(F, a, F.inv(a.lead()));
}

GfPoly gcd(const GaloisField& F, GfPoly a, GfPoly b) {
  while (!b.is_zero()) {
    GfPoly q, r;
    divmod(F, a, b, q, r);
    a = std::move(b);
    b = std::move(r);
  }
  return monic(F, a);
}

GfPoly inflate(const GfPoly& a, int e) {
  if (e == 1 || a.is_zero()) return a;
  GfPoly r;
  r.c.assign((a.c.size() - 1) * e + 1, 0);
  for (std::size_t i = 0; i < a.c.size(); ++i) r.c[i * e] = a.c[i];
  return r;
}

} // namespace poly
} // namespace bt
