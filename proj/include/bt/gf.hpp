#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace bt {

/// Element of a finite field, stored as the base-p digit code of its
/// coordinate vector in the power basis 1, w, w^2, ... (digit of w^0 least
/// significant).
using GfElem = std::uint32_t;

/// Finite field F_{p^m} realized as F_p[w]/(g) where g is the
/// lexicographically smallest monic irreducible of degree m, coefficients
/// compared low-degree-first.
class GaloisField {
public:
  GaloisField(std::uint32_t p, std::uint32_t m);

  std::uint32_t characteristic() const { return p_; }
  std::uint32_t degree() const { return m_; }
  std::uint32_t size() const { return q_; }
  /// Coefficients g_0..g_m of the defining modulus (g_m = 1).
  const std::vector<std::uint32_t>& modulus() const { return modulus_; }

  GfElem add(GfElem a, GfElem b) const { return add_[a * q_ + b]; }
  GfElem sub(GfElem a, GfElem b) const { return add_[a * q_ + neg_[b]]; }
  GfElem neg(GfElem a) const { return neg_[a]; }
  GfElem mul(GfElem a, GfElem b) const { return mul_[a * q_ + b]; }
  GfElem inv(GfElem a) const;
  GfElem pow(GfElem a, std::uint64_t e) const;

  /// Generator w (code p when m > 1; for m = 1 the field is F_p and w is
  /// not used).
  GfElem generator() const { return m_ > 1 ? p_ : 1; }
  GfElem from_int(std::int64_t v) const;

  std::vector<std::uint32_t> digits(GfElem a) const;
  GfElem from_digits(const std::vector<std::uint32_t>& d) const;

  /// Text form: polynomial in "w" with coefficients in 0..p-1, e.g. "1+w^2".
  std::string to_string(GfElem a) const;

private:
  std::uint32_t p_, m_, q_;
  std::vector<std::uint32_t> modulus_;
  std::vector<GfElem> add_, mul_, neg_, inv_;
};

/// Dense polynomial over a GaloisField, coefficients low degree first and
/// no trailing zeros. The zero polynomial is empty.
struct GfPoly {
  std::vector<GfElem> c;

  bool is_zero() const { return c.empty(); }
  int degree() const { return static_cast<int>(c.size()) - 1; }
  GfElem lead() const { return c.back(); }
  /// Order of vanishing at 0; -1 for the zero polynomial.
  int low_order() const;
  void trim();
  friend bool operator==(const GfPoly&, const GfPoly&) = default;
  friend auto operator<=>(const GfPoly&, const GfPoly&) = default;
};

namespace poly {
GfPoly constant(GfElem a);
GfPoly monomial(GfElem a, int deg);
GfPoly add(const GaloisField& F, const GfPoly& a, const GfPoly& b);
GfPoly sub(const GaloisField& F, const GfPoly& a, const GfPoly& b);
GfPoly neg(const GaloisField& F, const GfPoly& a);
GfPoly mul(const GaloisField& F, const GfPoly& a, const GfPoly& b);
GfPoly scale(const GaloisField& F, const GfPoly& a, GfElem s);
GfPoly shift(const GfPoly& a, int k);
/// Euclidean division; b must be nonzero.
void divmod(const GaloisField& F, const GfPoly& a, const GfPoly& b, GfPoly& q, GfPoly& r);
/// Monic gcd (zero if both are zero).
GfPoly gcd(const GaloisField& F, GfPoly a, GfPoly b);
GfPoly monic(const GaloisField& F, const GfPoly& a);
/// Composition a(x^e): substitutes x -> x^e.
GfPoly inflate(const GfPoly& a, int e);
/// Applies a coefficient map to every coefficient.
template <class Map>
GfPoly map_coeffs(const GfPoly& a, Map&& f) {
  GfPoly r;
  r.c.reserve(a.c.size());
  for (GfElem x : a.c) r.c.push_back(f(x));
  r.trim();
  return r;
}
} // namespace poly

/// Irreducibility of a monic polynomial over F_p given by its coefficients.
bool is_irreducible_mod_p(const std::vector<std::uint32_t>& coeffs, std::uint32_t p);
/// Lexicographically smallest (low-degree-first) monic irreducible of degree m over F_p.
std::vector<std::uint32_t> smallest_irreducible(std::uint32_t p, std::uint32_t m);

bool is_prime(std::uint64_t n);
/// Decomposes q = p^m; returns false when q is not a prime power.
bool prime_power(std::uint64_t q, std::uint32_t& p, std::uint32_t& m);

} // namespace bt
