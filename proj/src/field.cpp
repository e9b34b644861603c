#include "bt/field.hpp"

#include <cctype>
#include <map>
#include <mutex>
#include <stdexcept>

namespace bt {

struct ModelRegistry {
  std::mutex mu;
  std::map<std::string, std::unique_ptr<FieldModel>> models;

  static ModelRegistry& instance() {
    static ModelRegistry r;
    return r;
  }

  template <class Build>
  const FieldModel& get(const std::string& key, Build&& build) {
    std::lock_guard lock(mu);
    auto it = models.find(key);
    if (it != models.end()) return *it->second;
    std::unique_ptr<FieldModel> m(new FieldModel());
    build(*m);
    auto& ref = *m;
    models.emplace(key, std::move(m));
    return ref;
  }

  static void set_padic(FieldModel& m, std::uint32_t p) {
    m.kind_ = FieldKind::PAdic;
    m.p_ = p;
    m.q_ = p;
    m.gf_ = std::make_unique<GaloisField>(p, 1);
    m.var_ = "";
  }
  static void set_laurent(FieldModel& m, std::uint32_t p, std::uint32_t deg, std::string var) {
    m.kind_ = FieldKind::Laurent;
    m.p_ = p;
    m.gf_ = std::make_unique<GaloisField>(p, deg);
    m.q_ = m.gf_->size();
    m.var_ = std::move(var);
  }
  static void set_extension(FieldModel& m, std::unique_ptr<ExtensionData> d) { m.ext_ = std::move(d); }
};

const FieldModel& FieldModel::padic(std::uint32_t p) {
  if (!is_prime(p)) throw std::invalid_argument("padic model needs a prime, got " + std::to_string(p));
  return ModelRegistry::instance().get("padic:" + std::to_string(p),
                                       [&](FieldModel& m) { ModelRegistry::set_padic(m, p); });
}

const FieldModel& FieldModel::laurent(std::uint64_t q) {
  std::uint32_t p = 0, deg = 0;
  if (!prime_power(q, p, deg))
    throw std::invalid_argument("laurent model needs a prime power, got " + std::to_string(q));
  return ModelRegistry::instance().get(
      "laurent:" + std::to_string(q), [&](FieldModel& m) { ModelRegistry::set_laurent(m, p, deg, "t"); });
}

const FieldModel& FieldModel::parse(std::string_view spec) {
  auto colon = spec.find(':');
  if (colon == std::string_view::npos) throw std::invalid_argument("field spec must be padic:p or laurent:q");
  std::string kind(spec.substr(0, colon));
  std::string num(spec.substr(colon + 1));
  std::size_t used = 0;
  unsigned long long v = 0;
  try {
    v = std::stoull(num, &used);
  } catch (const std::exception&) {
    throw std::invalid_argument("bad field size in '" + std::string(spec) + "'");
  }
  if (used != num.size()) throw std::invalid_argument("bad field size in '" + std::string(spec) + "'");
  if (kind == "padic") return padic(static_cast<std::uint32_t>(v));
  if (kind == "laurent") return laurent(v);
  throw std::invalid_argument("unknown field kind '" + kind + "'");
}

std::string FieldModel::name() const {
  if (is_padic()) return "padic:" + std::to_string(p_);
  if (ext_) {
    return "laurent:" + std::to_string(ext_->base->q_) + "[e=" + std::to_string(ext_->e) +
           ",f=" + std::to_string(ext_->f) + "]";
  }
  return "laurent:" + std::to_string(q_);
}

namespace {

RatFunc normalize(const GaloisField& F, GfPoly num, GfPoly den) {
  if (den.is_zero()) throw std::domain_error("division by zero");
  if (num.is_zero()) return {GfPoly{}, poly::constant(1)};
  GfPoly g = poly::gcd(F, num, den);
  if (g.degree() > 0) {
    GfPoly q, r;
    poly::divmod(F, num, g, q, r);
    num = std::move(q);
    poly::divmod(F, den, g, q, r);
    den = std::move(q);
  }
  GfElem li = F.inv(den.lead());
  if (li != 1) {
    num = poly::scale(F, num, li);
    den = poly::scale(F, den, li);
  }
  return {std::move(num), std::move(den)};
}

long padic_val(const mpz_class& z, std::uint32_t p) {
  if (z == 0) return kInfiniteValuation;
  mpz_class tmp = z, pp = p;
  return static_cast<long>(mpz_remove(tmp.get_mpz_t(), tmp.get_mpz_t(), pp.get_mpz_t()));
}

void require_same(const FieldElement& a, const FieldElement& b) {
  if (a.model_ptr() != b.model_ptr() || a.model_ptr() == nullptr)
    throw std::invalid_argument("field elements from different models");
}

// integral element modulo p^a as an integer in [0, p^a)
mpz_class padic_mod(const mpq_class& x, std::uint32_t p, int a) {
  mpz_class mod;
  mpz_ui_pow_ui(mod.get_mpz_t(), p, static_cast<unsigned long>(a));
  mpz_class inv;
  mpz_class den = x.get_den();
  if (mpz_invert(inv.get_mpz_t(), den.get_mpz_t(), mod.get_mpz_t()) == 0)
    throw std::domain_error("element is not integral");
  mpz_class r = (x.get_num() * inv) % mod;
  if (r < 0) r += mod;
  return r;
}

// series coefficients of num/den at t = 0 (den(0) != 0 assumed after shifting)
std::vector<GfElem> series(const GaloisField& F, const RatFunc& x, int n) {
  int v = x.num.low_order() - x.den.low_order();
  std::vector<GfElem> out(n, 0);
  if (x.num.is_zero()) return out;
  if (v < 0) throw std::domain_error("element is not integral");
  GfPoly num = poly::shift(x.num, -x.den.low_order());
  GfPoly den = poly::shift(x.den, -x.den.low_order());
  // x = num/den with den(0) != 0
  GfElem d0inv = F.inv(den.c[0]);
  std::vector<GfElem> c(n, 0);
  for (int k = 0; k < n; ++k) {
    GfElem acc = k < static_cast<int>(num.c.size()) ? num.c[k] : 0;
    for (int j = 1; j <= k && j < static_cast<int>(den.c.size()); ++j)
      acc = F.sub(acc, F.mul(den.c[j], c[k - j]));
    c[k] = F.mul(acc, d0inv);
  }
  return c;
}

} // namespace

FieldElement::FieldElement(const FieldModel& m, mpq_class v) : model_(&m) {
  if (!m.is_padic()) throw std::invalid_argument("rational value for a non-padic model");
  v.canonicalize();
  v_ = std::move(v);
}

FieldElement::FieldElement(const FieldModel& m, RatFunc v) : model_(&m) {
  if (!m.is_laurent()) throw std::invalid_argument("rational function for a non-laurent model");
  v_ = normalize(m.residue_field(), std::move(v.num), std::move(v.den));
}

FieldElement FieldModel::zero() const { return from_int(0); }
FieldElement FieldModel::one() const { return from_int(1); }

FieldElement FieldModel::from_int(long v) const {
  if (is_padic()) return FieldElement(*this, mpq_class(v));
  return FieldElement(*this, RatFunc{poly::constant(gf_->from_int(v)), poly::constant(1)});
}

FieldElement FieldModel::uniformizer() const { return pi_pow(1); }

FieldElement FieldModel::pi_pow(long n) const {
  if (is_padic()) {
    mpz_class pw;
    mpz_ui_pow_ui(pw.get_mpz_t(), p_, static_cast<unsigned long>(n < 0 ? -n : n));
    return FieldElement(*this, n >= 0 ? mpq_class(pw) : mpq_class(mpz_class(1), pw));
  }
  if (n >= 0) return FieldElement(*this, RatFunc{poly::monomial(1, static_cast<int>(n)), poly::constant(1)});
  return FieldElement(*this, RatFunc{poly::constant(1), poly::monomial(1, static_cast<int>(-n))});
}

FieldElement FieldModel::lift_digit(GfElem c) const {
  if (c >= q_) throw std::out_of_range("residue digit out of range");
  if (is_padic()) return FieldElement(*this, mpq_class(static_cast<unsigned long>(c)));
  return FieldElement(*this, RatFunc{poly::constant(c), poly::constant(1)});
}

FieldElement FieldModel::residue_representative(std::uint64_t index, int m) const {
  if (is_padic()) return FieldElement(*this, mpq_class(mpz_class(static_cast<unsigned long>(index))));
  GfPoly num;
  num.c.resize(m, 0);
  for (int j = 0; j < m; ++j) {
    num.c[j] = static_cast<GfElem>(index % q_);
    index /= q_;
  }
  num.trim();
  return FieldElement(*this, RatFunc{num, poly::constant(1)});
}

std::vector<FieldElement> FieldModel::enumerate_residues(int m) const {
  if (m < 1) throw std::invalid_argument("enumerate_residues needs m >= 1");
  std::uint64_t count = 1;
  for (int i = 0; i < m; ++i) {
    count *= q_;
    if (count > (1u << 24)) throw std::length_error("too many residues requested");
  }
  std::vector<FieldElement> out;
  out.reserve(count);
  for (std::uint64_t i = 0; i < count; ++i) out.push_back(residue_representative(i, m));
  return out;
}

bool FieldElement::is_zero() const {
  if (std::holds_alternative<mpq_class>(v_)) return std::get<mpq_class>(v_) == 0;
  return std::get<RatFunc>(v_).num.is_zero();
}

bool FieldElement::is_one() const {
  if (std::holds_alternative<mpq_class>(v_)) return std::get<mpq_class>(v_) == 1;
  const auto& r = std::get<RatFunc>(v_);
  return r.num == poly::constant(1) && r.den == poly::constant(1);
}

long FieldElement::valuation() const {
  if (is_zero()) return kInfiniteValuation;
  if (model_->is_padic()) {
    const auto& q = rational();
    return padic_val(q.get_num(), model_->characteristic_of_residue()) -
           padic_val(q.get_den(), model_->characteristic_of_residue());
  }
  const auto& r = ratfunc();
  return r.num.low_order() - r.den.low_order();
}

FieldElement FieldElement::operator-() const {
  if (model_->is_padic()) return FieldElement(*model_, mpq_class(-rational()));
  const auto& r = ratfunc();
  FieldElement out;
  out.model_ = model_;
  out.v_ = RatFunc{poly::neg(model_->residue_field(), r.num), r.den};
  return out;
}

FieldElement FieldElement::inverse() const {
  if (is_zero()) throw std::domain_error("inverse of zero");
  if (model_->is_padic()) return FieldElement(*model_, mpq_class(1 / rational()));
  const auto& r = ratfunc();
  return FieldElement(*model_, RatFunc{r.den, r.num});
}

FieldElement operator+(const FieldElement& a, const FieldElement& b) {
  require_same(a, b);
  const FieldModel& m = a.model();
  if (m.is_padic()) return FieldElement(m, mpq_class(a.rational() + b.rational()));
  const auto& F = m.residue_field();
  const auto& x = a.ratfunc();
  const auto& y = b.ratfunc();
  if (x.num.is_zero()) return b;
  if (y.num.is_zero()) return a;
  if (x.den == y.den) return FieldElement(m, RatFunc{poly::add(F, x.num, y.num), x.den});
  return FieldElement(m, RatFunc{poly::add(F, poly::mul(F, x.num, y.den), poly::mul(F, y.num, x.den)),
                                 poly::mul(F, x.den, y.den)});
}

FieldElement operator-(const FieldElement& a, const FieldElement& b) { return a + (-b); }

FieldElement operator*(const FieldElement& a, const FieldElement& b) {
  require_same(a, b);
  const FieldModel& m = a.model();
  if (m.is_padic()) return FieldElement(m, mpq_class(a.rational() * b.rational()));
  const auto& F = m.residue_field();
  const auto& x = a.ratfunc();
  const auto& y = b.ratfunc();
  if (x.num.is_zero()) return a;
  if (y.num.is_zero()) return b;
  return FieldElement(m, RatFunc{poly::mul(F, x.num, y.num), poly::mul(F, x.den, y.den)});
}

FieldElement operator/(const FieldElement& a, const FieldElement& b) { return a * b.inverse(); }

bool operator==(const FieldElement& a, const FieldElement& b) {
  if (a.model_ != b.model_) return false;
  if (a.model_ == nullptr) return true;
  if (a.model_->is_padic()) return a.rational() == b.rational();
  return a.ratfunc() == b.ratfunc();
}

GfElem FieldElement::residue() const {
  long v = valuation();
  if (v < 0) throw std::domain_error("residue of a non-integral element");
  if (v > 0) return 0;
  if (model_->is_padic()) {
    return static_cast<GfElem>(padic_mod(rational(), model_->characteristic_of_residue(), 1).get_ui());
  }
  return series(model_->residue_field(), ratfunc(), 1)[0];
}

std::vector<GfElem> FieldElement::digits(int n) const {
  if (valuation() < 0) throw std::domain_error("digits of a non-integral element");
  if (model_->is_padic()) {
    std::uint32_t p = model_->characteristic_of_residue();
    mpz_class r = padic_mod(rational(), p, n);
    std::vector<GfElem> out(n, 0);
    for (int i = 0; i < n; ++i) {
      out[i] = static_cast<GfElem>(mpz_class(r % p).get_ui());
      r /= p;
    }
    return out;
  }
  return series(model_->residue_field(), ratfunc(), n);
}

FieldElement FieldElement::reduce_mod(int a) const {
  if (a <= 0) return model_->zero();
  if (model_->is_padic())
    return FieldElement(*model_, mpq_class(padic_mod(rational(), model_->characteristic_of_residue(), a)));
  GfPoly num;
  num.c = digits(a);
  num.trim();
  return FieldElement(*model_, RatFunc{num, poly::constant(1)});
}

namespace {

std::string poly_string(const GaloisField& F, const GfPoly& p, const std::string& var) {
  if (p.is_zero()) return "0";
  std::string out;
  for (std::size_t i = 0; i < p.c.size(); ++i) {
    if (p.c[i] == 0) continue;
    std::string coef = F.to_string(p.c[i]);
    std::string term;
    if (i == 0) {
      term = coef;
    } else {
      std::string mono = var;
      if (i > 1) mono += "^" + std::to_string(i);
      if (coef == "1") {
        term = mono;
      } else if (coef.find('+') != std::string::npos) {
        term = "(" + coef + ")*" + mono;
      } else {
        term = coef + "*" + mono;
      }
    }
    if (!out.empty()) out += "+";
    out += term;
  }
  return out;
}

} // namespace

std::string FieldElement::to_string() const {
  if (model_ == nullptr) return "<unset>";
  if (model_->is_padic()) return rational().get_str();
  const auto& r = ratfunc();
  const auto& F = model_->residue_field();
  std::string num = poly_string(F, r.num, model_->variable());
  if (r.den == poly::constant(1)) return num;
  return "(" + num + ")/(" + poly_string(F, r.den, model_->variable()) + ")";
}

bool canonical_less(const FieldElement& a, const FieldElement& b) {
  if (a.model_ != b.model_) return a.model_ < b.model_;
  if (a.model_->is_padic()) {
    const auto& x = a.rational();
    const auto& y = b.rational();
    if (x.get_den() != y.get_den()) return x.get_den() < y.get_den();
    return x.get_num() < y.get_num();
  }
  const auto& x = a.ratfunc();
  const auto& y = b.ratfunc();
  if (x.den != y.den) return x.den < y.den;
  return x.num < y.num;
}

// ---------------------------------------------------------------------------
// text syntax

namespace {

class Parser {
public:
  Parser(const FieldModel& m, std::string_view s) : m_(m), s_(s) {}

  FieldElement run() {
    FieldElement v = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected trailing input");
    return v;
  }

private:
  [[noreturn]] void fail(const std::string& why) {
    throw std::invalid_argument("cannot parse '" + std::string(s_) + "' in " + m_.name() + ": " + why);
  }
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool eat(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  FieldElement expr() {
    FieldElement v = term();
    for (;;) {
      if (eat('+')) v = v + term();
      else if (eat('-')) v = v - term();
      else return v;
    }
  }
  FieldElement term() {
    FieldElement v = unary();
    for (;;) {
      if (eat('*')) v = v * unary();
      else if (eat('/')) {
        FieldElement d = unary();
        if (d.is_zero()) fail("division by zero");
        v = v / d;
      } else return v;
    }
  }
  FieldElement unary() {
    if (eat('-')) return -unary();
    if (eat('+')) return unary();
    return power();
  }
  FieldElement power() {
    FieldElement b = atom();
    if (eat('^')) {
      skip();
      bool negative = eat('-');
      long e = integer();
      FieldElement r = m_.one();
      for (long i = 0; i < e; ++i) r = r * b;
      if (negative) {
        if (r.is_zero()) fail("negative power of zero");
        r = r.inverse();
      }
      return r;
    }
    return b;
  }
  long integer() {
    skip();
    std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (start == pos_) fail("expected an integer");
    return std::stol(std::string(s_.substr(start, pos_ - start)));
  }
  FieldElement atom() {
    skip();
    if (eat('(')) {
      FieldElement v = expr();
      if (!eat(')')) fail("missing ')'");
      return v;
    }
    if (pos_ >= s_.size()) fail("unexpected end of input");
    char c = s_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      mpz_class z(std::string(s_.substr(start, pos_ - start)));
      if (m_.is_padic()) return FieldElement(m_, mpq_class(z));
      mpz_class r = z % m_.characteristic_of_residue();
      return m_.from_int(static_cast<long>(r.get_si()));
    }
    ++pos_;
    if (m_.is_laurent()) {
      const auto* ext = m_.extension();
      if (c == 'w') {
        if (m_.residue_field().degree() == 1) fail("'w' is not defined over a prime residue field");
        return FieldElement(m_, RatFunc{poly::constant(m_.residue_field().generator()), poly::constant(1)});
      }
      if (c == 's' && ext) return m_.pi_pow(1);
      if (c == 't') return m_.pi_pow(ext ? ext->e : 1);
    }
    fail(std::string("unexpected character '") + c + "'");
  }

  const FieldModel& m_;
  std::string_view s_;
  std::size_t pos_ = 0;
};

} // namespace

FieldElement FieldModel::parse_element(std::string_view text) const { return Parser(*this, text).run(); }

// ---------------------------------------------------------------------------
// extensions

namespace {

// inverse of a square matrix over F_p (Gauss-Jordan); throws if singular
std::vector<std::vector<std::uint32_t>> invert_mod_p(std::vector<std::vector<std::uint32_t>> a, std::uint32_t p) {
  std::size_t n = a.size();
  std::vector<std::vector<std::uint32_t>> inv(n, std::vector<std::uint32_t>(n, 0));
  for (std::size_t i = 0; i < n; ++i) inv[i][i] = 1;
  auto inv_scalar = [p](std::uint32_t x) {
    for (std::uint32_t y = 1; y < p; ++y)
      if (x * y % p == 1) return y;
    throw std::domain_error("not invertible mod p");
  };
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    while (piv < n && a[piv][col] == 0) ++piv;
    if (piv == n) throw std::logic_error("singular basis matrix over F_p");
    std::swap(a[piv], a[col]);
    std::swap(inv[piv], inv[col]);
    std::uint32_t s = inv_scalar(a[col][col]);
    for (std::size_t j = 0; j < n; ++j) {
      a[col][j] = a[col][j] * s % p;
      inv[col][j] = inv[col][j] * s % p;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col || a[r][col] == 0) continue;
      std::uint32_t f = a[r][col];
      for (std::size_t j = 0; j < n; ++j) {
        a[r][j] = (a[r][j] + p * p - f * a[col][j] % p) % p;
        inv[r][j] = (inv[r][j] + p * p - f * inv[col][j] % p) % p;
      }
    }
  }
  return inv;
}

} // namespace

ExtensionDescriptor ExtensionDescriptor::make(const FieldModel& base, int e, int f) {
  if (!base.is_laurent()) throw std::invalid_argument("extensions are only supported for laurent models");
  if (base.extension()) throw std::invalid_argument("extension towers are not supported");
  if (e < 1 || f < 1) throw std::invalid_argument("ramification index and residue degree must be >= 1");
  const GaloisField& Fq = base.residue_field();
  std::string key = base.name() + "[e=" + std::to_string(e) + ",f=" + std::to_string(f) + "]";
  const FieldModel& ext = ModelRegistry::instance().get(key, [&](FieldModel& m) {
    std::uint32_t p = Fq.characteristic();
    std::uint32_t mdeg = Fq.degree();
    ModelRegistry::set_laurent(m, p, mdeg * static_cast<std::uint32_t>(f), e > 1 ? "s" : "t");
    const GaloisField& Fe = m.residue_field();
    auto data = std::make_unique<ExtensionData>();
    data->base = &base;
    data->e = e;
    data->f = f;
    // root of the base modulus inside the extension residue field
    GfElem root = 1;
    if (mdeg > 1) {
      const auto& g = Fq.modulus();
      bool found = false;
      for (GfElem z = 0; z < Fe.size() && !found; ++z) {
        GfElem acc = 0;
        for (std::size_t i = g.size(); i-- > 0;) acc = Fe.add(Fe.mul(acc, z), g[i]);
        if (acc == 0) {
          root = z;
          found = true;
        }
      }
      if (!found) throw std::logic_error("base modulus has no root in the extension residue field");
    }
    data->generator_image = root;
    data->residue_embedding.resize(Fq.size());
    for (GfElem c = 0; c < Fq.size(); ++c) {
      auto d = Fq.digits(c);
      GfElem acc = 0;
      for (std::size_t i = d.size(); i-- > 0;) acc = Fe.add(Fe.mul(acc, mdeg > 1 ? root : 1), d[i]);
      if (mdeg == 1) acc = d[0];
      data->residue_embedding[c] = acc;
    }
    // F_p-basis z^j w^a of the extension residue field, column a*mdeg + j
    std::uint32_t M = mdeg * static_cast<std::uint32_t>(f);
    std::vector<std::vector<std::uint32_t>> basis(M, std::vector<std::uint32_t>(M, 0));
    GfElem wpow = 1;
    for (int a = 0; a < f; ++a) {
      GfElem zpow = 1;
      for (std::uint32_t j = 0; j < mdeg; ++j) {
        auto dig = Fe.digits(Fe.mul(zpow, wpow));
        for (std::uint32_t r = 0; r < M; ++r) basis[r][a * mdeg + j] = dig[r];
        zpow = Fe.mul(zpow, root);
      }
      wpow = Fe.mul(wpow, Fe.generator());
    }
    auto inv = invert_mod_p(basis, p);
    data->residue_coords.resize(Fe.size());
    for (GfElem c = 0; c < Fe.size(); ++c) {
      auto dig = Fe.digits(c);
      std::vector<GfElem> coords(f, 0);
      for (int a = 0; a < f; ++a) {
        std::vector<std::uint32_t> lam(mdeg, 0);
        for (std::uint32_t j = 0; j < mdeg; ++j) {
          std::uint64_t acc = 0;
          for (std::uint32_t r = 0; r < M; ++r) acc += std::uint64_t(inv[a * mdeg + j][r]) * dig[r];
          lam[j] = static_cast<std::uint32_t>(acc % p);
        }
        coords[a] = Fq.from_digits(lam);
      }
      data->residue_coords[c] = std::move(coords);
    }
    ModelRegistry::set_extension(m, std::move(data));
  });
  ExtensionDescriptor d;
  d.base_ = &base;
  d.ext_ = &ext;
  d.e_ = e;
  d.f_ = f;
  return d;
}

FieldElement ExtensionDescriptor::embed(const FieldElement& x) const {
  if (x.model_ptr() != base_) throw std::invalid_argument("embed: element is not from the base field");
  const auto& emb = ext_->extension()->residue_embedding;
  auto lift = [&](const GfPoly& p) {
    return poly::inflate(poly::map_coeffs(p, [&](GfElem c) { return emb[c]; }), e_);
  };
  const auto& r = x.ratfunc();
  return FieldElement(*ext_, RatFunc{lift(r.num), lift(r.den)});
}

std::vector<FieldElement> ExtensionDescriptor::coordinates(const FieldElement& x) const {
  if (x.model_ptr() != ext_) throw std::invalid_argument("coordinates: element is not from the extension");
  const auto& Fe = ext_->residue_field();
  const auto& Fq = base_->residue_field();
  const auto& rc = ext_->extension()->residue_coords;
  const int n = e_ * f_;
  // F_q[t]-coordinates of a polynomial in s over F_{q^f}
  auto poly_coords = [&](const GfPoly& P) {
    std::vector<GfPoly> out(n);
    for (std::size_t deg = 0; deg < P.c.size(); ++deg) {
      if (P.c[deg] == 0) continue;
      int k = static_cast<int>(deg) / e_;
      int b = static_cast<int>(deg) % e_;
      const auto& g = rc[P.c[deg]];
      for (int a = 0; a < f_; ++a)
        if (g[a] != 0) out[a * e_ + b] = poly::add(Fq, out[a * e_ + b], poly::monomial(g[a], k));
    }
    std::vector<FieldElement> el;
    for (auto& p : out) el.emplace_back(*base_, RatFunc{p, poly::constant(1)});
    return el;
  };
  const auto& r = x.ratfunc();
  // columns: coordinates of den * w^a * s^b; right side: coordinates of num
  std::vector<std::vector<FieldElement>> A(n, std::vector<FieldElement>(n + 1));
  GfPoly wpow = poly::constant(1);
  for (int a = 0; a < f_; ++a) {
    for (int b = 0; b < e_; ++b) {
      auto col = poly_coords(poly::shift(poly::mul(Fe, r.den, wpow), b));
      for (int i = 0; i < n; ++i) A[i][a * e_ + b] = col[i];
    }
    wpow = poly::scale(Fe, wpow, Fe.generator());
  }
  auto rhs = poly_coords(r.num);
  for (int i = 0; i < n; ++i) A[i][n] = rhs[i];
  // Gauss-Jordan over the base field
  for (int col = 0; col < n; ++col) {
    int piv = col;
    while (piv < n && A[piv][col].is_zero()) ++piv;
    if (piv == n) throw std::logic_error("coordinate system is singular");
    std::swap(A[piv], A[col]);
    FieldElement s = A[col][col].inverse();
    for (int j = col; j <= n; ++j) A[col][j] = A[col][j] * s;
    for (int i = 0; i < n; ++i) {
      if (i == col || A[i][col].is_zero()) continue;
      FieldElement fct = A[i][col];
      for (int j = col; j <= n; ++j) A[i][j] = A[i][j] - fct * A[col][j];
    }
  }
  std::vector<FieldElement> out;
  out.reserve(n);
  for (int i = 0; i < n; ++i) out.push_back(A[i][n]);
  return out;
}

std::optional<FieldElement> ExtensionDescriptor::restrict(const FieldElement& x) const {
  auto c = coordinates(x);
  for (std::size_t i = 1; i < c.size(); ++i)
    if (!c[i].is_zero()) return std::nullopt;
  return c[0];
}

} // namespace bt
