#include "bt/drinfeld.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <sstream>

namespace bt {

// ---------------------------------------------------------------------------
// absolute values

AbsValue AbsValue::of_zero() {
  AbsValue a;
  a.zero = true;
  return a;
}

AbsValue AbsValue::from_valuation(long v, int e) {
  if (v == kInfiniteValuation) return of_zero();
  AbsValue a;
  a.exponent = mpq_class(v, e);
  a.exponent.canonicalize();
  return a;
}

std::string AbsValue::to_string() const { return zero ? "inf" : exponent.get_str(); }

bool operator==(const AbsValue& a, const AbsValue& b) {
  if (a.zero || b.zero) return a.zero == b.zero;
  return a.exponent == b.exponent;
}

AbsValue max_abs(const AbsValue& a, const AbsValue& b) {
  if (a.zero) return b;
  if (b.zero) return a;
  return a.exponent <= b.exponent ? a : b;
}

bool abs_le(const AbsValue& a, const AbsValue& b) {
  if (a.zero) return true;
  if (b.zero) return false;
  return a.exponent >= b.exponent;
}

// ---------------------------------------------------------------------------
// polynomials

std::size_t VariableLayout::count() const {
  std::size_t n = 0;
  for (int d : dims) n += d + 1;
  return n;
}

std::size_t VariableLayout::index(int factor, int j) const {
  if (factor < 0 || static_cast<std::size_t>(factor) >= dims.size() || j < 0 || j > dims[factor])
    throw std::invalid_argument("variable T_{" + std::to_string(factor + 1) + "," + std::to_string(j) + "} out of range");
  std::size_t n = 0;
  for (int i = 0; i < factor; ++i) n += dims[i] + 1;
  return n + j;
}

Polynomial::Polynomial(const FieldModel& k, VariableLayout layout) : k_(&k), layout_(std::move(layout)) {}

Polynomial Polynomial::constant(const FieldModel& k, VariableLayout layout, const FieldElement& c) {
  Polynomial p(k, layout);
  p.add_term(Exponents(p.layout_.count(), 0), c);
  return p;
}

Polynomial Polynomial::variable(const FieldModel& k, VariableLayout layout, int factor, int j) {
  Polynomial p(k, layout);
  Exponents n(p.layout_.count(), 0);
  n[p.layout_.index(factor, j)] = 1;
  p.add_term(n, k.one());
  return p;
}

void Polynomial::add_term(const Exponents& n, const FieldElement& c) {
  if (c.is_zero()) return;
  auto it = terms_.find(n);
  if (it == terms_.end()) {
    terms_.emplace(n, c);
    return;
  }
  it->second += c;
  if (it->second.is_zero()) terms_.erase(it);
}

namespace {

void check_compatible(const Polynomial& a, const Polynomial& b) {
  if (&a.field() != &b.field() || !(a.layout() == b.layout())) throw std::invalid_argument("polynomials over different rings");
}

} // namespace

Polynomial operator+(const Polynomial& a, const Polynomial& b) {
  check_compatible(a, b);
  Polynomial r = a;
  for (const auto& [n, c] : b.terms_) r.add_term(n, c);
  return r;
}

Polynomial operator-(const Polynomial& a, const Polynomial& b) { return a + b.scaled(-b.field().one()); }

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  check_compatible(a, b);
  Polynomial r(a.field(), a.layout());
  for (const auto& [n, c] : a.terms_)
    for (const auto& [m, d] : b.terms_) {
      Polynomial::Exponents s = n;
      for (std::size_t i = 0; i < s.size(); ++i) s[i] += m[i];
      r.add_term(s, c * d);
    }
  return r;
}

Polynomial Polynomial::scaled(const FieldElement& c) const {
  Polynomial r(*k_, layout_);
  for (const auto& [n, a] : terms_) r.add_term(n, a * c);
  return r;
}

Polynomial Polynomial::pow(int n) const {
  if (n < 0) throw std::invalid_argument("negative polynomial power");
  Polynomial r = constant(*k_, layout_, k_->one());
  for (int i = 0; i < n; ++i) r = r * *this;
  return r;
}

Polynomial Polynomial::dehomogenized() const {
  Polynomial r(*k_, layout_);
  for (const auto& [n, c] : terms_) {
    Exponents m = n;
    for (std::size_t i = 0; i < layout_.dims.size(); ++i) m[layout_.index(static_cast<int>(i), 0)] = 0;
    r.add_term(m, c);
  }
  return r;
}

FieldElement Polynomial::evaluate(const std::vector<FieldElement>& values) const {
  if (values.size() != layout_.count()) throw std::invalid_argument("evaluation point has the wrong number of coordinates");
  FieldElement sum = k_->zero();
  for (const auto& [n, c] : terms_) {
    FieldElement term = c;
    for (std::size_t i = 0; i < n.size(); ++i)
      for (int k = 0; k < n[i]; ++k) term *= values[i];
    sum += term;
  }
  return sum;
}

std::string Polynomial::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [n, c] : terms_) {
    if (!first) os << " + ";
    first = false;
    os << "(" << c.to_string() << ")";
    std::size_t v = 0;
    for (std::size_t i = 0; i < layout_.dims.size(); ++i)
      for (int j = 0; j <= layout_.dims[i]; ++j, ++v)
        if (n[v] > 0) {
          os << "*T_{" << i + 1 << "," << j << "}";
          if (n[v] > 1) os << "^" << n[v];
        }
  }
  return os.str();
}

namespace {

class PolyParser {
public:
  PolyParser(std::string_view s, const FieldModel& k, const VariableLayout& layout) : s_(s), k_(k), layout_(layout) {}

  Polynomial run() {
    Polynomial p = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected trailing input");
    return p;
  }

private:
  [[noreturn]] void fail(const std::string& why) {
    throw std::invalid_argument("cannot parse polynomial '" + std::string(s_) + "': " + why);
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
  Polynomial expr() {
    Polynomial v = term();
    for (;;) {
      if (eat('+')) v = v + term();
      else if (eat('-')) v = v - term();
      else return v;
    }
  }
  Polynomial term() {
    Polynomial v = unary();
    for (;;) {
      if (eat('*')) v = v * unary();
      else if (eat('/')) {
        Polynomial d = unary();
        if (d.terms().size() != 1 || d.terms().begin()->first != Polynomial::Exponents(layout_.count(), 0))
          fail("division by a non-constant");
        v = v.scaled(d.terms().begin()->second.inverse());
      } else return v;
    }
  }
  Polynomial unary() {
    if (eat('-')) return unary().scaled(-k_.one());
    if (eat('+')) return unary();
    Polynomial b = atom();
    if (eat('^')) {
      skip();
      std::size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      if (start == pos_) fail("expected a nonnegative integer exponent");
      b = b.pow(std::stoi(std::string(s_.substr(start, pos_ - start))));
    }
    return b;
  }
  int integer() {
    skip();
    std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (start == pos_) fail("expected an index");
    return std::stoi(std::string(s_.substr(start, pos_ - start)));
  }
  Polynomial atom() {
    skip();
    if (eat('(')) {
      Polynomial v = expr();
      if (!eat(')')) fail("missing ')'");
      return v;
    }
    if (pos_ >= s_.size()) fail("unexpected end of input");
    char c = s_[pos_];
    if ((c == 't' || c == 'T') && pos_ + 1 < s_.size() && s_[pos_ + 1] == '_') {
      pos_ += 2;
      if (!eat('{')) fail("expected '{' after the variable name");
      int i = integer();
      if (!eat(',')) fail("expected ','");
      int j = integer();
      if (!eat('}')) fail("expected '}'");
      if (i < 1) fail("factor indices start at 1");
      if (c == 't' && j == 0) return Polynomial::constant(k_, layout_, k_.one());
      return Polynomial::variable(k_, layout_, i - 1, j);
    }
    std::size_t start = pos_;
    if (std::isdigit(static_cast<unsigned char>(c)))
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    else
      ++pos_;
    return Polynomial::constant(k_, layout_, k_.parse_element(s_.substr(start, pos_ - start)));
  }

  std::string_view s_;
  const FieldModel& k_;
  const VariableLayout& layout_;
  std::size_t pos_ = 0;
};

} // namespace

Polynomial parse_polynomial(std::string_view text, const FieldModel& k, const VariableLayout& layout) {
  return PolyParser(text, k, layout).run();
}

// ---------------------------------------------------------------------------
// rigid points

bool drinfeld_condition(const ExtensionDescriptor& ext, const std::vector<std::vector<FieldElement>>& coords) {
  const auto& k = ext.base();
  for (const auto& x : coords) {
    std::size_t n = x.size() + 1;
    Matrix m(k, n, ext.degree());
    auto put = [&](std::size_t row, const FieldElement& v) {
      auto c = ext.coordinates(v);
      for (std::size_t j = 0; j < c.size(); ++j) m(row, j) = c[j];
    };
    put(0, ext.field().one());
    for (std::size_t j = 0; j < x.size(); ++j) put(j + 1, x[j]);
    if (n > static_cast<std::size_t>(ext.degree()) || m.rank() != n) return false;
  }
  return true;
}

RigidPoint RigidPoint::make(const ExtensionDescriptor& ext, std::vector<std::vector<FieldElement>> coords) {
  if (coords.empty()) throw std::invalid_argument("rigid point needs at least one factor");
  for (const auto& x : coords) {
    if (x.empty()) throw std::invalid_argument("every factor needs d >= 1 coordinates");
    for (const auto& v : x)
      if (v.model_ptr() != &ext.field()) throw std::invalid_argument("rigid point coordinates must lie in the extension field");
  }
  if (!drinfeld_condition(ext, coords))
    throw std::invalid_argument("coordinates lie on a k-rational hyperplane (1, x_1, .., x_d dependent over k)");
  return RigidPoint{ext, std::move(coords)};
}

VariableLayout RigidPoint::layout() const {
  VariableLayout l;
  for (const auto& x : coords) l.dims.push_back(static_cast<int>(x.size()));
  return l;
}

FieldElement RigidPoint::value(int factor, int j) const {
  return j == 0 ? ext.field().one() : coords.at(factor).at(j - 1);
}

std::vector<FieldElement> RigidPoint::values() const {
  std::vector<FieldElement> v;
  for (std::size_t i = 0; i < coords.size(); ++i)
    for (std::size_t j = 0; j <= coords[i].size(); ++j) v.push_back(value(static_cast<int>(i), static_cast<int>(j)));
  return v;
}

namespace {

Polynomial over_extension(const ExtensionDescriptor& ext, const Polynomial& p) {
  if (&p.field() == &ext.field()) return p;
  if (&p.field() != &ext.base()) throw std::invalid_argument("polynomial is neither over the base nor over the extension");
  Polynomial r(ext.field(), p.layout());
  for (const auto& [n, c] : p.terms()) r.add_term(n, ext.embed(c));
  return r;
}

} // namespace

AbsValue eval_abs(const RigidPoint& x, const Polynomial& p) {
  if (!(p.layout() == x.layout())) throw std::invalid_argument("polynomial variables do not match the point");
  auto q = over_extension(x.ext, p);
  return AbsValue::from_valuation(q.evaluate(x.values()).valuation(), x.ext.ramification());
}

// ---------------------------------------------------------------------------
// unimodular enumeration

std::uint64_t unimodular_count(std::uint64_t q, int d, int depth) {
  std::uint64_t total = 0;
  for (int m = 0; m <= d; ++m) {
    std::uint64_t c = 1;
    int free = (depth - 1) * m + depth * (d - m);
    for (int i = 0; i < free; ++i) {
      if (c > UINT64_MAX / q) return UINT64_MAX;
      c *= q;
    }
    total += c;
  }
  return total;
}

namespace {

using Digits = std::vector<std::vector<GfElem>>;

// Vectors alpha modulo pi^depth whose first unit coordinate is 1, as digit
// tables alpha[j][a] (coefficient of pi^a); visit returns false to stop.
bool for_each_unimodular(std::uint64_t q, int d, int depth, const std::function<bool(const Digits&)>& visit) {
  for (int m = 0; m <= d; ++m) {
    Digits alpha(d + 1, std::vector<GfElem>(depth, 0));
    alpha[m][0] = 1;
    std::vector<GfElem*> free;
    for (int j = 0; j <= d; ++j) {
      if (j == m) continue;
      for (int a = j < m ? 1 : 0; a < depth; ++a) free.push_back(&alpha[j][a]);
    }
    for (;;) {
      if (!visit(alpha)) return false;
      std::size_t k = 0;
      while (k < free.size() && ++*free[k] == q) *free[k++] = 0;
      if (k == free.size()) break;
    }
  }
  return true;
}

long ceil_div(long a, long b) { return a >= 0 ? (a + b - 1) / b : -((-a) / b); }

// Valuation of sum_j alpha_j u_j for alpha with pi-adic digits in the base,
// in the extension normalization, capped at `thr`.
class LinearEvaluator {
public:
  LinearEvaluator(const ExtensionDescriptor& ext, const std::vector<FieldElement>& u, int depth, long thr)
      : F_(ext.base().residue_field()), e_(ext.ramification()), depth_(depth), thr_(thr) {
    const auto& k = ext.base();
    std::vector<std::vector<FieldElement>> c;
    low_ = kInfiniteValuation;
    for (const auto& x : u) {
      c.push_back(ext.coordinates(x));
      for (const auto& y : c.back())
        if (!y.is_zero()) low_ = std::min(low_, y.valuation());
    }
    if (low_ == kInfiniteValuation) low_ = 0;
    std::size_t cols = ext.degree();
    digits_.assign(cols, {});
    for (std::size_t col = 0; col < cols; ++col) {
      long b = static_cast<long>(col % e_);
      long len = ceil_div(thr - b, e_) - low_;
      if (len <= 0) continue;
      for (std::size_t j = 0; j < u.size(); ++j) {
        const auto& y = c[j][col];
        if (y.is_zero())
          digits_[col].emplace_back(len, 0);
        else
          digits_[col].push_back((y * k.pi_pow(-low_)).digits(static_cast<int>(len)));
      }
    }
  }

  long value(const Digits& alpha) const {
    long best = thr_;
    std::vector<GfElem> y;
    for (std::size_t col = 0; col < digits_.size(); ++col) {
      const auto& cd = digits_[col];
      if (cd.empty()) continue;
      std::size_t len = cd[0].size();
      y.assign(len, 0);
      for (std::size_t j = 0; j < cd.size(); ++j)
        for (int a = 0; a < depth_ && static_cast<std::size_t>(a) < len; ++a) {
          GfElem x = alpha[j][a];
          if (x == 0) continue;
          for (std::size_t r = a; r < len; ++r) y[r] = F_.add(y[r], F_.mul(x, cd[j][r - a]));
        }
      for (std::size_t r = 0; r < len; ++r)
        if (y[r] != 0) {
          best = std::min(best, e_ * (low_ + static_cast<long>(r)) + static_cast<long>(col % e_));
          break;
        }
    }
    return best;
  }

private:
  const GaloisField& F_;
  long e_;
  int depth_;
  long thr_;
  long low_;
  std::vector<std::vector<std::vector<GfElem>>> digits_;
};

std::vector<FieldElement> factor_values(const RigidPoint& x, int i) {
  std::vector<FieldElement> u;
  for (std::size_t j = 0; j <= x.coords.at(i).size(); ++j) u.push_back(x.value(i, static_cast<int>(j)));
  return u;
}

long min_valuation(const std::vector<FieldElement>& u) {
  long m = kInfiniteValuation;
  for (const auto& v : u) m = std::min(m, v.valuation());
  return m;
}

void check_budget(std::uint64_t need, const OmegaOptions& opt) {
  if (need > opt.budget)
    throw BudgetExceeded("unimodular enumeration needs " + std::to_string(need) + " vectors, budget is " + std::to_string(opt.budget));
}

} // namespace

bool omega_membership(const RigidPoint& x, int n, bool closed, const OmegaOptions& opt) {
  if (n < 1) throw std::invalid_argument("omega depth must be positive");
  int e = x.ext.ramification();
  std::uint64_t q = x.ext.base().residue_size();
  int depth = closed ? n + 1 : n;
  std::uint64_t need = 0;
  for (const auto& c : x.coords) need += unimodular_count(q, static_cast<int>(c.size()), depth);
  check_budget(need, opt);
  for (std::size_t i = 0; i < x.coords.size(); ++i) {
    auto u = factor_values(x, static_cast<int>(i));
    long bound = static_cast<long>(e) * n + min_valuation(u);
    long thr = closed ? bound + 1 : bound;
    LinearEvaluator ev(x.ext, u, depth, thr);
    bool ok = for_each_unimodular(q, static_cast<int>(u.size()) - 1, depth, [&](const Digits& a) { return ev.value(a) < thr; });
    if (!ok) return false;
  }
  return true;
}

int omega_depth(const RigidPoint& x, int max_depth, const OmegaOptions& opt) {
  for (int n = 1; n <= max_depth; ++n)
    if (omega_membership(x, n, true, opt)) return n;
  return 0;
}

ApartmentPoint tau_coordinates(const RigidPoint& x) {
  ApartmentPoint p;
  int e = x.ext.ramification();
  for (std::size_t i = 0; i < x.coords.size(); ++i) {
    p.basis.push_back(Matrix::identity(x.ext.base(), x.coords[i].size() + 1));
    std::vector<mpq_class> ex;
    for (const auto& v : factor_values(x, static_cast<int>(i))) {
      mpq_class r(v.valuation(), e);
      r.canonicalize();
      ex.push_back(r);
    }
    p.exponents.push_back(std::move(ex));
  }
  return p;
}

// ---------------------------------------------------------------------------
// orthogonal bases

DiagonalBasis diagonalize_norm(const RigidPoint& x, int factor, int n, const OmegaOptions& opt) {
  if (factor < 0 || static_cast<std::size_t>(factor) >= x.coords.size()) throw std::invalid_argument("factor out of range");
  if (!omega_membership(x, n, true, opt)) {
    int retry = 0;
    try {
      for (int m = n + 1; m <= n + 4 && !retry; ++m)
        if (omega_membership(x, m, true, opt)) retry = m;
    } catch (const BudgetExceeded&) {
    }
    throw DepthInsufficient("point is not certified in X[" + std::to_string(n) + "]" +
                                (retry ? "; retry with depth " + std::to_string(retry) : ""),
                            retry);
  }
  const auto& k = x.ext.base();
  int e = x.ext.ramification();
  std::uint64_t q = k.residue_size();
  auto u = factor_values(x, factor);
  std::size_t dim = u.size();
  long bound = static_cast<long>(e) * n + min_valuation(u);

  Matrix B = Matrix::identity(k, dim);
  std::vector<FieldElement> w = u;
  for (std::size_t j = 1; j < dim; ++j) {
    for (;;) {
      long V = w[j].valuation();
      if (V > bound) throw std::logic_error("greedy reduction passed the certified bound");
      std::vector<std::size_t> cand;
      std::vector<long> shift;
      for (std::size_t i = 0; i < j; ++i) {
        long diff = V - w[i].valuation();
        if (diff % e == 0) {
          cand.push_back(i);
          shift.push_back(diff / e);
        }
      }
      bool improved = false;
      std::vector<GfElem> c(cand.size(), 0);
      for (;;) {
        std::size_t t = 0;
        while (t < c.size() && ++c[t] == q) c[t++] = 0;
        if (t == c.size()) break;
        FieldElement r = w[j];
        std::vector<FieldElement> beta;
        for (std::size_t a = 0; a < cand.size(); ++a) {
          beta.push_back(k.lift_digit(c[a]) * k.pi_pow(shift[a]));
          r -= x.ext.embed(beta.back()) * w[cand[a]];
        }
        if (r.valuation() > V) {
          for (std::size_t a = 0; a < cand.size(); ++a)
            for (std::size_t row = 0; row < dim; ++row) B(row, j) -= beta[a] * B(row, cand[a]);
          w[j] = r;
          improved = true;
          break;
        }
      }
      if (!improved) break;
    }
  }

  DiagonalBasis out;
  out.basis = B;
  out.depth = n;
  for (const auto& v : w) {
    mpq_class r(v.valuation(), e);
    r.canonicalize();
    out.exponents.push_back(r);
  }

  // |sum a_j w_j| = max_j |a_j||w_j| on every unimodular a modulo pi^{n+1}
  int depth = n + 1;
  check_budget(unimodular_count(q, static_cast<int>(dim) - 1, depth), opt);
  long top = 0;
  for (const auto& v : w) top = std::max(top, v.valuation());
  long thr = static_cast<long>(e) * depth + top + 1;
  LinearEvaluator ev(x.ext, w, depth, thr);
  bool ok = for_each_unimodular(q, static_cast<int>(dim) - 1, depth, [&](const Digits& a) {
    long rhs = kInfiniteValuation;
    for (std::size_t j = 0; j < dim; ++j)
      for (int t = 0; t < depth; ++t)
        if (a[j][t] != 0) {
          rhs = std::min(rhs, static_cast<long>(e) * t + w[j].valuation());
          break;
        }
    ++out.checked;
    return ev.value(a) == rhs;
  });
  if (!ok) throw std::logic_error("greedy basis failed the orthogonality check");
  return out;
}

// ---------------------------------------------------------------------------
// Gauss seminorms

GaussSeminorm GaussSeminorm::of_point(const ExtensionDescriptor& ext, const ApartmentPoint& p) {
  GaussSeminorm g;
  g.ext = ext;
  g.basis = p.basis;
  g.exponents = p.exponents;
  for (const auto& b : g.basis)
    if (b.model_ptr() != &ext.base()) throw std::invalid_argument("seminorm basis must be over the base field");
  return g;
}

VariableLayout GaussSeminorm::layout() const {
  VariableLayout l;
  for (const auto& b : basis) l.dims.push_back(static_cast<int>(b.rows()) - 1);
  return l;
}

AbsValue gauss_eval(const GaussSeminorm& b, const Polynomial& p) {
  auto layout = b.layout();
  if (!(p.layout() == layout)) throw std::invalid_argument("polynomial variables do not match the seminorm");
  const auto& K = b.ext.field();
  auto P = over_extension(b.ext, p);
  // T_{i,k} = sum_j (B_i^{-1})_{jk} e_{i,j}
  std::vector<Polynomial> image;
  for (std::size_t i = 0; i < b.basis.size(); ++i) {
    Matrix C = b.basis[i].inverse();
    for (std::size_t kk = 0; kk < C.rows(); ++kk) {
      Polynomial t(K, layout);
      for (std::size_t j = 0; j < C.rows(); ++j)
        t = t + Polynomial::variable(K, layout, static_cast<int>(i), static_cast<int>(j)).scaled(b.ext.embed(C(j, kk)));
      image.push_back(t);
    }
  }
  Polynomial sub(K, layout);
  for (const auto& [n, c] : P.terms()) {
    Polynomial term = Polynomial::constant(K, layout, c);
    for (std::size_t v = 0; v < n.size(); ++v)
      if (n[v]) term = term * image[v].pow(n[v]);
    sub = sub + term;
  }
  std::vector<mpq_class> r;
  for (const auto& ex : b.exponents) r.insert(r.end(), ex.begin(), ex.end());
  AbsValue best = AbsValue::of_zero();
  for (const auto& [n, c] : sub.terms()) {
    AbsValue v = AbsValue::from_valuation(c.valuation(), b.ext.ramification());
    for (std::size_t i = 0; i < n.size(); ++i) v.exponent += n[i] * r[i];
    best = max_abs(best, v);
  }
  return best;
}

ApartmentPoint tau_of(const GaussSeminorm& b) {
  ApartmentPoint p;
  p.basis = b.basis;
  auto layout = b.layout();
  const auto& k = b.ext.base();
  for (std::size_t i = 0; i < b.basis.size(); ++i) {
    std::vector<mpq_class> ex;
    for (std::size_t j = 0; j < b.basis[i].cols(); ++j) {
      Polynomial form(k, layout);
      for (std::size_t kk = 0; kk < b.basis[i].rows(); ++kk)
        form = form + Polynomial::variable(k, layout, static_cast<int>(i), static_cast<int>(kk)).scaled(b.basis[i](kk, j));
      ex.push_back(gauss_eval(b, form).exponent);
    }
    p.exponents.push_back(std::move(ex));
  }
  return p;
}

// ---------------------------------------------------------------------------
// deformation retraction

AbsValue deform(const RigidPoint& x, const TExponent& t, const Polynomial& p) {
  if (!t.infinite && t.value < 0) throw std::invalid_argument("t exponent must be nonnegative");
  auto P = over_extension(x.ext, p).dehomogenized();
  const auto& K = x.ext.field();
  auto layout = x.layout();
  std::size_t nv = layout.count();
  std::uint32_t ch = K.characteristic_of_residue();
  auto values = x.values();

  std::vector<int> maxdeg(nv, 0);
  for (const auto& [n, c] : P.terms())
    for (std::size_t v = 0; v < nv; ++v) maxdeg[v] = std::max(maxdeg[v], n[v]);

  AbsValue best = AbsValue::of_zero();
  std::vector<int> N(nv, 0);
  for (;;) {
    int total = 0;
    for (int a : N) total += a;
    if (total == 0 || !t.infinite) {
      FieldElement sum = K.zero();
      for (const auto& [I, a] : P.terms()) {
        bool ge = true;
        mpz_class binom = 1;
        for (std::size_t v = 0; v < nv && ge; ++v) {
          if (I[v] < N[v]) ge = false;
          else {
            mpz_class b;
            mpz_bin_uiui(b.get_mpz_t(), I[v], N[v]);
            binom *= b;
          }
        }
        if (!ge) continue;
        mpz_class r = binom % ch;
        if (r == 0) continue;
        FieldElement term = a * K.from_int(r.get_si());
        for (std::size_t v = 0; v < nv; ++v)
          for (int c = 0; c < I[v]; ++c) term *= values[v];
        sum += term;
      }
      AbsValue val = AbsValue::from_valuation(sum.valuation(), x.ext.ramification());
      if (!val.zero) val.exponent += total * (t.infinite ? mpq_class(0) : t.value);
      best = max_abs(best, val);
    }
    std::size_t k = 0;
    while (k < nv && ++N[k] > maxdeg[k]) N[k++] = 0;
    if (k == nv) break;
  }
  return best;
}

RigidPoint random_rigid_point(const ExtensionDescriptor& ext, const std::vector<int>& dims, Rng& rng, int spread) {
  const auto& K = ext.field();
  std::uint64_t Q = K.residue_size();
  long span = static_cast<long>(spread) * ext.ramification();
  for (int attempt = 0; attempt < 10000; ++attempt) {
    std::vector<std::vector<FieldElement>> coords;
    for (int d : dims) {
      std::vector<FieldElement> x;
      for (int j = 0; j < d; ++j) {
        FieldElement v = K.zero();
        for (long b = -span; b <= span; ++b) v += K.lift_digit(static_cast<GfElem>(rng.below(Q))) * K.pi_pow(b);
        x.push_back(v);
      }
      coords.push_back(std::move(x));
    }
    if (drinfeld_condition(ext, coords)) return RigidPoint{ext, std::move(coords)};
  }
  throw std::runtime_error("no valid random rigid point found");
}

RigidPoint random_diagonal_point(const ExtensionDescriptor& ext, const std::vector<int>& dims, Rng& rng) {
  const auto& K = ext.field();
  int e = ext.ramification(), f = ext.residue_degree();
  GfElem w = K.residue_field().generator();
  std::vector<std::vector<FieldElement>> coords;
  for (int d : dims) {
    if (d + 1 > e * f) throw std::invalid_argument("diagonal points need d+1 <= e*f");
    // cells (a, b) with a < f, b < e; cell 0 is taken by x_0 = 1
    std::vector<int> cells;
    for (int c = 1; c < e * f; ++c) cells.push_back(c);
    for (std::size_t k = cells.size(); k > 1; --k) std::swap(cells[k - 1], cells[rng.below(k)]);
    std::vector<FieldElement> x;
    for (int j = 0; j < d; ++j) {
      int a = cells[j] / e, b = cells[j] % e;
      long shift = rng.range(-1, 1) * e + b;
      FieldElement unit = K.lift_digit(K.residue_field().pow(w, a));
      x.push_back(unit * K.pi_pow(shift));
    }
    coords.push_back(std::move(x));
  }
  return RigidPoint::make(ext, std::move(coords));
}

std::vector<mpq_class> dual_coords(const ApartmentPoint& p, int factor) {
  const auto& x = p.exponents.at(factor);
  std::vector<mpq_class> s;
  for (const auto& v : x) s.push_back(x[0] - v);
  return s;
}

} // namespace bt
