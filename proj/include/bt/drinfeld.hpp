#pragma once

#include <gmpxx.h>

#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "bt/building.hpp"
#include "bt/random.hpp"

namespace bt {

/// |value| = |pi_k|^exponent for the base uniformizer; zero has exponent +inf.
/// Larger absolute values have smaller exponents.
struct AbsValue {
  bool zero = false;
  mpq_class exponent = 0;

  static AbsValue of_zero();
  /// From a valuation in the extension (s-adic) normalization.
  static AbsValue from_valuation(long v, int e);
  std::string to_string() const;
  friend bool operator==(const AbsValue& a, const AbsValue& b);
  /// max(|a|, |b|).
  friend AbsValue max_abs(const AbsValue& a, const AbsValue& b);
  /// |a| <= |b|.
  friend bool abs_le(const AbsValue& a, const AbsValue& b);
};

/// Homogeneous coordinates T_{i,0..d_i} of all factors, flattened.
struct VariableLayout {
  std::vector<int> dims;
  std::size_t count() const;
  std::size_t index(int factor, int j) const;
  friend bool operator==(const VariableLayout&, const VariableLayout&) = default;
};

/// Polynomial over a field model in the variables T_{i,j}; the affine
/// coordinate t_{i,j} is T_{i,j} read with T_{i,0} = 1.
class Polynomial {
public:
  using Exponents = std::vector<int>;

  Polynomial(const FieldModel& k, VariableLayout layout);
  static Polynomial constant(const FieldModel& k, VariableLayout layout, const FieldElement& c);
  static Polynomial variable(const FieldModel& k, VariableLayout layout, int factor, int j);

  const FieldModel& field() const { return *k_; }
  const VariableLayout& layout() const { return layout_; }
  const std::map<Exponents, FieldElement>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  void add_term(const Exponents& n, const FieldElement& c);

  friend Polynomial operator+(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator-(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
  Polynomial scaled(const FieldElement& c) const;
  Polynomial pow(int n) const;
  /// Substitutes T_{i,0} = 1.
  Polynomial dehomogenized() const;
  FieldElement evaluate(const std::vector<FieldElement>& values) const;
  std::string to_string() const;

private:
  const FieldModel* k_;
  VariableLayout layout_;
  std::map<Exponents, FieldElement> terms_;
};

/// Parses sums of products of field constants (element syntax), T_{i,j} and
/// t_{i,j} (factor i counted from 1), with + - * ^ and division by constants.
Polynomial parse_polynomial(std::string_view text, const FieldModel& k, const VariableLayout& layout);

/// Point of a product of Drinfeld spaces with coordinates in an extension K
/// of the common base field k.
struct RigidPoint {
  ExtensionDescriptor ext;
  /// Affine coordinates x_{i,1..d_i}; x_{i,0} = 1.
  std::vector<std::vector<FieldElement>> coords;

  /// Validates the Drinfeld condition; throws std::invalid_argument.
  static RigidPoint make(const ExtensionDescriptor& ext, std::vector<std::vector<FieldElement>> coords);
  VariableLayout layout() const;
  /// x_{i,j} for 0 <= j <= d_i.
  FieldElement value(int factor, int j) const;
  std::vector<FieldElement> values() const;
};

/// 1, x_{i,1}, .., x_{i,d_i} linearly independent over k for every factor.
bool drinfeld_condition(const ExtensionDescriptor& ext, const std::vector<std::vector<FieldElement>>& coords);

AbsValue eval_abs(const RigidPoint& x, const Polynomial& p);

/// Number of normalized unimodular vectors modulo pi^depth in dimension d+1.
std::uint64_t unimodular_count(std::uint64_t q, int d, int depth);

struct OmegaOptions {
  std::uint64_t budget = 1u << 22;
};

/// x in X[n] (closed) or X(n) (strict inequality). The strict predicate is
/// decided modulo pi^n, the closed one modulo pi^{n+1}.
bool omega_membership(const RigidPoint& x, int n, bool closed, const OmegaOptions& opt = {});
/// Smallest n <= max_depth with x in X[n]; 0 when none.
int omega_depth(const RigidPoint& x, int max_depth, const OmegaOptions& opt = {});

/// tau_Lambda(tau(x)): exponents v(x_{i,j}) in the standard basis.
ApartmentPoint tau_coordinates(const RigidPoint& x);

struct DepthInsufficient : std::runtime_error {
  /// Smallest depth with a certificate, or 0 when none was found.
  int retry_depth;
  DepthInsufficient(const std::string& w, int r) : std::runtime_error(w), retry_depth(r) {}
};

struct DiagonalBasis {
  /// Column j holds the coefficients of v_j in T_{i,0..d_i}.
  Matrix basis;
  std::vector<mpq_class> exponents;
  int depth = 0;
  /// Unimodular vectors checked modulo pi^{depth+1}.
  std::uint64_t checked = 0;
};

/// Basis of V_i orthogonal for the restricted seminorm, by greedy reduction.
DiagonalBasis diagonalize_norm(const RigidPoint& x, int factor, int n, const OmegaOptions& opt = {});

/// Seminorm j(b): max_N |a_N| prod rho(e_{i,j})^{n_{i,j}} in the basis e.
struct GaussSeminorm {
  ExtensionDescriptor ext;
  /// Column j holds the coefficients of e_{i,j} in T_{i,0..d_i}; over k.
  std::vector<Matrix> basis;
  std::vector<std::vector<mpq_class>> exponents;

  static GaussSeminorm of_point(const ExtensionDescriptor& ext, const ApartmentPoint& p);
  VariableLayout layout() const;
};

AbsValue gauss_eval(const GaussSeminorm& b, const Polynomial& p);
/// The apartment point read off from the values on the basis forms.
ApartmentPoint tau_of(const GaussSeminorm& b);

/// t = |pi_k|^value, or t = 0 when infinite.
struct TExponent {
  bool infinite = false;
  mpq_class value = 0;
};

/// rho_t(p) = max_N t^{|N|} |D_N(p)(x)| over the affine coordinates, with
/// D_N(sum a_I x^I) = sum_{I >= N} binom(I, N) a_I x^I.
AbsValue deform(const RigidPoint& x, const TExponent& t, const Polynomial& p);

/// Random point satisfying the Drinfeld condition; coordinates are sums of
/// s^b (|b| <= spread*e) with random residue coefficients.
RigidPoint random_rigid_point(const ExtensionDescriptor& ext, const std::vector<int>& dims, Rng& rng, int spread = 1);
/// Random point whose restricted norms are diagonal in the standard basis:
/// x_j = w^{a_j} s^{b_j} with distinct (a_j mod f, b_j mod e). Needs d+1 <= e*f.
RigidPoint random_diagonal_point(const ExtensionDescriptor& ext, const std::vector<int>& dims, Rng& rng);

/// s_{i,j} exponents of the dual norm: -x_j + x_0.
std::vector<mpq_class> dual_coords(const ApartmentPoint& p, int factor);

} // namespace bt
