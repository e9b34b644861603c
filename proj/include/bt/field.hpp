#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "bt/gf.hpp"

namespace bt {

/// Valuation of zero.
inline constexpr long kInfiniteValuation = std::numeric_limits<long>::max();

enum class FieldKind { PAdic, Laurent };

class FieldModel;
class FieldElement;

/// Extension data carried by a Laurent model built over another Laurent
/// model: F_q(t) inside F_{q^f}(s) with s^e = t.
struct ExtensionData {
  const FieldModel* base = nullptr;
  int e = 1;
  int f = 1;
  /// Image of the base residue generator in the extension residue field.
  GfElem generator_image = 0;
  /// residue_embedding[c] = image of base residue code c.
  std::vector<GfElem> residue_embedding;
  /// residue_coords[c] = F_q-coordinates (base codes) of extension residue c
  /// in the basis 1, w, .., w^{f-1}.
  std::vector<std::vector<GfElem>> residue_coords;
};

/// Exact global model of a non-Archimedean local field: Q with the p-adic
/// valuation, or F_q(t) with the t-adic valuation. Models are interned and
/// live for the whole program; compare them by address.
class FieldModel {
public:
  static const FieldModel& padic(std::uint32_t p);
  static const FieldModel& laurent(std::uint64_t q);
  /// "padic:p" or "laurent:q".
  static const FieldModel& parse(std::string_view spec);

  FieldModel(const FieldModel&) = delete;
  FieldModel& operator=(const FieldModel&) = delete;

  FieldKind kind() const { return kind_; }
  bool is_padic() const { return kind_ == FieldKind::PAdic; }
  bool is_laurent() const { return kind_ == FieldKind::Laurent; }
  std::uint32_t characteristic_of_residue() const { return p_; }
  /// Residue field size q.
  std::uint64_t residue_size() const { return q_; }
  const GaloisField& residue_field() const { return *gf_; }
  /// Name of the uniformizer variable in text syntax ("t" or "s").
  const std::string& variable() const { return var_; }
  const ExtensionData* extension() const { return ext_.get(); }
  std::string name() const;

  FieldElement zero() const;
  FieldElement one() const;
  FieldElement from_int(long v) const;
  FieldElement uniformizer() const;
  /// uniformizer^n for any integer n.
  FieldElement pi_pow(long n) const;
  /// Teichmuller-free lift of a residue code: the integer c (PAdic) or the
  /// constant polynomial c (Laurent).
  FieldElement lift_digit(GfElem c) const;
  /// Canonical representatives of O/pi^m O, ordered by the base-q index
  /// whose least significant digit is the coefficient of pi^0.
  std::vector<FieldElement> enumerate_residues(int m) const;
  /// Representative number `index` of that list.
  FieldElement residue_representative(std::uint64_t index, int m) const;
  /// Parses the textual element syntax.
  FieldElement parse_element(std::string_view text) const;

private:
  friend struct ModelRegistry;
  FieldModel() = default;

  FieldKind kind_ = FieldKind::PAdic;
  std::uint32_t p_ = 2;
  std::uint64_t q_ = 2;
  std::unique_ptr<GaloisField> gf_;
  std::string var_ = "t";
  std::unique_ptr<ExtensionData> ext_;

  friend class ExtensionDescriptor;
};

/// Rational function over the residue field of a Laurent model; den is
/// monic and coprime to num.
struct RatFunc {
  GfPoly num, den;
  friend bool operator==(const RatFunc&, const RatFunc&) = default;
};

/// Element of a FieldModel, stored in reduced canonical form.
class FieldElement {
public:
  FieldElement() = default;
  FieldElement(const FieldModel& m, mpq_class v);
  FieldElement(const FieldModel& m, RatFunc v);

  const FieldModel& model() const { return *model_; }
  const FieldModel* model_ptr() const { return model_; }
  bool is_zero() const;
  bool is_one() const;
  /// Normalized valuation; kInfiniteValuation for zero.
  long valuation() const;
  const mpq_class& rational() const { return std::get<mpq_class>(v_); }
  const RatFunc& ratfunc() const { return std::get<RatFunc>(v_); }

  FieldElement operator-() const;
  FieldElement inverse() const;
  friend FieldElement operator+(const FieldElement& a, const FieldElement& b);
  friend FieldElement operator-(const FieldElement& a, const FieldElement& b);
  friend FieldElement operator*(const FieldElement& a, const FieldElement& b);
  friend FieldElement operator/(const FieldElement& a, const FieldElement& b);
  FieldElement& operator+=(const FieldElement& b) { return *this = *this + b; }
  FieldElement& operator-=(const FieldElement& b) { return *this = *this - b; }
  FieldElement& operator*=(const FieldElement& b) { return *this = *this * b; }
  friend bool operator==(const FieldElement& a, const FieldElement& b);

  /// Residue class modulo the maximal ideal; requires valuation >= 0.
  GfElem residue() const;
  /// Canonical representative of this element modulo pi^a O (valuation >= 0).
  FieldElement reduce_mod(int a) const;
  /// pi-adic digits d_0..d_{n-1} of an integral element.
  std::vector<GfElem> digits(int n) const;

  std::string to_string() const;
  /// Total order used for deterministic sorting (not the field order).
  friend bool canonical_less(const FieldElement& a, const FieldElement& b);

private:
  const FieldModel* model_ = nullptr;
  std::variant<mpq_class, RatFunc> v_;
  friend class ExtensionDescriptor;
};

/// Equal-characteristic extension k = F_{q^f}(s), s^e = t, of a base
/// Laurent model F_q(t).
class ExtensionDescriptor {
public:
  /// Interns the extension model; throws for a PAdic or already-extended base.
  static ExtensionDescriptor make(const FieldModel& base, int e, int f);

  const FieldModel& base() const { return *base_; }
  const FieldModel& field() const { return *ext_; }
  int ramification() const { return e_; }
  int residue_degree() const { return f_; }
  int degree() const { return e_ * f_; }

  /// Ring embedding base -> extension: t -> s^e, F_q -> F_{q^f}.
  FieldElement embed(const FieldElement& x) const;
  /// Coordinates of an extension element over the base in the basis
  /// w^a s^b (index a*e + b, a < f, b < e).
  std::vector<FieldElement> coordinates(const FieldElement& x) const;
  /// The base element equal to x, if x lies in the image of embed.
  std::optional<FieldElement> restrict(const FieldElement& x) const;

  friend bool operator==(const ExtensionDescriptor& a, const ExtensionDescriptor& b) {
    return a.ext_ == b.ext_;
  }

private:
  const FieldModel* base_ = nullptr;
  const FieldModel* ext_ = nullptr;
  int e_ = 1, f_ = 1;
};

} // namespace bt
