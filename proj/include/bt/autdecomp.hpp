#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "bt/building.hpp"
#include "bt/random.hpp"

namespace bt {

/// Product of complete graphs K_{a_1} x .. x K_{a_n}: tuples adjacent when
/// they differ in exactly one coordinate. Vertex ids are mixed-radix with
/// the first coordinate least significant.
class ProductGraph {
public:
  explicit ProductGraph(std::vector<int> sizes);
  const std::vector<int>& sizes() const { return sizes_; }
  std::size_t factors() const { return sizes_.size(); }
  std::size_t size() const { return total_; }
  std::vector<int> tuple(std::size_t id) const;
  std::size_t index(const std::vector<int>& t) const;
  bool adjacent(std::size_t a, std::size_t b) const;

private:
  std::vector<int> sizes_;
  std::size_t total_ = 1;
};

/// f(u)_{mu[i]} = g[i][u_i]; f(u)_j = alpha[j] for j outside the image of mu
/// (alpha[j] = -1 inside the image).
struct HomDecomposition {
  std::vector<int> mu;
  std::vector<std::vector<int>> g;
  std::vector<int> alpha;
};

struct DecompositionError : std::runtime_error {
  enum class Kind { NotInjective, NotHomomorphism, NoDecomposition };
  Kind kind;
  /// Offending pair of source vertices.
  std::size_t a, b;
  DecompositionError(Kind k, std::size_t x, std::size_t y, const std::string& what)
      : std::runtime_error(what), kind(k), a(x), b(y) {}
};

/// Decomposes an injective homomorphism given by the images of all source ids.
HomDecomposition decompose_hom(const ProductGraph& src, const ProductGraph& dst, const std::vector<std::size_t>& f);
std::vector<std::size_t> reconstruct(const ProductGraph& src, const ProductGraph& dst, const HomDecomposition& h);

/// Every automorphism by backtracking; throws BudgetExceeded beyond `limit`.
std::vector<std::vector<std::size_t>> enumerate_automorphisms(const ProductGraph& g, std::size_t limit);
/// |Aut| as the product of orbit sizes along a stabilizer chain.
std::uint64_t count_automorphisms(const ProductGraph& g);
/// (prod a_i!) * #{sigma : a_{sigma(i)} = a_i}.
std::uint64_t automorphism_formula(const std::vector<int>& sizes);
/// Automorphism from a random size-preserving factor permutation and random
/// coordinate permutations.
std::vector<std::size_t> random_automorphism(const ProductGraph& g, Rng& rng);

// ---------------------------------------------------------------------------
// words in the generators

struct AutGenerator {
  enum class Kind { Group, Lambda, Exchange, Shift };
  Kind kind = Kind::Group;
  std::vector<Matrix> matrices;
  std::vector<bool> mask;
  /// Factor i of the image takes factor mu[i] of the argument.
  std::vector<int> mu;
  int factor = 0;
  long power = 0;

  static AutGenerator group(std::vector<Matrix> m);
  static AutGenerator lambda(std::vector<bool> mask);
  static AutGenerator exchange(std::vector<int> mu);
  static AutGenerator shift(int factor, long power);
};

/// Composition h_1 o h_2 o .. o h_k; the last generator acts first.
using AutWord = std::vector<AutGenerator>;

/// Throws std::invalid_argument for shape or field mismatches.
void check_word(const BuildingDescriptor& b, const AutWord& w);
PolyVertex apply_word(const BuildingDescriptor& b, const AutWord& w, const PolyVertex& x);

enum class LabelMotion { Rotation, Reflection, Both };
const char* to_string(LabelMotion m);

/// C o phi o D = (p_1(a_{mu(1)}), .., p_r(a_{mu(r)})).
struct LabelAction {
  std::vector<int> mu;
  std::vector<std::vector<int>> p;
  std::vector<LabelMotion> motion;
  /// p_i(t) = offset_i + t (rotation) or offset_i - t (reflection).
  std::vector<int> offset;
  /// C o phi = C o phi o D o C on the whole ball.
  bool labels_factor = true;
  std::size_t vertices_checked = 0;
};

/// Raised when the image of the basic chamber leaves the ball.
struct WindowTooSmall : std::runtime_error {
  int required_radius;
  WindowTooSmall(const std::string& w, int r) : std::runtime_error(w), required_radius(r) {}
};

LabelAction label_action(const AutWord& w, const Ball& ball);

struct NormalForm {
  /// g = f^{shift_powers} * restoring, per factor.
  std::vector<Matrix> g;
  std::vector<Matrix> restoring;
  std::vector<long> shift_powers;
  std::vector<bool> r;
  std::vector<int> mu;
  bool verified = true;
  std::size_t apartment_vertices_checked = 0;
  std::vector<std::string> violations;
};

/// g, r, mu with lambda^r g phi = sigma_mu on the standard apartment,
/// checked on every apartment vertex of the ball.
NormalForm normal_form(const AutWord& w, const Ball& ball);

/// True when the canonical matrix is diagonal.
bool in_standard_apartment(const VertexClass& v);
bool in_standard_apartment(const PolyVertex& x);

// ---------------------------------------------------------------------------
// rigidity of labellings and chambered maps

/// Labels obtained by walking galleries of ball chambers from the basic
/// chamber, one panel at a time.
struct GalleryReport {
  std::size_t chambers_reached = 0;
  std::size_t vertices_labelled = 0;
  /// Vertices whose propagated label differs from labelling_C.
  std::size_t mismatches = 0;
  /// Panels crossed with an inconsistent label.
  std::size_t conflicts = 0;
  /// Propagated labels, empty for vertices outside every reached chamber.
  std::vector<LabelVector> labels;
};

/// Needs a ball built with chambers that contains the basic chamber.
GalleryReport gallery_labels(const Ball& ball);

/// diag(pi^{e}) times a permutation, with random unit scalings.
Matrix random_monomial(const FieldModel& k, std::size_t n, Rng& rng, long spread = 1);
/// Word of generators that each preserve the standard apartment.
AutWord random_apartment_word(const BuildingDescriptor& b, Rng& rng, int length);
/// Apartment-preserving word fixing the basic chamber pointwise, written
/// with varied generators (units, scalars, full-turn shifts, double
/// involutions).
AutWord random_chamber_fixing_word(const BuildingDescriptor& b, Rng& rng);
/// Concatenation u o v.
AutWord compose(const AutWord& u, const AutWord& v);
bool agree_on(const BuildingDescriptor& b, const AutWord& u, const AutWord& v, const std::vector<PolyVertex>& points);

} // namespace bt
