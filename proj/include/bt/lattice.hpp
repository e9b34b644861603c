#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "bt/matrix.hpp"

namespace bt {

/// Upper-triangular column Hermite form over the valuation ring of an n x m
/// generating matrix of rank n: diagonal pi^{a_i}, entry (i,j) for j > i
/// reduced modulo pi^{a_i}. No homothety scaling. Throws on rank deficiency.
Matrix hermite_form(const Matrix& gens);

/// Canonical representative of the homothety class generated by the columns:
/// the Hermite form of the scaled lattice contained in O^n but not in pi O^n.
Matrix canonical_form(const Matrix& gens);

/// Vertex of the building: a lattice class stored by its canonical matrix.
class VertexClass {
public:
  VertexClass() = default;
  /// Canonicalizes any generating matrix of full rank.
  static VertexClass from_basis(const Matrix& gens);
  static VertexClass standard(const FieldModel& m, std::size_t n);

  const Matrix& matrix() const { return m_; }
  const FieldModel& model() const { return m_.model(); }
  std::size_t rank() const { return m_.rows(); }
  /// Diagonal exponents a_i.
  const std::vector<long>& exponents() const { return a_; }
  long det_valuation() const;
  /// Flat integer encoding of the canonical matrix; equal iff classes are equal.
  const std::vector<std::uint32_t>& key() const { return key_; }

  friend bool operator==(const VertexClass& x, const VertexClass& y) { return x.key_ == y.key_; }
  friend bool operator<(const VertexClass& x, const VertexClass& y) { return x.key_ < y.key_; }

private:
  Matrix m_;
  std::vector<long> a_;
  std::vector<std::uint32_t> key_;
};

struct VertexHash {
  std::size_t operator()(const VertexClass& v) const;
};

/// Length of M/L; requires M to contain L (both given by bases).
long lattice_index(const Matrix& M, const Matrix& L);

/// Class of the dual lattice for the form sum a_j b_j.
VertexClass dual(const VertexClass& v);

/// v(det) mod (d+1).
int label(const VertexClass& v);

/// Classes [L'] with L > L' > pi L of colength w, one per codimension-w
/// subspace of L/pi L, in the lexicographic order of reduced row-echelon
/// bases of the subspace.
std::vector<VertexClass> neighbors_by_colength(const VertexClass& v, int w);

/// All k-dimensional subspaces of F^n as reduced row-echelon k x n matrices,
/// ordered by pivot set and then lexicographically by free entries.
std::vector<std::vector<std::vector<GfElem>>> enumerate_subspaces(const GaloisField& F, int n, int k);

/// Product formula for the number of k-dimensional subspaces of F_q^n.
std::uint64_t gaussian_binomial(int n, int k, std::uint64_t q);

/// Directed distance f([M],[L]) = [M : L'] with L' the representative of [L]
/// satisfying M >= L' and pi M not >= L'.
long f_distance(const VertexClass& x, const VertexClass& y);
/// Same as f_distance with the inverse of x's matrix supplied.
long f_distance(const Matrix& x_inverse, const VertexClass& x, const VertexClass& y);

/// Distance in the 1-skeleton of the building.
long undirected_distance(const VertexClass& x, const VertexClass& y);

/// Lattice generated by g applied to the class.
VertexClass act(const Matrix& g, const VertexClass& v);

} // namespace bt
