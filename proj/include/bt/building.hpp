#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "bt/lattice.hpp"

namespace bt {

/// Raised when a requested window exceeds the configured budget.
struct BudgetExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Factor {
  const FieldModel* field = nullptr;
  int d = 1;
};

/// Product building B = B_1 x .. x B_r.
struct BuildingDescriptor {
  std::vector<Factor> factors;

  BuildingDescriptor() = default;
  explicit BuildingDescriptor(std::vector<Factor> f);
  /// r copies of one factor.
  static BuildingDescriptor uniform(const FieldModel& k, int d, int r);
  std::size_t r() const { return factors.size(); }
  friend bool operator==(const BuildingDescriptor& a, const BuildingDescriptor& b);
};

using PolyVertex = std::vector<VertexClass>;
using LabelVector = std::vector<int>;

struct PolyVertexHash {
  std::size_t operator()(const PolyVertex& v) const;
};

/// Vertex set of a product of simplices.
struct PolyFace {
  std::vector<PolyVertex> vertices;
  std::vector<int> dims;
};

/// Point of an apartment per factor: rho(v_j) = |pi|^{x_j} for the basis
/// columns v_j. Exponents are taken modulo a uniform shift.
struct ApartmentPoint {
  std::vector<Matrix> basis;
  std::vector<std::vector<mpq_class>> exponents;

  /// Shift-normalized copy (first exponent of each factor is 0).
  ApartmentPoint normalized() const;
  /// Integral normalized exponents, if every coordinate is an integer.
  bool is_integral() const;
  friend bool operator==(const ApartmentPoint& a, const ApartmentPoint& b);
};

PolyVertex origin(const BuildingDescriptor& b);
/// Standard apartment point with the given exponents.
ApartmentPoint lambda_point(const BuildingDescriptor& b, const std::vector<std::vector<mpq_class>>& x);
/// Vertex carried by an integral apartment point: [<pi^{-x_j} v_j>].
PolyVertex vertex_of(const ApartmentPoint& p);
/// The vertex as a point of the apartment of its own canonical basis.
ApartmentPoint point_of(const PolyVertex& x);

/// Vertex L_k = <T_0..T_{d-k}, pi T_{d-k+1}..pi T_d> of the basic chamber.
VertexClass basic_vertex(const FieldModel& k, int d, int label);
PolyFace basic_chamber(const BuildingDescriptor& b);

/// Representatives L_0 > L_1 > .. > L_m > pi L_0 of a set of classes (L_0
/// from the first class), in chain order; nullopt if they do not form a
/// simplex or contain a repeated class.
std::optional<std::vector<Matrix>> simplex_chain(const std::vector<VertexClass>& classes);
bool is_face(const BuildingDescriptor& b, const std::vector<PolyVertex>& vertices);

/// Basis v_0..v_d of L_0 with L_j = <v_0..v_{d-c_j}, pi v_{d-c_j+1}..pi v_d>
/// for every member of the chain, c_j = [L_0 : L_j].
Matrix adapted_basis(const std::vector<Matrix>& chain);

LabelVector labelling_C(const PolyVertex& x);
/// Vertex of the basic chamber with the given labels.
PolyVertex labelling_D(const BuildingDescriptor& b, const LabelVector& label);

long distance_f(const PolyVertex& x, const PolyVertex& y);
long undirected_distance(const PolyVertex& x, const PolyVertex& y);

/// Apartment point of tau_Lambda(x) for the apartments with the given bases.
ApartmentPoint project_apartment(const PolyVertex& x, const std::vector<Matrix>& bases);

/// Per-factor group element applied to a vertex.
PolyVertex act(const std::vector<Matrix>& g, const PolyVertex& x);
/// f(T_0) = pi T_d, f(T_j) = T_{j-1}.
Matrix shift_generator(const FieldModel& k, int d);

PolyVertex involution_lambda(const PolyVertex& x, const std::vector<bool>& mask);

/// Formal exchange on points of the standard apartment: factor i of the
/// result carries the coordinates of factor mu[i].
ApartmentPoint sigma_mu(const BuildingDescriptor& b, const ApartmentPoint& p, const std::vector<int>& mu);

// ---------------------------------------------------------------------------
// finite windows

struct BallOptions {
  bool edges = true;
  bool chambers = false;
  /// Upper bound for radius * max(d_i) * q.
  long budget = 64;
  /// Upper bound for the number of vertices.
  std::size_t max_vertices = 400000;
};

/// Vertices of one factor reachable within the ball, with cached neighbors.
struct FactorStore {
  Factor factor;
  std::vector<VertexClass> vertices;
  std::vector<int> dist;
  std::vector<int> labels;
  /// Neighbor ids inside the store (filled when edges are requested).
  std::vector<std::vector<int>> neighbors;
  /// Chambers of the factor ball as sorted vertex ids.
  std::vector<std::vector<int>> chambers;
  std::unordered_map<VertexClass, int, VertexHash> index;

  int find(const VertexClass& v) const;
};

struct BallEdge {
  int from, to, factor;
  /// from -> to is a directed edge.
  bool directed;
  /// to -> from is a directed edge.
  bool reverse_directed;
};

/// Vertices at undirected 1-skeleton distance <= radius from the center.
/// Ids are ordered by distance and then by the per-factor ids.
struct Ball {
  BuildingDescriptor descriptor;
  int radius = 0;
  std::vector<FactorStore> stores;
  std::vector<std::vector<int>> tuples;
  std::vector<int> dist;
  std::vector<BallEdge> edges;
  std::vector<std::vector<int>> chambers;

  std::size_t size() const { return tuples.size(); }
  PolyVertex vertex(std::size_t id) const;
  LabelVector label(std::size_t id) const;
  /// -1 when the vertex is outside the ball.
  int find(const PolyVertex& x) const;
  int find_tuple(const std::vector<int>& t) const;

  std::unordered_map<std::uint64_t, int> tuple_index;
  std::uint64_t tuple_key(const std::vector<int>& t) const;
};

Ball make_ball(const BuildingDescriptor& b, const PolyVertex& center, int radius, const BallOptions& opt = {});

/// All neighbors of a vertex in one factor building (colengths 1..d).
std::vector<VertexClass> all_neighbors(const VertexClass& v);

} // namespace bt
