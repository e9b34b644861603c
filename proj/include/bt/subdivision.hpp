#pragma once

#include <gmpxx.h>

#include <map>
#include <string>
#include <vector>

#include "bt/building.hpp"

namespace bt {

/// Alcove eta(sigma, a): x_{sigma(0)}+a_0 <= .. <= x_{sigma(d)}+a_d <= x_{sigma(0)}+a_0+1,
/// named with sigma(0) = 0 and a_0 = 0.
struct AlcoveChart {
  int d = 1;
  std::vector<int> sigma;
  std::vector<long> a;

  /// The d+1 vertices, normalized to x_0 = 0, in the order y = (0..0,1..1)
  /// with j trailing ones for vertex j.
  std::vector<std::vector<long>> vertices() const;
  /// Closed-chamber membership of a point given by coordinates x_0..x_d.
  bool contains(const std::vector<mpq_class>& x) const;
  friend bool operator==(const AlcoveChart&, const AlcoveChart&) = default;
  friend auto operator<=>(const AlcoveChart&, const AlcoveChart&) = default;
};

/// Limits for eta_chambers.
inline constexpr int kMaxEtaDimension = 4;
inline constexpr int kMaxEtaDilation = 6;

/// Charts whose closed chamber lies in eta_N = {x_0 <= x_1 <= .. <= x_d <= x_0 + N}.
std::vector<AlcoveChart> eta_chambers(int d, int N);
/// Membership in the closed region eta_N.
bool in_eta(const std::vector<mpq_class>& x, int N);

/// Per-factor positive integer attached to every edge of that factor.
struct Marking {
  std::vector<int> m;
};

/// Point of a subdivided complex: per factor, the carrier simplex given by
/// factor-store vertex ids with positive barycentric weights (sorted by id).
struct SubPoint {
  std::vector<std::vector<std::pair<int, mpq_class>>> weights;
  /// Per factor: exponents relative to the adapted basis of the first chamber
  /// chart containing the point.
  std::vector<std::vector<mpq_class>> coords;
  friend bool operator<(const SubPoint& a, const SubPoint& b) { return a.weights < b.weights; }
};

struct SubEdge {
  int from, to, factor;
};

struct SubdividedComplex {
  Marking marking;
  std::vector<SubPoint> points;
  std::vector<SubEdge> edges;
  /// Sub-chambers as sorted point ids.
  std::vector<std::vector<int>> cells;
};

/// Replaces every chamber F = prod F_i of the ball (or the listed chambers)
/// by prod F_i[M_i]. The ball must have been built with chambers.
SubdividedComplex subdivide_ball(const Ball& ball, const Marking& marking, const std::vector<int>& chamber_ids = {});

/// Adapted basis and chain order (factor-store ids) of one factor chamber.
struct ChamberChart {
  Matrix basis;
  std::vector<int> order;
};
ChamberChart chamber_chart(const FactorStore& store, const std::vector<int>& chamber);

/// nu: [L] -> [L (x) O_k] for a vertex of the building over the base field.
VertexClass nu_embed(const VertexClass& v, const ExtensionDescriptor& ext);
PolyVertex nu_embed(const PolyVertex& v, const ExtensionDescriptor& ext);

/// delta on apartment points whose basis is defined over the base field.
ApartmentPoint delta_restrict(const ApartmentPoint& p, const ExtensionDescriptor& ext);

struct InducedReport {
  bool pass = true;
  std::size_t chambers_checked = 0;
  std::size_t subchambers_checked = 0;
  std::size_t points_mapped = 0;
  std::string counterexample;
};

/// Checks that nu carries the subdivision B_{k'}[e] of a ball (built with
/// chambers over the base field) chamberedly onto faces of B_k.
InducedReport verify_induced_structure(const Ball& ball, const ExtensionDescriptor& ext);

} // namespace bt
