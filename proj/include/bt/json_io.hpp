#pragma once

#include <gmpxx.h>

#include <stdexcept>
#include <string>

#include "json.hpp"

#include "bt/autdecomp.hpp"
#include "bt/drinfeld.hpp"
#include "bt/subdivision.hpp"

namespace bt {

using Json = nlohmann::ordered_json;

/// Malformed or inconsistent JSON input.
struct InputError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Exact fraction as "a" or "a/b".
std::string fraction_string(const mpq_class& x);
mpq_class parse_fraction(const Json& j);

/// {"factors":[{"field":"laurent:2","d":1}, ..]}
Json to_json(const BuildingDescriptor& b);
BuildingDescriptor descriptor_from_json(const Json& j);

/// Canonical matrix as row-major strings.
Json to_json(const Matrix& m);
Matrix matrix_from_json(const Json& j, const FieldModel& k);

/// Per-factor canonical matrices.
Json to_json(const PolyVertex& x);
/// Accepts any full-rank generating matrices and canonicalizes them.
PolyVertex vertex_from_json(const Json& j, const BuildingDescriptor& b);

/// {"basis":[matrices], "exponents":[[fractions]]}
Json to_json(const ApartmentPoint& p);
ApartmentPoint point_from_json(const Json& j, const BuildingDescriptor& b);

/// [{"kind":"group","matrices":[..]}, {"kind":"lambda","mask":[..]},
///  {"kind":"exchange","mu":[..]}, {"kind":"shift","factor":i,"power":n}]
Json to_json(const AutWord& w);
AutWord word_from_json(const Json& j, const BuildingDescriptor& b);

/// {"base":"laurent:2","e":2,"f":1,"coords":[["s"], ..]}
Json to_json(const RigidPoint& x);
RigidPoint rigid_point_from_json(const Json& j);

/// {"descriptor", "center", "radius", "vertices":[{id, matrices, label}],
///  "edges":[{from, to, factor, directed}], "chambers":[[ids]]}
Json to_json(const Ball& ball);
/// 1-skeleton in DOT, vertices colored by the label of the first factor.
std::string to_dot(const Ball& ball);

/// Subdivided ball: points with carriers and rational coordinates.
Json to_json(const Ball& ball, const SubdividedComplex& sub);
std::string to_dot(const Ball& ball, const SubdividedComplex& sub);

Json to_json(const LabelAction& a);
Json to_json(const NormalForm& nf);
Json to_json(const HomDecomposition& h);
Json to_json(const AlcoveChart& c);
Json to_json(const AbsValue& a);

} // namespace bt
