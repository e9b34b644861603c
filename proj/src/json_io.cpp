#include "bt/json_io.hpp"

#include <set>
#include <sstream>

namespace bt {

namespace {

const Json& need(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw InputError(std::string("missing field '") + key + "'");
  return j.at(key);
}

long need_int(const Json& j, const char* what) {
  if (!j.is_number_integer()) throw InputError(std::string(what) + " must be an integer");
  return j.get<long>();
}

const Json& need_array(const Json& j, const char* what) {
  if (!j.is_array()) throw InputError(std::string(what) + " must be an array");
  return j;
}

FieldElement parse_element(const Json& j, const FieldModel& k) {
  if (j.is_number_integer()) return k.from_int(j.get<long>());
  if (!j.is_string()) throw InputError("field elements are strings");
  try {
    return k.parse_element(j.get<std::string>());
  } catch (const std::invalid_argument& e) {
    throw InputError(e.what());
  } catch (const std::domain_error& e) {
    throw InputError(e.what());
  }
}

} // namespace

std::string fraction_string(const mpq_class& x) {
  mpq_class c = x;
  c.canonicalize();
  return c.get_str();
}

mpq_class parse_fraction(const Json& j) {
  if (j.is_number_integer()) return mpq_class(j.get<long>());
  if (!j.is_string()) throw InputError("fractions are strings");
  mpq_class q;
  if (q.set_str(j.get<std::string>(), 10) != 0 || q.get_den() == 0) throw InputError("bad fraction '" + j.get<std::string>() + "'");
  q.canonicalize();
  return q;
}

Json to_json(const BuildingDescriptor& b) {
  Json f = Json::array();
  for (const auto& x : b.factors) f.push_back(Json{{"field", x.field->name()}, {"d", x.d}});
  return Json{{"factors", f}};
}

BuildingDescriptor descriptor_from_json(const Json& j) {
  std::vector<Factor> fs;
  for (const auto& f : need_array(need(j, "factors"), "factors")) {
    const FieldModel* k = nullptr;
    const auto& name = need(f, "field");
    if (!name.is_string()) throw InputError("field must be a string");
    try {
      k = &FieldModel::parse(name.get<std::string>());
    } catch (const std::invalid_argument& e) {
      throw InputError(e.what());
    }
    long d = need_int(need(f, "d"), "d");
    if (d < 1) throw InputError("d must be positive");
    fs.push_back(Factor{k, static_cast<int>(d)});
  }
  if (fs.empty()) throw InputError("descriptor needs at least one factor");
  return BuildingDescriptor(std::move(fs));
}

Json to_json(const Matrix& m) { return Json(m.to_strings()); }

Matrix matrix_from_json(const Json& j, const FieldModel& k) {
  need_array(j, "matrix");
  std::size_t n = j.size();
  if (n == 0) throw InputError("empty matrix");
  std::size_t cols = need_array(j[0], "matrix row").size();
  Matrix m(k, n, cols);
  for (std::size_t i = 0; i < n; ++i) {
    if (need_array(j[i], "matrix row").size() != cols) throw InputError("ragged matrix");
    for (std::size_t c = 0; c < cols; ++c) m(i, c) = parse_element(j[i][c], k);
  }
  return m;
}

Json to_json(const PolyVertex& x) {
  Json out = Json::array();
  for (const auto& v : x) out.push_back(to_json(v.matrix()));
  return out;
}

PolyVertex vertex_from_json(const Json& j, const BuildingDescriptor& b) {
  if (need_array(j, "vertex").size() != b.r()) throw InputError("vertex needs one matrix per factor");
  PolyVertex x;
  for (std::size_t i = 0; i < b.r(); ++i) {
    const auto& f = b.factors[i];
    Matrix m = matrix_from_json(j[i], *f.field);
    if (m.rows() != static_cast<std::size_t>(f.d + 1)) throw InputError("vertex matrix has the wrong size");
    try {
      x.push_back(VertexClass::from_basis(m));
    } catch (const std::exception& e) {
      throw InputError(std::string("vertex matrix: ") + e.what());
    }
  }
  return x;
}

Json to_json(const ApartmentPoint& p) {
  Json basis = Json::array(), ex = Json::array();
  for (const auto& m : p.basis) basis.push_back(to_json(m));
  for (const auto& e : p.exponents) {
    Json row = Json::array();
    for (const auto& x : e) row.push_back(fraction_string(x));
    ex.push_back(row);
  }
  return Json{{"basis", basis}, {"exponents", ex}};
}

ApartmentPoint point_from_json(const Json& j, const BuildingDescriptor& b) {
  const auto& ex = need_array(need(j, "exponents"), "exponents");
  if (ex.size() != b.r()) throw InputError("point needs exponents per factor");
  ApartmentPoint p;
  for (std::size_t i = 0; i < b.r(); ++i) {
    const auto& f = b.factors[i];
    if (need_array(ex[i], "exponents").size() != static_cast<std::size_t>(f.d + 1)) throw InputError("exponent count must be d+1");
    std::vector<mpq_class> e;
    for (const auto& x : ex[i]) e.push_back(parse_fraction(x));
    p.exponents.push_back(e);
    if (j.contains("basis")) {
      Matrix m = matrix_from_json(need_array(j.at("basis"), "basis").at(i), *f.field);
      if (m.rows() != e.size() || m.cols() != e.size() || m.rank() != e.size()) throw InputError("basis must be invertible of size d+1");
      p.basis.push_back(m);
    } else {
      p.basis.push_back(Matrix::identity(*f.field, f.d + 1));
    }
  }
  return p;
}

Json to_json(const AutWord& w) {
  Json out = Json::array();
  for (const auto& g : w) {
    switch (g.kind) {
    case AutGenerator::Kind::Group: {
      Json ms = Json::array();
      for (const auto& m : g.matrices) ms.push_back(to_json(m));
      out.push_back(Json{{"kind", "group"}, {"matrices", ms}});
      break;
    }
    case AutGenerator::Kind::Lambda: {
      Json mask = Json::array();
      for (bool b : g.mask) mask.push_back(b);
      out.push_back(Json{{"kind", "lambda"}, {"mask", mask}});
      break;
    }
    case AutGenerator::Kind::Exchange:
      out.push_back(Json{{"kind", "exchange"}, {"mu", g.mu}});
      break;
    case AutGenerator::Kind::Shift:
      out.push_back(Json{{"kind", "shift"}, {"factor", g.factor}, {"power", g.power}});
      break;
    }
  }
  return out;
}

AutWord word_from_json(const Json& j, const BuildingDescriptor& b) {
  AutWord w;
  for (const auto& g : need_array(j, "word")) {
    const auto& kind = need(g, "kind");
    std::string k = kind.is_string() ? kind.get<std::string>() : "";
    if (k == "group") {
      std::vector<Matrix> ms;
      const auto& arr = need_array(need(g, "matrices"), "matrices");
      if (arr.size() != b.r()) throw InputError("group generator needs one matrix per factor");
      for (std::size_t i = 0; i < b.r(); ++i) ms.push_back(matrix_from_json(arr[i], *b.factors[i].field));
      w.push_back(AutGenerator::group(std::move(ms)));
    } else if (k == "lambda") {
      std::vector<bool> mask;
      for (const auto& x : need_array(need(g, "mask"), "mask")) {
        if (x.is_boolean()) mask.push_back(x.get<bool>());
        else mask.push_back(need_int(x, "mask entry") != 0);
      }
      w.push_back(AutGenerator::lambda(std::move(mask)));
    } else if (k == "exchange") {
      std::vector<int> mu;
      for (const auto& x : need_array(need(g, "mu"), "mu")) mu.push_back(static_cast<int>(need_int(x, "mu entry")));
      w.push_back(AutGenerator::exchange(std::move(mu)));
    } else if (k == "shift") {
      w.push_back(AutGenerator::shift(static_cast<int>(need_int(need(g, "factor"), "factor")), need_int(need(g, "power"), "power")));
    } else {
      throw InputError("unknown generator kind '" + k + "'");
    }
  }
  try {
    check_word(b, w);
  } catch (const std::invalid_argument& e) {
    throw InputError(e.what());
  }
  return w;
}

Json to_json(const RigidPoint& x) {
  Json coords = Json::array();
  for (const auto& row : x.coords) {
    Json r = Json::array();
    for (const auto& c : row) r.push_back(c.to_string());
    coords.push_back(r);
  }
  return Json{{"base", x.ext.base().name()}, {"e", x.ext.ramification()}, {"f", x.ext.residue_degree()}, {"coords", coords}};
}

RigidPoint rigid_point_from_json(const Json& j) {
  const auto& base = need(j, "base");
  if (!base.is_string()) throw InputError("base must be a string");
  try {
    const FieldModel& k = FieldModel::parse(base.get<std::string>());
    long e = j.contains("e") ? need_int(j.at("e"), "e") : 1;
    long f = j.contains("f") ? need_int(j.at("f"), "f") : 1;
    auto ext = ExtensionDescriptor::make(k, static_cast<int>(e), static_cast<int>(f));
    std::vector<std::vector<FieldElement>> coords;
    for (const auto& row : need_array(need(j, "coords"), "coords")) {
      coords.emplace_back();
      for (const auto& c : need_array(row, "coordinate row")) coords.back().push_back(parse_element(c, ext.field()));
    }
    return RigidPoint::make(ext, std::move(coords));
  } catch (const InputError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw InputError(e.what());
  }
}

Json to_json(const Ball& ball) {
  Json verts = Json::array();
  for (std::size_t id = 0; id < ball.size(); ++id) {
    verts.push_back(Json{{"id", id}, {"matrices", to_json(ball.vertex(id))}, {"label", ball.label(id)}, {"distance", ball.dist[id]}});
  }
  Json edges = Json::array();
  for (const auto& e : ball.edges) {
    std::string dir = e.directed ? (e.reverse_directed ? "both" : "forward") : (e.reverse_directed ? "backward" : "none");
    edges.push_back(Json{{"from", e.from}, {"to", e.to}, {"factor", e.factor}, {"directed", dir}});
  }
  Json out{{"descriptor", to_json(ball.descriptor)}, {"radius", ball.radius}, {"vertices", verts}, {"edges", edges}};
  out["chambers"] = ball.chambers;
  return out;
}

namespace {

const char* kPalette[] = {"#1b9e77", "#d95f02", "#7570b3", "#e7298a", "#66a61e", "#e6ab02", "#a6761d"};

std::string color_of(int label) { return kPalette[label % 7]; }

} // namespace

std::string to_dot(const Ball& ball) {
  std::ostringstream out;
  out << "graph ball {\n  node [style=filled];\n";
  for (std::size_t id = 0; id < ball.size(); ++id) {
    auto l = ball.label(id);
    std::string text;
    for (std::size_t i = 0; i < l.size(); ++i) text += (i ? "," : "") + std::to_string(l[i]);
    out << "  v" << id << " [label=\"" << id << "\\n(" << text << ")\", fillcolor=\"" << color_of(l[0]) << "\"];\n";
  }
  for (const auto& e : ball.edges) {
    out << "  v" << e.from << " -- v" << e.to;
    if (ball.descriptor.r() > 1) out << " [color=\"" << color_of(e.factor + 3) << "\"]";
    out << ";\n";
  }
  out << "}\n";
  return out.str();
}

Json to_json(const Ball& ball, const SubdividedComplex& sub) {
  std::size_t r = ball.descriptor.r();
  std::vector<std::set<int>> used(r);
  Json points = Json::array();
  for (std::size_t id = 0; id < sub.points.size(); ++id) {
    const auto& p = sub.points[id];
    Json carrier = Json::array(), coords = Json::array();
    for (std::size_t f = 0; f < r; ++f) {
      Json c = Json::array();
      for (const auto& [v, w] : p.weights[f]) {
        used[f].insert(v);
        c.push_back(Json{{"vertex", v}, {"weight", fraction_string(w)}});
      }
      carrier.push_back(c);
      Json x = Json::array();
      for (const auto& q : p.coords[f]) x.push_back(fraction_string(q));
      coords.push_back(x);
    }
    points.push_back(Json{{"id", id}, {"carrier", carrier}, {"coords", coords}});
  }
  Json stores = Json::array();
  for (std::size_t f = 0; f < r; ++f) {
    Json s = Json::array();
    for (int v : used[f])
      s.push_back(Json{{"vertex", v}, {"matrix", to_json(ball.stores[f].vertices[v].matrix())}, {"label", ball.stores[f].labels[v]}});
    stores.push_back(s);
  }
  Json edges = Json::array();
  for (const auto& e : sub.edges) edges.push_back(Json{{"from", e.from}, {"to", e.to}, {"factor", e.factor}});
  Json out{{"descriptor", to_json(ball.descriptor)}, {"radius", ball.radius}, {"marking", sub.marking.m}};
  out["factor_vertices"] = stores;
  out["vertices"] = points;
  out["edges"] = edges;
  out["chambers"] = sub.cells;
  return out;
}

std::string to_dot(const Ball& ball, const SubdividedComplex& sub) {
  std::ostringstream out;
  out << "graph subdivision {\n  node [style=filled];\n";
  for (std::size_t id = 0; id < sub.points.size(); ++id) {
    bool original = true;
    for (const auto& w : sub.points[id].weights) original = original && w.size() == 1;
    std::string color = "#bbbbbb";
    if (original) color = color_of(ball.stores[0].labels[sub.points[id].weights[0][0].first]);
    out << "  p" << id << " [label=\"" << id << "\", fillcolor=\"" << color << "\"];\n";
  }
  for (const auto& e : sub.edges) out << "  p" << e.from << " -- p" << e.to << ";\n";
  out << "}\n";
  return out.str();
}

Json to_json(const LabelAction& a) {
  Json motion = Json::array();
  for (auto m : a.motion) motion.push_back(to_string(m));
  return Json{{"mu", a.mu}, {"p", a.p}, {"motion", motion}, {"offset", a.offset}, {"labels_factor", a.labels_factor},
              {"vertices_checked", a.vertices_checked}};
}

Json to_json(const NormalForm& nf) {
  Json g = Json::array(), c = Json::array();
  for (const auto& m : nf.g) g.push_back(to_json(m));
  for (const auto& m : nf.restoring) c.push_back(to_json(m));
  Json r = Json::array();
  for (bool b : nf.r) r.push_back(b);
  return Json{{"g", g}, {"shift_powers", nf.shift_powers}, {"restoring", c}, {"r", r}, {"mu", nf.mu},
              {"verified", nf.verified}, {"apartment_vertices_checked", nf.apartment_vertices_checked},
              {"violations", nf.violations}};
}

Json to_json(const HomDecomposition& h) { return Json{{"mu", h.mu}, {"g", h.g}, {"alpha", h.alpha}}; }

Json to_json(const AlcoveChart& c) { return Json{{"sigma", c.sigma}, {"a", c.a}, {"vertices", c.vertices()}}; }

Json to_json(const AbsValue& a) {
  if (a.zero) return Json{{"zero", true}};
  return Json{{"exponent", fraction_string(a.exponent)}};
}

} // namespace bt
