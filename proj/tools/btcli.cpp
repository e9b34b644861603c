// btcli: command-line access to balls, projections, labels, subdivisions,
// automorphism normal forms, rigid points and the verify suites.

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"

#include "bt/suites.hpp"

using namespace bt;

namespace {

enum Exit { kPass = 0, kFail = 1, kInput = 2, kBudget = 3 };

struct Options {
  std::string field = "laurent:2";
  int d = 1;
  int r = 1;
  int radius = 2;
  int depth = 3;
  std::uint64_t seed = 1;
  std::string format = "json";
  std::string descriptor;
  std::string out;
  long ball_budget = 64;
};

// inline JSON, or @path
Json read_json(const std::string& arg, const char* what) {
  if (arg.empty()) throw InputError(std::string("--") + what + " is required");
  std::string text = arg;
  if (arg[0] == '@') {
    std::ifstream in(arg.substr(1));
    if (!in) throw InputError("cannot read " + arg.substr(1));
    std::stringstream ss;
    ss << in.rdbuf();
    text = ss.str();
  }
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw InputError(std::string("malformed JSON for --") + what + ": " + e.what());
  }
}

BuildingDescriptor descriptor_of(const Options& o) {
  if (!o.descriptor.empty()) return descriptor_from_json(read_json(o.descriptor, "descriptor"));
  if (o.d < 1 || o.r < 1) throw InputError("--d and --r must be positive");
  try {
    return BuildingDescriptor::uniform(FieldModel::parse(o.field), o.d, o.r);
  } catch (const std::invalid_argument& e) {
    throw InputError(e.what());
  }
}

Ball ball_of(const Options& o, const BuildingDescriptor& b, bool chambers) {
  if (o.radius < 0) throw InputError("--radius must be non-negative");
  BallOptions opt;
  opt.chambers = chambers;
  opt.budget = o.ball_budget;
  return make_ball(b, origin(b), o.radius, opt);
}

void emit(const Options& o, const std::string& text) {
  if (o.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(o.out);
  if (!f) throw InputError("cannot write " + o.out);
  f << text;
}

void emit(const Options& o, const Json& j) { emit(o, j.dump(2) + "\n"); }

std::vector<int> int_list(const std::string& s, const char* what) {
  std::vector<int> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stoi(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw InputError(std::string("--") + what + " expects comma-separated integers");
    }
  }
  if (out.empty()) throw InputError(std::string("--") + what + " is empty");
  return out;
}

TExponent t_exponent(const std::string& s) {
  TExponent t;
  if (s == "inf") {
    t.infinite = true;
    return t;
  }
  t.value = parse_fraction(Json(s));
  return t;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bruhat-Tits buildings of SL_{d+1}, their products and Drinfeld spaces"};
  app.require_subcommand(1);
  Options o;
  auto common = [&](CLI::App* c) {
    c->add_option("--field", o.field, "padic:p or laurent:q")->capture_default_str();
    c->add_option("--d", o.d, "dimension of each factor")->capture_default_str();
    c->add_option("--r", o.r, "number of factors")->capture_default_str();
    c->add_option("--descriptor", o.descriptor, "descriptor JSON (inline or @file), overrides --field/--d/--r");
    c->add_option("--radius", o.radius, "ball radius")->capture_default_str();
    c->add_option("--depth", o.depth, "enumeration depth")->capture_default_str();
    c->add_option("--seed", o.seed, "seed for randomized suites")->capture_default_str();
    c->add_option("--format", o.format, "json or dot")->check(CLI::IsMember({"json", "dot"}))->capture_default_str();
    c->add_option("--budget", o.ball_budget, "upper bound for radius * d * q")->capture_default_str();
    c->add_option("--out", o.out, "write the artifact to a file");
  };

  std::string vertex, basis, word, point, poly, marking, sizes, target, mask, t_text = "1";
  int e = 1, f = 1, n = 1, q = 0;
  bool chambers = false, all_depths = false;
  std::uint64_t unimodular_budget = OmegaOptions{}.budget;

  auto* ball_cmd = app.add_subcommand("ball", "vertices, edges and chambers of a ball around the origin");
  common(ball_cmd);
  ball_cmd->add_flag("--chambers", chambers, "also list chambers");

  auto* project_cmd = app.add_subcommand("project", "tau_Lambda of a vertex onto an apartment");
  common(project_cmd);
  project_cmd->add_option("--vertex", vertex, "per-factor generating matrices");
  project_cmd->add_option("--basis", basis, "per-factor apartment bases (default: standard)");

  auto* label_cmd = app.add_subcommand("label", "labelling C of a vertex, or the label action of a word");
  common(label_cmd);
  label_cmd->add_option("--vertex", vertex, "per-factor generating matrices");
  label_cmd->add_option("--word", word, "automorphism word JSON");

  auto* inv_cmd = app.add_subcommand("involution", "lambda applied to a vertex");
  common(inv_cmd);
  inv_cmd->add_option("--vertex", vertex, "per-factor generating matrices");
  inv_cmd->add_option("--mask", mask, "factors to dualize, e.g. 1,0 (default: all)");

  auto* sub_cmd = app.add_subcommand("subdivide", "subdivision B[M] of a ball");
  common(sub_cmd);
  sub_cmd->add_option("--marking", marking, "per-factor marking, e.g. 2,1")->required();

  auto* eta_cmd = app.add_subcommand("eta", "alcove charts in eta_N");
  common(eta_cmd);
  eta_cmd->add_option("--n", n, "dilation N")->capture_default_str();

  auto* ext_cmd = app.add_subcommand("extend", "nu into the building over an extension");
  common(ext_cmd);
  ext_cmd->add_option("--e", e, "ramification index")->capture_default_str();
  ext_cmd->add_option("--f", f, "residue degree")->capture_default_str();
  ext_cmd->add_option("--vertex", vertex, "vertex to embed (default: check the induced structure on the ball)");

  auto* dec_cmd = app.add_subcommand("decompose-aut", "decompose a homomorphism of products of complete graphs");
  common(dec_cmd);
  dec_cmd->add_option("--sizes", sizes, "source factor sizes, e.g. 2,3")->required();
  dec_cmd->add_option("--target", target, "target factor sizes (default: source)");
  std::string images;
  dec_cmd->add_option("--map", images, "JSON array of image ids, or 'random'")->required();

  auto* nf_cmd = app.add_subcommand("normal-form", "g, r, mu with lambda^r g phi = sigma_mu");
  common(nf_cmd);
  nf_cmd->add_option("--word", word, "automorphism word JSON")->required();

  auto* omega_cmd = app.add_subcommand("omega", "membership, tau coordinates and diagonal bases of a rigid point");
  common(omega_cmd);
  omega_cmd->add_option("--point", point, "rigid point JSON")->required();
  omega_cmd->add_option("--max-vectors", unimodular_budget, "unimodular enumeration budget")->capture_default_str();
  omega_cmd->add_flag("--all-depths", all_depths, "report X[n] and X(n) for every n up to --depth");

  auto* retract_cmd = app.add_subcommand("retract", "rho_t(p) along the deformation retraction");
  common(retract_cmd);
  retract_cmd->add_option("--point", point, "rigid point JSON")->required();
  retract_cmd->add_option("--poly", poly, "polynomial in T_{i,j} / t_{i,j}")->required();
  retract_cmd->add_option("--t", t_text, "t as a fraction exponent of |pi|, or inf for t = 0")->capture_default_str();

  auto* verify_cmd = app.add_subcommand("verify", "run a verify suite (or 'all', or 'list')");
  std::string suite;
  verify_cmd->add_option("suite", suite, "suite name")->required();
  SuiteConfig scfg;
  std::string vfield;
  int vd = 0, vr = 0, vradius = -1, vdepth = 0;
  verify_cmd->add_option("--seed", scfg.seed, "seed")->capture_default_str();
  verify_cmd->add_option("--field", vfield, "restrict to one field");
  verify_cmd->add_option("--d", vd, "restrict to one dimension");
  verify_cmd->add_option("--r", vr, "restrict to one factor count");
  verify_cmd->add_option("--q", q, "residue field size (gaussian-binomials)");
  verify_cmd->add_option("--radius", vradius, "ball radius");
  verify_cmd->add_option("--depth", vdepth, "depth budget");
  verify_cmd->add_option("--out", o.out, "write the artifact to a file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    int code = app.exit(err);
    return code == 0 ? kPass : kInput;
  }

  try {
    if (*ball_cmd) {
      auto b = descriptor_of(o);
      auto ball = ball_of(o, b, chambers);
      if (o.format == "dot")
        emit(o, to_dot(ball));
      else
        emit(o, to_json(ball));
      return kPass;
    }
    if (*project_cmd) {
      auto b = descriptor_of(o);
      auto x = vertex_from_json(read_json(vertex, "vertex"), b);
      std::vector<Matrix> bases;
      if (basis.empty()) {
        for (const auto& fct : b.factors) bases.push_back(Matrix::identity(*fct.field, fct.d + 1));
      } else {
        auto j = read_json(basis, "basis");
        if (!j.is_array() || j.size() != b.r()) throw InputError("--basis needs one matrix per factor");
        for (std::size_t i = 0; i < b.r(); ++i) {
          Matrix m = matrix_from_json(j[i], *b.factors[i].field);
          if (m.rows() != static_cast<std::size_t>(b.factors[i].d + 1) || m.cols() != m.rows() || m.rank() != m.rows())
            throw InputError("apartment basis must be invertible of size d+1");
          bases.push_back(m);
        }
      }
      auto p = project_apartment(x, bases);
      Json out{{"input", to_json(x)}, {"point", to_json(p)}};
      out["vertex"] = to_json(vertex_of(p));
      out["fixed"] = vertex_of(p) == x;
      emit(o, out);
      return kPass;
    }
    if (*label_cmd) {
      auto b = descriptor_of(o);
      if (!word.empty()) {
        auto w = word_from_json(read_json(word, "word"), b);
        auto ball = ball_of(o, b, false);
        auto la = label_action(w, ball);
        emit(o, Json{{"word", to_json(w)}, {"action", to_json(la)}});
        return la.labels_factor ? kPass : kFail;
      }
      auto x = vertex_from_json(read_json(vertex, "vertex"), b);
      emit(o, Json{{"vertex", to_json(x)}, {"label", labelling_C(x)}});
      return kPass;
    }
    if (*inv_cmd) {
      auto b = descriptor_of(o);
      auto x = vertex_from_json(read_json(vertex, "vertex"), b);
      std::vector<bool> m(b.r(), true);
      if (!mask.empty()) {
        auto bits = int_list(mask, "mask");
        if (bits.size() != b.r()) throw InputError("--mask needs one entry per factor");
        for (std::size_t i = 0; i < b.r(); ++i) m[i] = bits[i] != 0;
      }
      auto y = involution_lambda(x, m);
      emit(o, Json{{"vertex", to_json(x)}, {"image", to_json(y)}, {"label", labelling_C(x)}, {"image_label", labelling_C(y)}});
      return kPass;
    }
    if (*sub_cmd) {
      auto b = descriptor_of(o);
      auto m = int_list(marking, "marking");
      if (m.size() != b.r()) throw InputError("--marking needs one entry per factor");
      for (int x : m)
        if (x < 1) throw InputError("markings must be positive");
      auto ball = ball_of(o, b, true);
      auto sub = subdivide_ball(ball, Marking{m});
      if (o.format == "dot")
        emit(o, to_dot(ball, sub));
      else
        emit(o, to_json(ball, sub));
      return kPass;
    }
    if (*eta_cmd) {
      if (o.d < 1 || n < 1) throw InputError("--d and --n must be positive");
      auto charts = eta_chambers(o.d, n);
      Json list = Json::array();
      for (const auto& c : charts) list.push_back(to_json(c));
      emit(o, Json{{"d", o.d}, {"N", n}, {"count", charts.size()}, {"charts", list}});
      return kPass;
    }
    if (*ext_cmd) {
      auto b = descriptor_of(o);
      ExtensionDescriptor ext = [&] {
        try {
          return ExtensionDescriptor::make(*b.factors[0].field, e, f);
        } catch (const std::invalid_argument& err) {
          throw InputError(err.what());
        }
      }();
      for (const auto& fct : b.factors)
        if (fct.field != b.factors[0].field) throw InputError("extend needs a common base field");
      if (!vertex.empty()) {
        auto x = vertex_from_json(read_json(vertex, "vertex"), b);
        auto y = nu_embed(x, ext);
        auto back = vertex_of(delta_restrict(point_of(y), ext));
        emit(o, Json{{"extension", ext.field().name()}, {"vertex", to_json(x)}, {"image", to_json(y)}, {"restricted", to_json(back)}});
        return back == x ? kPass : kFail;
      }
      auto ball = ball_of(o, b, true);
      auto rep = verify_induced_structure(ball, ext);
      emit(o, Json{{"extension", ext.field().name()}, {"pass", rep.pass}, {"chambers_checked", rep.chambers_checked},
                   {"subchambers_checked", rep.subchambers_checked}, {"points_mapped", rep.points_mapped},
                   {"counterexample", rep.counterexample.empty() ? Json(nullptr) : Json(rep.counterexample)}});
      return rep.pass ? kPass : kFail;
    }
    if (*dec_cmd) {
      auto src_sizes = int_list(sizes, "sizes");
      auto dst_sizes = target.empty() ? src_sizes : int_list(target, "target");
      for (int s : src_sizes)
        if (s < 2) throw InputError("factor sizes must be at least 2");
      for (int s : dst_sizes)
        if (s < 2) throw InputError("factor sizes must be at least 2");
      ProductGraph src(src_sizes), dst(dst_sizes);
      std::vector<std::size_t> fmap;
      if (images == "random") {
        if (src_sizes != dst_sizes) throw InputError("random maps need equal source and target");
        Rng rng(o.seed);
        fmap = random_automorphism(src, rng);
      } else {
        auto j = read_json(images, "map");
        if (!j.is_array() || j.size() != src.size()) throw InputError("--map needs one image per source vertex");
        for (const auto& v : j) {
          if (!v.is_number_unsigned() || v.get<std::size_t>() >= dst.size()) throw InputError("image ids must lie in the target");
          fmap.push_back(v.get<std::size_t>());
        }
      }
      try {
        auto h = decompose_hom(src, dst, fmap);
        bool ok = reconstruct(src, dst, h) == fmap;
        emit(o, Json{{"map", fmap}, {"decomposition", to_json(h)}, {"reconstructs", ok}});
        return ok ? kPass : kFail;
      } catch (const DecompositionError& err) {
        const char* kind = err.kind == DecompositionError::Kind::NotInjective      ? "not_injective"
                           : err.kind == DecompositionError::Kind::NotHomomorphism ? "not_homomorphism"
                                                                                  : "no_decomposition";
        emit(o, Json{{"map", fmap}, {"error", kind}, {"pair", {err.a, err.b}}, {"message", err.what()}});
        return kFail;
      }
    }
    if (*nf_cmd) {
      auto b = descriptor_of(o);
      auto w = word_from_json(read_json(word, "word"), b);
      auto ball = ball_of(o, b, false);
      auto nf = normal_form(w, ball);
      emit(o, Json{{"word", to_json(w)}, {"normal_form", to_json(nf)}});
      return nf.verified ? kPass : kFail;
    }
    if (*omega_cmd) {
      auto x = rigid_point_from_json(read_json(point, "point"));
      if (o.depth < 1) throw InputError("--depth must be positive");
      OmegaOptions opt;
      opt.budget = unimodular_budget;
      int depth = omega_depth(x, o.depth, opt);
      Json out{{"point", to_json(x)}, {"depth", depth == 0 ? Json(nullptr) : Json(depth)}, {"tau", to_json(tau_coordinates(x))}};
      if (all_depths) {
        Json levels = Json::array();
        for (int k = 1; k <= o.depth; ++k)
          levels.push_back(Json{{"n", k}, {"closed", omega_membership(x, k, true, opt)}, {"strict", omega_membership(x, k, false, opt)}});
        out["levels"] = levels;
      }
      if (depth > 0) {
        Json bases = Json::array();
        for (std::size_t i = 0; i < x.coords.size(); ++i) {
          auto db = diagonalize_norm(x, static_cast<int>(i), depth, opt);
          Json ex = Json::array();
          for (const auto& v : db.exponents) ex.push_back(fraction_string(v));
          bases.push_back(Json{{"basis", to_json(db.basis)}, {"exponents", ex}, {"certificate_depth", db.depth}, {"checked", db.checked}});
        }
        out["diagonal_bases"] = bases;
      }
      emit(o, out);
      return depth > 0 ? kPass : kFail;
    }
    if (*retract_cmd) {
      auto x = rigid_point_from_json(read_json(point, "point"));
      auto t = t_exponent(t_text);
      Polynomial p = [&] {
        try {
          return parse_polynomial(poly, x.ext.field(), x.layout());
        } catch (const std::invalid_argument& err) {
          throw InputError(err.what());
        }
      }();
      auto v = deform(x, t, p);
      emit(o, Json{{"point", to_json(x)}, {"polynomial", p.to_string()}, {"t", t.infinite ? "inf" : fraction_string(t.value)},
                   {"value", to_json(v)}, {"evaluation", to_json(eval_abs(x, p))}});
      return kPass;
    }
    if (*verify_cmd) {
      if (!vfield.empty()) scfg.field = vfield;
      if (vd) scfg.d = vd;
      if (vr) scfg.r = vr;
      if (q) scfg.q = q;
      if (vradius >= 0) scfg.radius = vradius;
      if (vdepth) scfg.depth = vdepth;
      if (suite == "list") {
        Json list = Json::array();
        for (const auto& s : suite_list()) list.push_back(Json{{"suite", s.name}, {"module", s.module}, {"invariant", s.invariant}});
        emit(o, list);
        return kPass;
      }
      std::vector<std::string> names;
      if (suite == "all")
        for (const auto& s : suite_list()) names.push_back(s.name);
      else
        names.push_back(suite);
      Json results = Json::array();
      bool pass = true;
      for (const auto& name : names) {
        auto res = run_suite(name, scfg);
        pass = pass && res.pass;
        results.push_back(res.to_json(scfg));
      }
      emit(o, names.size() == 1 ? results[0] : Json{{"pass", pass}, {"suites", results}});
      return pass ? kPass : kFail;
    }
  } catch (const BudgetExceeded& err) {
    std::cerr << "budget exceeded: " << err.what() << "\n";
    return kBudget;
  } catch (const WindowTooSmall& err) {
    std::cerr << "window too small: " << err.what() << " (needs --radius " << err.required_radius << ")\n";
    return kBudget;
  } catch (const DepthInsufficient& err) {
    std::cerr << "depth insufficient: " << err.what() << " (retry depth " << err.retry_depth << ")\n";
    return kBudget;
  } catch (const InputError& err) {
    std::cerr << "input error: " << err.what() << "\n";
    return kInput;
  } catch (const Json::exception& err) {
    std::cerr << "input error: " << err.what() << "\n";
    return kInput;
  } catch (const std::invalid_argument& err) {
    std::cerr << "input error: " << err.what() << "\n";
    return kInput;
  } catch (const std::domain_error& err) {
    std::cerr << "input error: " << err.what() << "\n";
    return kInput;
  }
  return kInput;
}
