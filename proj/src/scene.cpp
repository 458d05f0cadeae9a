#include "monolab/scene.hpp"

#include "monolab/catalog.hpp"
#include "monolab/error.hpp"
#include "monolab/monocheck.hpp"
#include "monolab/plot.hpp"
#include "monolab/report.hpp"
#include "monolab/resolvent.hpp"
#include "monolab/vardiff.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace monolab::scene {

namespace {

std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<double> parse_numbers(const std::string& s, int line) {
  std::vector<double> out;
  std::istringstream is(s);
  std::string tok;
  while (is >> tok) {
    try {
      size_t pos = 0;
      out.push_back(std::stod(tok, &pos));
      if (pos != tok.size()) throw std::invalid_argument(tok);
    } catch (...) {
      throw Error(ErrorCode::ParseError,
                  "line " + std::to_string(line) + ": expected a number, got '" +
                      tok + "'");
    }
  }
  return out;
}

std::string normalize_numbers(const std::vector<double>& v) {
  std::ostringstream os;
  os.precision(17);
  for (size_t i = 0; i < v.size(); ++i) os << (i ? " " : "") << v[i];
  return os.str();
}

// piece syntax: rows separated by ';', each row "c0 c1 ... (<=|=) rhs".
geom::Polyhedron parse_piece(const std::string& text, int dim2, int line) {
  geom::Polyhedron p;
  p.dim = dim2;
  std::istringstream rows(text);
  std::string row;
  while (std::getline(rows, row, ';')) {
    row = trim(row);
    if (row.empty()) continue;
    std::istringstream is(row);
    std::vector<std::string> toks;
    std::string t;
    while (is >> t) toks.push_back(t);
    auto rel = std::find_if(toks.begin(), toks.end(), [](const std::string& s) {
      return s == "<=" || s == "=";
    });
    if (rel == toks.end() || rel + 1 == toks.end() ||
        static_cast<int>(rel - toks.begin()) != dim2)
      throw Error(ErrorCode::ParseError,
                  "line " + std::to_string(line) +
                      ": piece row needs " + std::to_string(dim2) +
                      " coefficients, a relation and a right-hand side");
    geom::LinCon con;
    con.eq = (*rel == "=");
    for (int i = 0; i < dim2; ++i) con.a.push_back(geom::to_rat(std::stod(toks[i])));
    con.b = geom::to_rat(std::stod(*(rel + 1)));
    p.cons.push_back(std::move(con));
  }
  if (p.cons.empty())
    throw Error(ErrorCode::ParseError,
                "line " + std::to_string(line) + ": empty piece");
  return p;
}

struct SectionCtx {
  RawSection raw;
  std::map<std::string, std::string> kv;
  std::vector<std::string> pieces; // repeated 'piece' keys
  int line = 0;
};

} // namespace

NormSpec Scene::spec_for(int n) const {
  NormSpec s;
  s.p = norm_p;
  if (norm_weights) {
    if (static_cast<int>(norm_weights->size()) != n)
      throw Error(ErrorCode::DimensionMismatch,
                  "norm weights do not match operator dimension");
    s.weights = *norm_weights;
  } else {
    s.weights.assign(static_cast<size_t>(n), 1.0);
  }
  return s;
}

OperatorPtr Scene::find_operator(const std::string& name) const {
  for (const auto& [n, op] : operators)
    if (n == name) return op;
  throw Error(ErrorCode::UnknownOperator, "operator '" + name + "' is not defined");
}

Scene parse_scene(const std::string& text) {
  Scene sc;
  sc.source_text = text;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  std::vector<SectionCtx> sections;
  SectionCtx* cur = nullptr;

  while (std::getline(in, line)) {
    ++lineno;
    std::string s = line;
    size_t hash = s.find('#');
    if (hash != std::string::npos) s = s.substr(0, hash);
    s = trim(s);
    if (s.empty()) continue;
    if (s.front() == '[') {
      if (s.back() != ']')
        throw Error(ErrorCode::ParseError,
                    "line " + std::to_string(lineno) + ": unterminated section header");
      std::string head = trim(s.substr(1, s.size() - 2));
      std::istringstream hs(head);
      std::string kind, name;
      hs >> kind >> name;
      if (kind != "norm" && kind != "operator" && kind != "analysis")
        throw Error(ErrorCode::ParseError,
                    "line " + std::to_string(lineno) + ": unknown section '" +
                        kind + "'");
      if (kind != "norm" && name.empty())
        throw Error(ErrorCode::ParseError,
                    "line " + std::to_string(lineno) + ": section needs a name");
      sections.emplace_back();
      cur = &sections.back();
      cur->raw.kind = kind;
      cur->raw.name = name;
      cur->line = lineno;
      continue;
    }
    size_t eq = s.find('=');
    if (eq == std::string::npos || !cur)
      throw Error(ErrorCode::ParseError,
                  "line " + std::to_string(lineno) + ": expected 'key = value'");
    std::string key = trim(s.substr(0, eq));
    std::string value = trim(s.substr(eq + 1));
    if (key.empty())
      throw Error(ErrorCode::ParseError,
                  "line " + std::to_string(lineno) + ": empty key");
    cur->raw.entries.push_back({key, value});
    if (key == "piece")
      cur->pieces.push_back(value);
    else
      cur->kv[key] = value;
  }

  for (auto& sec : sections) {
    auto get = [&](const std::string& key) -> std::optional<std::string> {
      auto it = sec.kv.find(key);
      if (it == sec.kv.end()) return std::nullopt;
      return it->second;
    };
    auto nums = [&](const std::string& key) -> std::optional<std::vector<double>> {
      auto v = get(key);
      if (!v) return std::nullopt;
      return parse_numbers(*v, sec.line);
    };
    if (sec.raw.kind == "norm") {
      if (auto p = nums("p")) sc.norm_p = (*p)[0];
      if (auto w = nums("weights")) sc.norm_weights = *w;
      if (!(sc.norm_p > 1.0))
        throw Error(ErrorCode::ParseError,
                    "line " + std::to_string(sec.line) + ": norm needs p > 1");
    } else if (sec.raw.kind == "operator") {
      auto kind = get("kind");
      if (!kind)
        throw Error(ErrorCode::ParseError,
                    "line " + std::to_string(sec.line) + ": operator needs a kind");
      OperatorPtr op;
      if (*kind == "catalog") {
        auto nm = get("name");
        if (!nm)
          throw Error(ErrorCode::ParseError,
                      "line " + std::to_string(sec.line) + ": catalog operator needs a name");
        catalog::Params params;
        for (const auto& [k, v] : sec.kv)
          if (k != "kind" && k != "name") params[k] = parse_numbers(v, sec.line);
        op = catalog::builtin(*nm, params);
      } else if (*kind == "polyhedral_graph") {
        auto d = nums("dim");
        if (!d)
          throw Error(ErrorCode::ParseError,
                      "line " + std::to_string(sec.line) + ": polyhedral_graph needs dim");
        int n = static_cast<int>((*d)[0]);
        std::vector<geom::Polyhedron> pieces;
        for (const auto& ptext : sec.pieces)
          pieces.push_back(parse_piece(ptext, 2 * n, sec.line));
        op = opmodel::make_polyhedral_graph(n, std::move(pieces));
      } else if (*kind == "affine") {
        auto flat = nums("matrix");
        if (!flat)
          throw Error(ErrorCode::ParseError,
                      "line " + std::to_string(sec.line) + ": affine needs a matrix");
        int n = static_cast<int>(std::lround(std::sqrt(double(flat->size()))));
        std::vector<double> off(n, 0.0);
        if (auto o = nums("offset")) off = *o;
        auto a = *flat;
        auto f = [n, a, off](const Vec& x) {
          Vec y(n, 0.0);
          for (int i = 0; i < n; ++i) {
            y[i] = off[i];
            for (int j = 0; j < n; ++j) y[i] += a[i * n + j] * x[j];
          }
          return y;
        };
        auto jac = [n, a](const Vec&) {
          std::vector<Vec> rows(n, Vec(n, 0.0));
          for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) rows[i][j] = a[i * n + j];
          return rows;
        };
        op = opmodel::make_smooth_map(n, f, jac);
      } else if (*kind == "sum" || *kind == "inverse" || *kind == "shift_j" ||
                 *kind == "scale" || *kind == "localize") {
        auto of = get("of");
        if (!of)
          throw Error(ErrorCode::ParseError,
                      "line " + std::to_string(sec.line) + ": composite needs 'of'");
        std::istringstream os(*of);
        std::vector<std::string> names;
        std::string nm;
        while (os >> nm) names.push_back(nm);
        auto a = sc.find_operator(names.at(0));
        if (*kind == "sum") {
          if (names.size() != 2)
            throw Error(ErrorCode::ParseError,
                        "line " + std::to_string(sec.line) + ": sum needs two operands");
          op = opmodel::op_sum(a, sc.find_operator(names[1]));
        } else if (*kind == "inverse") {
          op = opmodel::op_inverse(a);
        } else if (*kind == "shift_j") {
          double sg = nums("sigma").value_or(std::vector<double>{1.0})[0];
          op = opmodel::op_shift_J(a, sg, sc.spec_for(a->dim()));
        } else if (*kind == "scale") {
          double c = nums("factor").value_or(std::vector<double>{1.0})[0];
          op = opmodel::op_scale(a, c);
        } else {
          Box b;
          b.x_center = nums("x_center").value_or(Vec(a->dim(), 0.0));
          b.v_center = nums("v_center").value_or(Vec(a->dim(), 0.0));
          b.x_radius = nums("x_radius").value_or(std::vector<double>{1.0})[0];
          b.v_radius = nums("v_radius").value_or(std::vector<double>{1.0})[0];
          op = opmodel::op_localize(a, b);
        }
      } else {
        throw Error(ErrorCode::ParseError,
                    "line " + std::to_string(sec.line) + ": unknown operator kind '" +
                        *kind + "'");
      }
      sc.operators.push_back({sec.raw.name, op});
    } else { // analysis
      AnalysisRequest req;
      req.name = sec.raw.name;
      auto kind = get("kind");
      auto opname = get("op");
      if (!kind || !opname)
        throw Error(ErrorCode::ParseError,
                    "line " + std::to_string(sec.line) + ": analysis needs kind and op");
      req.kind = *kind;
      req.op_name = *opname;
      auto op = sc.find_operator(req.op_name);
      const int n = op->dim();
      if (auto p = nums("point")) {
        if (static_cast<int>(p->size()) != 2 * n)
          throw Error(ErrorCode::DimensionMismatch,
                      "line " + std::to_string(sec.line) +
                          ": point needs 2n coordinates");
        req.point.x.assign(p->begin(), p->begin() + n);
        req.point.v.assign(p->begin() + n, p->end());
        req.has_point = true;
      }
      if (auto r = nums("x_radius")) req.x_radius = (*r)[0];
      if (auto r = nums("v_radius")) req.v_radius = (*r)[0];
      if (auto d = nums("density")) req.density = static_cast<int>((*d)[0]);
      if (auto s = nums("sigma")) req.sigma = (*s)[0];
      if (auto l = nums("lambda")) req.lambda = (*l)[0];
      if (auto l = nums("lambdas")) req.lambdas = *l;
      if (auto r = nums("radii")) req.radii = *r;
      if (auto t = nums("tol")) req.tol = (*t)[0];
      sc.requests.push_back(std::move(req));
    }
    sc.raw.push_back(sec.raw);
  }
  return sc;
}

std::string emit_scene(const Scene& s) {
  std::ostringstream os;
  for (const auto& sec : s.raw) {
    os << "[" << sec.kind;
    if (!sec.name.empty()) os << " " << sec.name;
    os << "]\n";
    for (const auto& [k, v] : sec.entries) {
      // Normalize numeric lists for a canonical echo.
      std::string value = v;
      bool numeric = !v.empty() && v.find_first_not_of("0123456789+-.eE \t") ==
                                       std::string::npos;
      if (numeric) {
        try {
          std::istringstream is(v);
          std::vector<double> nums;
          double d;
          while (is >> d) nums.push_back(d);
          if (!is.eof()) numeric = false;
          if (numeric && !nums.empty()) value = normalize_numbers(nums);
        } catch (...) {
        }
      }
      os << k << " = " << value << "\n";
    }
    os << "\n";
  }
  return os.str();
}

namespace {

nlohmann::json run_one(const Scene& sc, const AnalysisRequest& req,
                       const RunOptions& opt) {
  auto op = sc.find_operator(req.op_name);
  const int n = op->dim();
  NormSpec spec = sc.spec_for(n);
  double tol = req.tol ? *req.tol : opt.tol.value_or(1e-9);
  Box box{req.has_point ? req.point.x : Vec(n, 0.0), req.x_radius,
          req.has_point ? req.point.v : Vec(n, 0.0), req.v_radius};

  Verdict v;
  if (req.kind == "monotone_witness") {
    auto g = opmodel::sample_graph(*op, box, req.density, spec);
    v = monocheck::monotone_witness(g, spec, tol);
  } else if (req.kind == "strong_modulus") {
    auto g = opmodel::sample_graph(*op, box, req.density, spec);
    v = monocheck::strong_modulus(g, spec, tol);
  } else if (req.kind == "hypo_modulus") {
    auto g = opmodel::sample_graph(*op, box, req.density, spec);
    v = monocheck::hypo_modulus(g, tol);
  } else if (req.kind == "isc_probe") {
    v = monocheck::isc_probe(*op, req.point, req.radii, spec, req.density, tol);
  } else if (req.kind == "typeA_witness_search") {
    v = monocheck::typeA_witness_search(*op, req.point, box, req.density, spec, tol);
  } else if (req.kind == "minty_local_probe") {
    v = resolvent::minty_local_probe(*op, req.point, req.lambda, box,
                                     req.density, spec, tol)
            .first;
  } else if (req.kind == "local_max_via_resolvent") {
    v = resolvent::local_max_via_resolvent(*op, req.point, box, req.density,
                                           spec, req.lambdas, tol);
  } else if (req.kind == "strong_inverse_probe") {
    v = resolvent::strong_inverse_probe(*op, req.point, box, req.density, spec,
                                        tol)
            .first;
  } else if (req.kind == "shifted_resolvent_probe") {
    v = resolvent::shifted_resolvent_probe(*op, req.sigma, req.point, box,
                                           req.density, tol)
            .first;
  } else if (req.kind == "psd_criterion") {
    v = vardiff::psd_criterion(*op, box, req.sigma, req.density, tol);
  } else if (req.kind == "local_max_via_coderivative") {
    v = vardiff::local_max_via_coderivative(*op, req.point, box, req.density,
                                            req.sigma, tol);
  } else if (req.kind == "qualification") {
    auto q = vardiff::sum_qualification(*op);
    v.name = "qualification";
    v.status = q.computed ? Verdict::Status::Pass : Verdict::Status::Inconclusive;
    v.detail = q.detail;
    nlohmann::json j = report::verdict_to_json(v);
    j["qualified"] = q.qualified;
    j["interior_dom_b_nonempty"] = q.interior_dom_b_nonempty;
    return j;
  } else {
    throw Error(ErrorCode::ParseError, "unknown analysis kind '" + req.kind + "'");
  }

  if (!opt.plot_dir.empty()) {
    plot::PlotOptions popt;
    if (v.witness_point) popt.witness_points.push_back(*v.witness_point);
    if (v.witness_pair) {
      popt.witness_points.push_back(v.witness_pair->first);
      popt.witness_points.push_back(v.witness_pair->second);
    }
    try {
      std::string svg = plot::render_plot(*op, box, popt, spec);
      std::filesystem::create_directories(opt.plot_dir);
      std::ofstream f(std::filesystem::path(opt.plot_dir) / (req.name + ".svg"),
                      std::ios::binary);
      f << svg;
    } catch (const Error&) {
      // Plotting is best effort; unsupported dims are skipped.
    }
  }
  return report::verdict_to_json(v);
}

} // namespace

nlohmann::json run_analyses(const Scene& sc, const RunOptions& opt) {
  nlohmann::json rep;
  rep["schema"] = report::kSchemaVersion;
  rep["tool_version"] = report::kToolVersion;
  rep["scene_hash"] = report::content_hash(sc.source_text);
  rep["seed"] = opt.seed;
  nlohmann::json requests = nlohmann::json::array();
  for (const auto& req : sc.requests) {
    nlohmann::json r;
    r["name"] = req.name;
    r["kind"] = req.kind;
    r["operator"] = req.op_name;
    try {
      r["verdict"] = run_one(sc, req, opt);
    } catch (const Error& e) {
      r["error"] = e.what();
      r["error_code"] = error_code_name(e.code());
    } catch (const std::exception& e) {
      r["error"] = e.what();
      r["error_code"] = "INTERNAL";
    }
    requests.push_back(std::move(r));
  }
  rep["requests"] = requests;
  return rep;
}

bool any_inconclusive(const nlohmann::json& report) {
  for (const auto& r : report["requests"]) {
    if (r.contains("verdict") &&
        r["verdict"].value("status", "") == "INCONCLUSIVE")
      return true;
  }
  return false;
}

} // namespace monolab::scene
