#include "wft/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "wft/error.hpp"
#include "wft/euler.hpp"
#include "wft/p_system.hpp"

namespace wft {

using nlohmann::json;

namespace {

[[noreturn]] void config_error(const std::string& what) { fail(ErrorKind::Config, what); }

const json& need(const json& obj, const char* key, const std::string& where) {
  if (!obj.is_object() || !obj.contains(key))
    config_error(where + ": missing field '" + key + "'");
  return obj.at(key);
}

double number(const json& obj, const char* key, const std::string& where) {
  const json& v = need(obj, key, where);
  if (!v.is_number()) config_error(where + "." + key + " must be a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) config_error(where + "." + key + " must be finite");
  return d;
}

double number_or(const json& obj, const char* key, double fallback, const std::string& where) {
  return obj.contains(key) ? number(obj, key, where) : fallback;
}

Eigen::VectorXd vector_of(const json& v, const std::string& where) {
  if (!v.is_array() || v.empty()) config_error(where + " must be a non-empty array of numbers");
  Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
  for (std::size_t k = 0; k < v.size(); ++k) {
    if (!v[k].is_number()) config_error(where + " must contain numbers only");
    out(static_cast<Eigen::Index>(k)) = v[k].get<double>();
  }
  return out;
}

std::vector<double> list_of(const json& v, const std::string& where) {
  if (!v.is_array()) config_error(where + " must be an array");
  std::vector<double> out;
  for (const auto& e : v) {
    if (!e.is_number()) config_error(where + " must contain numbers only");
    out.push_back(e.get<double>());
  }
  return out;
}

std::string text(const json& obj, const char* key, const std::string& where) {
  const json& v = need(obj, key, where);
  if (!v.is_string()) config_error(where + "." + key + " must be a string");
  return v.get<std::string>();
}

ModelPtr parse_model(const json& m) {
  const std::string type = text(m, "type", "model");
  if (type == "p-system") {
    auto law = std::make_shared<GammaLaw>(number_or(m, "kappa", 1.0, "model"),
                                          number_or(m, "gamma", 2.0, "model"));
    return std::make_shared<PSystem>(law);
  }
  if (type == "euler") {
    const int split = static_cast<int>(number_or(m, "split", 1.0, "model"));
    if (split < 1 || split > 2) config_error("model.split must be 1 or 2");
    return std::make_shared<Euler>(number_or(m, "gamma", 1.4, "model"),
                                   number_or(m, "cv", 1.0, "model"), 1e-6, split);
  }
  config_error("model.type '" + type + "' is not one of p-system, euler");
}

std::shared_ptr<const ZetaGeometry> parse_geometry(const json& g) {
  const std::string type = text(g, "type", "geometry");
  if (type == "constant") {
    return std::make_shared<ZetaGeometry>(constant_geometry(vector_of(need(g, "value", "geometry"), "geometry.value")));
  }
  if (type == "steps") {
    const Params z0 = vector_of(need(g, "z0", "geometry"), "geometry.z0");
    const auto pos = list_of(need(g, "positions", "geometry"), "geometry.positions");
    const json& vals = need(g, "values", "geometry");
    if (!vals.is_array() || vals.size() != pos.size())
      config_error("geometry.values needs one entry per position");
    std::vector<Params> v;
    for (std::size_t k = 0; k < vals.size(); ++k) v.push_back(vector_of(vals[k], "geometry.values"));
    return std::make_shared<ZetaGeometry>(step_geometry(z0, pos, v));
  }
  if (type == "pipe") {
    PlaneCurve c;
    c.x_start = number_or(g, "x_start", 0.0, "geometry");
    c.theta0 = number_or(g, "theta0", 0.0, "geometry");
    const json& segs = need(g, "segments", "geometry");
    if (!segs.is_array()) config_error("geometry.segments must be an array");
    for (const auto& s : segs) {
      const std::string kind = text(s, "kind", "geometry.segments");
      CurveSegment seg{};
      if (kind == "straight") {
        seg.kind = CurveSegment::Kind::Straight;
        seg.length = number(s, "length", "geometry.segments");
      } else if (kind == "arc") {
        seg.kind = CurveSegment::Kind::Arc;
        seg.length = number(s, "length", "geometry.segments");
        seg.curvature = number(s, "curvature", "geometry.segments");
      } else if (kind == "kink") {
        seg.kind = CurveSegment::Kind::Kink;
        seg.angle = number(s, "angle", "geometry.segments");
      } else {
        config_error("geometry segment kind '" + kind + "' is not one of straight, arc, kink");
      }
      c.segments.push_back(seg);
    }
    return std::make_shared<ZetaGeometry>(curved_pipe_geometry(c));
  }
  if (type == "section_steps") {
    return std::make_shared<ZetaGeometry>(
        section_steps(number(g, "a0", "geometry"),
                      list_of(need(g, "positions", "geometry"), "geometry.positions"),
                      list_of(need(g, "sections", "geometry"), "geometry.sections")));
  }
  if (type == "section_ramp") {
    return std::make_shared<ZetaGeometry>(
        section_ramp(number(g, "a0", "geometry"), number(g, "a1", "geometry"),
                     number(g, "x0", "geometry"), number(g, "x1", "geometry")));
  }
  config_error("geometry.type '" + type +
               "' is not one of constant, steps, pipe, section_steps, section_ramp");
}

void check_datum(const json& d, int n) {
  const std::string type = text(d, "type", "datum");
  auto state = [&](const char* key) {
    const State s = vector_of(need(d, key, "datum"), std::string("datum.") + key);
    if (s.size() != n) config_error(std::string("datum.") + key + " has the wrong dimension");
  };
  if (type == "constant" || type == "stationary") {
    state("state");
  } else if (type == "riemann") {
    state("left");
    state("right");
  } else if (type == "steps") {
    state("far_left");
    const auto pos = list_of(need(d, "positions", "datum"), "datum.positions");
    const json& vals = need(d, "values", "datum");
    if (!vals.is_array() || vals.size() != pos.size())
      config_error("datum.values needs one entry per position");
    for (const auto& v : vals)
      if (vector_of(v, "datum.values").size() != n) config_error("datum.values has the wrong dimension");
    if (!std::is_sorted(pos.begin(), pos.end())) config_error("datum.positions must increase");
  } else {
    config_error("datum.type '" + type + "' is not one of constant, riemann, steps, stationary");
  }
  if (d.contains("perturbation")) {
    const json& p = d.at("perturbation");
    if (vector_of(need(p, "amplitude", "datum.perturbation"), "datum.perturbation.amplitude").size() != n)
      config_error("datum.perturbation.amplitude has the wrong dimension");
    if (number(p, "width", "datum.perturbation") <= 0.0)
      config_error("datum.perturbation.width must be positive");
    number(p, "center", "datum.perturbation");
    if (number_or(p, "cells", 16, "datum.perturbation") < 1)
      config_error("datum.perturbation.cells must be positive");
  }
}

double cosine_bump(double s) {
  return std::abs(s) < 1.0 ? 0.5 * (1.0 + std::cos(M_PI * s)) : 0.0;
}

}  // namespace

ModelPtr parse_model_spec(const json& m) {
  try {
    return parse_model(m);
  } catch (const json::exception& ex) {
    config_error(std::string("malformed model: ") + ex.what());
  }
}

CouplingSpec parse_coupling_spec(const json& c, const ModelPtr& model, int dz) {
  CouplingSpec cs;
  const int n = model->dimension();
  cs.type = text(c, "type", "coupling");
  if (cs.type == "kink") {
    if (dz != 2) config_error("kink coupling needs a plane tangent geometry");
    if (model->name() != "p-system") config_error("kink coupling is defined for the p-system");
    cs.drag = number(c, "alpha", "coupling");
    if (cs.drag < 0.0) config_error("coupling.alpha must be non-negative");
    cs.condition = make_kink_condition(cs.drag);
    cs.unit_parameters = true;
  } else if (cs.type == "section") {
    if (dz != 1) config_error("section coupling needs a scalar section geometry");
    SectionOptions so;
    so.base_steps = static_cast<int>(number_or(c, "profile_steps", so.base_steps, "coupling"));
    so.floor = number_or(c, "floor", so.floor, "coupling");
    if (so.base_steps < 1) config_error("coupling.profile_steps must be positive");
    cs.condition = make_section_condition(parse_section_variant(text(c, "variant", "coupling")),
                                          model, so);
  } else if (cs.type == "product") {
    const json& rows = need(c, "matrix", "coupling");
    if (!rows.is_array() || static_cast<int>(rows.size()) != n)
      config_error("coupling.matrix needs one row per state component");
    cs.product_matrix = Matrix(n, dz);
    for (int i = 0; i < n; ++i) {
      const auto r = vector_of(rows[i], "coupling.matrix");
      if (r.size() != dz) config_error("coupling.matrix rows need one entry per parameter");
      cs.product_matrix.row(i) = r.transpose();
    }
    const Matrix B = cs.product_matrix;
    cs.condition = make_product_condition(
        [B](const Params& z, const State&) -> State { return B * z; }, dz,
        [B](const Params&, const Params& v, const State&) -> State { return B * v; },
        "conservative-product");
  } else {
    config_error("coupling.type '" + cs.type + "' is not one of kink, section, product");
  }
  return cs;
}

double Scenario::epsilon_for(double h_value) const {
  return epsilon ? *epsilon : h_value * h_value;
}

EngineOptions Scenario::options_for(double h_value) const {
  EngineOptions o = engine;
  o.epsilon = epsilon_for(h_value);
  o.seed = seed;
  return o;
}

State Scenario::reference_state() const {
  const std::string type = datum_spec.at("type").get<std::string>();
  if (type == "riemann") return vector_of(datum_spec.at("left"), "datum.left");
  if (type == "steps") return vector_of(datum_spec.at("far_left"), "datum.far_left");
  return vector_of(datum_spec.at("state"), "datum.state");
}

InitialDatum Scenario::datum(const PiecewiseConstantZeta& zeta_h) const {
  const std::string type = datum_spec.at("type").get<std::string>();
  InitialDatum base;
  if (type == "constant") {
    base.far_left = vector_of(datum_spec.at("state"), "datum.state");
  } else if (type == "riemann") {
    base.far_left = vector_of(datum_spec.at("left"), "datum.left");
    base.xs = {datum_spec.value("x", 0.0)};
    base.values = {vector_of(datum_spec.at("right"), "datum.right")};
  } else if (type == "steps") {
    base.far_left = vector_of(datum_spec.at("far_left"), "datum.far_left");
    base.xs = list_of(datum_spec.at("positions"), "datum.positions");
    for (const auto& v : datum_spec.at("values")) base.values.push_back(vector_of(v, "datum.values"));
  } else {
    // Discrete stationary solution: chain the junction map across zeta^h.
    base.far_left = vector_of(datum_spec.at("state"), "datum.state");
    State u = base.far_left;
    for (const auto& j : zeta_h.junctions()) {
      u = junction_map(*model, *condition, j.plus, j.minus, u, engine.riemann.junction);
      base.xs.push_back(j.x);
      base.values.push_back(u);
    }
  }
  if (!datum_spec.contains("perturbation")) return base;

  const json& p = datum_spec.at("perturbation");
  const State amp = vector_of(p.at("amplitude"), "datum.perturbation.amplitude");
  const double c = p.at("center").get<double>(), w = p.at("width").get<double>();
  const int cells = p.value("cells", 16);
  std::vector<double> cuts = base.xs;
  for (int k = 0; k <= cells; ++k) cuts.push_back(c - w + 2.0 * w * k / cells);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  InitialDatum out;
  out.far_left = base.far_left;
  for (std::size_t k = 0; k < cuts.size(); ++k) {
    const double mid = k + 1 < cuts.size() ? 0.5 * (cuts[k] + cuts[k + 1]) : cuts[k] + 1.0;
    out.xs.push_back(cuts[k]);
    out.values.push_back(base.at(mid) + cosine_bump((mid - c) / w) * amp);
  }
  return out;
}

State Scenario::datum_at(double x, const PiecewiseConstantZeta& zeta_h) const {
  return datum(zeta_h).at(x);
}

SourceTerm Scenario::oracle_source() const {
  if (!geometry->jumps().empty())
    config_error("the finite-volume oracle needs a geometry without jumps");
  if (coupling_type == "section") return section_source(*model, *geometry);
  if (coupling_type == "kink") return curvature_drag_source(drag, *geometry);
  const Matrix B = product_matrix;
  return product_source([B](const Params& z) -> State { return B * z; }, *geometry);
}

namespace {

Scenario parse_scenario_impl(const json& doc) {
  if (!doc.is_object()) config_error("scenario must be a JSON object");
  if (!doc.contains("schema_version") || !doc.at("schema_version").is_number_integer())
    config_error("scenario needs an integer schema_version");
  if (doc.at("schema_version").get<int>() != kSchemaVersion)
    config_error("unsupported schema_version " + doc.at("schema_version").dump());

  Scenario sc;
  sc.source = doc;
  sc.name = doc.value("name", std::string("scenario"));
  sc.model = parse_model(need(doc, "model", "scenario"));
  sc.geometry = parse_geometry(need(doc, "geometry", "scenario"));
  const int n = sc.model->dimension();
  const int dz = sc.geometry->dimension();

  const CouplingSpec cs = parse_coupling_spec(need(doc, "coupling", "scenario"), sc.model, dz);
  sc.condition = cs.condition;
  sc.coupling_type = cs.type;
  sc.drag = cs.drag;
  sc.product_matrix = cs.product_matrix;
  sc.unit_parameters = cs.unit_parameters;
  sc.condition->validate_parameter(sc.geometry->at_minus_infinity());

  sc.datum_spec = need(doc, "datum", "scenario");
  check_datum(sc.datum_spec, n);
  if (!sc.model->in_domain(sc.reference_state()))
    config_error("datum reference state lies outside the domain");

  const json num = doc.value("numerics", json::object());
  sc.h = number_or(num, "h", sc.h, "numerics");
  if (num.contains("epsilon")) sc.epsilon = number(num, "epsilon", "numerics");
  if (num.contains("h_list")) sc.h_list = list_of(num.at("h_list"), "numerics.h_list");
  sc.horizon = number_or(num, "horizon", sc.horizon, "numerics");
  if (num.contains("snapshots")) sc.snapshots = list_of(num.at("snapshots"), "numerics.snapshots");
  if (sc.snapshots.empty()) sc.snapshots = {0.0, sc.horizon};
  sc.window = number_or(num, "window", 0.0, "numerics");
  sc.oracle_cells = static_cast<int>(number_or(num, "oracle_cells", 2000, "numerics"));
  auto& e = sc.engine;
  e.max_interactions = static_cast<long>(number_or(num, "max_interactions", 1e6, "numerics"));
  e.small_bv_budget = number_or(num, "small_bv_budget", e.small_bv_budget, "numerics");
  e.box_radius = number_or(num, "box_radius", e.box_radius, "numerics");
  e.glimm_C = number_or(num, "glimm_C", 0.0, "numerics");
  e.lambda_hat = number_or(num, "lambda_hat", 0.0, "numerics");
  e.rho = number_or(num, "rho", 0.0, "numerics");
  e.rho_max = number_or(num, "rho_max", 0.0, "numerics");
  e.delta_R = number_or(num, "delta_R", 0.0, "numerics");
  e.log_interactions = num.value("log_interactions", true);
  e.monitor_functionals = num.value("monitor_functionals", true);
  e.record_trajectory = num.value("record_trajectory", true);
  sc.seed = doc.value("seed", std::uint64_t{0});

  if (!(sc.h > 0.0)) config_error("numerics.h must be positive");
  if (sc.epsilon && !(*sc.epsilon > 0.0)) config_error("numerics.epsilon must be positive");
  for (double v : sc.h_list)
    if (!(v > 0.0)) config_error("numerics.h_list entries must be positive");
  if (!(sc.horizon > 0.0)) config_error("numerics.horizon must be positive");
  for (double t : sc.snapshots)
    if (t < 0.0 || t > sc.horizon) config_error("snapshot times must lie in [0, horizon]");
  if (sc.window < 0.0) config_error("numerics.window must be non-negative");
  if (sc.oracle_cells < 2) config_error("numerics.oracle_cells must be at least 2");
  if (e.max_interactions < 1) config_error("numerics.max_interactions must be positive");
  if (!(e.small_bv_budget > 0.0)) config_error("numerics.small_bv_budget must be positive");
  return sc;
}

}  // namespace

Scenario parse_scenario(const json& doc) {
  try {
    return parse_scenario_impl(doc);
  } catch (const json::exception& ex) {
    config_error(std::string("malformed scenario: ") + ex.what());
  }
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) config_error("cannot open scenario file " + path);
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& ex) {
    config_error("scenario " + path + " is not valid JSON: " + ex.what());
  }
  return parse_scenario(doc);
}

std::unique_ptr<Engine> run_scenario(const Scenario& sc, double h_value) {
  PiecewiseConstantZeta zh = build_zeta_h(*sc.geometry, h_value);
  const InitialDatum u0 = sc.datum(zh);
  auto engine = std::make_unique<Engine>(sc.model, sc.condition, std::move(zh),
                                         sc.options_for(h_value));
  engine->initialize(u0);
  engine->run(sc.horizon);
  return engine;
}

}  // namespace wft
