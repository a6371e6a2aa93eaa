#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <memory>
#include <optional>
#include <string>

#include "wft/coupling.hpp"
#include "wft/engine.hpp"
#include "wft/error.hpp"
#include "wft/report.hpp"
#include "wft/riemann.hpp"
#include "wft/scenario.hpp"
#include "wft/study.hpp"
#include "wft/verify.hpp"

namespace py = pybind11;
using namespace wft;
using nlohmann::json;

namespace {

// Dicts cross the boundary as JSON text; the documents are small.
json to_json(const py::object& obj) {
  const auto dumps = py::module_::import("json").attr("dumps");
  return json::parse(dumps(obj).cast<std::string>());
}

py::object from_json(const json& doc) {
  return py::module_::import("json").attr("loads")(doc.dump());
}

ConditionPtr coupling_from(const py::object& spec, const ModelPtr& model, int dz) {
  return parse_coupling_spec(to_json(spec), model, dz).condition;
}

py::dict decomposition_dict(const WaveDecomposition& s) {
  py::dict d;
  d["sizes"] = s.sizes;
  d["speeds"] = s.speeds;
  d["states"] = s.states;
  d["junction"] = s.junction;
  d["split"] = s.split;
  d["residual"] = s.residual;
  d["junction_defect"] = s.junction_defect;
  d["iterations"] = s.iterations;
  return d;
}

py::dict profile_dict(const Profile& p) {
  py::dict d;
  d["far_left"] = p.far_left;
  d["xs"] = p.xs;
  d["values"] = p.values;
  return d;
}

/// A finished run together with the scenario that produced it.
struct Run {
  Scenario scenario;
  double h;
  std::unique_ptr<Engine> engine;
  double wall = 0.0;
};

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Wave-front tracking for balance laws with coupling conditions";

  static py::exception<Error> error_type(m, "WftError");
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::set_error(error_type, (std::string(to_string(e.kind())) + ": " + e.what()).c_str());
    }
  });

  py::class_<Scenario>(m, "Scenario")
      .def_readonly("name", &Scenario::name)
      .def_readonly("h", &Scenario::h)
      .def_readonly("h_list", &Scenario::h_list)
      .def_readonly("horizon", &Scenario::horizon)
      .def_readonly("seed", &Scenario::seed)
      .def_property_readonly("source", [](const Scenario& s) { return from_json(s.source); })
      .def("epsilon_for", &Scenario::epsilon_for, py::arg("h"));

  m.def("load_scenario", &load_scenario, py::arg("path"));
  m.def("parse_scenario", [](const py::object& doc) { return parse_scenario(to_json(doc)); },
        py::arg("doc"));

  py::class_<Run>(m, "Run")
      .def_readonly("h", &Run::h)
      .def_property_readonly("time", [](const Run& r) { return r.engine->time(); })
      .def("summary",
           [](const Run& r) {
             return from_json(run_summary(*r.engine, r.scenario.name, r.h, r.wall));
           })
      .def("profile", [](const Run& r, double t) { return profile_dict(r.engine->trajectory().profile(t)); },
           py::arg("t"))
      .def("final_profile",
           [](const Run& r) { return profile_dict(r.engine->trajectory().profile(r.engine->time())); })
      .def("fronts",
           [](const Run& r) {
             py::list out;
             for (const auto& seg : r.engine->trajectory().segments) {
               const Front& f = seg.front;
               py::dict d;
               d["id"] = f.id;
               d["kind"] = to_string(f.kind);
               d["family"] = f.family >= 0 ? f.family + 1 : 0;
               d["x0"] = f.x0;
               d["t0"] = f.t0;
               d["t_end"] = seg.t_end;
               d["speed"] = f.speed;
               d["size"] = f.size;
               d["left"] = f.left;
               d["right"] = f.right;
               out.append(d);
             }
             return out;
           })
      .def("functional_series",
           [](const Run& r) {
             py::list out;
             for (const auto& s : r.engine->functional_series())
               out.append(py::make_tuple(s.t, s.V, s.Q, s.Upsilon));
             return out;
           })
      .def("mass_balance",
           [](const Run& r, double lo, double hi, bool weighted) {
             const auto mb = mass_balance(r.engine->trajectory(), r.engine->model(),
                                          weighted ? &r.engine->zeta_h() : nullptr, lo, hi,
                                          r.engine->time());
             py::dict d;
             d["initial"] = mb.initial;
             d["final"] = mb.final;
             d["front_defect"] = mb.front_defect;
             d["far_field"] = mb.far_field;
             d["residual"] = mb.residual;
             return d;
           },
           py::arg("lo") = -10.0, py::arg("hi") = 10.0, py::arg("weighted") = false)
      .def("weak_residual",
           [](const Run& r) {
             const auto& g = *r.scenario.geometry;
             const auto battery = default_bump_battery(g, r.engine->time());
             return weak_residual(r.engine->trajectory(), r.engine->model(),
                                  r.engine->condition(), g, battery);
           });

  m.def(
      "run",
      [](const Scenario& sc, std::optional<double> h, bool monitor, bool record) {
        auto run = std::make_unique<Run>();
        run->scenario = sc;
        run->scenario.engine.monitor_functionals = monitor;
        run->scenario.engine.log_interactions = monitor;
        run->scenario.engine.record_trajectory = record;
        run->h = h.value_or(sc.h);
        py::gil_scoped_release release;
        const auto t0 = std::chrono::steady_clock::now();
        run->engine = run_scenario(run->scenario, run->h);
        run->wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        return run;
      },
      py::arg("scenario"), py::arg("h") = py::none(), py::arg("monitor") = true,
      py::arg("record") = true);

  m.def(
      "convergence_study",
      [](const Scenario& sc, std::optional<std::vector<double>> h_list, bool oracle) {
        StudyResult r;
        {
          py::gil_scoped_release release;
          r = convergence_study(sc, h_list.value_or(sc.h_list), oracle);
        }
        py::list rows;
        for (const auto& row : r.rows) {
          py::dict d;
          d["h"] = row.h;
          d["epsilon"] = row.epsilon;
          d["distance"] = row.distance;
          d["oracle_distance"] = row.oracle_distance;
          d["tv_max"] = row.tv_max;
          d["interactions"] = row.interactions;
          rows.append(d);
        }
        py::dict out;
        out["window"] = r.window;
        out["rows"] = rows;
        out["monotone"] = r.monotone();
        return out;
      },
      py::arg("scenario"), py::arg("h_list") = py::none(), py::arg("oracle") = false);

  m.def(
      "solve_riemann",
      [](const py::object& model, const State& left, const State& right) {
        return decomposition_dict(solve_riemann(*parse_model_spec(to_json(model)), left, right));
      },
      py::arg("model"), py::arg("left"), py::arg("right"));

  m.def(
      "solve_generalized_riemann",
      [](const py::object& model, const py::object& coupling, const Params& z_plus,
         const Params& z_minus, const State& left, const State& right) {
        const auto md = parse_model_spec(to_json(model));
        const auto c = coupling_from(coupling, md, static_cast<int>(z_plus.size()));
        return decomposition_dict(solve_generalized_riemann(*md, *c, z_plus, z_minus, left, right));
      },
      py::arg("model"), py::arg("coupling"), py::arg("z_plus"), py::arg("z_minus"),
      py::arg("left"), py::arg("right"));

  m.def(
      "junction_map",
      [](const py::object& model, const py::object& coupling, const Params& z_plus,
         const Params& z_minus, const State& u, double z_radius) {
        const auto md = parse_model_spec(to_json(model));
        const auto c = coupling_from(coupling, md, static_cast<int>(z_plus.size()));
        JunctionOptions o;
        o.z_radius = z_radius;
        return junction_map(*md, *c, z_plus, z_minus, u, o);
      },
      py::arg("model"), py::arg("coupling"), py::arg("z_plus"), py::arg("z_minus"),
      py::arg("u"), py::arg("z_radius") = JunctionOptions{}.z_radius);

  m.def(
      "coupling_defect",
      [](const py::object& model, const py::object& coupling, const Params& z_plus,
         const Params& z_minus, const State& u) {
        const auto md = parse_model_spec(to_json(model));
        return coupling_from(coupling, md, static_cast<int>(z_plus.size()))
            ->evaluate(z_plus, z_minus, u);
      },
      py::arg("model"), py::arg("coupling"), py::arg("z_plus"), py::arg("z_minus"), py::arg("u"));

  m.def(
      "section_derivative",
      [](const py::object& model, const std::string& variant, double a, const State& u) {
        return section_derivative_formula(parse_section_variant(variant),
                                          *parse_model_spec(to_json(model)), a, u);
      },
      py::arg("model"), py::arg("variant"), py::arg("a"), py::arg("u"));

  m.def(
      "stationary_profile",
      [](const py::object& model, double a_start, double a_end, const State& u) {
        const auto r = stationary_profile_refined(*parse_model_spec(to_json(model)), a_start,
                                                  a_end, u);
        py::dict d;
        d["state"] = r.state;
        d["pressure_integral"] = r.pressure_integral;
        d["steps"] = r.steps;
        return d;
      },
      py::arg("model"), py::arg("a_start"), py::arg("a_end"), py::arg("u"));

  m.def(
      "lemma_constants",
      [](const py::object& model, const py::object& coupling, const State& u_ref,
         const Params& z_ref, int samples, std::uint64_t seed) {
        const auto md = parse_model_spec(to_json(model));
        const auto cs = parse_coupling_spec(to_json(coupling), md, static_cast<int>(z_ref.size()));
        SamplerOptions o;
        o.samples = samples;
        o.seed = seed;
        const auto c =
            interaction_estimate_sampler(*md, *cs.condition, u_ref, z_ref, cs.unit_parameters, o);
        py::dict d;
        d["xi_lipschitz"] = c.xi_lipschitz;
        d["junction_shift"] = c.junction_shift;
        d["junction_linearity"] = c.junction_linearity;
        d["size_bound_state"] = c.size_bound_state;
        d["size_bound_waves"] = c.size_bound_waves;
        d["commutation"] = c.commutation;
        d["interaction_left"] = c.interaction_left;
        d["interaction_right"] = c.interaction_right;
        d["commuting_defect"] = c.commuting_defect;
        d["samples"] = c.samples;
        d["failures"] = c.failures;
        return d;
      },
      py::arg("model"), py::arg("coupling"), py::arg("u_ref"), py::arg("z_ref"),
      py::arg("samples") = 500, py::arg("seed") = 1);
}
