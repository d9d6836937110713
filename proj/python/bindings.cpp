#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>

#include "pdp/fixtures.hpp"
#include "pdp/io.hpp"
#include "pdp/orchestrator.hpp"
#include "pdp/render.hpp"
#include "pdp/validator.hpp"

namespace py = pybind11;
using namespace pdp;

namespace {

Variant to_variant(const std::string& s) {
    if (s == "a" || s == "A") return Variant::a;
    if (s == "b" || s == "B") return Variant::b;
    if (s == "canonical") return Variant::canonical;
    throw InputError("unknown variant '" + s + "' (expected a, b or canonical)");
}

OrchestratorConfig make_config(const std::string& backend, std::uint64_t seed, double time_limit,
                               const std::string& mobility_mode, bool allow_rentals, int threads, int sweeps,
                               int restarts, std::size_t exact_max_orders, const std::string& external_model_path) {
    OrchestratorConfig c;
    if (mobility_mode == "filter") c.mobility_mode = MobilityMode::filter;
    else if (mobility_mode == "constraint") c.mobility_mode = MobilityMode::constraint;
    else throw InputError("unknown mobility mode '" + mobility_mode + "'");
    if (backend == "auto") {
        c.solver.backend = Backend::anneal;
        c.exact_up_to = 8;
    } else if (backend == "exact") {
        c.solver.backend = Backend::exact;
    } else if (backend == "anneal") {
        c.solver.backend = Backend::anneal;
    } else if (backend == "external-stub") {
        c.solver.backend = Backend::external_stub;
    } else {
        throw InputError("unknown backend '" + backend + "'");
    }
    c.allow_rentals = allow_rentals;
    c.solver.seed = seed;
    c.solver.time_limit = time_limit;
    c.solver.threads = threads;
    c.solver.anneal.sweeps = sweeps;
    c.solver.anneal.restarts = restarts;
    c.solver.exact_max_orders = exact_max_orders;
    c.solver.external_model_path = external_model_path;
    return c;
}

std::string solve(const std::string& instance_json, const std::string& backend, std::uint64_t seed,
                  double time_limit, const std::string& mobility_mode, bool allow_rentals, int threads, int sweeps,
                  int restarts, std::size_t exact_max_orders, const std::string& external_model_path) {
    const Instance inst = load_instance(instance_json);
    const OrchestratorConfig config = make_config(backend, seed, time_limit, mobility_mode, allow_rentals, threads,
                                                  sweeps, restarts, exact_max_orders, external_model_path);
    Plan p;
    {
        py::gil_scoped_release release;
        p = plan(inst, config);
    }
    return save_plan(p, validate_plan(inst, p));
}

std::string validate(const std::string& instance_json, const std::string& plan_json) {
    const Instance inst = load_instance(instance_json);
    const PlanFile f = load_plan(plan_json);
    if (f.plan.instance != inst.name) {
        throw InputError("plan belongs to instance '" + f.plan.instance + "', not '" + inst.name + "'");
    }
    return save_report(inst.name, validate_plan(inst, f.plan));
}

std::string render(const std::string& instance_json, const std::optional<std::string>& plan_json) {
    const Instance inst = load_instance(instance_json);
    Plan p;
    p.instance = inst.name;
    if (plan_json) p = load_plan(*plan_json).plan;
    return render_svg(inst, p);
}

std::string route_model(const std::string& instance_json, const std::string& vehicle_id,
                        const std::string& mobility_mode) {
    const Instance inst = load_instance(instance_json);
    const VehicleSpec* v = inst.find_vehicle(vehicle_id);
    if (!v) throw InputError("unknown vehicle '" + vehicle_id + "'");
    const bool constraint = mobility_mode == "constraint";
    const FilteredSubproblem sub = constraint ? unfiltered_subproblem(inst.orders, *v, inst.travel)
                                              : order_filtering(inst.orders, *v, inst.travel);
    return model_to_json(build_route_model(sub, default_weights(inst.travel), {constraint}));
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Pickup-and-delivery route planning core";

    py::register_exception<InputError>(m, "InputError", PyExc_ValueError);

    const SolverConfig defaults;
    m.def("fixture_names", &fixture_names);
    m.def(
        "generate_fixture",
        [](const std::string& name, const std::string& variant) {
            return save_instance(generate_fixture(name, to_variant(variant)));
        },
        py::arg("name"), py::arg("variant") = "canonical", "Instance JSON for a built-in scenario.");
    m.def("solve", &solve, py::arg("instance"), py::arg("backend") = "auto", py::arg("seed") = defaults.seed,
          py::arg("time_limit") = defaults.time_limit, py::arg("mobility_mode") = "filter",
          py::arg("allow_rentals") = true, py::arg("threads") = 1, py::arg("sweeps") = defaults.anneal.sweeps,
          py::arg("restarts") = defaults.anneal.restarts, py::arg("exact_max_orders") = defaults.exact_max_orders,
          py::arg("external_model_path") = "", "Plan JSON (with its validation report) for an instance JSON.");
    m.def("validate", &validate, py::arg("instance"), py::arg("plan"), "Report JSON for a plan.");
    m.def("render_svg", &render, py::arg("instance"), py::arg("plan") = py::none(), "SVG drawing of a plan.");
    m.def("route_model", &route_model, py::arg("instance"), py::arg("vehicle"), py::arg("mobility_mode") = "filter",
          "Serialized route model for one vehicle over every order.");
}
