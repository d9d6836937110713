#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdio>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include "pdp/fixtures.hpp"
#include "pdp/io.hpp"
#include "pdp/orchestrator.hpp"
#include "pdp/render.hpp"
#include "pdp/validator.hpp"

namespace pdp::cli {

namespace {

constexpr std::size_t kAutoExactUpTo = 8;

struct SolveFlags {
    std::string backend = "auto";
    std::uint64_t seed = SolverConfig{}.seed;
    double time_limit = SolverConfig{}.time_limit;
    std::string mobility = "filter";
    bool no_rentals = false;
    int threads = 1;
    std::size_t exact_max_orders = SolverConfig{}.exact_max_orders;
    int sweeps = AnnealParams{}.sweeps;
    int restarts = AnnealParams{}.restarts;
};

void add_solver_flags(CLI::App& cmd, SolveFlags& f) {
    cmd.add_option("--backend", f.backend, "auto, exact, anneal or external-stub")
        ->check(CLI::IsMember({"auto", "exact", "anneal", "external-stub"}));
    cmd.add_option("--seed", f.seed, "random seed");
    cmd.add_option("--time-limit", f.time_limit, "seconds per route solve");
    cmd.add_option("--mobility-mode", f.mobility, "filter or constraint")
        ->check(CLI::IsMember({"filter", "constraint"}));
    cmd.add_flag("--no-rentals", f.no_rentals, "never use rentable vehicles");
    cmd.add_option("--threads", f.threads, "annealer restarts run in parallel");
    cmd.add_option("--exact-max-orders", f.exact_max_orders, "largest subproblem the exact backend accepts");
    cmd.add_option("--sweeps", f.sweeps, "annealing sweeps per restart");
    cmd.add_option("--restarts", f.restarts, "annealing restarts");
}

OrchestratorConfig to_config(const SolveFlags& f) {
    OrchestratorConfig c;
    c.mobility_mode = f.mobility == "constraint" ? MobilityMode::constraint : MobilityMode::filter;
    c.allow_rentals = !f.no_rentals;
    c.solver.seed = f.seed;
    c.solver.time_limit = f.time_limit;
    c.solver.threads = f.threads;
    c.solver.exact_max_orders = f.exact_max_orders;
    c.solver.anneal.sweeps = f.sweeps;
    c.solver.anneal.restarts = f.restarts;
    if (f.backend == "auto") {
        c.solver.backend = Backend::anneal;
        c.exact_up_to = kAutoExactUpTo;
    } else if (f.backend == "exact") {
        c.solver.backend = Backend::exact;
    } else if (f.backend == "anneal") {
        c.solver.backend = Backend::anneal;
    } else {
        c.solver.backend = Backend::external_stub;
    }
    return c;
}

void emit(const std::string& path, const std::string& content, std::ostream& out) {
    if (path.empty() || path == "-") {
        out << content;
    } else {
        write_file(path, content);
    }
}

std::string default_report_path(const std::string& plan_path) {
    if (plan_path.empty() || plan_path == "-") return {};
    const auto dot = plan_path.rfind(".json");
    if (dot != std::string::npos && dot + 5 == plan_path.size()) return plan_path.substr(0, dot) + ".report.json";
    return plan_path + ".report.json";
}

void print_violations(const ValidationReport& report, std::ostream& err) {
    for (const auto& v : report.violations) err << "violation: " << describe(v) << "\n";
}

void check_same_instance(const Instance& instance, const Plan& plan) {
    if (plan.instance != instance.name) {
        throw InputError("plan belongs to instance '" + plan.instance + "', not '" + instance.name + "'");
    }
}

std::string fixed(double v, int digits) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

int cmd_solve(const std::string& instance_path, const SolveFlags& flags, const std::string& out_path,
              std::string report_path, int verbosity, std::ostream& out, std::ostream& err) {
    const Instance instance = load_instance(read_file(instance_path));
    const OrchestratorConfig config = to_config(flags);
    const PlanResult result = plan_routes(instance, config);
    const ValidationReport report = validate_plan(instance, result.plan);

    if (verbosity > 0) {
        for (const auto& r : result.rounds) {
            err << "round " << r.vehicle << ": offered " << r.offered << ", " << r.variables << " vars, "
                << r.constraints << " constraints, " << backend_name(r.backend) << ", "
                << (r.feasible ? "feasible" : "infeasible") << ", served " << r.served << "\n";
        }
    }
    emit(out_path, save_plan(result.plan, report), out);
    if (report_path.empty()) report_path = default_report_path(out_path);
    if (!report_path.empty()) write_file(report_path, save_report(instance.name, report));

    print_violations(report, err);
    err << instance.name << ": " << result.plan.routes.size() << " route(s), served "
        << result.plan.served_count() << "/" << instance.orders.size() << ", distance "
        << fixed(result.plan.total_distance, 3) << "\n";
    if (!result.plan.unserved.empty()) {
        err << "unserved:";
        for (const auto& id : result.plan.unserved) err << " " << id;
        err << "\n";
    }
    return report.ok && result.plan.unserved.empty() ? kExitOk : kExitIncomplete;
}

int cmd_validate(const std::string& instance_path, const std::string& plan_path, const std::string& out_path,
                 std::ostream& out, std::ostream& err) {
    const Instance instance = load_instance(read_file(instance_path));
    const PlanFile file = load_plan(read_file(plan_path));
    check_same_instance(instance, file.plan);
    const ValidationReport report = validate_plan(instance, file.plan);
    emit(out_path, save_report(instance.name, report), out);
    print_violations(report, err);
    return report.ok ? kExitOk : kExitIncomplete;
}

int cmd_render(const std::string& instance_path, const std::string& plan_path, const std::string& out_path,
               std::ostream& out) {
    const Instance instance = load_instance(read_file(instance_path));
    Plan plan;
    plan.instance = instance.name;
    if (!plan_path.empty()) {
        plan = load_plan(read_file(plan_path)).plan;
        check_same_instance(instance, plan);
    }
    emit(out_path, render_svg(instance, plan), out);
    return kExitOk;
}

Variant parse_variant(const std::string& s) {
    if (s == "a" || s == "A") return Variant::a;
    if (s == "b" || s == "B") return Variant::b;
    return Variant::canonical;
}

int cmd_gen(const std::string& name, const std::string& variant, bool list, const std::string& out_path,
            std::ostream& out) {
    if (list) {
        for (const auto& n : fixture_names()) out << n << "\n";
        return kExitOk;
    }
    if (name.empty()) throw InputError("gen: fixture name required (see --list)");
    emit(out_path, save_instance(generate_fixture(name, parse_variant(variant))), out);
    return kExitOk;
}

int cmd_bench(std::vector<std::string> fixtures, const std::vector<std::string>& backends, SolveFlags flags,
              const std::string& out_path, std::ostream& out, std::ostream& err) {
    if (fixtures.empty()) fixtures = fixture_names();
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    char line[160];
    std::snprintf(line, sizeof line, "%-10s %-14s %12s %9s %8s %10s\n", "instance", "backend", "objective",
                  "feasible", "served", "wall_s");
    out << line;
    for (const auto& name : fixtures) {
        const Instance instance = generate_fixture(name);
        for (const auto& backend : backends) {
            flags.backend = backend;
            nlohmann::ordered_json row;
            row["instance"] = name;
            row["backend"] = backend;
            const auto start = std::chrono::steady_clock::now();
            try {
                const PlanResult result = plan_routes(instance, to_config(flags));
                const ValidationReport report = validate_plan(instance, result.plan);
                row["objective"] = result.plan.total_distance;
                row["feasible"] = report.ok && result.plan.unserved.empty();
                row["served"] = result.plan.served_count();
                row["error"] = nullptr;
            } catch (const std::exception& e) {
                row["objective"] = nullptr;
                row["feasible"] = false;
                row["served"] = 0;
                row["error"] = e.what();
                err << name << "/" << backend << ": " << e.what() << "\n";
            }
            const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
            row["wall_seconds"] = wall;
            const std::string objective =
                row["objective"].is_null() ? "-" : fixed(row["objective"].get<double>(), 3);
            const std::string served =
                std::to_string(row["served"].get<std::size_t>()) + "/" + std::to_string(instance.orders.size());
            std::snprintf(line, sizeof line, "%-10s %-14s %12s %9s %8s %10.3f\n", name.c_str(), backend.c_str(),
                          objective.c_str(), row["feasible"].get<bool>() ? "yes" : "no", served.c_str(), wall);
            out << line;
            rows.push_back(std::move(row));
        }
    }
    nlohmann::ordered_json doc;
    doc["format"] = "pdp-bench";
    doc["seed"] = flags.seed;
    doc["rows"] = std::move(rows);
    write_file(out_path, doc.dump(2) + "\n");
    return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Pickup-and-delivery route planner", "pdpsolve"};
    app.require_subcommand(1);
    app.fallthrough();
    int verbosity = 0;
    app.add_flag("-v,--verbose", verbosity, "more output on stderr");

    SolveFlags solve_flags;
    std::string instance_path, plan_path, out_path, report_path;
    auto* solve = app.add_subcommand("solve", "plan routes for an instance file");
    solve->add_option("instance", instance_path, "instance JSON")->required();
    add_solver_flags(*solve, solve_flags);
    solve->add_option("--out", out_path, "plan output path (default stdout)");
    solve->add_option("--report", report_path, "report output path (default next to --out)");

    auto* validate = app.add_subcommand("validate", "check a plan against its instance");
    validate->add_option("instance", instance_path, "instance JSON")->required();
    validate->add_option("plan", plan_path, "plan JSON")->required();
    validate->add_option("--out", out_path, "report output path (default stdout)");

    auto* render = app.add_subcommand("render", "draw a plan as SVG");
    render->add_option("instance", instance_path, "instance JSON")->required();
    render->add_option("plan", plan_path, "plan JSON (omit for nodes only)");
    render->add_option("--out", out_path, "SVG output path (default stdout)");

    std::string fixture_name, variant = "canonical";
    bool list = false;
    auto* gen = app.add_subcommand("gen", "write a built-in fixture instance");
    gen->add_option("name", fixture_name, "fixture name");
    gen->add_option("--variant", variant, "a, b or canonical")->check(CLI::IsMember({"a", "b", "A", "B", "canonical"}));
    gen->add_flag("--list", list, "list fixture names");
    gen->add_option("--out", out_path, "instance output path (default stdout)");

    SolveFlags bench_flags;
    std::vector<std::string> bench_fixtures;
    std::vector<std::string> bench_backends{"exact", "anneal"};
    std::string bench_out = "bench.json";
    auto* bench = app.add_subcommand("bench", "solve fixtures with several backends");
    bench->add_option("--fixtures", bench_fixtures, "fixture names (default all)")->delimiter(',');
    bench->add_option("--backends", bench_backends, "backends to compare")
        ->delimiter(',')
        ->check(CLI::IsMember({"auto", "exact", "anneal"}));
    add_solver_flags(*bench, bench_flags);
    bench->add_option("--out", bench_out, "machine-readable results path");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return kExitError;
    }

    try {
        if (*solve) return cmd_solve(instance_path, solve_flags, out_path, report_path, verbosity, out, err);
        if (*validate) return cmd_validate(instance_path, plan_path, out_path, out, err);
        if (*render) return cmd_render(instance_path, plan_path, out_path, out);
        if (*gen) return cmd_gen(fixture_name, variant, list, out_path, out);
        if (*bench) return cmd_bench(bench_fixtures, bench_backends, bench_flags, bench_out, out, err);
    } catch (const InstanceCheckError& e) {
        err << "error: " << e.what() << "\n";
        for (const auto& p : e.violations()) err << "  " << p << "\n";
        return kExitError;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitError;
    }
    return kExitError;
}

}  // namespace pdp::cli
