#include "pdp/orchestrator.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

#include "pdp/validator.hpp"

namespace pdp {

namespace {

FilteredSubproblem make_subproblem(std::vector<Order> orders, const VehicleSpec& vehicle,
                                   const TravelMatrix& travel, bool filtered) {
    FilteredSubproblem sub;
    std::vector<std::size_t> nodes{0};
    for (const Order& o : orders) {
        nodes.push_back(o.node);
        sub.lower.push_back(o.earliest);
        sub.upper.push_back(o.latest);
    }
    sub.orders = std::move(orders);
    sub.vehicle = vehicle;
    sub.travel = travel.restricted(nodes);
    sub.filtered = filtered;
    return sub;
}

bool reaches_any(const VehicleSpec& v, std::span<const Order> remaining) {
    return std::any_of(remaining.begin(), remaining.end(), [&](const Order& o) { return can_serve(v.type, o); });
}

}  // namespace

FilteredSubproblem order_filtering(std::span<const Order> orders, const VehicleSpec& vehicle,
                                   const TravelMatrix& travel) {
    std::vector<Order> kept;
    std::copy_if(orders.begin(), orders.end(), std::back_inserter(kept),
                 [&](const Order& o) { return can_serve(vehicle.type, o); });
    return make_subproblem(std::move(kept), vehicle, travel, true);
}

FilteredSubproblem unfiltered_subproblem(std::span<const Order> orders, const VehicleSpec& vehicle,
                                         const TravelMatrix& travel) {
    return make_subproblem({orders.begin(), orders.end()}, vehicle, travel, false);
}

FleetState FleetState::fresh(std::span<const VehicleSpec> fleet) {
    FleetState s;
    for (const auto& v : fleet) s.uses_left.push_back(v.max_uses);
    return s;
}

std::optional<std::size_t> select_vehicle(std::span<const VehicleSpec> fleet, const FleetState& state,
                                          std::span<const Order> remaining, VehiclePolicy policy,
                                          bool allow_rentals) {
    std::optional<std::size_t> best;
    const auto preferred = [&](const VehicleSpec& a, const VehicleSpec& b) {
        if (a.ownership != b.ownership) return a.ownership == Ownership::owned;
        const double ca = std::min(a.weight_capacity, a.dim_capacity);
        const double cb = std::min(b.weight_capacity, b.dim_capacity);
        if (ca != cb) return ca > cb;
        return a.type < b.type;
    };
    for (std::size_t k = 0; k < fleet.size(); ++k) {
        const VehicleSpec& v = fleet[k];
        if (k >= state.uses_left.size() || state.uses_left[k] <= 0) continue;
        if (!allow_rentals && v.ownership == Ownership::rentable) continue;
        if (!reaches_any(v, remaining)) continue;
        if (policy == VehiclePolicy::declared_order) return k;
        // Declaration order breaks ties: only a strictly preferred vehicle replaces.
        if (!best || preferred(v, fleet[*best])) best = k;
    }
    return best;
}

PlanResult plan_routes(const Instance& instance, const OrchestratorConfig& config, const ModelObserver& observer) {
    if (auto problems = check_instance(instance); !problems.empty()) throw InstanceCheckError(std::move(problems));
    check_config(config.solver);
    if (config.max_rounds < 1) throw InputError("orchestrator config: max_rounds must be >= 1");

    PlanResult result;
    result.plan.instance = instance.name;
    // One reward for the whole instance, so filter and constraint mode score
    // identical routes identically.
    const ObjectiveWeights weights = default_weights(instance.travel);

    std::vector<Order> remaining = instance.orders;
    FleetState fleet = FleetState::fresh(instance.fleet);

    for (int round = 0; round < config.max_rounds && !remaining.empty(); ++round) {
        const auto pick = select_vehicle(instance.fleet, fleet, remaining, config.vehicle_policy, config.allow_rentals);
        if (!pick) break;
        const VehicleSpec& vehicle = instance.fleet[*pick];
        --fleet.uses_left[*pick];

        const bool constraint_mode = config.mobility_mode == MobilityMode::constraint;
        const FilteredSubproblem sub = constraint_mode
                                           ? unfiltered_subproblem(remaining, vehicle, instance.travel)
                                           : order_filtering(remaining, vehicle, instance.travel);
        const QuadraticModel model = build_route_model(sub, weights, {constraint_mode});
        if (observer) observer(sub, model);

        Backend backend = config.solver.backend;
        if (backend == Backend::anneal && sub.size() <= config.exact_up_to) backend = Backend::exact;
        SolveOutcome outcome;
        switch (backend) {
            case Backend::exact: outcome = solve_exact(model, sub, config.solver); break;
            case Backend::anneal: outcome = solve_anneal(model, config.solver); break;
            case Backend::external_stub: outcome = solve_external_stub(model, config.solver); break;
        }

        RoundLog log;
        log.vehicle = vehicle.id;
        log.offered = sub.size();
        log.variables = model.num_variables();
        log.constraints = model.constraints().size();
        log.backend = backend;
        log.feasible = outcome.available && outcome.feasible;
        log.objective = outcome.objective;

        if (!log.feasible || outcome.sequence.empty()) {
            result.rounds.push_back(log);
            break;
        }

        std::vector<std::string> ids;
        for (std::size_t i : outcome.sequence) ids.push_back(sub.orders[i].id);
        Route route = annotate_route(instance, vehicle.id, ids);

        ValidationReport check;
        validate_route(instance, route, static_cast<int>(result.plan.routes.size()), check);
        if (!check.ok) {
            throw std::logic_error("route for vehicle '" + vehicle.id +
                                   "' satisfies the model but fails validation: " + describe(check.violations[0]));
        }

        const std::unordered_set<std::string> served(ids.begin(), ids.end());
        std::erase_if(remaining, [&](const Order& o) { return served.count(o.id) > 0; });
        log.served = ids.size();
        result.rounds.push_back(log);
        result.plan.routes.push_back(std::move(route));
    }

    for (const Order& o : remaining) result.plan.unserved.push_back(o.id);
    summarize_plan(result.plan);
    return result;
}

EquivalenceReport mobility_mode_equivalence_check(const Instance& instance, OrchestratorConfig config,
                                                  double tolerance) {
    config.solver.backend = Backend::exact;
    config.exact_up_to = 0;

    EquivalenceReport report;
    config.mobility_mode = MobilityMode::filter;
    PlanResult a = plan_routes(instance, config);
    config.mobility_mode = MobilityMode::constraint;
    PlanResult b = plan_routes(instance, config);

    for (const auto& r : a.rounds) report.filtered_objectives.push_back(r.objective);
    for (const auto& r : b.rounds) report.constrained_objectives.push_back(r.objective);
    report.filtered = std::move(a.plan);
    report.constrained = std::move(b.plan);

    std::ostringstream why;
    if (report.filtered.routes.size() != report.constrained.routes.size()) {
        why << "route count " << report.filtered.routes.size() << " vs " << report.constrained.routes.size();
    } else if (report.filtered_objectives.size() != report.constrained_objectives.size()) {
        why << "round count differs";
    } else {
        for (std::size_t k = 0; k < report.filtered_objectives.size(); ++k) {
            if (std::abs(report.filtered_objectives[k] - report.constrained_objectives[k]) > tolerance) {
                why << "round " << k << " objective " << report.filtered_objectives[k] << " vs "
                    << report.constrained_objectives[k];
                break;
            }
        }
        for (std::size_t k = 0; why.str().empty() && k < report.filtered.routes.size(); ++k) {
            const Route& x = report.filtered.routes[k];
            const Route& y = report.constrained.routes[k];
            const std::set<std::string> sx(x.sequence.begin(), x.sequence.end());
            const std::set<std::string> sy(y.sequence.begin(), y.sequence.end());
            if (x.vehicle != y.vehicle || sx != sy) {
                why << "route " << k << " serves a different order set";
            } else if (std::abs(x.distance - y.distance) > tolerance) {
                why << "route " << k << " distance " << x.distance << " vs " << y.distance;
            }
        }
    }
    report.detail = why.str();
    report.equivalent = report.detail.empty();
    return report;
}

}  // namespace pdp
