#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pdp/backends.hpp"
#include "pdp/core.hpp"
#include "pdp/cqm.hpp"

namespace pdp {

/// How vehicle-type restrictions reach the route model.
enum class MobilityMode {
    filter,      // drop unreachable orders before building the model
    constraint,  // keep every order and add per-order mobility bounds
};

enum class VehiclePolicy {
    owned_first,     // owned before rentable, larger min(W, D), smaller vt, declaration order
    declared_order,
};

struct OrchestratorConfig {
    MobilityMode mobility_mode = MobilityMode::filter;
    VehiclePolicy vehicle_policy = VehiclePolicy::owned_first;
    SolverConfig solver;
    /// With the anneal backend, subproblems of at most this many orders are
    /// solved exactly instead. 0 disables the switch.
    std::size_t exact_up_to = 0;
    bool allow_rentals = true;
    int max_rounds = 1000;
};

/// Keeps the orders a vehicle of type `vehicle.type` may visit.
FilteredSubproblem order_filtering(std::span<const Order> orders, const VehicleSpec& vehicle,
                                   const TravelMatrix& travel);

/// Same shape as order_filtering but keeps every order (constraint mode).
FilteredSubproblem unfiltered_subproblem(std::span<const Order> orders, const VehicleSpec& vehicle,
                                         const TravelMatrix& travel);

/// Remaining uses per fleet entry.
struct FleetState {
    std::vector<int> uses_left;

    static FleetState fresh(std::span<const VehicleSpec> fleet);
};

/// Index into `fleet` of the next vehicle to route, or nullopt when no vehicle
/// with uses left can reach any remaining order.
std::optional<std::size_t> select_vehicle(std::span<const VehicleSpec> fleet, const FleetState& state,
                                          std::span<const Order> remaining, VehiclePolicy policy,
                                          bool allow_rentals = true);

/// Per-round record, handy for tests and benchmarks.
struct RoundLog {
    std::string vehicle;
    std::size_t offered = 0;     // M' given to the model
    std::size_t variables = 0;
    std::size_t constraints = 0;
    Backend backend = Backend::anneal;
    bool feasible = false;
    double objective = 0.0;
    std::size_t served = 0;
};

struct PlanResult {
    Plan plan;
    std::vector<RoundLog> rounds;
};

/// Optional hook, called with every subproblem and model before solving.
using ModelObserver = std::function<void(const FilteredSubproblem&, const QuadraticModel&)>;

/// Greedy route-by-route construction: pick a vehicle, offer it the orders it
/// can reach, solve one route model, commit, repeat. Stops when every order
/// is served, no vehicle is selectable, or a round serves nothing.
/// Throws InstanceCheckError on a malformed instance.
PlanResult plan_routes(const Instance& instance, const OrchestratorConfig& config,
                       const ModelObserver& observer = {});

inline Plan plan(const Instance& instance, const OrchestratorConfig& config) {
    return plan_routes(instance, config).plan;
}

struct EquivalenceReport {
    bool equivalent = true;
    Plan filtered;
    Plan constrained;
    std::vector<double> filtered_objectives;     // per round, model objective
    std::vector<double> constrained_objectives;
    std::string detail;  // first mismatch, empty when equivalent
};

/// Plans the instance in both mobility modes with the exact backend and
/// compares the routes round by round.
EquivalenceReport mobility_mode_equivalence_check(const Instance& instance, OrchestratorConfig config,
                                                  double tolerance = 1e-9);

}  // namespace pdp
