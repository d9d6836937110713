#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pdp/core.hpp"

namespace pdp {

// The validator recomputes every trajectory from raw instance data. It shares
// no code with the model builder and is the reference the solver is tested
// against.

struct Timeline {
    std::vector<double> arrivals;  // route clock at each stop
    double duration = 0.0;         // including the return leg
};

/// Arrival times along `nodes` (travel-matrix indices, depot excluded).
/// Throws InputError for a node outside the matrix.
Timeline route_timeline(std::span<const std::size_t> nodes, const TravelMatrix& travel);

/// Depot -> nodes... -> depot distance.
double route_distance(std::span<const std::size_t> nodes, const TravelMatrix& travel);

struct LoadProfile {
    Load departure;          // everything to deliver, loaded at the depot
    std::vector<Load> after; // on board after serving each stop
};

LoadProfile route_loads(std::span<const Order> stops);

/// Builds a Route for `vehicle` visiting `sequence` with all derived fields
/// filled in. Unknown order ids throw InputError.
Route annotate_route(const Instance& instance, std::string vehicle,
                     std::vector<std::string> sequence);

/// Fills total distance/duration from the routes.
void summarize_plan(Plan& plan);

enum class Rule {
    capacity_weight,
    capacity_dim,
    departure_load,
    window_lower,
    window_upper,
    duration,
    mobility,
    duplicate_order,
    unknown_order,
    missing_order,
    unknown_vehicle,
    vehicle_uses,
};

std::string_view rule_name(Rule rule);
std::optional<Rule> rule_from_name(std::string_view name);

struct Violation {
    int route = -1;          // route index, -1 for plan-level findings
    Rule rule{};
    int slot = -1;           // stop index within the route, -1 when n/a
    std::string order;       // offending order id, when there is one
    double measured = 0.0;
    double bound = 0.0;

    friend bool operator==(const Violation&, const Violation&) = default;
};

struct ValidationReport {
    bool ok = true;
    std::vector<Violation> violations;

    void add(Violation v) {
        ok = false;
        violations.push_back(std::move(v));
    }

    friend bool operator==(const ValidationReport&, const ValidationReport&) = default;
};

/// Checks one route against its vehicle: loads at departure and after every
/// stop, every arrival inside its window, duration, and mobility.
void validate_route(const Instance& instance, const Route& route, int route_index,
                    ValidationReport& report);

/// Route checks for every route plus the order-partition rules: each order
/// is served exactly once or listed unserved, never both.
ValidationReport validate_plan(const Instance& instance, const Plan& plan);

std::string describe(const Violation& v);

}  // namespace pdp
