#include "pdp/validator.hpp"

#include <array>
#include <map>
#include <sstream>
#include <unordered_map>

namespace pdp {

Timeline route_timeline(std::span<const std::size_t> nodes, const TravelMatrix& travel) {
    Timeline tl;
    tl.arrivals.reserve(nodes.size());
    std::size_t at = 0;
    double clock = 0.0;
    for (std::size_t node : nodes) {
        if (node >= travel.size()) {
            throw InputError("route_timeline: unknown node " + std::to_string(node));
        }
        clock += travel.time(at, node);
        tl.arrivals.push_back(clock);
        at = node;
    }
    tl.duration = nodes.empty() ? 0.0 : clock + travel.time(at, 0);
    return tl;
}

double route_distance(std::span<const std::size_t> nodes, const TravelMatrix& travel) {
    if (nodes.empty()) return 0.0;
    std::size_t at = 0;
    double total = 0.0;
    for (std::size_t node : nodes) {
        if (node >= travel.size()) {
            throw InputError("route_distance: unknown node " + std::to_string(node));
        }
        total += travel.dist(at, node);
        at = node;
    }
    return total + travel.dist(at, 0);
}

LoadProfile route_loads(std::span<const Order> stops) {
    LoadProfile lp;
    for (const Order& o : stops) {
        lp.departure.weight += o.delivery_weight;
        lp.departure.dim += o.delivery_dim;
    }
    Load on_board = lp.departure;
    lp.after.reserve(stops.size());
    for (const Order& o : stops) {
        on_board.weight += o.pickup_weight - o.delivery_weight;
        on_board.dim += o.pickup_dim - o.delivery_dim;
        lp.after.push_back(on_board);
    }
    return lp;
}

Route annotate_route(const Instance& instance, std::string vehicle, std::vector<std::string> sequence) {
    std::vector<Order> stops;
    std::vector<std::size_t> nodes;
    stops.reserve(sequence.size());
    for (const auto& id : sequence) {
        const Order* o = instance.find_order(id);
        if (o == nullptr) throw InputError("annotate_route: unknown order '" + id + "'");
        stops.push_back(*o);
        nodes.push_back(o->node);
    }
    Route r;
    r.vehicle = std::move(vehicle);
    r.sequence = std::move(sequence);
    Timeline tl = route_timeline(nodes, instance.travel);
    r.arrivals = std::move(tl.arrivals);
    r.duration = tl.duration;
    r.distance = route_distance(nodes, instance.travel);
    LoadProfile lp = route_loads(stops);
    r.departure_load = lp.departure;
    r.loads = std::move(lp.after);
    return r;
}

void summarize_plan(Plan& plan) {
    plan.total_distance = 0.0;
    plan.total_duration = 0.0;
    for (const Route& r : plan.routes) {
        plan.total_distance += r.distance;
        plan.total_duration += r.duration;
    }
}

namespace {

constexpr std::array<std::pair<Rule, std::string_view>, 12> kRuleNames{{
    {Rule::capacity_weight, "capacity-weight"},
    {Rule::capacity_dim, "capacity-dim"},
    {Rule::departure_load, "departure-load"},
    {Rule::window_lower, "window-lower"},
    {Rule::window_upper, "window-upper"},
    {Rule::duration, "duration"},
    {Rule::mobility, "mobility"},
    {Rule::duplicate_order, "duplicate-order"},
    {Rule::unknown_order, "unknown-order"},
    {Rule::missing_order, "missing-order"},
    {Rule::unknown_vehicle, "unknown-vehicle"},
    {Rule::vehicle_uses, "vehicle-uses"},
}};

bool exceeds(double measured, double bound) { return measured > bound + kFeasibilityTolerance; }

}  // namespace

std::string_view rule_name(Rule rule) {
    for (const auto& [r, name] : kRuleNames) {
        if (r == rule) return name;
    }
    return "?";
}

std::optional<Rule> rule_from_name(std::string_view name) {
    for (const auto& [r, n] : kRuleNames) {
        if (n == name) return r;
    }
    return std::nullopt;
}

void validate_route(const Instance& instance, const Route& route, int route_index,
                    ValidationReport& report) {
    const VehicleSpec* vehicle = instance.find_vehicle(route.vehicle);
    if (vehicle == nullptr) {
        report.add({route_index, Rule::unknown_vehicle, -1, {}, 0.0, 0.0});
        return;
    }

    std::vector<Order> stops;
    std::vector<std::size_t> nodes;
    std::vector<int> slots;
    for (std::size_t s = 0; s < route.sequence.size(); ++s) {
        const Order* o = instance.find_order(route.sequence[s]);
        if (o == nullptr) {
            report.add({route_index, Rule::unknown_order, static_cast<int>(s), route.sequence[s], 0.0, 0.0});
            continue;
        }
        stops.push_back(*o);
        nodes.push_back(o->node);
        slots.push_back(static_cast<int>(s));
    }

    const double W = vehicle->weight_capacity;
    const double D = vehicle->dim_capacity;
    const LoadProfile loads = route_loads(stops);
    if (exceeds(loads.departure.weight, W)) {
        report.add({route_index, Rule::departure_load, -1, {}, loads.departure.weight, W});
    }
    if (exceeds(loads.departure.dim, D)) {
        report.add({route_index, Rule::departure_load, -1, {}, loads.departure.dim, D});
    }

    const Timeline tl = route_timeline(nodes, instance.travel);
    for (std::size_t k = 0; k < stops.size(); ++k) {
        const Order& o = stops[k];
        const int slot = slots[k];
        if (exceeds(loads.after[k].weight, W)) {
            report.add({route_index, Rule::capacity_weight, slot, o.id, loads.after[k].weight, W});
        }
        if (exceeds(loads.after[k].dim, D)) {
            report.add({route_index, Rule::capacity_dim, slot, o.id, loads.after[k].dim, D});
        }
        const double t = tl.arrivals[k];
        if (t < o.earliest - kFeasibilityTolerance) {
            report.add({route_index, Rule::window_lower, slot, o.id, t, o.earliest});
        }
        if (o.latest && exceeds(t, *o.latest)) {
            report.add({route_index, Rule::window_upper, slot, o.id, t, *o.latest});
        }
        if (!can_serve(vehicle->type, o)) {
            report.add({route_index, Rule::mobility, slot, o.id, static_cast<double>(o.zone_type),
                        static_cast<double>(vehicle->type)});
        }
    }
    if (vehicle->max_duration && exceeds(tl.duration, *vehicle->max_duration)) {
        report.add({route_index, Rule::duration, -1, {}, tl.duration, *vehicle->max_duration});
    }
}

ValidationReport validate_plan(const Instance& instance, const Plan& plan) {
    ValidationReport report;
    std::unordered_map<std::string, int> seen;
    std::map<std::string, int> uses;

    for (std::size_t r = 0; r < plan.routes.size(); ++r) {
        const Route& route = plan.routes[r];
        validate_route(instance, route, static_cast<int>(r), report);
        ++uses[route.vehicle];
        for (std::size_t s = 0; s < route.sequence.size(); ++s) {
            if (++seen[route.sequence[s]] == 2) {
                report.add({static_cast<int>(r), Rule::duplicate_order, static_cast<int>(s),
                            route.sequence[s], 2.0, 1.0});
            }
        }
    }
    for (const auto& id : plan.unserved) {
        if (instance.find_order(id) == nullptr) {
            report.add({-1, Rule::unknown_order, -1, id, 0.0, 0.0});
        } else if (++seen[id] == 2) {
            report.add({-1, Rule::duplicate_order, -1, id, 2.0, 1.0});
        }
    }
    for (const Order& o : instance.orders) {
        if (seen.find(o.id) == seen.end()) report.add({-1, Rule::missing_order, -1, o.id, 0.0, 1.0});
    }
    for (const auto& [vid, count] : uses) {
        const VehicleSpec* v = instance.find_vehicle(vid);
        if (v != nullptr && count > v->max_uses) {
            report.add({-1, Rule::vehicle_uses, -1, {}, static_cast<double>(count),
                        static_cast<double>(v->max_uses)});
        }
    }
    return report;
}

std::string describe(const Violation& v) {
    std::ostringstream os;
    if (v.route >= 0) os << "route " << v.route;
    else os << "plan";
    if (v.slot >= 0) os << " slot " << v.slot;
    os << ": " << rule_name(v.rule);
    if (!v.order.empty()) os << " (order '" << v.order << "')";
    if (v.rule != Rule::unknown_order && v.rule != Rule::unknown_vehicle) {
        os << " measured " << v.measured << ", bound " << v.bound;
    }
    return os.str();
}

}  // namespace pdp
