#pragma once

// Generators and independent reference computations shared by the tests.
// Nothing here calls into the validator or the model builder.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "pdp/core.hpp"
#include "pdp/cqm.hpp"
#include "pdp/random.hpp"

namespace pdp::test {

struct RandomShape {
    std::size_t orders = 5;
    std::size_t vehicles = 2;
    int max_zone_type = 3;
    double window_share = 0.4;
    double pickup_share = 0.5;
    double duration_share = 0.3;
    double extent = 60.0;
};

inline double rounded(double v) { return std::round(v * 10.0) / 10.0; }

inline Instance random_instance(Rng& rng, const RandomShape& shape) {
    Instance inst;
    inst.name = "rand";
    inst.coords.push_back({rounded(rng.uniform(0, shape.extent)), rounded(rng.uniform(0, shape.extent))});
    for (std::size_t k = 0; k < shape.orders; ++k) {
        Order o;
        o.id = "r" + std::to_string(k + 1);
        o.node = k + 1;
        o.delivery_weight = std::round(rng.uniform(1, 15));
        o.delivery_dim = std::round(rng.uniform(1, 15));
        if (rng.unit() < shape.pickup_share) {
            o.pickup_weight = std::round(rng.uniform(0, 15));
            o.pickup_dim = std::round(rng.uniform(0, 15));
        }
        if (rng.unit() < shape.window_share) {
            o.earliest = std::round(rng.uniform(0, 60));
            if (rng.unit() < 0.7) o.latest = o.earliest + std::round(rng.uniform(10, 120));
        }
        o.zone_type = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(shape.max_zone_type)));
        inst.coords.push_back({rounded(rng.uniform(0, shape.extent)), rounded(rng.uniform(0, shape.extent))});
        inst.orders.push_back(o);
    }
    for (std::size_t k = 0; k < shape.vehicles; ++k) {
        VehicleSpec v;
        v.id = "v" + std::to_string(k + 1);
        v.weight_capacity = std::round(rng.uniform(20, 70));
        v.dim_capacity = std::round(rng.uniform(20, 70));
        v.type = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(shape.max_zone_type)));
        v.ownership = rng.unit() < 0.7 ? Ownership::owned : Ownership::rentable;
        if (rng.unit() < shape.duration_share) v.max_duration = std::round(rng.uniform(60, 300));
        inst.fleet.push_back(v);
    }
    inst.speed = 1.0;
    inst.travel = travel_matrix_from_coords(inst.coords, 1.0);
    return inst;
}

/// Subproblem over all orders of `inst` for `vehicle`, travel restricted by
/// hand (local node i+1 = orders[i]).
inline FilteredSubproblem whole_subproblem(const Instance& inst, const VehicleSpec& vehicle, bool filtered = true) {
    FilteredSubproblem sub;
    sub.vehicle = vehicle;
    sub.filtered = filtered;
    std::vector<std::size_t> nodes{0};
    for (const Order& o : inst.orders) {
        if (filtered && vehicle.type > o.zone_type) continue;
        sub.orders.push_back(o);
        sub.lower.push_back(o.earliest);
        sub.upper.push_back(o.latest);
        nodes.push_back(o.node);
    }
    const std::size_t n = nodes.size();
    std::vector<double> t(n * n), d(n * n);
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = 0; b < n; ++b) {
            t[a * n + b] = inst.travel.time(nodes[a], nodes[b]);
            d[a * n + b] = inst.travel.dist(nodes[a], nodes[b]);
        }
    }
    sub.travel = TravelMatrix(n, std::move(t), std::move(d));
    return sub;
}

/// Instance whose node numbering is the subproblem's local numbering, so the
/// validator can judge decoded routes directly.
inline Instance local_instance(const FilteredSubproblem& sub) {
    Instance inst;
    inst.name = "local";
    for (std::size_t i = 0; i < sub.size(); ++i) {
        Order o = sub.orders[i];
        o.node = i + 1;
        inst.orders.push_back(o);
    }
    inst.fleet.push_back(sub.vehicle);
    inst.fleet.back().max_uses = 1;
    inst.travel = sub.travel;
    return inst;
}

/// Straightforward feasibility of visiting `seq` (local indices), written
/// from the problem statement: arrive by travel time only, carry every
/// delivery from the start, swap delivery for pickup at each stop.
struct RouteFacts {
    bool feasible = true;
    double distance = 0.0;
    double duration = 0.0;
    std::vector<double> arrivals;
    std::vector<double> weight_after;
    double departure_weight = 0.0;
};

inline RouteFacts reference_route(const FilteredSubproblem& sub, const std::vector<std::size_t>& seq,
                                  bool check_mobility = true) {
    constexpr double tol = 1e-9;
    RouteFacts f;
    double wload = 0.0, dload = 0.0;
    for (std::size_t i : seq) {
        wload += sub.orders[i].delivery_weight;
        dload += sub.orders[i].delivery_dim;
    }
    f.departure_weight = wload;
    if (wload > sub.vehicle.weight_capacity + tol || dload > sub.vehicle.dim_capacity + tol) f.feasible = false;
    std::size_t at = 0;
    double clock = 0.0;
    for (std::size_t i : seq) {
        clock += sub.travel.time(at, i + 1);
        f.distance += sub.travel.dist(at, i + 1);
        at = i + 1;
        f.arrivals.push_back(clock);
        const Order& o = sub.orders[i];
        if (clock < sub.lower[i] - tol) f.feasible = false;
        if (sub.upper[i] && clock > *sub.upper[i] + tol) f.feasible = false;
        wload += o.pickup_weight - o.delivery_weight;
        dload += o.pickup_dim - o.delivery_dim;
        f.weight_after.push_back(wload);
        if (wload > sub.vehicle.weight_capacity + tol || dload > sub.vehicle.dim_capacity + tol) f.feasible = false;
        if (check_mobility && sub.vehicle.type > o.zone_type) f.feasible = false;
    }
    if (!seq.empty()) {
        clock += sub.travel.time(at, 0);
        f.distance += sub.travel.dist(at, 0);
    }
    f.duration = clock;
    if (sub.vehicle.max_duration && f.duration > *sub.vehicle.max_duration + tol) f.feasible = false;
    return f;
}

/// Calls `visit` with every ordered subset of {0..n-1}, the empty one first.
inline void for_each_sequence(std::size_t n, const std::function<void(const std::vector<std::size_t>&)>& visit) {
    std::vector<std::size_t> seq;
    std::vector<bool> used(n, false);
    std::function<void()> rec = [&] {
        visit(seq);
        for (std::size_t j = 0; j < n; ++j) {
            if (used[j]) continue;
            used[j] = true;
            seq.push_back(j);
            rec();
            seq.pop_back();
            used[j] = false;
        }
    };
    rec();
}

struct BruteForceBest {
    double objective = std::numeric_limits<double>::infinity();
    std::vector<std::size_t> sequence;
};

/// Minimum of distance - reward * stops over every feasible sequence.
inline BruteForceBest brute_force(const FilteredSubproblem& sub, double reward) {
    BruteForceBest best;
    for_each_sequence(sub.size(), [&](const std::vector<std::size_t>& seq) {
        const RouteFacts f = reference_route(sub, seq);
        if (!f.feasible) return;
        const double obj = f.distance - reward * static_cast<double>(seq.size());
        if (obj < best.objective) {
            best.objective = obj;
            best.sequence = seq;
        }
    });
    return best;
}

/// Subproblem from an explicit symmetric matrix used for both time and
/// distance; node 0 is the depot.
inline FilteredSubproblem matrix_subproblem(const std::vector<std::vector<double>>& m, std::vector<Order> orders,
                                            VehicleSpec vehicle) {
    const std::size_t n = m.size();
    std::vector<double> flat;
    for (const auto& row : m) flat.insert(flat.end(), row.begin(), row.end());
    FilteredSubproblem sub;
    sub.travel = TravelMatrix(n, flat, flat);
    for (const Order& o : orders) {
        sub.lower.push_back(o.earliest);
        sub.upper.push_back(o.latest);
    }
    sub.orders = std::move(orders);
    sub.vehicle = std::move(vehicle);
    return sub;
}

inline Order make_order(std::string id, std::size_t node, double wd, double wp = 0.0) {
    Order o;
    o.id = std::move(id);
    o.node = node;
    o.delivery_weight = o.delivery_dim = wd;
    o.pickup_weight = o.pickup_dim = wp;
    return o;
}

inline VehicleSpec make_vehicle(std::string id, double capacity, int type = 1, TimeLimit rt = kUnbounded) {
    VehicleSpec v;
    v.id = std::move(id);
    v.weight_capacity = v.dim_capacity = capacity;
    v.type = type;
    v.max_duration = rt;
    return v;
}

}  // namespace pdp::test
