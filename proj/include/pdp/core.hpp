#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace pdp {

// Errors ----------------------------------------------------------------

/// Malformed or inconsistent user input.
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// File or stream failure.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Absolute slack used by every feasibility comparison in the library.
inline constexpr double kFeasibilityTolerance = 1e-9;

/// Upper time limit (order `ut`, vehicle `rt`). std::nullopt is "unbounded".
using TimeLimit = std::optional<double>;
inline constexpr TimeLimit kUnbounded = std::nullopt;

struct Point {
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(const Point&, const Point&) = default;
};

/// One customer request. Every order occupies its own node in the travel
/// matrices (co-located customers get separate nodes with equal coordinates).
struct Order {
    std::string id;
    std::size_t node = 0;
    double delivery_weight = 0.0;
    double delivery_dim = 0.0;
    double pickup_weight = 0.0;
    double pickup_dim = 0.0;
    double earliest = 0.0;   // lower time limit, 0 = none
    TimeLimit latest;        // upper time limit
    int zone_type = 1;       // served only by vehicles with type <= zone_type

    friend bool operator==(const Order&, const Order&) = default;
};

enum class Ownership { owned, rentable };

struct VehicleSpec {
    std::string id;
    double weight_capacity = 0.0;
    double dim_capacity = 0.0;
    int type = 1;
    TimeLimit max_duration;
    Ownership ownership = Ownership::owned;
    int max_uses = 1;

    friend bool operator==(const VehicleSpec&, const VehicleSpec&) = default;
};

/// Vehicle-type mobility rule: a vehicle of type `vehicle_type` may visit an
/// order only if vehicle_type <= zone_type.
inline bool can_serve(int vehicle_type, const Order& order) {
    return vehicle_type <= order.zone_type;
}

/// Dense travel-time and distance matrices over n nodes; node 0 is the depot.
class TravelMatrix {
public:
    TravelMatrix() = default;
    /// Row-major n*n buffers. Throws InputError on shape mismatch.
    TravelMatrix(std::size_t n, std::vector<double> time, std::vector<double> dist);

    std::size_t size() const { return n_; }
    double time(std::size_t from, std::size_t to) const { return time_[from * n_ + to]; }
    double dist(std::size_t from, std::size_t to) const { return dist_[from * n_ + to]; }
    const std::vector<double>& time_data() const { return time_; }
    const std::vector<double>& dist_data() const { return dist_; }

    /// Sub-matrix over `nodes` (in that order); nodes[0] becomes the new depot.
    TravelMatrix restricted(std::span<const std::size_t> nodes) const;

    double max_time() const;
    double max_dist() const;

    friend bool operator==(const TravelMatrix&, const TravelMatrix&) = default;

private:
    std::size_t n_ = 0;
    std::vector<double> time_;
    std::vector<double> dist_;
};

struct Instance {
    std::string name;
    std::vector<Order> orders;
    std::vector<VehicleSpec> fleet;
    TravelMatrix travel;
    std::vector<Point> coords;    // empty, or one point per node (depot first)
    std::optional<double> speed;  // set when `travel` was derived from coords

    const Order* find_order(std::string_view id) const;
    const VehicleSpec* find_vehicle(std::string_view id) const;

    friend bool operator==(const Instance&, const Instance&) = default;
};

struct Load {
    double weight = 0.0;
    double dim = 0.0;

    friend bool operator==(const Load&, const Load&) = default;
};

/// A regular route: leaves the depot, visits `sequence` in order, returns.
/// The remaining fields are derived from instance data by annotate_route().
struct Route {
    std::string vehicle;
    std::vector<std::string> sequence;

    std::vector<double> arrivals;
    double duration = 0.0;
    double distance = 0.0;
    Load departure_load;
    std::vector<Load> loads;  // after each stop

    friend bool operator==(const Route&, const Route&) = default;
};

struct Plan {
    std::string instance;
    std::vector<Route> routes;
    std::vector<std::string> unserved;
    double total_distance = 0.0;
    double total_duration = 0.0;

    std::size_t served_count() const;

    friend bool operator==(const Plan&, const Plan&) = default;
};

/// Euclidean distances between `coords`; times are distance / speed.
TravelMatrix travel_matrix_from_coords(std::span<const Point> coords, double speed);

/// Returns one human-readable line per broken data-model invariant; empty when
/// the instance is well formed.
std::vector<std::string> check_instance(const Instance& instance);

/// Thrown when an instance fails check_instance.
class InstanceCheckError : public InputError {
public:
    explicit InstanceCheckError(std::vector<std::string> violations);
    const std::vector<std::string>& violations() const { return violations_; }

private:
    std::vector<std::string> violations_;
};

}  // namespace pdp
