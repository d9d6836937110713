#include "pdp/core.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

namespace pdp {

TravelMatrix::TravelMatrix(std::size_t n, std::vector<double> time, std::vector<double> dist)
    : n_(n), time_(std::move(time)), dist_(std::move(dist)) {
    if (time_.size() != n_ * n_ || dist_.size() != n_ * n_) {
        throw InputError("travel matrix: expected " + std::to_string(n_ * n_) +
                         " entries per matrix, got " + std::to_string(time_.size()) + " and " +
                         std::to_string(dist_.size()));
    }
}

TravelMatrix TravelMatrix::restricted(std::span<const std::size_t> nodes) const {
    const std::size_t m = nodes.size();
    std::vector<double> t(m * m);
    std::vector<double> d(m * m);
    for (std::size_t a = 0; a < m; ++a) {
        for (std::size_t b = 0; b < m; ++b) {
            t[a * m + b] = time(nodes[a], nodes[b]);
            d[a * m + b] = dist(nodes[a], nodes[b]);
        }
    }
    return TravelMatrix(m, std::move(t), std::move(d));
}

double TravelMatrix::max_time() const {
    return time_.empty() ? 0.0 : *std::max_element(time_.begin(), time_.end());
}

double TravelMatrix::max_dist() const {
    return dist_.empty() ? 0.0 : *std::max_element(dist_.begin(), dist_.end());
}

const Order* Instance::find_order(std::string_view id) const {
    auto it = std::find_if(orders.begin(), orders.end(), [&](const Order& o) { return o.id == id; });
    return it == orders.end() ? nullptr : &*it;
}

const VehicleSpec* Instance::find_vehicle(std::string_view id) const {
    auto it = std::find_if(fleet.begin(), fleet.end(), [&](const VehicleSpec& v) { return v.id == id; });
    return it == fleet.end() ? nullptr : &*it;
}

std::size_t Plan::served_count() const {
    std::size_t n = 0;
    for (const auto& r : routes) n += r.sequence.size();
    return n;
}

TravelMatrix travel_matrix_from_coords(std::span<const Point> coords, double speed) {
    if (coords.empty()) throw InputError("travel_matrix_from_coords: at least one point required");
    if (!(speed > 0.0) || !std::isfinite(speed)) {
        throw InputError("travel_matrix_from_coords: speed must be positive and finite");
    }
    for (std::size_t i = 0; i < coords.size(); ++i) {
        if (!std::isfinite(coords[i].x) || !std::isfinite(coords[i].y)) {
            throw InputError("travel_matrix_from_coords: non-finite coordinate at node " +
                             std::to_string(i));
        }
    }
    const std::size_t n = coords.size();
    std::vector<double> t(n * n, 0.0);
    std::vector<double> d(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const double dist = std::hypot(coords[i].x - coords[j].x, coords[i].y - coords[j].y);
            d[i * n + j] = d[j * n + i] = dist;
            t[i * n + j] = t[j * n + i] = dist / speed;
        }
    }
    return TravelMatrix(n, std::move(t), std::move(d));
}

namespace {

std::string num(double v) {
    std::ostringstream os;
    os << v;
    return os.str();
}

bool nonneg_finite(double v) { return std::isfinite(v) && v >= 0.0; }

}  // namespace

std::vector<std::string> check_instance(const Instance& instance) {
    std::vector<std::string> out;
    const std::size_t n = instance.travel.size();

    if (n == 0) out.emplace_back("travel: matrix is empty (node 0 must be the depot)");
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            const double t = instance.travel.time(i, j);
            const double d = instance.travel.dist(i, j);
            if (!nonneg_finite(t) || !nonneg_finite(d)) {
                out.push_back("travel[" + std::to_string(i) + "][" + std::to_string(j) +
                              "]: entries must be finite and >= 0");
            } else if (i == j && (t != 0.0 || d != 0.0)) {
                out.push_back("travel[" + std::to_string(i) + "][" + std::to_string(i) +
                              "]: diagonal must be 0");
            }
        }
    }
    if (!instance.coords.empty() && instance.coords.size() != n) {
        out.push_back("coords: " + std::to_string(instance.coords.size()) +
                      " points for " + std::to_string(n) + " nodes");
    }

    std::set<std::string> ids;
    std::map<std::size_t, std::string> node_owner;
    for (const Order& o : instance.orders) {
        const std::string who = "order '" + o.id + "'";
        if (!ids.insert(o.id).second) out.push_back(who + ": duplicate order id");
        if (!nonneg_finite(o.delivery_weight) || !nonneg_finite(o.delivery_dim) ||
            !nonneg_finite(o.pickup_weight) || !nonneg_finite(o.pickup_dim)) {
            out.push_back(who + ": loads must be finite and >= 0");
        } else if (o.delivery_weight + o.delivery_dim <= 0.0 && o.pickup_weight + o.pickup_dim <= 0.0) {
            out.push_back(who + ": requests neither delivery nor pickup");
        }
        if (!nonneg_finite(o.earliest)) out.push_back(who + ": lt must be finite and >= 0");
        if (o.latest) {
            if (!std::isfinite(*o.latest) || *o.latest < 0.0) {
                out.push_back(who + ": ut must be finite and >= 0 (use unbounded for infinity)");
            } else if (o.earliest > *o.latest) {
                out.push_back(who + ": window inverted (lt=" + num(o.earliest) + " > ut=" +
                              num(*o.latest) + ")");
            }
        }
        if (o.zone_type < 1) out.push_back(who + ": zone type ot must be >= 1");
        if (o.node < 1 || o.node >= n) {
            out.push_back(who + ": node " + std::to_string(o.node) + " outside [1, " +
                          std::to_string(n == 0 ? 0 : n - 1) + "]");
        } else if (auto [it, fresh] = node_owner.emplace(o.node, o.id); !fresh) {
            out.push_back(who + ": duplicate node " + std::to_string(o.node) + " (also used by '" +
                          it->second + "')");
        }
    }

    std::set<std::string> vids;
    for (const VehicleSpec& v : instance.fleet) {
        const std::string who = "vehicle '" + v.id + "'";
        if (!vids.insert(v.id).second) out.push_back(who + ": duplicate vehicle id");
        if (!(v.weight_capacity > 0.0) || !std::isfinite(v.weight_capacity)) {
            out.push_back(who + ": W must be > 0");
        }
        if (!(v.dim_capacity > 0.0) || !std::isfinite(v.dim_capacity)) {
            out.push_back(who + ": D must be > 0");
        }
        if (v.type < 1) out.push_back(who + ": vehicle type vt must be >= 1");
        if (v.max_uses < 1) out.push_back(who + ": max_uses must be >= 1");
        if (v.max_duration && (!std::isfinite(*v.max_duration) || *v.max_duration < 0.0)) {
            out.push_back(who + ": rt must be finite and >= 0 (use unbounded for infinity)");
        }
    }
    return out;
}

namespace {

std::string join_violations(const std::vector<std::string>& v) {
    std::string msg = "instance check failed:";
    for (const auto& line : v) msg += "\n  " + line;
    return msg;
}

}  // namespace

InstanceCheckError::InstanceCheckError(std::vector<std::string> violations)
    : InputError(join_violations(violations)), violations_(std::move(violations)) {}

}  // namespace pdp
