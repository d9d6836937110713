#include "pdp/cqm.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>

namespace pdp {

namespace {

std::string indexed(std::string_view name, std::size_t a) {
    return std::string(name) + "[" + std::to_string(a) + "]";
}

std::string indexed(std::string_view name, std::size_t a, std::size_t b) {
    return indexed(name, a) + "[" + std::to_string(b) + "]";
}

/// Accumulates terms with merged duplicates and a canonical term order.
class ExpressionBuilder {
public:
    void add(std::size_t v, double coef) {
        if (coef != 0.0) linear_[v] += coef;
    }
    void add(std::size_t u, std::size_t v, double coef) {
        if (coef == 0.0) return;
        if (u == v) {
            add(u, coef);  // x*x == x for binaries
            return;
        }
        if (u > v) std::swap(u, v);
        quadratic_[{u, v}] += coef;
    }
    void add_constant(double c) { offset_ += c; }

    Expression build() const {
        Expression e;
        for (const auto& [v, c] : linear_) {
            if (c != 0.0) e.linear.push_back({v, c});
        }
        for (const auto& [uv, c] : quadratic_) {
            if (c != 0.0) e.quadratic.push_back({uv.first, uv.second, c});
        }
        e.offset = offset_;
        return e;
    }

private:
    std::map<std::size_t, double> linear_;
    std::map<std::pair<std::size_t, std::size_t>, double> quadratic_;
    double offset_ = 0.0;
};

using Metric = std::function<double(std::size_t, std::size_t)>;

// Route clock on arrival at slot `slot`:
//   sum_i c[0][i] x[i][0] + sum_{p' < slot} sum_{i != j} c[i][j] x[i][p'] x[j][p'+1]
// Local node of order i is i + 1.
void add_arrival(ExpressionBuilder& b, const QuadraticModel& m, const Metric& c, std::size_t slot,
                 double scale) {
    const std::size_t n = m.orders();
    for (std::size_t i = 0; i < n; ++i) b.add(m.var(i, 0), scale * c(0, i + 1));
    for (std::size_t p = 0; p < slot; ++p) {
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                if (i != j) b.add(m.var(i, p), m.var(j, p + 1), scale * c(i + 1, j + 1));
            }
        }
    }
}

// Closed-route length: first leg, every inter-slot leg, and the return leg
// from the last occupied slot, written as x[i][p] * (1 - occupied(p+1)).
void add_closed_route(ExpressionBuilder& b, const QuadraticModel& m, const Metric& c) {
    const std::size_t n = m.orders();
    for (std::size_t i = 0; i < n; ++i) b.add(m.var(i, 0), c(0, i + 1));
    for (std::size_t p = 0; p < n; ++p) {
        for (std::size_t i = 0; i < n; ++i) {
            b.add(m.var(i, p), c(i + 1, 0));
            if (p + 1 == n) continue;
            for (std::size_t j = 0; j < n; ++j) {
                const double leg = i != j ? c(i + 1, j + 1) : 0.0;
                b.add(m.var(i, p), m.var(j, p + 1), leg - c(i + 1, 0));
            }
        }
    }
}

Metric time_metric(const FilteredSubproblem& sub) {
    return [&t = sub.travel](std::size_t a, std::size_t b) { return t.time(a, b); };
}

Metric dist_metric(const FilteredSubproblem& sub) {
    return [&t = sub.travel](std::size_t a, std::size_t b) { return t.dist(a, b); };
}

}  // namespace

ObjectiveWeights default_weights(const TravelMatrix& travel) {
    return {10.0 * travel.max_dist()};
}

QuadraticModel::QuadraticModel(std::size_t orders, double serve_reward, double big_m)
    : orders_(orders), serve_reward_(serve_reward), big_m_(big_m) {}

std::string QuadraticModel::label(std::size_t v) const {
    return indexed("x", order_of(v), slot_of(v));
}

void QuadraticModel::add_constraint(Constraint c) {
    constraints_.push_back(std::move(c));
}

const Constraint* QuadraticModel::find(std::string_view label) const {
    for (const auto& c : constraints_) {
        if (c.label == label) return &c;
    }
    return nullptr;
}

double duration_bound(const FilteredSubproblem& sub) {
    std::vector<double> t = sub.travel.time_data();
    const std::size_t take = std::min(t.size(), sub.size() + 1);
    std::partial_sort(t.begin(), t.begin() + static_cast<std::ptrdiff_t>(take), t.end(),
                      std::greater<>());
    double sum = 0.0;
    for (std::size_t k = 0; k < take; ++k) sum += t[k];
    return sum;
}

void emit_structure_constraints(QuadraticModel& model, std::size_t n) {
    for (std::size_t p = 0; p < n; ++p) {
        ExpressionBuilder b;
        for (std::size_t i = 0; i < n; ++i) b.add(model.var(i, p), 1.0);
        model.add_constraint({indexed("slot_unique", p), b.build(), Sense::le, 1.0});
    }
    for (std::size_t i = 0; i < n; ++i) {
        ExpressionBuilder b;
        for (std::size_t p = 0; p < n; ++p) b.add(model.var(i, p), 1.0);
        model.add_constraint({indexed("order_once", i), b.build(), Sense::le, 1.0});
    }
    for (std::size_t p = 0; p + 1 < n; ++p) {
        ExpressionBuilder b;
        for (std::size_t i = 0; i < n; ++i) {
            b.add(model.var(i, p + 1), 1.0);
            b.add(model.var(i, p), -1.0);
        }
        model.add_constraint({indexed("contig", p), b.build(), Sense::le, 0.0});
    }
}

void emit_capacity_constraints(QuadraticModel& model, const FilteredSubproblem& sub) {
    const std::size_t n = sub.size();
    const auto running = [&](std::size_t p, auto pickup, auto delivery) {
        ExpressionBuilder b;
        for (std::size_t q = 0; q < n; ++q) {
            for (std::size_t i = 0; i < n; ++i) {
                const Order& o = sub.orders[i];
                b.add(model.var(i, q), q <= p ? o.*pickup : o.*delivery);
            }
        }
        return b.build();
    };
    for (std::size_t p = 0; p < n; ++p) {
        model.add_constraint({indexed("w_cap", p), running(p, &Order::pickup_weight, &Order::delivery_weight),
                              Sense::le, sub.vehicle.weight_capacity});
        model.add_constraint({indexed("d_cap", p), running(p, &Order::pickup_dim, &Order::delivery_dim),
                              Sense::le, sub.vehicle.dim_capacity});
    }
    ExpressionBuilder w;
    ExpressionBuilder d;
    for (std::size_t q = 0; q < n; ++q) {
        for (std::size_t i = 0; i < n; ++i) {
            w.add(model.var(i, q), sub.orders[i].delivery_weight);
            d.add(model.var(i, q), sub.orders[i].delivery_dim);
        }
    }
    model.add_constraint({"w_depart", w.build(), Sense::le, sub.vehicle.weight_capacity});
    model.add_constraint({"d_depart", d.build(), Sense::le, sub.vehicle.dim_capacity});
}

void emit_time_constraints(QuadraticModel& model, const FilteredSubproblem& sub) {
    const std::size_t n = sub.size();
    const Metric c = time_metric(sub);
    const double big = model.big_m();
    for (std::size_t k = 0; k < n; ++k) {
        const double lo = sub.lower[k];
        const TimeLimit& hi = sub.upper[k];
        if (lo > 0.0) {
            // lt_k - arrival(p) <= M (1 - x[k][p]); M must also cover lt_k itself.
            const double m = std::max(big, lo);
            for (std::size_t p = 0; p < n; ++p) {
                ExpressionBuilder b;
                add_arrival(b, model, c, p, 1.0);
                b.add(model.var(k, p), -m);
                model.add_constraint({indexed("lt", k, p), b.build(), Sense::ge, lo - m});
            }
        }
        if (hi) {
            // arrival(p) - ut_k <= M (1 - x[k][p])
            for (std::size_t p = 0; p < n; ++p) {
                ExpressionBuilder b;
                add_arrival(b, model, c, p, 1.0);
                b.add(model.var(k, p), big);
                model.add_constraint({indexed("ut", k, p), b.build(), Sense::le, *hi + big});
            }
        }
    }
}

void emit_duration_constraint(QuadraticModel& model, const FilteredSubproblem& sub) {
    if (!sub.vehicle.max_duration) return;
    ExpressionBuilder b;
    add_closed_route(b, model, time_metric(sub));
    model.add_constraint({"duration", b.build(), Sense::le, *sub.vehicle.max_duration});
}

void emit_mobility_constraints(QuadraticModel& model, const FilteredSubproblem& sub, int vehicle_type) {
    const std::size_t n = sub.size();
    for (std::size_t i = 0; i < n; ++i) {
        ExpressionBuilder b;
        for (std::size_t p = 0; p < n; ++p) b.add(model.var(i, p), 1.0);
        const double cap = can_serve(vehicle_type, sub.orders[i]) ? 1.0 : 0.0;
        model.add_constraint({indexed("mobility", i), b.build(), Sense::le, cap});
    }
}

QuadraticModel build_route_model(const FilteredSubproblem& sub, const ObjectiveWeights& weights,
                                 ModelOptions options) {
    const std::size_t n = sub.size();
    if (n == 0) throw EmptySubproblemError("build_route_model: subproblem has no orders");
    if (sub.lower.size() != n || sub.upper.size() != n || sub.travel.size() != n + 1) {
        throw InputError("build_route_model: subproblem vectors are not aligned with its orders");
    }
    QuadraticModel model(n, weights.serve_reward, duration_bound(sub));

    ExpressionBuilder obj;
    add_closed_route(obj, model, dist_metric(sub));
    for (std::size_t v = 0; v < model.num_variables(); ++v) obj.add(v, -weights.serve_reward);
    model.set_objective(obj.build());

    emit_structure_constraints(model, n);
    emit_capacity_constraints(model, sub);
    emit_time_constraints(model, sub);
    emit_duration_constraint(model, sub);
    if (options.mobility_constraints) emit_mobility_constraints(model, sub, sub.vehicle.type);
    return model;
}

double evaluate(const Expression& e, const Assignment& a) {
    double s = e.offset;
    for (const auto& t : e.linear) {
        if (a.values[t.var]) s += t.coef;
    }
    for (const auto& t : e.quadratic) {
        if (a.values[t.u] && a.values[t.v]) s += t.coef;
    }
    return s;
}

double evaluate_objective(const QuadraticModel& model, const Assignment& a) {
    return evaluate(model.objective(), a);
}

double violation(const Constraint& c, double lhs) {
    switch (c.sense) {
        case Sense::le: return std::max(0.0, lhs - c.rhs);
        case Sense::ge: return std::max(0.0, c.rhs - lhs);
        case Sense::eq: return std::abs(lhs - c.rhs);
    }
    return 0.0;
}

std::vector<double> violations(const QuadraticModel& model, const Assignment& a) {
    std::vector<double> out;
    out.reserve(model.constraints().size());
    for (const auto& c : model.constraints()) out.push_back(violation(c, evaluate(c.lhs, a)));
    return out;
}

bool satisfies_all(const QuadraticModel& model, const Assignment& a) {
    for (const auto& c : model.constraints()) {
        if (violation(c, evaluate(c.lhs, a)) > kFeasibilityTolerance) return false;
    }
    return true;
}

bool is_structural(const Constraint& c) {
    return c.label.starts_with("slot_unique[") || c.label.starts_with("order_once[") ||
           c.label.starts_with("contig[");
}

Assignment encode(const QuadraticModel& model, std::span<const std::size_t> sequence) {
    Assignment a;
    a.values.assign(model.num_variables(), 0);
    for (std::size_t p = 0; p < sequence.size(); ++p) a.values[model.var(sequence[p], p)] = 1;
    return a;
}

DecodeResult decode(const Assignment& assignment, const FilteredSubproblem& sub) {
    const std::size_t n = sub.size();
    if (assignment.values.size() != n * n) {
        return {std::nullopt, "assignment has " + std::to_string(assignment.values.size()) +
                                  " values, model has " + std::to_string(n * n)};
    }
    const auto x = [&](std::size_t i, std::size_t p) { return assignment.values[i * n + p] != 0; };

    std::vector<std::optional<std::size_t>> at_slot(n);
    for (std::size_t p = 0; p < n; ++p) {
        for (std::size_t i = 0; i < n; ++i) {
            if (!x(i, p)) continue;
            if (at_slot[p]) return {std::nullopt, "slot " + std::to_string(p) + " multiply occupied"};
            at_slot[p] = i;
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        int count = 0;
        for (std::size_t p = 0; p < n; ++p) count += x(i, p) ? 1 : 0;
        if (count > 1) return {std::nullopt, "order " + std::to_string(i) + " served more than once"};
    }
    DecodedRoute route;
    for (std::size_t p = 0; p < n; ++p) {
        if (!at_slot[p]) {
            for (std::size_t q = p + 1; q < n; ++q) {
                if (at_slot[q]) return {std::nullopt, "gap at slot " + std::to_string(p)};
            }
            break;
        }
        route.sequence.push_back(*at_slot[p]);
    }

    std::vector<std::size_t> nodes;
    std::vector<Order> stops;
    for (std::size_t i : route.sequence) {
        nodes.push_back(i + 1);
        stops.push_back(sub.orders[i]);
    }
    route.timeline = route_timeline(nodes, sub.travel);
    route.loads = route_loads(stops);
    return {std::move(route), {}};
}

}  // namespace pdp
