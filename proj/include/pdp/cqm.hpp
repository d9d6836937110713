#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pdp/core.hpp"
#include "pdp/validator.hpp"

namespace pdp {

/// The orders offered to one vehicle for one route, with the travel matrix
/// restricted to them. Local node 0 is the depot; local node i+1 is orders[i].
struct FilteredSubproblem {
    std::vector<Order> orders;
    std::vector<double> lower;      // earliest per order, aligned with `orders`
    std::vector<TimeLimit> upper;   // latest per order
    VehicleSpec vehicle;
    TravelMatrix travel;
    /// False when the order set was left unfiltered and mobility is enforced
    /// by model constraints instead.
    bool filtered = true;

    std::size_t size() const { return orders.size(); }
};

struct ObjectiveWeights {
    double serve_reward = 0.0;  // subtracted per served order
};

/// Reward of 10 x the largest distance entry, so serving one more order
/// always outweighs the detour it costs.
ObjectiveWeights default_weights(const TravelMatrix& travel);

class EmptySubproblemError : public InputError {
public:
    using InputError::InputError;
};

enum class Sense { le, ge, eq };

struct LinearTerm {
    std::size_t var = 0;
    double coef = 0.0;
    friend bool operator==(const LinearTerm&, const LinearTerm&) = default;
};

/// Product term coef * x_u * x_v with u < v.
struct QuadTerm {
    std::size_t u = 0;
    std::size_t v = 0;
    double coef = 0.0;
    friend bool operator==(const QuadTerm&, const QuadTerm&) = default;
};

struct Expression {
    std::vector<LinearTerm> linear;
    std::vector<QuadTerm> quadratic;
    double offset = 0.0;
    friend bool operator==(const Expression&, const Expression&) = default;
};

struct Constraint {
    std::string label;
    Expression lhs;   // offset is always 0; constants live in rhs
    Sense sense = Sense::le;
    double rhs = 0.0;
    friend bool operator==(const Constraint&, const Constraint&) = default;
};

/// Binary assignment over a model's variables.
struct Assignment {
    std::vector<std::uint8_t> values;
    friend bool operator==(const Assignment&, const Assignment&) = default;
};

/// Constrained quadratic model of a single route: variable x[i][p] is 1 when
/// order i is visited at position p; i, p in [0, M').
class QuadraticModel {
public:
    QuadraticModel() = default;
    QuadraticModel(std::size_t orders, double serve_reward, double big_m);

    std::size_t orders() const { return orders_; }
    std::size_t slots() const { return orders_; }
    std::size_t num_variables() const { return orders_ * orders_; }
    std::size_t var(std::size_t order, std::size_t slot) const { return order * orders_ + slot; }
    std::size_t order_of(std::size_t var) const { return var / orders_; }
    std::size_t slot_of(std::size_t var) const { return var % orders_; }
    std::string label(std::size_t var) const;

    double serve_reward() const { return serve_reward_; }
    double big_m() const { return big_m_; }

    const Expression& objective() const { return objective_; }
    const std::vector<Constraint>& constraints() const { return constraints_; }

    void set_objective(Expression e) { objective_ = std::move(e); }
    void add_constraint(Constraint c);

    const Constraint* find(std::string_view label) const;

    friend bool operator==(const QuadraticModel&, const QuadraticModel&) = default;

private:
    std::size_t orders_ = 0;
    double serve_reward_ = 0.0;
    double big_m_ = 0.0;
    Expression objective_;
    std::vector<Constraint> constraints_;
};

/// Sum of the (M'+1) largest travel-time entries: an upper bound on the
/// duration of any route over the subproblem.
double duration_bound(const FilteredSubproblem& sub);

struct ModelOptions {
    /// Emit per-order mobility bounds (for an unfiltered order set).
    bool mobility_constraints = false;
};

/// Builds the full route model. Throws EmptySubproblemError when M' = 0.
QuadraticModel build_route_model(const FilteredSubproblem& sub, const ObjectiveWeights& weights,
                                 ModelOptions options = {});

// Constraint families; build_route_model calls these in this order.
void emit_structure_constraints(QuadraticModel& model, std::size_t num_orders);
void emit_capacity_constraints(QuadraticModel& model, const FilteredSubproblem& sub);
void emit_time_constraints(QuadraticModel& model, const FilteredSubproblem& sub);
void emit_duration_constraint(QuadraticModel& model, const FilteredSubproblem& sub);
void emit_mobility_constraints(QuadraticModel& model, const FilteredSubproblem& sub, int vehicle_type);

// Evaluation ------------------------------------------------------------

double evaluate(const Expression& e, const Assignment& a);
double evaluate_objective(const QuadraticModel& model, const Assignment& a);

/// Amount by which `c` is violated at left-hand side value `lhs`; 0 if met.
double violation(const Constraint& c, double lhs);

/// Violation of every constraint, in model order.
std::vector<double> violations(const QuadraticModel& model, const Assignment& a);

bool satisfies_all(const QuadraticModel& model, const Assignment& a);

/// True for slot_unique, order_once and contig constraints.
bool is_structural(const Constraint& c);

/// One-hot assignment placing sequence[p] at slot p.
Assignment encode(const QuadraticModel& model, std::span<const std::size_t> sequence);

struct DecodedRoute {
    std::vector<std::size_t> sequence;  // indices into sub.orders, slot order
    Timeline timeline;
    LoadProfile loads;
};

struct DecodeResult {
    std::optional<DecodedRoute> route;
    std::string violation;  // set when route is empty-optional

    bool ok() const { return route.has_value(); }
};

/// Reads the visiting sequence off an assignment, or reports the first
/// structural rule it breaks.
DecodeResult decode(const Assignment& assignment, const FilteredSubproblem& sub);

}  // namespace pdp
