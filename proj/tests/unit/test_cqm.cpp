#include <doctest.h>

#include <algorithm>
#include <numeric>

#include "pdp/cqm.hpp"
#include "pdp/validator.hpp"
#include "support.hpp"

using namespace pdp;

namespace {

std::size_t count_prefix(const QuadraticModel& m, std::string_view prefix) {
    return static_cast<std::size_t>(std::count_if(m.constraints().begin(), m.constraints().end(),
                                                  [&](const Constraint& c) { return c.label.starts_with(prefix); }));
}

// Line of stops one unit apart: depot at 0, order i at i+1.
FilteredSubproblem line_subproblem(std::size_t n, double capacity = 100.0) {
    std::vector<std::vector<double>> m(n + 1, std::vector<double>(n + 1));
    for (std::size_t a = 0; a <= n; ++a) {
        for (std::size_t b = 0; b <= n; ++b) m[a][b] = std::abs(static_cast<double>(a) - static_cast<double>(b));
    }
    std::vector<Order> orders;
    for (std::size_t i = 0; i < n; ++i) orders.push_back(test::make_order("o" + std::to_string(i + 1), i + 1, 5));
    return test::matrix_subproblem(m, orders, test::make_vehicle("T1", capacity));
}

FilteredSubproblem one_stop(double leg, double lo, TimeLimit hi, TimeLimit rt = kUnbounded) {
    Order o = test::make_order("a", 1, 1);
    o.earliest = lo;
    o.latest = hi;
    return test::matrix_subproblem({{0, leg}, {leg, 0}}, {o}, test::make_vehicle("T1", 10, 1, rt));
}

bool feasible_sequence(const FilteredSubproblem& sub, std::vector<std::size_t> seq) {
    const QuadraticModel m = build_route_model(sub, default_weights(sub.travel));
    return satisfies_all(m, encode(m, seq));
}

Assignment from_bits(std::size_t n, std::uint64_t bits) {
    Assignment a;
    a.values.resize(n);
    for (std::size_t k = 0; k < n; ++k) a.values[k] = (bits >> k) & 1u;
    return a;
}

bool structural_ok(const QuadraticModel& m, const Assignment& a) {
    for (const Constraint& c : m.constraints()) {
        if (is_structural(c) && violation(c, evaluate(c.lhs, a)) > kFeasibilityTolerance) return false;
    }
    return true;
}

double lhs_of(const QuadraticModel& m, const std::string& label, const Assignment& a) {
    const Constraint* c = m.find(label);
    REQUIRE(c != nullptr);
    return evaluate(c->lhs, a);
}

bool validator_accepts(const FilteredSubproblem& sub, const std::vector<std::size_t>& seq) {
    const Instance local = test::local_instance(sub);
    std::vector<std::string> ids;
    for (std::size_t i : seq) ids.push_back(local.orders[i].id);
    ValidationReport r;
    validate_route(local, annotate_route(local, sub.vehicle.id, ids), 0, r);
    return r.ok;
}

// Model satisfied <=> assignment decodes and the validator accepts the route.
void check_agreement(const FilteredSubproblem& sub, const QuadraticModel& m, const Assignment& a, int& mismatches) {
    const DecodeResult d = decode(a, sub);
    const bool oracle = d.ok() && validator_accepts(sub, d.route->sequence);
    if (satisfies_all(m, a) != oracle) ++mismatches;
}

}  // namespace

TEST_CASE("model shape: one order") {
    const FilteredSubproblem sub = line_subproblem(1);
    const QuadraticModel m = build_route_model(sub, default_weights(sub.travel));
    CHECK(m.num_variables() == 1);
    CHECK(count_prefix(m, "slot_unique[") == 1);
    CHECK(count_prefix(m, "order_once[") == 1);
    CHECK(count_prefix(m, "contig[") == 0);
    // objective over the single out-and-back leg
    const Assignment on = from_bits(1, 1);
    CHECK(evaluate_objective(m, on) == doctest::Approx(2.0 - m.serve_reward()));
    CHECK(evaluate_objective(m, from_bits(1, 0)) == 0.0);
}

TEST_CASE("model shape: four unconstrained orders") {
    const FilteredSubproblem sub = line_subproblem(4);
    const QuadraticModel m = build_route_model(sub, default_weights(sub.travel));
    CHECK(m.num_variables() == 16);
    CHECK(count_prefix(m, "slot_unique[") == 4);
    CHECK(count_prefix(m, "order_once[") == 4);
    CHECK(count_prefix(m, "contig[") == 3);
    CHECK(count_prefix(m, "w_cap[") + count_prefix(m, "d_cap[") == 8);
    CHECK(m.find("w_depart") != nullptr);
    CHECK(m.find("d_depart") != nullptr);
    CHECK(count_prefix(m, "lt[") == 0);
    CHECK(count_prefix(m, "ut[") == 0);
    CHECK(m.find("duration") == nullptr);
    CHECK(m.constraints().size() == 4 + 4 + 3 + 8 + 2);
}

TEST_CASE("model shape: one bounded window among two orders") {
    FilteredSubproblem sub = line_subproblem(2);
    sub.lower[1] = 3;
    sub.upper[1] = 9;
    const QuadraticModel m = build_route_model(sub, default_weights(sub.travel));
    std::vector<std::string> labels;
    for (const auto& c : m.constraints()) {
        if (c.label.starts_with("lt[") || c.label.starts_with("ut[")) labels.push_back(c.label);
    }
    CHECK(labels == std::vector<std::string>{"lt[1][0]", "lt[1][1]", "ut[1][0]", "ut[1][1]"});
}

TEST_CASE("model shape: structure family alone") {
    QuadraticModel m(2, 1.0, 1.0);
    emit_structure_constraints(m, 2);
    CHECK(count_prefix(m, "slot_unique[") == 2);
    CHECK(count_prefix(m, "order_once[") == 2);
    CHECK(count_prefix(m, "contig[") == 1);
}

TEST_CASE("model: empty subproblem is refused") {
    FilteredSubproblem sub;
    sub.travel = TravelMatrix(1, {0.0}, {0.0});
    CHECK_THROWS_AS(build_route_model(sub, {1.0}), EmptySubproblemError);
}

TEST_CASE("model: variable labels") {
    const QuadraticModel m(3, 1.0, 1.0);
    CHECK(m.label(m.var(2, 1)) == "x[2][1]");
    CHECK(m.order_of(m.var(2, 1)) == 2);
    CHECK(m.slot_of(m.var(2, 1)) == 1);
}

TEST_CASE("capacity: pickups on a three-stop route") {
    std::vector<Order> orders{test::make_order("a", 1, 10, 0), test::make_order("b", 2, 10, 0),
                              test::make_order("c", 3, 10, 25)};
    const std::vector<std::vector<double>> mat{{0, 1, 2, 3}, {1, 0, 1, 2}, {2, 1, 0, 1}, {3, 2, 1, 0}};
    const FilteredSubproblem ok = test::matrix_subproblem(mat, orders, test::make_vehicle("T1", 30));
    const QuadraticModel m = build_route_model(ok, default_weights(ok.travel));
    const Assignment a = encode(m, std::vector<std::size_t>{0, 1, 2});
    CHECK(satisfies_all(m, a));
    // loads after stops: 20, 10, 25
    CHECK(lhs_of(m, "w_cap[0]", a) == 20.0);
    CHECK(lhs_of(m, "w_cap[1]", a) == 10.0);
    CHECK(lhs_of(m, "w_cap[2]", a) == 25.0);

    orders[2].pickup_weight = 35;
    const FilteredSubproblem heavy = test::matrix_subproblem(mat, orders, test::make_vehicle("T1", 30));
    const QuadraticModel mh = build_route_model(heavy, default_weights(heavy.travel));
    const auto v = violations(mh, encode(mh, std::vector<std::size_t>{0, 1, 2}));
    for (std::size_t k = 0; k < mh.constraints().size(); ++k) {
        const bool expected = mh.constraints()[k].label == "w_cap[2]";
        CHECK_MESSAGE((v[k] > 0) == expected, mh.constraints()[k].label);
    }
    CHECK(v[static_cast<std::size_t>(mh.find("w_cap[2]") - mh.constraints().data())] == doctest::Approx(5.0));
}

TEST_CASE("capacity: delivery only reduces to the departure bound") {
    FilteredSubproblem sub = line_subproblem(3, 15);
    // three deliveries of 5 fit exactly, a fourth unit would not
    CHECK(feasible_sequence(sub, {0, 1, 2}));
    sub.orders[2].delivery_weight = 6;
    const QuadraticModel m = build_route_model(sub, default_weights(sub.travel));
    const auto v = violations(m, encode(m, std::vector<std::size_t>{0, 1, 2}));
    for (std::size_t k = 0; k < v.size(); ++k) {
        CHECK_MESSAGE((v[k] > 0) == (m.constraints()[k].label == "w_depart"), m.constraints()[k].label);
    }
}

TEST_CASE("time windows: no waiting before the window opens") {
    CHECK_FALSE(feasible_sequence(one_stop(5, 10, 20.0), {0}));
    CHECK(feasible_sequence(one_stop(12, 10, 20.0), {0}));
    CHECK_FALSE(feasible_sequence(one_stop(21, 10, 20.0), {0}));
    CHECK(feasible_sequence(one_stop(20, 10, 20.0), {0}));
    // the empty route never triggers a window
    CHECK(feasible_sequence(one_stop(5, 10, 20.0), {}));
}

TEST_CASE("time windows: open orders emit nothing") {
    const FilteredSubproblem sub = one_stop(5, 0, kUnbounded);
    const QuadraticModel m = build_route_model(sub, default_weights(sub.travel));
    CHECK(count_prefix(m, "lt[") == 0);
    CHECK(count_prefix(m, "ut[") == 0);
}

TEST_CASE("duration limit") {
    CHECK_FALSE(feasible_sequence(one_stop(5, 0, kUnbounded, 9.0), {0}));
    CHECK(feasible_sequence(one_stop(5, 0, kUnbounded, 10.0), {0}));
    const FilteredSubproblem open = one_stop(5, 0, kUnbounded);
    CHECK(build_route_model(open, {1.0}).find("duration") == nullptr);
}

TEST_CASE("mobility bounds") {
    const auto bounds = [](int vt, std::vector<int> zones) {
        FilteredSubproblem sub = line_subproblem(zones.size());
        for (std::size_t i = 0; i < zones.size(); ++i) sub.orders[i].zone_type = zones[i];
        sub.vehicle.type = vt;
        sub.filtered = false;
        const QuadraticModel m = build_route_model(sub, {1.0}, {true});
        std::vector<double> out;
        for (std::size_t i = 0; i < zones.size(); ++i) out.push_back(m.find("mobility[" + std::to_string(i) + "]")->rhs);
        return out;
    };
    CHECK(bounds(1, {1, 2, 3}) == std::vector<double>{1, 1, 1});
    CHECK(bounds(3, {2}) == std::vector<double>{0});
    CHECK(bounds(2, {1, 2, 3}) == std::vector<double>{0, 1, 1});
}

TEST_CASE("decode: direct readouts") {
    const FilteredSubproblem sub = line_subproblem(2);
    const QuadraticModel m = build_route_model(sub, {1.0});
    SUBCASE("all zero") {
        const DecodeResult d = decode(from_bits(4, 0), sub);
        REQUIRE(d.ok());
        CHECK(d.route->sequence.empty());
    }
    SUBCASE("second order first") {
        Assignment a = from_bits(4, 0);
        a.values[m.var(1, 0)] = 1;
        a.values[m.var(0, 1)] = 1;
        const DecodeResult d = decode(a, sub);
        REQUIRE(d.ok());
        CHECK(d.route->sequence == std::vector<std::size_t>{1, 0});
        CHECK(d.route->timeline.arrivals == std::vector<double>{2.0, 3.0});
    }
    SUBCASE("two orders in one slot") {
        Assignment a = from_bits(4, 0);
        a.values[m.var(0, 0)] = 1;
        a.values[m.var(1, 0)] = 1;
        const DecodeResult d = decode(a, sub);
        CHECK_FALSE(d.ok());
        CHECK(d.violation == "slot 0 multiply occupied");
    }
    SUBCASE("gap") {
        Assignment a = from_bits(4, 0);
        a.values[m.var(0, 1)] = 1;
        CHECK_FALSE(decode(a, sub).ok());
    }
    SUBCASE("order twice") {
        Assignment a = from_bits(4, 0);
        a.values[m.var(0, 0)] = 1;
        a.values[m.var(0, 1)] = 1;
        CHECK_FALSE(decode(a, sub).ok());
    }
}

TEST_CASE("decode succeeds exactly when the structural family holds") {
    for (std::size_t n = 1; n <= 3; ++n) {
        const FilteredSubproblem sub = line_subproblem(n);
        const QuadraticModel m = build_route_model(sub, {1.0});
        const std::uint64_t total = std::uint64_t{1} << (n * n);
        for (std::uint64_t bits = 0; bits < total; ++bits) {
            const Assignment a = from_bits(n * n, bits);
            CHECK(decode(a, sub).ok() == structural_ok(m, a));
        }
    }
}

TEST_CASE("model values match independently computed trajectories") {
    Rng rng(101);
    for (int trial = 0; trial < 150; ++trial) {
        const Instance inst = test::random_instance(rng, {.orders = 1 + rng.below(6), .vehicles = 1});
        const FilteredSubproblem sub = test::whole_subproblem(inst, inst.fleet[0], false);
        const QuadraticModel m = build_route_model(sub, default_weights(sub.travel));
        std::vector<std::size_t> seq(sub.size());
        std::iota(seq.begin(), seq.end(), 0);
        std::shuffle(seq.begin(), seq.end(), rng.engine());
        seq.resize(rng.below(seq.size() + 1));
        const Assignment a = encode(m, seq);
        const test::RouteFacts f = test::reference_route(sub, seq);

        CHECK(lhs_of(m, "w_depart", a) == doctest::Approx(f.departure_weight));
        for (std::size_t p = 0; p < sub.size(); ++p) {
            const double expected = seq.empty()           ? 0.0
                                    : p < seq.size()      ? f.weight_after[p]
                                                          : f.weight_after.back();
            CHECK(lhs_of(m, "w_cap[" + std::to_string(p) + "]", a) == doctest::Approx(expected));
        }
        CHECK(evaluate_objective(m, a) ==
              doctest::Approx(f.distance - m.serve_reward() * static_cast<double>(seq.size())));

        // window constraints hold iff every visited arrival is inside its window
        bool windows_met = true;
        for (std::size_t k = 0; k < seq.size(); ++k) {
            const std::size_t i = seq[k];
            if (f.arrivals[k] < sub.lower[i] - 1e-9) windows_met = false;
            if (sub.upper[i] && f.arrivals[k] > *sub.upper[i] + 1e-9) windows_met = false;
        }
        bool model_windows = true;
        for (const Constraint& c : m.constraints()) {
            if ((c.label.starts_with("lt[") || c.label.starts_with("ut[")) &&
                violation(c, evaluate(c.lhs, a)) > kFeasibilityTolerance) {
                model_windows = false;
            }
        }
        CHECK(model_windows == windows_met);
    }
}

TEST_CASE("full-service objective is route distance minus the reward per order") {
    Rng rng(33);
    for (int trial = 0; trial < 50; ++trial) {
        const Instance inst = test::random_instance(rng, {.orders = 1 + rng.below(7), .vehicles = 1});
        const FilteredSubproblem sub = test::whole_subproblem(inst, inst.fleet[0], false);
        const QuadraticModel m = build_route_model(sub, default_weights(sub.travel));
        std::vector<std::size_t> seq(sub.size());
        std::iota(seq.begin(), seq.end(), 0);
        std::shuffle(seq.begin(), seq.end(), rng.engine());
        std::vector<std::size_t> nodes;
        for (std::size_t i : seq) nodes.push_back(sub.orders[i].node);
        const double dist = route_distance(nodes, inst.travel);
        CHECK(evaluate_objective(m, encode(m, seq)) ==
              doctest::Approx(dist - m.serve_reward() * static_cast<double>(sub.size())).epsilon(1e-12));
    }
}

TEST_CASE("model constraints agree with the validator, exhaustively for up to three orders") {
    Rng rng(404);
    int mismatches = 0;
    std::size_t checked = 0;
    for (int trial = 0; trial < 60; ++trial) {
        const Instance inst = test::random_instance(rng, {.orders = 1 + rng.below(3), .vehicles = 1,
                                                          .window_share = 0.6, .duration_share = 0.5});
        const bool constraint_mode = trial % 2 == 1;
        const FilteredSubproblem sub = test::whole_subproblem(inst, inst.fleet[0], !constraint_mode);
        if (sub.size() == 0) continue;
        const QuadraticModel m = build_route_model(sub, default_weights(sub.travel), {constraint_mode});
        const std::size_t nv = m.num_variables();
        for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << nv); ++bits) {
            check_agreement(sub, m, from_bits(nv, bits), mismatches);
            ++checked;
        }
    }
    CHECK(checked > 1000);
    CHECK(mismatches == 0);
}

TEST_CASE("model constraints agree with the validator on sampled assignments up to six orders") {
    Rng rng(505);
    int mismatches = 0;
    for (int trial = 0; trial < 60; ++trial) {
        const Instance inst = test::random_instance(rng, {.orders = 4 + rng.below(3), .vehicles = 1,
                                                          .window_share = 0.5, .duration_share = 0.5});
        const FilteredSubproblem sub = test::whole_subproblem(inst, inst.fleet[0], false);
        const QuadraticModel m = build_route_model(sub, default_weights(sub.travel), {true});
        for (int s = 0; s < 300; ++s) {
            Assignment a;
            if (s % 2 == 0) {
                std::vector<std::size_t> seq(sub.size());
                std::iota(seq.begin(), seq.end(), 0);
                std::shuffle(seq.begin(), seq.end(), rng.engine());
                seq.resize(rng.below(seq.size() + 1));
                a = encode(m, seq);
            } else {
                a = from_bits(m.num_variables(), 0);
                for (auto& v : a.values) v = rng.unit() < 0.15;
            }
            check_agreement(sub, m, a, mismatches);
        }
    }
    CHECK(mismatches == 0);
}

TEST_CASE("every constraint references declared variables only") {
    Rng rng(9);
    for (int trial = 0; trial < 30; ++trial) {
        const Instance inst = test::random_instance(rng, {.orders = 1 + rng.below(6), .vehicles = 1});
        const FilteredSubproblem sub = test::whole_subproblem(inst, inst.fleet[0], false);
        const QuadraticModel m = build_route_model(sub, default_weights(sub.travel), {true});
        for (const auto& c : m.constraints()) {
            for (const auto& t : c.lhs.linear) CHECK(t.var < m.num_variables());
            for (const auto& t : c.lhs.quadratic) {
                CHECK(t.u < t.v);
                CHECK(t.v < m.num_variables());
            }
        }
    }
}
