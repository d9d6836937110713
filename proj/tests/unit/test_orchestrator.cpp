#include <doctest.h>

#include <algorithm>
#include <set>

#include "pdp/fixtures.hpp"
#include "pdp/orchestrator.hpp"
#include "pdp/validator.hpp"
#include "support.hpp"

using namespace pdp;

namespace {

std::vector<Order> zoned(std::vector<int> zones) {
    std::vector<Order> out;
    for (std::size_t k = 0; k < zones.size(); ++k) {
        Order o = test::make_order("o" + std::to_string(k + 1), k + 1, 1);
        o.zone_type = zones[k];
        out.push_back(o);
    }
    return out;
}

TravelMatrix unit_matrix(std::size_t n) {
    std::vector<double> m(n * n, 1.0);
    for (std::size_t k = 0; k < n; ++k) m[k * n + k] = 0.0;
    return TravelMatrix(n, m, m);
}

OrchestratorConfig exact_config() {
    OrchestratorConfig c;
    c.solver.backend = Backend::exact;
    c.solver.exact_max_orders = 11;
    return c;
}

OrchestratorConfig anneal_config(std::uint64_t seed = 3) {
    OrchestratorConfig c;
    c.solver.seed = seed;
    c.solver.anneal.sweeps = 500;
    c.solver.anneal.restarts = 6;
    c.exact_up_to = 6;
    return c;
}

void check_partition(const Instance& inst, const Plan& plan) {
    std::multiset<std::string> seen;
    for (const auto& r : plan.routes) seen.insert(r.sequence.begin(), r.sequence.end());
    seen.insert(plan.unserved.begin(), plan.unserved.end());
    std::multiset<std::string> all;
    for (const auto& o : inst.orders) all.insert(o.id);
    CHECK(seen == all);
}

}  // namespace

TEST_CASE("filtering by vehicle type") {
    const TravelMatrix t = unit_matrix(5);
    SUBCASE("type 1 keeps everything") {
        const auto orders = zoned({1, 2, 3, 2});
        CHECK(order_filtering(orders, test::make_vehicle("v", 1, 1), t).size() == 4);
    }
    SUBCASE("type 3 against type-2 zones keeps nothing") {
        const auto orders = zoned({2, 2, 2, 2});
        CHECK(order_filtering(orders, test::make_vehicle("v", 1, 3), t).size() == 0);
    }
    SUBCASE("type 2 drops the type-1 zone") {
        const auto orders = zoned({1, 2, 3, 2});
        const FilteredSubproblem sub = order_filtering(orders, test::make_vehicle("v", 1, 2), t);
        std::vector<std::string> kept;
        for (const auto& o : sub.orders) kept.push_back(o.id);
        CHECK(kept == std::vector<std::string>{"o2", "o3", "o4"});
        CHECK(sub.travel.size() == 4);
        CHECK(sub.filtered);
    }
}

TEST_CASE("vehicle selection") {
    SUBCASE("rentable type-1 truck when only type-1 zones remain") {
        std::vector<VehicleSpec> fleet{test::make_vehicle("own", 100, 2), test::make_vehicle("rent", 50, 1)};
        fleet[1].ownership = Ownership::rentable;
        const auto orders = zoned({1, 1});
        const auto pick = select_vehicle(fleet, FleetState::fresh(fleet), orders, VehiclePolicy::owned_first);
        REQUIRE(pick.has_value());
        CHECK(*pick == 1);
        CHECK_FALSE(select_vehicle(fleet, FleetState::fresh(fleet), orders, VehiclePolicy::owned_first, false));
    }
    SUBCASE("uses exhausted") {
        std::vector<VehicleSpec> fleet{test::make_vehicle("only", 100)};
        FleetState state = FleetState::fresh(fleet);
        state.uses_left[0] = 0;
        CHECK_FALSE(select_vehicle(fleet, state, zoned({1}), VehiclePolicy::owned_first));
    }
    SUBCASE("larger owned truck first") {
        std::vector<VehicleSpec> fleet{test::make_vehicle("small", 70), test::make_vehicle("big", 100)};
        const auto pick = select_vehicle(fleet, FleetState::fresh(fleet), zoned({1, 1}), VehiclePolicy::owned_first);
        CHECK(*pick == 1);
        const auto declared =
            select_vehicle(fleet, FleetState::fresh(fleet), zoned({1, 1}), VehiclePolicy::declared_order);
        CHECK(*declared == 0);
    }
    SUBCASE("owned before rentable even when smaller") {
        std::vector<VehicleSpec> fleet{test::make_vehicle("rent", 200), test::make_vehicle("own", 10)};
        fleet[0].ownership = Ownership::rentable;
        CHECK(*select_vehicle(fleet, FleetState::fresh(fleet), zoned({1}), VehiclePolicy::owned_first) == 1);
    }
}

TEST_CASE("plan: no orders") {
    Instance inst;
    inst.name = "empty";
    inst.fleet.push_back(test::make_vehicle("T1", 10));
    inst.travel = unit_matrix(1);
    const Plan p = plan(inst, exact_config());
    CHECK(p.routes.empty());
    CHECK(p.unserved.empty());
}

TEST_CASE("plan: eleven deliveries, one truck of 110") {
    const Instance inst = generate_fixture("PD12", Variant::a);
    const Plan p = plan(inst, exact_config());
    REQUIRE(p.routes.size() == 1);
    CHECK(p.routes[0].sequence.size() == 11);
    CHECK(validate_plan(inst, p).ok);
}

TEST_CASE("plan: fourteen deliveries, two trucks of 70") {
    const Instance inst = generate_fixture("PD15", Variant::a);
    const Plan p = plan(inst, anneal_config());
    REQUIRE(p.routes.size() == 2);
    CHECK(p.routes[0].sequence.size() == 7);
    CHECK(p.routes[1].sequence.size() == 7);
    CHECK(validate_plan(inst, p).ok);
}

TEST_CASE("plan: invariants over random instances") {
    Rng rng(2024);
    for (int trial = 0; trial < 40; ++trial) {
        const Instance inst = test::random_instance(rng, {.orders = 2 + rng.below(5), .vehicles = 1 + rng.below(3)});
        for (MobilityMode mode : {MobilityMode::filter, MobilityMode::constraint}) {
            OrchestratorConfig c = exact_config();
            c.mobility_mode = mode;
            std::vector<std::size_t> sizes;
            const PlanResult res = plan_routes(inst, c, [&](const FilteredSubproblem& sub, const QuadraticModel& m) {
                if (sub.filtered) CHECK(m.num_variables() == sub.size() * sub.size());
                sizes.push_back(sub.size());
            });
            check_partition(inst, res.plan);
            const ValidationReport report = validate_plan(inst, res.plan);
            CHECK(report.ok);
            double total = 0.0;
            for (const Route& r : res.plan.routes) {
                const VehicleSpec* v = inst.find_vehicle(r.vehicle);
                for (const auto& id : r.sequence) CHECK(can_serve(v->type, *inst.find_order(id)));
                std::vector<std::size_t> nodes;
                for (const auto& id : r.sequence) nodes.push_back(inst.find_order(id)->node);
                total += route_distance(nodes, inst.travel);
            }
            CHECK(res.plan.total_distance == doctest::Approx(total));
        }
    }
}

TEST_CASE("plan: a round that serves nothing stops planning") {
    Instance inst;
    inst.name = "stuck";
    inst.orders.push_back(test::make_order("heavy", 1, 50));
    inst.fleet.push_back(test::make_vehicle("T1", 10));
    inst.fleet.push_back(test::make_vehicle("T2", 10));
    inst.travel = unit_matrix(2);
    const PlanResult res = plan_routes(inst, exact_config());
    CHECK(res.plan.routes.empty());
    CHECK(res.plan.unserved == std::vector<std::string>{"heavy"});
    CHECK(res.rounds.size() == 1);
}

TEST_CASE("plan: external stub produces no routes") {
    const Instance inst = generate_fixture("PD12");
    OrchestratorConfig c;
    c.solver.backend = Backend::external_stub;
    c.solver.external_model_path = "/tmp/pdp_test_orchestrator_stub.json";
    const Plan p = plan(inst, c);
    CHECK(p.routes.empty());
    CHECK(p.unserved.size() == 11);
}

TEST_CASE("mobility modes: single type-1 vehicle") {
    Rng rng(8);
    Instance inst = test::random_instance(rng, {.orders = 5, .vehicles = 1});
    inst.fleet[0].type = 1;
    const EquivalenceReport r = mobility_mode_equivalence_check(inst, exact_config());
    CHECK_MESSAGE(r.equivalent, r.detail);
}

TEST_CASE("mobility modes: mixed zones give the same optimum") {
    Rng rng(9);
    for (int trial = 0; trial < 15; ++trial) {
        Instance inst = test::random_instance(rng, {.orders = 3 + rng.below(4), .vehicles = 2});
        inst.fleet[0].type = 2;
        const EquivalenceReport r = mobility_mode_equivalence_check(inst, exact_config());
        CHECK_MESSAGE(r.equivalent, r.detail);
    }
}

TEST_CASE("mobility modes: nothing reachable") {
    Instance inst;
    inst.name = "unreachable";
    inst.orders = zoned({1, 1});
    inst.fleet.push_back(test::make_vehicle("T3", 10, 3));
    inst.travel = unit_matrix(3);
    const EquivalenceReport r = mobility_mode_equivalence_check(inst, exact_config());
    CHECK(r.equivalent);
    CHECK(r.filtered.routes.empty());
    CHECK(r.constrained.routes.empty());
}

TEST_CASE("plan: malformed instance is refused") {
    Instance inst = generate_fixture("PD12");
    inst.orders[0].zone_type = 0;
    CHECK_THROWS_AS(plan(inst, exact_config()), InstanceCheckError);
}
