#include "pdp/fixtures.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>

#include "pdp/random.hpp"
#include "pdp/validator.hpp"

namespace pdp {

namespace {

constexpr Point kDepot{50.0, 50.0};

double round1(double v) { return std::round(v * 10.0) / 10.0; }

Point at(double angle, double radius, Point center = kDepot) {
    return {round1(center.x + radius * std::cos(angle)), round1(center.y + radius * std::sin(angle))};
}

/// `count` points in angular order between angle0 and angle1 (radians).
std::vector<Point> arc(Rng& rng, int count, double angle0, double angle1, double rmin, double rmax,
                       Point center = kDepot) {
    std::vector<Point> pts;
    for (int k = 0; k < count; ++k) {
        const double a = angle0 + (angle1 - angle0) * (k + 0.5 + rng.uniform(-0.3, 0.3)) / count;
        pts.push_back(at(a, rng.uniform(rmin, rmax), center));
    }
    return pts;
}

enum class Mix { plain, red, green };

void set_loads(Order& o, Mix mix, double base = 10.0) {
    switch (mix) {
        case Mix::plain:
            o.delivery_weight = o.delivery_dim = o.pickup_weight = o.pickup_dim = base;
            break;
        case Mix::red:  // picks up more than it receives
            o.delivery_weight = o.delivery_dim = base / 2;
            o.pickup_weight = o.pickup_dim = base * 1.5;
            break;
        case Mix::green:
            o.delivery_weight = o.delivery_dim = base * 1.5;
            o.pickup_weight = o.pickup_dim = base / 2;
            break;
    }
}

void delivery_only(Order& o, double load) {
    o.delivery_weight = o.delivery_dim = load;
    o.pickup_weight = o.pickup_dim = 0.0;
}

enum class Window { none, lower, upper, both };

class Builder {
public:
    explicit Builder(std::string name) {
        inst_.name = std::move(name);
        inst_.coords.push_back(kDepot);
    }

    /// Appends an order at `p`; returns its index into orders.
    std::size_t add(Point p, int zone_type = 1) {
        Order o;
        o.node = inst_.coords.size();
        o.id = "o" + std::to_string(o.node);
        o.zone_type = zone_type;
        set_loads(o, Mix::plain);
        inst_.coords.push_back(p);
        inst_.orders.push_back(std::move(o));
        return inst_.orders.size() - 1;
    }

    std::vector<std::size_t> add_all(const std::vector<Point>& pts, int zone_type = 1) {
        std::vector<std::size_t> idx;
        for (const Point& p : pts) idx.push_back(add(p, zone_type));
        return idx;
    }

    Order& order(std::size_t k) { return inst_.orders[k]; }

    void truck(std::string id, double capacity, int type, Ownership own = Ownership::owned,
               TimeLimit max_duration = kUnbounded) {
        VehicleSpec v;
        v.id = std::move(id);
        v.weight_capacity = v.dim_capacity = capacity;
        v.type = type;
        v.ownership = own;
        v.max_duration = max_duration;
        inst_.fleet.push_back(std::move(v));
    }

    TravelMatrix travel() const { return travel_matrix_from_coords(inst_.coords, 1.0); }

    /// Arrival times if the orders were visited in `planned` order.
    Timeline planned_timeline(const std::vector<std::size_t>& planned) const {
        std::vector<std::size_t> nodes;
        for (std::size_t k : planned) nodes.push_back(inst_.orders[k].node);
        return route_timeline(nodes, travel());
    }

    /// Heaviest load on board along `planned`.
    double planned_peak(const std::vector<std::size_t>& planned) const {
        std::vector<Order> stops;
        for (std::size_t k : planned) stops.push_back(inst_.orders[k]);
        const LoadProfile lp = route_loads(stops);
        double peak = std::max(lp.departure.weight, lp.departure.dim);
        for (const Load& l : lp.after) peak = std::max({peak, l.weight, l.dim});
        return peak;
    }

    /// Opens a window of +-slack around each planned arrival, so the planned
    /// sequence stays feasible.
    void windows_around(const std::vector<std::size_t>& planned, const std::vector<Window>& kinds, double slack) {
        const Timeline tl = planned_timeline(planned);
        for (std::size_t p = 0; p < planned.size(); ++p) {
            Order& o = inst_.orders[planned[p]];
            const double t = tl.arrivals[p];
            const Window w = kinds[p % kinds.size()];
            if (w == Window::lower || w == Window::both) o.earliest = std::max(0.0, std::floor(t - slack));
            if (w == Window::upper || w == Window::both) o.latest = std::ceil(t + slack);
        }
    }

    Instance finish() {
        inst_.speed = 1.0;
        inst_.travel = travel();
        return std::move(inst_);
    }

private:
    Instance inst_;
};

double ceil_to(double v, double step) { return std::ceil(v / step - 1e-12) * step; }

constexpr double kTau = 2.0 * std::numbers::pi;

// One truck exactly saturated by 11 orders of 10.
Instance pd12(Variant v) {
    Rng rng(12);
    Builder b("PD12");
    const auto idx = b.add_all(arc(rng, 11, 0.0, kTau, 15.0, 42.0));
    for (std::size_t k : idx) delivery_only(b.order(k), 10.0);
    if (v == Variant::b) {
        for (std::size_t k : idx) set_loads(b.order(k), Mix::plain);
        for (std::size_t k : {1u, 4u, 7u}) set_loads(b.order(idx[k]), Mix::green);
        for (std::size_t k : {2u, 5u, 8u}) set_loads(b.order(idx[k]), Mix::red);
    }
    b.truck("T1", 110.0, 1);
    return b.finish();
}

// Two 70-unit trucks, seven orders each.
Instance pd15(Variant v) {
    Rng rng(15);
    Builder b("PD15");
    const auto idx = b.add_all(arc(rng, 14, 0.0, kTau, 12.0, 45.0));
    for (std::size_t k : idx) delivery_only(b.order(k), 10.0);
    if (v == Variant::b) {
        for (std::size_t k : idx) set_loads(b.order(k), Mix::plain);
        for (std::size_t k : {2u, 9u}) set_loads(b.order(idx[k]), Mix::green);
        for (std::size_t k : {3u, 10u}) set_loads(b.order(idx[k]), Mix::red);
    }
    b.truck("T1", 70.0, 1);
    b.truck("T2", 70.0, 1);
    return b.finish();
}

// Nine orders, the four window categories.
Instance pd10_tw(Variant v) {
    Rng rng(10);
    Builder b("PD10_TW");
    const auto idx = b.add_all(arc(rng, 9, 0.3, 0.3 + kTau, 15.0, 40.0));
    if (v != Variant::a) {
        b.windows_around(idx,
                         {Window::both, Window::none, Window::lower, Window::upper, Window::both, Window::lower,
                          Window::none, Window::upper, Window::both},
                         8.0);
    }
    b.truck("T1", 110.0, 1);
    return b.finish();
}

// Morning orders close in, afternoon orders further out on
// the same side, two trucks of 70 carrying 8 each.
Instance pd17_tw(Variant v) {
    Rng rng(17);
    Builder b("PD17_TW");
    const auto side = [&](double sign) {
        std::vector<Point> morning;
        std::vector<Point> afternoon;
        for (double dy : {-18.0, -6.0, 6.0, 18.0}) {
            morning.push_back({round1(50.0 + sign * rng.uniform(12.0, 22.0)), round1(50.0 + dy + rng.uniform(-3, 3))});
        }
        for (double dy : {20.0, 7.0, -7.0, -20.0}) {
            afternoon.push_back({round1(50.0 + sign * rng.uniform(34.0, 44.0)), round1(50.0 + dy + rng.uniform(-3, 3))});
        }
        return std::pair{morning, afternoon};
    };
    const auto [ml, al] = side(-1.0);
    const auto [mr, ar] = side(1.0);
    const auto iml = b.add_all(ml);
    const auto imr = b.add_all(mr);
    const auto ial = b.add_all(al);
    const auto iar = b.add_all(ar);
    for (std::size_t k = 0; k < 16; ++k) set_loads(b.order(k), Mix::plain, 8.0);

    if (v != Variant::a) {
        std::vector<std::size_t> left = iml;
        left.insert(left.end(), ial.begin(), ial.end());
        std::vector<std::size_t> right = imr;
        right.insert(right.end(), iar.begin(), iar.end());
        const Timeline tl = b.planned_timeline(left);
        const Timeline tr = b.planned_timeline(right);
        const double morning_end = std::ceil(std::max(tl.arrivals[3], tr.arrivals[3])) + 3.0;
        const double afternoon_start = std::floor(std::min(tl.arrivals[4], tr.arrivals[4])) - 3.0;
        for (std::size_t k : iml) b.order(k).latest = morning_end;
        for (std::size_t k : imr) b.order(k).latest = morning_end;
        for (std::size_t k : ial) b.order(k).earliest = afternoon_start;
        for (std::size_t k : iar) b.order(k).earliest = afternoon_start;
    }
    b.truck("T1", 70.0, 1);
    b.truck("T2", 70.0, 1);
    return b.finish();
}

// Six orders in a zone only type-1 trucks may enter; the
// only owned truck is type 2, a type-1 truck can be rented.
Instance pd17_mr(Variant) {
    Rng rng(171);
    Builder b("PD17_MR");
    const auto open = b.add_all(arc(rng, 10, -0.6, -0.6 + 0.62 * kTau, 15.0, 42.0), 2);
    const auto restricted = b.add_all(arc(rng, 6, 3.5, 5.0, 25.0, 40.0), 1);
    for (std::size_t k : open) set_loads(b.order(k), Mix::plain, 7.0);
    for (std::size_t k : restricted) set_loads(b.order(k), Mix::plain, 7.0);
    b.truck("T1", 70.0, 2, Ownership::owned);
    b.truck("R1", 70.0, 1, Ownership::rentable);
    return b.finish();
}

struct FleetPlan {
    std::vector<std::size_t> planned;
    double nominal_capacity;
    int type;
};

// Shared shape of the two advanced scenarios: each truck gets a planned route
// over the orders only it will see; windows, capacities and duration limits
// are cut around those plans so they remain feasible while binding.
void finish_advanced(Builder& b, std::vector<FleetPlan> plans, const std::vector<Window>& kinds, double slack,
                     const std::vector<Mix>& mixes) {
    std::size_t m = 0;
    for (auto& fp : plans) {
        for (std::size_t k : fp.planned) set_loads(b.order(k), mixes[m++ % mixes.size()]);
    }
    for (std::size_t t = 0; t < plans.size(); ++t) {
        const auto& fp = plans[t];
        b.windows_around(fp.planned, kinds, slack);
        const double capacity = std::max(fp.nominal_capacity, ceil_to(b.planned_peak(fp.planned), 10.0));
        const double rt = std::ceil(b.planned_timeline(fp.planned).duration * 1.25);
        b.truck("T" + std::to_string(t + 1), capacity, fp.type, Ownership::owned, rt);
    }
}

// Most window-restrictive scenario: a type-2 truck for the open area and a
// type-1 truck for the restricted district.
Instance rw1_o19(Variant) {
    Rng rng(19);
    Builder b("RW1_O19");
    const auto open = b.add_all(arc(rng, 11, -1.4, 1.6, 14.0, 44.0), 2);
    const auto restricted = b.add_all(arc(rng, 7, 2.1, 4.3, 16.0, 40.0), 1);
    finish_advanced(b, {{open, 100.0, 2}, {restricted, 80.0, 1}},
                    {Window::both, Window::both, Window::lower, Window::upper, Window::both, Window::none},
                    5.0, {Mix::plain, Mix::green, Mix::red, Mix::plain, Mix::red, Mix::green, Mix::green});
    return b.finish();
}

// Largest scenario: a big type-2 truck for the outskirts and a small
// unrestricted truck for the centre, which type-2 trucks may not enter.
Instance rw2_o24(Variant) {
    Rng rng(24);
    Builder b("RW2_O24");
    const auto outer = b.add_all(arc(rng, 16, 0.2, 0.2 + kTau, 24.0, 46.0), 2);
    const auto centre = b.add_all(arc(rng, 7, 0.0, kTau, 5.0, 14.0), 1);
    finish_advanced(b, {{outer, 160.0, 2}, {centre, 60.0, 1}},
                    {Window::both, Window::none, Window::upper, Window::none, Window::lower, Window::none},
                    12.0, {Mix::plain, Mix::green, Mix::plain, Mix::red});
    return b.finish();
}

struct Entry {
    const char* name;
    std::function<Instance(Variant)> make;
    bool windows_variant;  // canonical variant is B
};

const std::vector<Entry>& registry() {
    static const std::vector<Entry> entries{
        {"PD12", pd12, false},       {"PD15", pd15, false},       {"PD10_TW", pd10_tw, true},
        {"PD17_TW", pd17_tw, true},  {"PD17_MR", pd17_mr, false}, {"RW1_O19", rw1_o19, false},
        {"RW2_O24", rw2_o24, false},
    };
    return entries;
}

}  // namespace

const std::vector<std::string>& fixture_names() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> out;
        for (const auto& e : registry()) out.emplace_back(e.name);
        return out;
    }();
    return names;
}

Instance generate_fixture(std::string_view name, Variant variant) {
    for (const auto& e : registry()) {
        if (name != e.name) continue;
        if (variant == Variant::canonical) variant = e.windows_variant ? Variant::b : Variant::a;
        return e.make(variant);
    }
    std::string valid;
    for (const auto& n : fixture_names()) valid += (valid.empty() ? "" : ", ") + n;
    throw InputError("unknown fixture '" + std::string(name) + "' (valid: " + valid + ")");
}

}  // namespace pdp
