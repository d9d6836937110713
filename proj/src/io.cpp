#include "pdp/io.hpp"

#include <fstream>
#include <sstream>
#include <unordered_map>

#include "json.hpp"

namespace pdp {

using Json = nlohmann::ordered_json;

namespace {

// Field accessors that report the JSON path of whatever is wrong.

[[noreturn]] void fail(const std::string& path, const std::string& what) {
    throw ParseError(path + ": " + what);
}

Json parse_text(std::string_view text, std::string_view what) {
    try {
        return Json::parse(text);
    } catch (const Json::parse_error& e) {
        throw ParseError(std::string(what) + ": invalid JSON: " + e.what());
    }
}

const Json& require(const Json& obj, const char* key, const std::string& path) {
    if (!obj.is_object()) fail(path, "expected an object");
    auto it = obj.find(key);
    if (it == obj.end()) fail(path + "." + key, "missing required field");
    return *it;
}

double as_number(const Json& v, const std::string& path) {
    if (!v.is_number()) fail(path, "expected a number");
    return v.get<double>();
}

double number_or(const Json& obj, const char* key, double fallback, const std::string& path) {
    auto it = obj.find(key);
    if (it == obj.end()) return fallback;
    return as_number(*it, path + "." + key);
}

int int_or(const Json& obj, const char* key, int fallback, const std::string& path) {
    auto it = obj.find(key);
    if (it == obj.end()) return fallback;
    if (!it->is_number_integer()) fail(path + "." + key, "expected an integer");
    return it->get<int>();
}

std::string as_string(const Json& v, const std::string& path) {
    if (!v.is_string()) fail(path, "expected a string");
    return v.get<std::string>();
}

/// null or absent means unbounded.
TimeLimit limit_or_unbounded(const Json& obj, const char* key, const std::string& path) {
    auto it = obj.find(key);
    if (it == obj.end() || it->is_null()) return kUnbounded;
    return as_number(*it, path + "." + key);
}

Json limit_json(const TimeLimit& t) { return t ? Json(*t) : Json(nullptr); }

Point as_point(const Json& v, const std::string& path) {
    if (!v.is_array() || v.size() != 2) fail(path, "expected [x, y]");
    return {as_number(v[0], path + "[0]"), as_number(v[1], path + "[1]")};
}

const Json& as_array(const Json& v, const std::string& path) {
    if (!v.is_array()) fail(path, "expected an array");
    return v;
}

std::vector<double> as_matrix(const Json& v, std::size_t n, const std::string& path) {
    as_array(v, path);
    if (v.size() != n) fail(path, "expected " + std::to_string(n) + " rows");
    std::vector<double> out;
    out.reserve(n * n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::string row = path + "[" + std::to_string(i) + "]";
        as_array(v[i], row);
        if (v[i].size() != n) fail(row, "expected " + std::to_string(n) + " columns");
        for (std::size_t j = 0; j < n; ++j) out.push_back(as_number(v[i][j], row + "[" + std::to_string(j) + "]"));
    }
    return out;
}

Json matrix_json(const std::vector<double>& data, std::size_t n) {
    Json rows = Json::array();
    for (std::size_t i = 0; i < n; ++i) {
        Json row = Json::array();
        for (std::size_t j = 0; j < n; ++j) row.push_back(data[i * n + j]);
        rows.push_back(std::move(row));
    }
    return rows;
}

void check_header(const Json& doc, std::string_view format, int version) {
    if (!doc.is_object()) fail("$", "expected an object");
    const std::string f = as_string(require(doc, "format", "$"), "$.format");
    if (f != format) fail("$.format", "expected \"" + std::string(format) + "\", got \"" + f + "\"");
    const Json& v = require(doc, "version", "$");
    if (!v.is_number_integer()) fail("$.version", "expected an integer");
    if (v.get<int>() != version) {
        throw ParseError("unsupported " + std::string(format) + " version " + std::to_string(v.get<int>()) +
                         " (this build reads version " + std::to_string(version) + ")");
    }
}

std::string_view ownership_name(Ownership o) { return o == Ownership::owned ? "owned" : "rentable"; }

}  // namespace

// Instances ------------------------------------------------------------------

Instance load_instance(std::string_view text) {
    const Json doc = parse_text(text, "instance");
    check_header(doc, "pdp-instance", kInstanceSchemaVersion);

    Instance inst;
    inst.name = as_string(require(doc, "name", "$"), "$.name");

    const Json& orders = as_array(require(doc, "orders", "$"), "$.orders");
    const Json& fleet = as_array(require(doc, "fleet", "$"), "$.fleet");
    const std::size_t n = orders.size() + 1;

    const bool has_matrices = doc.contains("matrices");
    std::vector<Point> coords;
    bool all_coords = doc.contains("depot");
    if (all_coords) coords.push_back(as_point(doc["depot"], "$.depot"));

    for (std::size_t k = 0; k < orders.size(); ++k) {
        const std::string path = "$.orders[" + std::to_string(k) + "]";
        const Json& o = orders[k];
        Order order;
        order.id = as_string(require(o, "id", path), path + ".id");
        order.node = k + 1;
        order.delivery_weight = number_or(o, "wd", 0.0, path);
        order.delivery_dim = number_or(o, "dd", 0.0, path);
        order.pickup_weight = number_or(o, "wp", 0.0, path);
        order.pickup_dim = number_or(o, "dp", 0.0, path);
        order.earliest = number_or(o, "lt", 0.0, path);
        order.latest = limit_or_unbounded(o, "ut", path);
        order.zone_type = int_or(o, "ot", 1, path);
        if (o.contains("coords")) {
            if (all_coords) coords.push_back(as_point(o["coords"], path + ".coords"));
        } else {
            if (!has_matrices) fail(path + ".coords", "missing (required when no matrices are given)");
            all_coords = false;
        }
        inst.orders.push_back(std::move(order));
    }
    if (!has_matrices && !doc.contains("depot")) fail("$.depot", "missing (required when no matrices are given)");

    for (std::size_t k = 0; k < fleet.size(); ++k) {
        const std::string path = "$.fleet[" + std::to_string(k) + "]";
        const Json& v = fleet[k];
        VehicleSpec spec;
        spec.id = as_string(require(v, "id", path), path + ".id");
        spec.weight_capacity = as_number(require(v, "W", path), path + ".W");
        spec.dim_capacity = as_number(require(v, "D", path), path + ".D");
        spec.type = int_or(v, "vt", 1, path);
        spec.max_duration = limit_or_unbounded(v, "rt", path);
        spec.max_uses = int_or(v, "max_uses", 1, path);
        if (auto it = v.find("ownership"); it != v.end()) {
            const std::string own = as_string(*it, path + ".ownership");
            if (own == "owned") spec.ownership = Ownership::owned;
            else if (own == "rentable") spec.ownership = Ownership::rentable;
            else fail(path + ".ownership", "expected \"owned\" or \"rentable\"");
        }
        inst.fleet.push_back(std::move(spec));
    }

    if (all_coords) inst.coords = std::move(coords);
    if (has_matrices) {
        const Json& m = doc["matrices"];
        inst.travel = TravelMatrix(n, as_matrix(require(m, "time", "$.matrices"), n, "$.matrices.time"),
                                   as_matrix(require(m, "dist", "$.matrices"), n, "$.matrices.dist"));
    } else {
        const double speed = number_or(doc, "speed", 1.0, "$");
        try {
            inst.travel = travel_matrix_from_coords(inst.coords, speed);
        } catch (const InputError& e) {
            fail("$.speed", e.what());
        }
        inst.speed = speed;
    }

    if (auto problems = check_instance(inst); !problems.empty()) throw InstanceCheckError(std::move(problems));
    return inst;
}

std::string save_instance(const Instance& inst) {
    Json doc;
    doc["format"] = "pdp-instance";
    doc["version"] = kInstanceSchemaVersion;
    doc["name"] = inst.name;
    const bool derived = inst.speed && !inst.coords.empty() &&
                         travel_matrix_from_coords(inst.coords, *inst.speed) == inst.travel;
    if (!inst.coords.empty()) doc["depot"] = {inst.coords[0].x, inst.coords[0].y};
    if (derived) doc["speed"] = *inst.speed;

    Json orders = Json::array();
    for (const Order& o : inst.orders) {
        Json j;
        j["id"] = o.id;
        if (!inst.coords.empty()) j["coords"] = {inst.coords[o.node].x, inst.coords[o.node].y};
        j["wd"] = o.delivery_weight;
        j["dd"] = o.delivery_dim;
        j["wp"] = o.pickup_weight;
        j["dp"] = o.pickup_dim;
        j["lt"] = o.earliest;
        j["ut"] = limit_json(o.latest);
        j["ot"] = o.zone_type;
        orders.push_back(std::move(j));
    }
    doc["orders"] = std::move(orders);

    Json fleet = Json::array();
    for (const VehicleSpec& v : inst.fleet) {
        Json j;
        j["id"] = v.id;
        j["W"] = v.weight_capacity;
        j["D"] = v.dim_capacity;
        j["vt"] = v.type;
        j["rt"] = limit_json(v.max_duration);
        j["ownership"] = ownership_name(v.ownership);
        j["max_uses"] = v.max_uses;
        fleet.push_back(std::move(j));
    }
    doc["fleet"] = std::move(fleet);

    if (!derived) {
        // Matrices are indexed by node; the loader assigns order k to node k+1.
        for (std::size_t k = 0; k < inst.orders.size(); ++k) {
            if (inst.orders[k].node != k + 1) {
                throw InputError("save_instance: order '" + inst.orders[k].id +
                                 "' is not on node " + std::to_string(k + 1));
            }
        }
        doc["matrices"] = {{"time", matrix_json(inst.travel.time_data(), inst.travel.size())},
                           {"dist", matrix_json(inst.travel.dist_data(), inst.travel.size())}};
    }
    return doc.dump(2) + "\n";
}

// Plans ----------------------------------------------------------------------

namespace {

Json load_json(const Load& l) { return Json::array({l.weight, l.dim}); }

Load as_load(const Json& v, const std::string& path) {
    const Point p = as_point(v, path);
    return {p.x, p.y};
}

Json violations_json(const ValidationReport& report) {
    Json out = Json::array();
    for (const Violation& v : report.violations) {
        Json j;
        j["route"] = v.route;
        j["rule"] = rule_name(v.rule);
        j["slot"] = v.slot;
        j["order"] = v.order;
        j["measured"] = v.measured;
        j["bound"] = v.bound;
        j["message"] = describe(v);
        out.push_back(std::move(j));
    }
    return out;
}

ValidationReport report_from_json(const Json& j, const std::string& path) {
    ValidationReport report;
    const Json& ok = require(j, "ok", path);
    if (!ok.is_boolean()) fail(path + ".ok", "expected a boolean");
    const Json& list = as_array(require(j, "violations", path), path + ".violations");
    for (std::size_t k = 0; k < list.size(); ++k) {
        const std::string vp = path + ".violations[" + std::to_string(k) + "]";
        const Json& v = list[k];
        Violation out;
        out.route = int_or(v, "route", -1, vp);
        const std::string rule = as_string(require(v, "rule", vp), vp + ".rule");
        auto r = rule_from_name(rule);
        if (!r) fail(vp + ".rule", "unknown rule \"" + rule + "\"");
        out.rule = *r;
        out.slot = int_or(v, "slot", -1, vp);
        if (v.contains("order")) out.order = as_string(v["order"], vp + ".order");
        out.measured = number_or(v, "measured", 0.0, vp);
        out.bound = number_or(v, "bound", 0.0, vp);
        report.violations.push_back(std::move(out));
    }
    report.ok = ok.get<bool>();
    if (report.ok != report.violations.empty()) fail(path + ".ok", "disagrees with the violation list");
    return report;
}

}  // namespace

std::string save_plan(const Plan& plan, const ValidationReport& report) {
    Json doc;
    doc["format"] = "pdp-plan";
    doc["version"] = kPlanSchemaVersion;
    doc["instance"] = plan.instance;
    Json routes = Json::array();
    for (const Route& r : plan.routes) {
        Json j;
        j["vehicle"] = r.vehicle;
        j["sequence"] = r.sequence;
        j["arrivals"] = r.arrivals;
        j["duration"] = r.duration;
        j["distance"] = r.distance;
        j["departure_load"] = load_json(r.departure_load);
        Json loads = Json::array();
        for (const Load& l : r.loads) loads.push_back(load_json(l));
        j["loads"] = std::move(loads);
        routes.push_back(std::move(j));
    }
    doc["routes"] = std::move(routes);
    doc["unserved"] = plan.unserved;
    doc["objective"] = {{"total_distance", plan.total_distance}, {"total_duration", plan.total_duration}};
    doc["report"] = {{"ok", report.ok}, {"violations", violations_json(report)}};
    return doc.dump(2) + "\n";
}

PlanFile load_plan(std::string_view text) {
    const Json doc = parse_text(text, "plan");
    check_header(doc, "pdp-plan", kPlanSchemaVersion);

    PlanFile out;
    Plan& plan = out.plan;
    plan.instance = as_string(require(doc, "instance", "$"), "$.instance");
    const Json& routes = as_array(require(doc, "routes", "$"), "$.routes");
    for (std::size_t k = 0; k < routes.size(); ++k) {
        const Json& j = routes[k];
        Route r;
        r.vehicle = as_string(require(j, "vehicle", "$.routes[" + std::to_string(k) + "]"),
                              "$.routes[" + std::to_string(k) + "].vehicle");
        const std::string path = "$.routes[" + std::to_string(k) + "] (vehicle '" + r.vehicle + "')";
        const Json& seq = as_array(require(j, "sequence", path), path + ".sequence");
        for (std::size_t s = 0; s < seq.size(); ++s) {
            r.sequence.push_back(as_string(seq[s], path + ".sequence[" + std::to_string(s) + "]"));
        }
        const Json& arr = as_array(require(j, "arrivals", path), path + ".arrivals");
        for (std::size_t s = 0; s < arr.size(); ++s) {
            r.arrivals.push_back(as_number(arr[s], path + ".arrivals[" + std::to_string(s) + "]"));
        }
        r.duration = as_number(require(j, "duration", path), path + ".duration");
        r.distance = as_number(require(j, "distance", path), path + ".distance");
        r.departure_load = as_load(require(j, "departure_load", path), path + ".departure_load");
        const Json& loads = as_array(require(j, "loads", path), path + ".loads");
        for (std::size_t s = 0; s < loads.size(); ++s) {
            r.loads.push_back(as_load(loads[s], path + ".loads[" + std::to_string(s) + "]"));
        }
        if (r.arrivals.size() != r.sequence.size() || r.loads.size() != r.sequence.size()) {
            fail(path, "arrivals/loads do not match the sequence length");
        }
        plan.routes.push_back(std::move(r));
    }
    const Json& unserved = as_array(require(doc, "unserved", "$"), "$.unserved");
    for (std::size_t k = 0; k < unserved.size(); ++k) {
        plan.unserved.push_back(as_string(unserved[k], "$.unserved[" + std::to_string(k) + "]"));
    }
    const Json& obj = require(doc, "objective", "$");
    plan.total_distance = as_number(require(obj, "total_distance", "$.objective"), "$.objective.total_distance");
    plan.total_duration = as_number(require(obj, "total_duration", "$.objective"), "$.objective.total_duration");
    out.report = report_from_json(require(doc, "report", "$"), "$.report");
    return out;
}

std::string save_report(const std::string& instance, const ValidationReport& report) {
    Json doc;
    doc["format"] = "pdp-report";
    doc["version"] = kPlanSchemaVersion;
    doc["instance"] = instance;
    doc["ok"] = report.ok;
    doc["violations"] = violations_json(report);
    return doc.dump(2) + "\n";
}

// Models ---------------------------------------------------------------------

namespace {

std::string_view sense_symbol(Sense s) {
    switch (s) {
        case Sense::le: return "<=";
        case Sense::ge: return ">=";
        case Sense::eq: return "==";
    }
    return "?";
}

Json terms_json(const QuadraticModel& m, const Expression& e) {
    Json lin = Json::array();
    for (const auto& t : e.linear) lin.push_back(Json::array({m.label(t.var), t.coef}));
    Json quad = Json::array();
    for (const auto& t : e.quadratic) quad.push_back(Json::array({m.label(t.u), m.label(t.v), t.coef}));
    return Json::array({std::move(lin), std::move(quad)});
}

}  // namespace

std::string model_to_json(const QuadraticModel& m) {
    Json doc;
    doc["format"] = "pdp-cqm";
    doc["version"] = kModelSchemaVersion;
    doc["meta"] = {{"orders", m.orders()}, {"serve_reward", m.serve_reward()}, {"big_m", m.big_m()}};
    Json vars = Json::array();
    for (std::size_t v = 0; v < m.num_variables(); ++v) vars.push_back(m.label(v));
    doc["variables"] = std::move(vars);

    Json obj_terms = terms_json(m, m.objective());
    doc["objective"] = {{"offset", m.objective().offset}, {"linear", obj_terms[0]}, {"quadratic", obj_terms[1]}};

    Json cons = Json::array();
    for (const auto& c : m.constraints()) {
        Json terms = terms_json(m, c.lhs);
        Json j;
        j["label"] = c.label;
        j["linear"] = terms[0];
        j["quadratic"] = terms[1];
        j["sense"] = sense_symbol(c.sense);
        j["rhs"] = c.rhs;
        cons.push_back(std::move(j));
    }
    doc["constraints"] = std::move(cons);
    return doc.dump() + "\n";
}

QuadraticModel model_from_json(std::string_view text) {
    const Json doc = parse_text(text, "model");
    check_header(doc, "pdp-cqm", kModelSchemaVersion);
    const Json& meta = require(doc, "meta", "$");
    const Json& orders = require(meta, "orders", "$.meta");
    if (!orders.is_number_unsigned()) fail("$.meta.orders", "expected a non-negative integer");
    QuadraticModel m(orders.get<std::size_t>(),
                     as_number(require(meta, "serve_reward", "$.meta"), "$.meta.serve_reward"),
                     as_number(require(meta, "big_m", "$.meta"), "$.meta.big_m"));

    const Json& vars = as_array(require(doc, "variables", "$"), "$.variables");
    if (vars.size() != m.num_variables()) fail("$.variables", "expected " + std::to_string(m.num_variables()) + " labels");
    std::unordered_map<std::string, std::size_t> index;
    for (std::size_t v = 0; v < vars.size(); ++v) {
        const std::string label = as_string(vars[v], "$.variables[" + std::to_string(v) + "]");
        if (label != m.label(v)) fail("$.variables[" + std::to_string(v) + "]", "expected " + m.label(v));
        index.emplace(label, v);
    }
    const auto var_of = [&](const Json& v, const std::string& path) {
        auto it = index.find(as_string(v, path));
        if (it == index.end()) fail(path, "undeclared variable");
        return it->second;
    };
    const auto read_expr = [&](const Json& holder, const std::string& path) {
        Expression e;
        const Json& lin = as_array(require(holder, "linear", path), path + ".linear");
        for (std::size_t k = 0; k < lin.size(); ++k) {
            const std::string tp = path + ".linear[" + std::to_string(k) + "]";
            if (!lin[k].is_array() || lin[k].size() != 2) fail(tp, "expected [label, coef]");
            e.linear.push_back({var_of(lin[k][0], tp + "[0]"), as_number(lin[k][1], tp + "[1]")});
        }
        const Json& quad = as_array(require(holder, "quadratic", path), path + ".quadratic");
        for (std::size_t k = 0; k < quad.size(); ++k) {
            const std::string tp = path + ".quadratic[" + std::to_string(k) + "]";
            if (!quad[k].is_array() || quad[k].size() != 3) fail(tp, "expected [label, label, coef]");
            e.quadratic.push_back({var_of(quad[k][0], tp + "[0]"), var_of(quad[k][1], tp + "[1]"),
                                   as_number(quad[k][2], tp + "[2]")});
        }
        return e;
    };

    const Json& obj = require(doc, "objective", "$");
    Expression objective = read_expr(obj, "$.objective");
    objective.offset = number_or(obj, "offset", 0.0, "$.objective");
    m.set_objective(std::move(objective));

    const Json& cons = as_array(require(doc, "constraints", "$"), "$.constraints");
    for (std::size_t k = 0; k < cons.size(); ++k) {
        const std::string path = "$.constraints[" + std::to_string(k) + "]";
        Constraint c;
        c.label = as_string(require(cons[k], "label", path), path + ".label");
        c.lhs = read_expr(cons[k], path);
        const std::string sense = as_string(require(cons[k], "sense", path), path + ".sense");
        if (sense == "<=") c.sense = Sense::le;
        else if (sense == ">=") c.sense = Sense::ge;
        else if (sense == "==") c.sense = Sense::eq;
        else fail(path + ".sense", "expected <=, >= or ==");
        c.rhs = as_number(require(cons[k], "rhs", path), path + ".rhs");
        m.add_constraint(std::move(c));
    }
    return m;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open '" + path + "' for reading");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, std::string_view content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw IoError("write to '" + path + "' failed");
}

}  // namespace pdp
