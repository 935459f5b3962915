#pragma once

#include <fstream>
#include <string>

#include <json.hpp>

#include "pathcond/algebra.hpp"
#include "pathcond/decider.hpp"
#include "pathcond/errors.hpp"
#include "pathcond/oracle.hpp"
#include "pathcond/testing.hpp"

namespace pathcond {

using Json = nlohmann::ordered_json;

/// Algebra file schema:
///   {"size": int, "name": optional string,
///    "operations": [{"name": str, "arity": int, "table": [int,...]}]}
/// Tables are flattened lexicographically, first argument most significant.
inline Algebra algebra_from_json(const Json& j) {
    if (!j.is_object() || !j.contains("size") || !j.contains("operations"))
        fail(ErrorKind::MalformedTable, "algebra JSON needs 'size' and 'operations'");
    if (!j["size"].is_number_integer())
        fail(ErrorKind::MalformedTable, "'size' must be an integer");
    int size = j["size"].get<int>();
    std::string name = j.value("name", std::string{});
    if (!j["operations"].is_array())
        fail(ErrorKind::MalformedTable, "'operations' must be an array");
    std::vector<OperationTable> ops;
    for (const auto& jop : j["operations"]) {
        if (!jop.is_object() || !jop.contains("name") || !jop.contains("arity") ||
            !jop.contains("table"))
            fail(ErrorKind::MalformedTable, "each operation needs 'name', 'arity' and 'table'");
        OperationTable op;
        op.name = jop["name"].get<std::string>();
        op.arity = jop["arity"].get<int>();
        for (const auto& e : jop["table"]) {
            if (!e.is_number_integer())
                fail(ErrorKind::MalformedTable, "table entries must be integers");
            op.table.push_back(e.get<Element>());
        }
        ops.push_back(std::move(op));
    }
    return Algebra::validate(size, std::move(ops), std::move(name));
}

inline Json algebra_to_json(const Algebra& a) {
    Json j;
    j["size"] = a.size();
    if (!a.name().empty()) j["name"] = a.name();
    j["operations"] = Json::array();
    for (const auto& op : a.operations())
        j["operations"].push_back({{"name", op.name}, {"arity", op.arity}, {"table", op.table}});
    return j;
}

inline Algebra load_algebra(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(ErrorKind::MalformedTable, "cannot open algebra file '" + path + "'");
    Json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        fail(ErrorKind::MalformedTable, "bad JSON in '" + path + "': " + e.what());
    }
    return algebra_from_json(j);
}

inline Json instance_to_json(const TestingInstance& inst) {
    Json j;
    j["path"] = inst.path.to_dsl();
    j["m"] = inst.m;
    j["p"] = inst.p;
    j["a"] = inst.a;
    j["b"] = inst.b;
    auto labels = [&](const std::vector<std::vector<Element>>& v) {
        Json arr = Json::array();
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (inst.path.edges[i].style == EdgeStyle::Solid)
                arr.push_back(v[i]);
            else
                arr.push_back(nullptr);
        }
        return arr;
    };
    j["c"] = labels(inst.c);
    j["d"] = labels(inst.d);
    return j;
}

inline TestingInstance instance_from_json(const Json& j) {
    TestingInstance inst;
    inst.path = parse_path(j.at("path").get<std::string>());
    inst.m = j.at("m").get<std::vector<int>>();
    inst.p = j.at("p").get<std::vector<int>>();
    inst.a = j.at("a").get<std::vector<std::vector<Element>>>();
    inst.b = j.at("b").get<std::vector<std::vector<Element>>>();
    auto labels = [&](const Json& arr) {
        std::vector<std::vector<Element>> out;
        for (const auto& e : arr)
            out.push_back(e.is_null() ? std::vector<Element>{} : e.get<std::vector<Element>>());
        return out;
    };
    inst.c = labels(j.at("c"));
    inst.d = labels(j.at("d"));
    inst.check_well_formed();
    return inst;
}

/// {"condition", "verdict", "counterexample", "stats"}; canonical reports
/// omit timing and scheduling-dependent counters so that the bytes do not
/// depend on the worker count.
inline Json report_to_json(const DecisionReport& r) {
    Json j;
    j["condition"] = r.condition;
    j["verdict"] = to_string(r.verdict);
    j["counterexample"] = r.counterexample ? instance_to_json(*r.counterexample) : Json(nullptr);
    Json stats;
    stats["instances_checked"] = r.stats.instances_checked;
    stats["theoretical_instances"] = r.stats.theoretical_instances;
    if (!r.canonical) {
        stats["closures_computed"] = r.stats.closures_computed;
        stats["cache_hits"] = r.stats.cache_hits;
        stats["wall_ms"] = r.stats.wall_ms;
        stats["workers"] = r.stats.workers;
    }
    j["stats"] = stats;
    return j;
}

/// {"s": [...], "t": [...]}; s-terms are binary over x,y with the endpoints
/// literally "x" and "y", t-terms ternary over x,y,z.
inline Json witness_to_json(const WitnessTerms& w) {
    Json j;
    j["s"] = Json::array();
    for (const auto& t : w.s) j["s"].push_back(t.to_string());
    j["t"] = Json::array();
    for (const auto& t : w.t) j["t"].push_back(t.to_string());
    return j;
}

} // namespace pathcond
