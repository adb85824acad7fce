#pragma once

#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>
#include <string_view>

#include "json.hpp"

#include "csdnet/errors.hpp"
#include "csdnet/model.hpp"

// Model file: a JSON document
//
//   {
//     "nodes":   [ {"id": 1, "xyz": [x, y(, z)], "fixed": false}, ... ],
//     "members": [ {"id": 1, "a": 1, "b": 3, "E": 2e11, "A": 3.14e-6,
//                   "density": 7850, "tension": 626.15}, ... ],
//     "loads":   [ {"node": 1, "force": [fx, fy(, fz)]}, ... ]      (optional)
//   }
//
// Every listed field is required and no other field is accepted.

namespace csdnet {

namespace detail {

using Json = nlohmann::json;

inline void require_fields(const Json& obj, std::string_view where,
                           std::initializer_list<std::string_view> required,
                           std::initializer_list<std::string_view> optional = {}) {
    if (!obj.is_object()) throw ParseError(std::string(where) + ": expected an object");
    for (auto key : required)
        if (!obj.contains(std::string(key)))
            throw ParseError(std::string(where) + ": missing field \"" + std::string(key) + "\"");
    for (const auto& [key, value] : obj.items()) {
        bool known = false;
        for (auto k : required) known = known || key == k;
        for (auto k : optional) known = known || key == k;
        if (!known) throw ParseError(std::string(where) + ": unknown field \"" + key + "\"");
    }
}

inline double number(const Json& v, const std::string& where) {
    if (!v.is_number()) throw ParseError(where + ": expected a number");
    return v.get<double>();
}

inline int integer(const Json& v, const std::string& where) {
    if (!v.is_number_integer()) throw ParseError(where + ": expected an integer");
    return v.get<int>();
}

inline Eigen::VectorXd vector(const Json& v, const std::string& where) {
    if (!v.is_array()) throw ParseError(where + ": expected an array of numbers");
    Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
    for (std::size_t i = 0; i < v.size(); ++i)
        out[static_cast<Eigen::Index>(i)] = number(v[i], where);
    return out;
}

inline Json to_array(const Eigen::VectorXd& v) {
    Json a = Json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
    return a;
}

}  // namespace detail

inline CableNetModel parse_model(std::string_view text) {
    using detail::Json;
    Json doc;
    try {
        doc = Json::parse(text);
    } catch (const Json::parse_error& e) {
        throw ParseError(std::string("model file: ") + e.what());
    }
    detail::require_fields(doc, "model", {"nodes", "members"}, {"loads"});
    if (!doc["nodes"].is_array()) throw ParseError("nodes: expected an array");
    if (!doc["members"].is_array()) throw ParseError("members: expected an array");

    std::vector<NodeSpec> nodes;
    for (std::size_t i = 0; i < doc["nodes"].size(); ++i) {
        const Json& n = doc["nodes"][i];
        const std::string where = "nodes[" + std::to_string(i) + "]";
        detail::require_fields(n, where, {"id", "xyz", "fixed"});
        if (!n["fixed"].is_boolean()) throw ParseError(where + ".fixed: expected a boolean");
        nodes.push_back({detail::integer(n["id"], where + ".id"),
                         detail::vector(n["xyz"], where + ".xyz"), n["fixed"].get<bool>()});
    }

    std::vector<MemberSpec> members;
    for (std::size_t i = 0; i < doc["members"].size(); ++i) {
        const Json& m = doc["members"][i];
        const std::string where = "members[" + std::to_string(i) + "]";
        detail::require_fields(m, where, {"id", "a", "b", "E", "A", "density", "tension"});
        MemberSpec spec;
        spec.id = detail::integer(m["id"], where + ".id");
        spec.node_a = detail::integer(m["a"], where + ".a");
        spec.node_b = detail::integer(m["b"], where + ".b");
        spec.youngs_modulus = detail::number(m["E"], where + ".E");
        spec.area = detail::number(m["A"], where + ".A");
        spec.density = detail::number(m["density"], where + ".density");
        spec.tension = detail::number(m["tension"], where + ".tension");
        members.push_back(spec);
    }

    std::vector<NodalLoad> loads;
    if (doc.contains("loads")) {
        if (!doc["loads"].is_array()) throw ParseError("loads: expected an array");
        for (std::size_t i = 0; i < doc["loads"].size(); ++i) {
            const Json& l = doc["loads"][i];
            const std::string where = "loads[" + std::to_string(i) + "]";
            detail::require_fields(l, where, {"node", "force"});
            loads.push_back({detail::integer(l["node"], where + ".node"),
                             detail::vector(l["force"], where + ".force")});
        }
    }
    return CableNetModel(std::move(nodes), std::move(members), std::move(loads));
}

inline CableNetModel load_model(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open model file " + path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_model(buffer.str());
}

inline std::string serialize_model(const CableNetModel& model) {
    using detail::Json;
    Json doc;
    doc["nodes"] = Json::array();
    for (const auto& n : model.nodes())
        doc["nodes"].push_back({{"id", n.id}, {"xyz", detail::to_array(n.position)}, {"fixed", n.fixed}});
    doc["members"] = Json::array();
    for (const auto& m : model.members())
        doc["members"].push_back({{"id", m.id},
                                  {"a", m.node_a},
                                  {"b", m.node_b},
                                  {"E", m.youngs_modulus},
                                  {"A", m.area},
                                  {"density", m.density},
                                  {"tension", m.tension}});
    if (!model.loads().empty()) {
        doc["loads"] = Json::array();
        for (const auto& l : model.loads())
            doc["loads"].push_back({{"node", l.node}, {"force", detail::to_array(l.force)}});
    }
    return doc.dump(2) + "\n";
}

inline void save_model(const CableNetModel& model, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ValidationError("cannot write " + path);
    out << serialize_model(model);
}

}  // namespace csdnet
