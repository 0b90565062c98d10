#include "nld/json_io.hpp"

#include "nld/errors.hpp"

#include <algorithm>

namespace nld {

using nlohmann::json;

json to_json(const SymmetricInequality& ineq) {
    json coeffs = json::array();
    const auto& idx = ineq.index();
    for (std::size_t i = 0; i < idx.size(); ++i) {
        if (ineq.coeffs()[i] == 0) continue;
        coeffs.push_back({{"multiset", idx.settings_list(i)}, {"c", to_string(ineq.coeffs()[i])}});
    }
    return {{"n", ineq.scenario().parties},
            {"m", ineq.scenario().settings},
            {"space", std::string(to_string(ineq.space()))},
            {"constant", to_string(ineq.constant())},
            {"coeffs", std::move(coeffs)},
            {"text", ineq.to_text()}};
}

json to_json(const InequalityRecord& record) {
    json j = to_json(record.inequality);
    json b = json::object();
    b["classical"] = record.bounds.classical ? json(to_string(*record.bounds.classical)) : json();
    b["nosignaling"] =
        record.bounds.nosignaling ? json(to_string(*record.bounds.nosignaling)) : json();
    b["quantum_lb"] = record.bounds.quantum_lb ? json(*record.bounds.quantum_lb) : json();
    j["bounds"] = std::move(b);
    if (!record.model.empty()) j["model"] = record.model;
    return j;
}

namespace {

Rational rational_field(const json& v) {
    if (v.is_string()) return parse_rational(v.get<std::string>());
    if (v.is_number_integer()) return Rational(v.get<long long>());
    throw ParseError("expected a rational (string or integer), got " + v.dump());
}

}  // namespace

SymmetricInequality inequality_from_json(const json& j) {
    try {
        const Scenario s(j.at("n").get<int>(), j.at("m").get<int>());
        bool marginals = false;
        if (j.contains("space")) marginals = parse_space(j["space"].get<std::string>()) == Space::WithMarginals;
        for (const auto& term : j.at("coeffs")) {
            const auto ms = term.at("multiset").get<std::vector<int>>();
            marginals = marginals || std::find(ms.begin(), ms.end(), 0) != ms.end();
        }
        const Space space = marginals ? Space::WithMarginals : Space::FullCorrelation;
        MultisetIndex index(s, space);
        std::vector<Rational> coeffs(index.size());
        for (const auto& term : j.at("coeffs")) {
            const auto ms = term.at("multiset").get<std::vector<int>>();
            if (static_cast<int>(ms.size()) != s.parties)
                throw ParseError("multiset size does not match party count");
            for (int x : ms)
                if (x < 0 || x > s.settings) throw ParseError("setting out of range in multiset");
            coeffs[index.class_of_tuple(ms)] += rational_field(term.at("c"));
        }
        return SymmetricInequality(s, space, rational_field(j.at("constant")), std::move(coeffs));
    } catch (const json::exception& e) {
        throw ParseError(std::string("malformed inequality JSON: ") + e.what());
    }
}

InequalityRecord record_from_json(const json& j) {
    InequalityRecord r{inequality_from_json(j), {}, j.value("model", std::string())};
    if (j.contains("bounds")) {
        const auto& b = j["bounds"];
        if (b.contains("classical") && !b["classical"].is_null())
            r.bounds.classical = rational_field(b["classical"]);
        if (b.contains("nosignaling") && !b["nosignaling"].is_null())
            r.bounds.nosignaling = rational_field(b["nosignaling"]);
        if (b.contains("quantum_lb") && !b["quantum_lb"].is_null())
            r.bounds.quantum_lb = b["quantum_lb"].get<double>();
    }
    return r;
}

}  // namespace nld
