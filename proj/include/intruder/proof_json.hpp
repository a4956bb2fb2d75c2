#pragma once

// JSON proof format:
//   node = {"system": "N"|"S"|"L", "rule": str, "gamma": [term], "goal": term,
//           "aux": {"principal"?: term, "symbol"?: str, "side"?: node,
//                   "witness"?: {"theory": str, "backend": str,
//                                "parts": [{"term": term, "coeff": int}]}},
//           "premises": [node]}

#include <json.hpp>
#include <memory>
#include <string>

#include "derivation.hpp"
#include "syntax.hpp"

namespace intruder {

class ProofFormatError : public Error {
public:
    using Error::Error;
};

inline nlohmann::json to_json(const Derivation& d) {
    nlohmann::json j;
    j["system"] = system_name(d.system);
    j["rule"] = d.rule;
    j["gamma"] = nlohmann::json::array();
    for (Term t : d.gamma) j["gamma"].push_back(to_string(t));
    j["goal"] = to_string(d.goal);
    nlohmann::json aux = nlohmann::json::object();
    if (d.aux.principal) aux["principal"] = to_string(*d.aux.principal);
    if (!d.aux.symbol.empty()) aux["symbol"] = d.aux.symbol;
    if (d.aux.witness) {
        nlohmann::json w;
        w["theory"] = d.aux.witness->theory;
        w["backend"] = backend_name(d.aux.witness->backend);
        w["parts"] = nlohmann::json::array();
        for (const auto& [t, c] : d.aux.witness->parts) w["parts"].push_back({{"term", to_string(t)}, {"coeff", c}});
        aux["witness"] = w;
    }
    if (d.aux.side) aux["side"] = to_json(*d.aux.side);
    j["aux"] = aux;
    j["premises"] = nlohmann::json::array();
    for (const Derivation& p : d.premises) j["premises"].push_back(to_json(p));
    return j;
}

namespace json_detail {

inline const nlohmann::json& field(const nlohmann::json& j, const char* name, const std::string& where) {
    if (!j.is_object() || !j.contains(name)) throw ProofFormatError(where + ": missing field '" + name + "'");
    return j.at(name);
}

inline std::string str(const nlohmann::json& j, const char* name, const std::string& where) {
    const nlohmann::json& v = field(j, name, where);
    if (!v.is_string()) throw ProofFormatError(where + ": field '" + name + "' must be a string");
    return v.get<std::string>();
}

inline Term term(const std::string& text, const std::string& where) {
    try {
        return parse_term(text);
    } catch (const Error& e) {
        throw ProofFormatError(where + ": bad term '" + text + "': " + e.what());
    }
}

inline Backend backend(const std::string& s, const std::string& where) {
    for (Backend b : {Backend::Empty, Backend::AC, Backend::XOR, Backend::AG, Backend::None})
        if (s == backend_name(b)) return b;
    throw ProofFormatError(where + ": unknown backend '" + s + "'");
}

inline Derivation from_json(const nlohmann::json& j, const std::string& where) {
    if (!j.is_object()) throw ProofFormatError(where + ": proof node must be an object");
    Derivation d;
    std::string sys = str(j, "system", where);
    if (sys == "N")
        d.system = System::N;
    else if (sys == "S")
        d.system = System::S;
    else if (sys == "L")
        d.system = System::L;
    else
        throw ProofFormatError(where + ": unknown system '" + sys + "'");
    d.rule = str(j, "rule", where);
    const nlohmann::json& g = field(j, "gamma", where);
    if (!g.is_array()) throw ProofFormatError(where + ": 'gamma' must be an array");
    for (const nlohmann::json& t : g) {
        if (!t.is_string()) throw ProofFormatError(where + ": 'gamma' entries must be strings");
        d.gamma.insert(term(t.get<std::string>(), where));
    }
    d.goal = term(str(j, "goal", where), where);
    if (j.contains("aux")) {
        const nlohmann::json& aux = j.at("aux");
        if (!aux.is_object()) throw ProofFormatError(where + ": 'aux' must be an object");
        if (aux.contains("principal")) d.aux.principal = term(str(aux, "principal", where), where);
        if (aux.contains("symbol")) d.aux.symbol = str(aux, "symbol", where);
        if (aux.contains("witness")) {
            const nlohmann::json& w = aux.at("witness");
            ElemWitness ew;
            ew.theory = str(w, "theory", where);
            ew.backend = backend(str(w, "backend", where), where);
            const nlohmann::json& parts = field(w, "parts", where);
            if (!parts.is_array()) throw ProofFormatError(where + ": witness 'parts' must be an array");
            for (const nlohmann::json& p : parts) {
                const nlohmann::json& c = field(p, "coeff", where);
                if (!c.is_number_integer()) throw ProofFormatError(where + ": witness coefficient must be an integer");
                ew.parts.emplace_back(term(str(p, "term", where), where), c.get<std::int64_t>());
            }
            d.aux.witness = std::move(ew);
        }
        if (aux.contains("side")) d.aux.side = std::make_shared<Derivation>(from_json(aux.at("side"), where + ".s"));
    }
    const nlohmann::json& ps = field(j, "premises", where);
    if (!ps.is_array()) throw ProofFormatError(where + ": 'premises' must be an array");
    for (std::size_t i = 0; i < ps.size(); ++i)
        d.premises.push_back(from_json(ps[i], where + "." + std::to_string(i)));
    return d;
}

}  // namespace json_detail

inline Derivation from_json(const nlohmann::json& j) { return json_detail::from_json(j, "root"); }

inline Derivation parse_proof(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ProofFormatError(std::string("invalid JSON: ") + e.what());
    }
    return from_json(j);
}

}  // namespace intruder
