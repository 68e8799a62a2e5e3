#pragma once

// JSON model files, schema "frog-model/1".
//
//   {
//     "schema": "frog-model/1",
//     "drift":    <family>,
//     "lifetime": <family>,
//     "occupied": {"kind": "all"}
//               | {"kind": "periodic", "period": 5, "residues": [0, 1, 3]}
//               | {"kind": "explicit", "sites": [0, 1, 4]}
//               | {"kind": "geometric", "base": 2},
//     "allow_critical_drift": false
//   }
//
//   <family> = {"kind": "constant", "value": v}
//            | {"kind": "power_below" | "power_above" | "power_lifetime",
//               "exponent": a, "scale": s, "head": [v0, ...]}
//            | {"kind": "staircase_above", "cell_exponent": 3, "exponent": 2, "scale": 1,
//               "log_decay": false, "head": [v0]}
//            | {"kind": "log_critical", "scale": c, "loglog": d, "head": [v0, v1, v2]}
//            | {"kind": "table", "values": [...], "tail": <family> | null}
//            | {"kind": "piecewise", "pieces": [{"begin": 0, "end": 10 | null, "family": <family>}, ...]}

#include "frog/errors.hpp"
#include "frog/model.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>
#include <string>

namespace frog {

inline constexpr const char* kModelSchema = "frog-model/1";

namespace detail {

inline const char* family_name(FamilyKind k) {
    switch (k) {
    case FamilyKind::Constant: return "constant";
    case FamilyKind::PowerLawBelow: return "power_below";
    case FamilyKind::PowerLawAbove: return "power_above";
    case FamilyKind::PowerLawLifetime: return "power_lifetime";
    case FamilyKind::Table: return "table";
    case FamilyKind::Piecewise: return "piecewise";
    case FamilyKind::StaircaseAbove: return "staircase_above";
    case FamilyKind::LogCritical: return "log_critical";
    }
    return "?";
}

inline FamilyKind family_kind(const std::string& name, const std::string& path) {
    for (auto k : {FamilyKind::Constant, FamilyKind::PowerLawBelow, FamilyKind::PowerLawAbove,
                   FamilyKind::PowerLawLifetime, FamilyKind::Table, FamilyKind::Piecewise,
                   FamilyKind::StaircaseAbove, FamilyKind::LogCritical})
        if (name == family_name(k)) return k;
    throw ParseError(path + ".kind", "unknown family kind '" + name + "'");
}

template <class T>
T field(const nlohmann::json& j, const char* key, const std::string& path) {
    if (!j.is_object() || !j.contains(key)) throw ParseError(path + "." + key, "missing field");
    try {
        return j.at(key).get<T>();
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(path + "." + key, e.what());
    }
}

// Literal sequence values must be probabilities; only the tail formulas are clipped.
inline double probability(const nlohmann::json& j, const char* key, const std::string& path) {
    const double v = field<double>(j, key, path);
    if (!(v >= 0.0 && v <= 1.0)) throw ParseError(path + "." + key, "value must lie in [0, 1]");
    return v;
}

inline std::vector<double> probabilities(const nlohmann::json& j, const char* key, const std::string& path) {
    auto v = field<std::vector<double>>(j, key, path);
    for (std::size_t i = 0; i < v.size(); ++i)
        if (!(v[i] >= 0.0 && v[i] <= 1.0))
            throw ParseError(path + "." + key + "[" + std::to_string(i) + "]", "value must lie in [0, 1]");
    return v;
}

template <class T>
T field_or(const nlohmann::json& j, const char* key, T fallback, const std::string& path) {
    if (!j.contains(key) || j.at(key).is_null()) return fallback;
    return field<T>(j, key, path);
}

} // namespace detail

inline nlohmann::json to_json(const SequenceFamily& f) {
    using nlohmann::json;
    json j;
    j["kind"] = detail::family_name(f.kind);
    switch (f.kind) {
    case FamilyKind::Constant:
        j["value"] = f.value;
        break;
    case FamilyKind::PowerLawBelow:
    case FamilyKind::PowerLawAbove:
    case FamilyKind::PowerLawLifetime:
        j["exponent"] = f.exponent;
        j["scale"] = f.scale;
        j["head"] = f.head;
        break;
    case FamilyKind::StaircaseAbove:
        j["cell_exponent"] = f.cell_exponent;
        j["exponent"] = f.exponent;
        j["scale"] = f.scale;
        j["log_decay"] = f.log_decay;
        j["head"] = f.head;
        break;
    case FamilyKind::LogCritical:
        j["scale"] = f.scale;
        j["loglog"] = f.loglog;
        j["head"] = f.head;
        break;
    case FamilyKind::Table:
        j["values"] = f.head;
        j["tail"] = f.tail ? to_json(*f.tail) : json(nullptr);
        break;
    case FamilyKind::Piecewise: {
        json parts = json::array();
        for (const auto& p : f.pieces) {
            json jp;
            jp["begin"] = p.begin;
            jp["end"] = p.end ? json(*p.end) : json(nullptr);
            jp["family"] = to_json(*p.family);
            parts.push_back(std::move(jp));
        }
        j["pieces"] = std::move(parts);
        break;
    }
    }
    return j;
}

inline SequenceFamily family_from_json(const nlohmann::json& j, const std::string& path) {
    using detail::field;
    using detail::field_or;
    if (!j.is_object()) throw ParseError(path, "expected an object");
    const auto kind = detail::family_kind(field<std::string>(j, "kind", path), path);
    switch (kind) {
    case FamilyKind::Constant:
        return SequenceFamily::constant(detail::probability(j, "value", path));
    case FamilyKind::PowerLawBelow:
    case FamilyKind::PowerLawAbove:
    case FamilyKind::PowerLawLifetime: {
        const auto a = field<double>(j, "exponent", path);
        const auto s = field_or<double>(j, "scale", 1.0, path);
        auto head = detail::probabilities(j, "head", path);
        if (head.empty()) throw ParseError(path + ".head", "power-law families need an explicit index-0 value");
        if (!(a > 0.0)) throw ParseError(path + ".exponent", "must be positive");
        if (kind == FamilyKind::PowerLawBelow) return SequenceFamily::power_below(a, s, std::move(head));
        if (kind == FamilyKind::PowerLawAbove) return SequenceFamily::power_above(a, s, std::move(head));
        return SequenceFamily::power_lifetime(a, s, std::move(head));
    }
    case FamilyKind::StaircaseAbove: {
        auto head = detail::probabilities(j, "head", path);
        if (head.empty()) throw ParseError(path + ".head", "staircase family needs an explicit index-0 value");
        return SequenceFamily::staircase_above(field_or<double>(j, "cell_exponent", 3.0, path),
                                               field<double>(j, "exponent", path),
                                               field_or<double>(j, "scale", 1.0, path),
                                               field_or<bool>(j, "log_decay", false, path), std::move(head));
    }
    case FamilyKind::LogCritical: {
        auto head = detail::probabilities(j, "head", path);
        if (head.size() < 3) throw ParseError(path + ".head", "log-critical family needs values for indices 0, 1, 2");
        return SequenceFamily::log_critical(field<double>(j, "scale", path), field_or<double>(j, "loglog", 0.0, path),
                                            std::move(head));
    }
    case FamilyKind::Table: {
        auto values = detail::probabilities(j, "values", path);
        std::optional<SequenceFamily> tail;
        if (j.contains("tail") && !j.at("tail").is_null()) tail = family_from_json(j.at("tail"), path + ".tail");
        return SequenceFamily::table(std::move(values), std::move(tail));
    }
    case FamilyKind::Piecewise: {
        if (!j.contains("pieces") || !j.at("pieces").is_array() || j.at("pieces").empty())
            throw ParseError(path + ".pieces", "expected a nonempty array");
        std::vector<Piece> parts;
        Site expected = 0;
        const auto& arr = j.at("pieces");
        for (std::size_t i = 0; i < arr.size(); ++i) {
            const std::string p = path + ".pieces[" + std::to_string(i) + "]";
            Piece piece;
            piece.begin = field<Site>(arr[i], "begin", p);
            if (piece.begin != expected) throw ParseError(p + ".begin", "pieces must be contiguous from 0");
            if (arr[i].contains("end") && !arr[i].at("end").is_null()) {
                piece.end = field<Site>(arr[i], "end", p);
                if (*piece.end <= piece.begin) throw ParseError(p + ".end", "empty range");
                expected = *piece.end;
            } else if (i + 1 != arr.size()) {
                throw ParseError(p + ".end", "only the last piece may be unbounded");
            }
            if (!arr[i].contains("family")) throw ParseError(p + ".family", "missing field");
            piece.family = std::make_shared<const SequenceFamily>(family_from_json(arr[i].at("family"), p + ".family"));
            parts.push_back(std::move(piece));
        }
        if (parts.back().end) throw ParseError(path + ".pieces", "last piece must be unbounded");
        return SequenceFamily::piecewise(std::move(parts));
    }
    }
    throw ParseError(path, "unhandled family");
}

inline nlohmann::json to_json(const OccupiedSet& s) {
    nlohmann::json j;
    switch (s.kind()) {
    case OccupiedKind::All:
        j["kind"] = "all";
        break;
    case OccupiedKind::Periodic:
        j["kind"] = "periodic";
        j["period"] = s.period();
        j["residues"] = s.listed();
        break;
    case OccupiedKind::Explicit:
        j["kind"] = "explicit";
        j["sites"] = s.listed();
        break;
    case OccupiedKind::Geometric:
        j["kind"] = "geometric";
        j["base"] = s.period();
        break;
    }
    return j;
}

inline OccupiedSet occupied_from_json(const nlohmann::json& j, const std::string& path) {
    using detail::field;
    const auto kind = field<std::string>(j, "kind", path);
    try {
        if (kind == "all") return OccupiedSet::all();
        if (kind == "periodic")
            return OccupiedSet::periodic(field<Site>(j, "period", path), field<std::vector<Site>>(j, "residues", path));
        if (kind == "explicit") return OccupiedSet::explicit_sites(field<std::vector<Site>>(j, "sites", path));
        if (kind == "geometric") return OccupiedSet::geometric(field<Site>(j, "base", path));
    } catch (const ParseError&) {
        throw;
    } catch (const std::exception& e) {
        throw ParseError(path, e.what());
    }
    throw ParseError(path + ".kind", "unknown occupied kind '" + kind + "'");
}

inline nlohmann::json to_json(const ModelSpec& spec) {
    nlohmann::json j;
    j["schema"] = kModelSchema;
    j["drift"] = to_json(spec.drift);
    j["lifetime"] = to_json(spec.lifetime);
    j["occupied"] = to_json(spec.occupied);
    j["allow_critical_drift"] = spec.allow_critical_drift;
    return j;
}

inline ModelSpec model_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw ParseError("", "model file must be a JSON object");
    const auto schema = detail::field_or<std::string>(j, "schema", kModelSchema, "");
    if (schema != kModelSchema) throw ParseError("schema", "unsupported schema '" + schema + "'");
    ModelSpec spec;
    if (!j.contains("drift")) throw ParseError("drift", "missing field");
    spec.drift = family_from_json(j.at("drift"), "drift");
    spec.lifetime = j.contains("lifetime") ? family_from_json(j.at("lifetime"), "lifetime") : SequenceFamily::constant(1.0);
    spec.occupied = j.contains("occupied") ? occupied_from_json(j.at("occupied"), "occupied") : OccupiedSet::all();
    spec.allow_critical_drift = detail::field_or<bool>(j, "allow_critical_drift", false, "");
    return spec;
}

inline ModelSpec parse_model(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError("", std::string("malformed JSON: ") + e.what());
    }
    return model_from_json(j);
}

inline std::string serialize_model(const ModelSpec& spec) { return to_json(spec).dump(2) + "\n"; }

inline ModelSpec load_model(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("", "cannot open model file " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_model(buf.str());
}

} // namespace frog
