#pragma once

// Model files: strict JSON, UTF-8.
//
// {"name": "...",
//  "cycles": [{"id": "F", "weights": [[reNum, reDen, imNum, imDen], ...]}],
//  "rays":   [{"id": "r", "kind": "forward" | "two_sided",
//              "multiplicity": 3 | "omega",
//              "omega": {"cycle": "F", "phase": 0},
//              "alpha": {"cycle": "G", "phase": 0},          (two_sided only)
//              "exceptional": [[index, reNum, reDen, imNum, imDen], ...]}]}
//
// Integers may be JSON numbers or decimal strings (for values beyond 64 bits).
// Unknown keys are errors.

#include "ckspec/model.hpp"

#include <nlohmann/json.hpp>

#include <fstream>
#include <initializer_list>
#include <sstream>

namespace ckspec {

class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t line, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
    [[nodiscard]] std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

namespace detail {

using nlohmann::json;

struct SchemaError : std::runtime_error {
    SchemaError(std::string needle, const std::string& what) : std::runtime_error(what), needle(std::move(needle)) {}
    std::string needle;  // text to locate in the source for the line number
};

inline std::size_t line_of_offset(std::string_view text, std::size_t offset) {
    offset = std::min(offset, text.size());
    return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(offset), '\n'));
}

inline void expect_keys(const json& obj, std::initializer_list<const char*> allowed, const std::string& where) {
    if (!obj.is_object()) throw SchemaError("", where + " must be an object");
    for (const auto& [key, value] : obj.items()) {
        (void)value;
        const bool ok = std::any_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; });
        if (!ok) throw SchemaError("\"" + key + "\"", "unknown key \"" + key + "\" in " + where);
    }
}

inline const json& require(const json& obj, const char* key, const std::string& where) {
    auto it = obj.find(key);
    if (it == obj.end()) throw SchemaError("", where + " is missing \"" + key + "\"");
    return *it;
}

inline BigInt to_bigint(const json& v, const std::string& where) {
    if (v.is_number_integer()) return v.is_number_unsigned() ? BigInt(v.get<std::uint64_t>()) : BigInt(v.get<std::int64_t>());
    if (v.is_string()) {
        try {
            Rational q = parse_rational(v.get<std::string>());
            if (denom(q) != 1) throw std::invalid_argument("not an integer");
            return numer(q);
        } catch (const std::invalid_argument&) {
        }
    }
    throw SchemaError(v.is_string() ? "\"" + v.get<std::string>() + "\"" : "", where + ": expected an integer, got " + v.dump());
}

inline RationalComplex weight_from(const json& arr, std::size_t offset, const std::string& where) {
    const BigInt rn = to_bigint(arr[offset], where), rd = to_bigint(arr[offset + 1], where);
    const BigInt in = to_bigint(arr[offset + 2], where), id = to_bigint(arr[offset + 3], where);
    if (rd == 0 || id == 0) throw SchemaError("", where + ": zero denominator");
    return {Rational(rn, rd), Rational(in, id)};
}

inline Anchor anchor_from(const json& j, const std::string& where) {
    expect_keys(j, {"cycle", "phase"}, where);
    const json& c = require(j, "cycle", where);
    if (!c.is_string()) throw SchemaError("", where + ".cycle must be a string");
    const BigInt ph = to_bigint(require(j, "phase", where), where + ".phase");
    if (ph < 0) throw SchemaError("", where + ".phase must be nonnegative");
    return {c.get<std::string>(), ph.convert_to<std::uint64_t>()};
}

inline OrbitModel model_from(const json& j) {
    expect_keys(j, {"name", "cycles", "rays"}, "model");
    OrbitModel m;
    const json& name = require(j, "name", "model");
    if (!name.is_string()) throw SchemaError("\"name\"", "name must be a string");
    m.name = name.get<std::string>();

    const json& cycles = require(j, "cycles", "model");
    if (!cycles.is_array()) throw SchemaError("\"cycles\"", "cycles must be an array");
    for (const auto& cj : cycles) {
        expect_keys(cj, {"id", "weights"}, "cycle");
        Cycle c;
        const json& id = require(cj, "id", "cycle");
        if (!id.is_string()) throw SchemaError("", "cycle id must be a string");
        c.id = id.get<std::string>();
        const std::string where = "cycle '" + c.id + "'";
        const json& ws = require(cj, "weights", where);
        if (!ws.is_array()) throw SchemaError("\"" + c.id + "\"", where + ": weights must be an array");
        for (const auto& w : ws) {
            if (!w.is_array() || w.size() != 4) throw SchemaError("\"" + c.id + "\"", where + ": a weight is [reNum, reDen, imNum, imDen]");
            try {
                c.weights.push_back(weight_from(w, 0, where));
            } catch (SchemaError& e) {
                if (e.needle.empty()) e.needle = "\"" + c.id + "\"";
                throw;
            }
        }
        m.cycles.push_back(std::move(c));
    }

    const json& rays = require(j, "rays", "model");
    if (!rays.is_array()) throw SchemaError("\"rays\"", "rays must be an array");
    for (const auto& rj : rays) {
        expect_keys(rj, {"id", "kind", "multiplicity", "omega", "alpha", "exceptional"}, "ray");
        Ray r;
        const json& id = require(rj, "id", "ray");
        if (!id.is_string()) throw SchemaError("", "ray id must be a string");
        r.id = id.get<std::string>();
        const std::string where = "ray '" + r.id + "'";
        const std::string needle = "\"" + r.id + "\"";
        try {
            const json& kind = require(rj, "kind", where);
            if (kind == "forward") r.kind = RayKind::forward;
            else if (kind == "two_sided") r.kind = RayKind::two_sided;
            else throw SchemaError("", where + ": kind must be \"forward\" or \"two_sided\"");
            if (auto it = rj.find("multiplicity"); it != rj.end()) {
                if (*it == "omega") r.multiplicity = Multiplicity::bundle();
                else {
                    const BigInt n = to_bigint(*it, where + ".multiplicity");
                    if (n < 1) throw SchemaError("", where + ": multiplicity must be positive or \"omega\"");
                    r.multiplicity = {n.convert_to<std::uint64_t>(), false};
                }
            }
            r.omega = anchor_from(require(rj, "omega", where), where + ".omega");
            if (auto it = rj.find("alpha"); it != rj.end()) r.alpha = anchor_from(*it, where + ".alpha");
            if (auto it = rj.find("exceptional"); it != rj.end()) {
                if (!it->is_array()) throw SchemaError("", where + ": exceptional must be an array");
                for (const auto& e : *it) {
                    if (!e.is_array() || e.size() != 5)
                        throw SchemaError("", where + ": an override is [index, reNum, reDen, imNum, imDen]");
                    const BigInt idx = to_bigint(e[0], where + ".exceptional");
                    r.exceptional.push_back({idx.convert_to<std::int64_t>(), weight_from(e, 1, where)});
                }
            }
        } catch (SchemaError& e) {
            if (e.needle.empty()) e.needle = needle;
            throw;
        }
        m.rays.push_back(std::move(r));
    }
    return m;
}

inline json int_to_json(const BigInt& v) {
    if (v >= std::numeric_limits<std::int64_t>::min() && v <= std::numeric_limits<std::int64_t>::max())
        return v.convert_to<std::int64_t>();
    return v.str();
}

inline json weight_to_json(const RationalComplex& w) {
    return json::array({int_to_json(numer(w.re)), int_to_json(denom(w.re)), int_to_json(numer(w.im)), int_to_json(denom(w.im))});
}

inline json anchor_to_json(const Anchor& a) { return {{"cycle", a.cycle}, {"phase", a.phase}}; }

}  // namespace detail

// Parses model JSON text without validating it. Throws ParseError.
inline OrbitModel parse_model_text(std::string_view text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text.begin(), text.end());
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(detail::line_of_offset(text, e.byte == 0 ? 0 : e.byte - 1), e.what());
    }
    try {
        return detail::model_from(j);
    } catch (const detail::SchemaError& e) {
        std::size_t line = 1;
        if (!e.needle.empty()) {
            if (auto pos = text.find(e.needle); pos != std::string_view::npos) line = detail::line_of_offset(text, pos);
        }
        throw ParseError(line, e.what());
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(1, e.what());
    }
}

// Reads, parses and validates a model file. Throws ParseError or ModelError.
inline ValidatedModel parse_model(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError(0, "cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return validate(parse_model_text(buf.str()));
}

inline nlohmann::json model_to_json(const OrbitModel& m) {
    using detail::json;
    json cycles = json::array();
    for (const auto& c : m.cycles) {
        json ws = json::array();
        for (const auto& w : c.weights) ws.push_back(detail::weight_to_json(w));
        cycles.push_back({{"id", c.id}, {"weights", ws}});
    }
    json rays = json::array();
    for (const auto& r : m.rays) {
        json rj = {{"id", r.id}, {"kind", r.kind == RayKind::forward ? "forward" : "two_sided"}};
        rj["multiplicity"] = r.multiplicity.omega ? json("omega") : json(r.multiplicity.count);
        rj["omega"] = detail::anchor_to_json(r.omega);
        if (r.alpha) rj["alpha"] = detail::anchor_to_json(*r.alpha);
        if (!r.exceptional.empty()) {
            json ex = json::array();
            for (const auto& o : r.exceptional) {
                json e = detail::weight_to_json(o.weight);
                e.insert(e.begin(), o.index);
                ex.push_back(e);
            }
            rj["exceptional"] = ex;
        }
        rays.push_back(rj);
    }
    return {{"name", m.name}, {"cycles", cycles}, {"rays", rays}};
}

inline std::string emit_model(const OrbitModel& m) { return model_to_json(m).dump(2) + "\n"; }

}  // namespace ckspec
