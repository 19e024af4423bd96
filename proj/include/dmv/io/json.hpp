#pragma once

#include <fstream>
#include <limits>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "dmv/goodprime.hpp"

namespace dmv::io {

using json = nlohmann::ordered_json;

inline constexpr int kSchema = 1;

namespace detail {

[[noreturn]] inline void malformed(const std::string& what) { fail(ErrorKind::MalformedInput, what); }

inline void only_keys(const json& j, const std::set<std::string>& allowed, const std::string& where) {
    if (!j.is_object()) malformed(where + " must be a JSON object");
    for (const auto& [k, v] : j.items())
        if (!allowed.count(k)) malformed("unknown key '" + k + "' in " + where);
}

inline void check_schema(const json& j, const std::string& where) {
    if (j.contains("schema") && !(j["schema"].is_number_integer() && j["schema"].get<int>() == kSchema))
        malformed(where + ": unsupported schema (expected " + std::to_string(kSchema) + ")");
}

template <class T>
T get(const json& j, const std::string& key, const std::string& where) {
    if (!j.contains(key)) malformed("missing key '" + key + "' in " + where);
    try {
        return j.at(key).get<T>();
    } catch (const json::exception&) {
        malformed("key '" + key + "' in " + where + " has the wrong type");
    }
}

/// Integers and strings are both accepted where polynomial text is expected.
inline std::string text_of(const json& v, const std::string& where) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_number_integer()) return std::to_string(v.get<long long>());
    malformed(where + " must be a string or an integer");
}

} // namespace detail

/// Reads a whole file, or returns the argument itself when it is inline JSON.
inline json load(const std::string& path_or_text) {
    std::string text = path_or_text;
    const auto first = path_or_text.find_first_not_of(" \t\r\n");
    if (first == std::string::npos || (path_or_text[first] != '{' && path_or_text[first] != '[')) {
        std::ifstream in(path_or_text);
        if (!in) detail::malformed("cannot read '" + path_or_text + "'");
        std::ostringstream ss;
        ss << in.rdbuf();
        text = ss.str();
    }
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        detail::malformed(std::string("invalid JSON: ") + e.what());
    }
}

struct Config {
    int precision = 12;
    std::uint64_t orbit_budget = std::uint64_t{1} << 16;
    int scan_max_degree = 6;
    std::uint64_t seed = 0;
    std::string output; // "json", "tsv", or empty for the command's native format

    friend bool operator==(const Config&, const Config&) = default;
};

inline json to_json(const Config& c) {
    json j;
    j["schema"] = kSchema;
    j["precision"] = c.precision;
    j["orbit_budget"] = c.orbit_budget;
    j["scan_max_degree"] = c.scan_max_degree;
    j["seed"] = c.seed;
    if (!c.output.empty()) j["output"] = c.output;
    return j;
}

inline Config config_from_json(const json& j) {
    const std::string where = "config";
    detail::only_keys(j, {"schema", "precision", "orbit_budget", "scan_max_degree", "seed", "output"}, where);
    detail::check_schema(j, where);
    Config c;
    auto positive = [&](const char* key, auto& field) {
        if (!j.contains(key)) return;
        if (!j[key].is_number_integer() || j[key].get<long long>() < 1) detail::malformed(std::string(key) + " must be a positive integer");
        field = j[key].get<std::remove_reference_t<decltype(field)>>();
    };
    positive("precision", c.precision);
    positive("orbit_budget", c.orbit_budget);
    positive("scan_max_degree", c.scan_max_degree);
    if (j.contains("seed")) {
        if (!j["seed"].is_number_integer() || j["seed"].get<long long>() < 0) detail::malformed("seed must be a nonnegative integer");
        c.seed = j["seed"].get<std::uint64_t>();
    }
    if (j.contains("output")) {
        c.output = detail::get<std::string>(j, "output", where);
        if (c.output != "json" && c.output != "tsv") detail::malformed("output must be json or tsv");
    }
    return c;
}

/// Normalized extension description; builds the Extension on demand.
struct ExtensionSpec {
    std::string kind;
    std::string base;
    int n = 1;
    std::string a;            // kummer, artin-schreier
    std::string f;            // generic
    int genus = 0;            // generic
    int infinite_places = 1;  // generic
    PlaceType infinity{1, 1}; // generic

    friend bool operator==(const ExtensionSpec&, const ExtensionSpec&) = default;
};

inline ExtensionSpec extension_spec_from_json(const json& j) {
    const std::string where = "extension";
    detail::only_keys(j, {"schema", "kind", "base", "n", "a", "f", "genus", "infinite_places", "infinity"}, where);
    detail::check_schema(j, where);
    ExtensionSpec s;
    s.kind = detail::get<std::string>(j, "kind", where);
    if (!j.contains("base")) detail::malformed("missing key 'base' in extension");
    const auto F = parse_field_spec(detail::text_of(j["base"], "base"));
    s.base = F.spec();
    auto int_key = [&](const char* key, int dflt) { return j.contains(key) ? detail::get<int>(j, key, where) : dflt; };
    if (s.kind == "constant") {
        s.n = int_key("n", 1);
    } else if (s.kind == "kummer") {
        s.n = detail::get<int>(j, "n", where);
        if (!j.contains("a")) detail::malformed("missing key 'a' in extension");
        s.a = to_string(parse_poly(F, detail::text_of(j["a"], "a")));
    } else if (s.kind == "artin-schreier") {
        if (!j.contains("a")) detail::malformed("missing key 'a' in extension");
        s.a = to_string(parse_poly(F, detail::text_of(j["a"], "a")));
    } else if (s.kind == "generic") {
        if (!j.contains("f")) detail::malformed("missing key 'f' in extension");
        s.f = to_string_bivariate(parse_bivariate(F, detail::text_of(j["f"], "f")));
        s.genus = detail::get<int>(j, "genus", where);
        s.infinite_places = int_key("infinite_places", 1);
        if (j.contains("infinity")) {
            const auto& inf = j["infinity"];
            detail::only_keys(inf, {"e", "f"}, "infinity");
            s.infinity = {detail::get<int>(inf, "f", "infinity"), detail::get<int>(inf, "e", "infinity")};
        } else {
            detail::malformed("missing key 'infinity' in generic extension");
        }
    } else {
        detail::malformed("unknown extension kind '" + s.kind + "'");
    }
    return s;
}

inline json to_json(const ExtensionSpec& s) {
    json j;
    j["kind"] = s.kind;
    j["base"] = s.base;
    if (s.kind == "constant" || s.kind == "kummer") j["n"] = s.n;
    if (s.kind == "kummer" || s.kind == "artin-schreier") j["a"] = s.a;
    if (s.kind == "generic") {
        j["f"] = s.f;
        j["genus"] = s.genus;
        j["infinite_places"] = s.infinite_places;
        j["infinity"] = {{"e", s.infinity.e}, {"f", s.infinity.f}};
    }
    return j;
}

inline Extension build(const ExtensionSpec& s) {
    const auto F = parse_field_spec(s.base);
    if (s.kind == "constant") return make_constant_extension(F, s.n);
    if (s.kind == "kummer") return make_kummer_extension(F, s.n, parse_poly(F, s.a));
    if (s.kind == "artin-schreier") return make_artin_schreier_extension(F, parse_poly(F, s.a));
    return make_generic_extension(F, parse_bivariate(F, s.f), s.genus, s.infinite_places, s.infinity);
}

using TextMatrix = std::vector<std::vector<std::string>>;

inline TextMatrix matrix_from_json(const Fq& F, const json& j, const std::string& where) {
    if (!j.is_array() || j.empty()) detail::malformed(where + " must be a nonempty array of rows");
    TextMatrix m;
    for (const auto& row : j) {
        if (!row.is_array() || row.size() != j.size()) detail::malformed(where + " must be square");
        m.emplace_back();
        for (const auto& v : row) m.back().push_back(to_string(parse_ratfunc(F, detail::text_of(v, where))));
    }
    return m;
}

inline RMat build(const Fq& F, const TextMatrix& m) {
    RMat out;
    for (const auto& row : m) {
        out.emplace_back();
        for (const auto& v : row) out.back().push_back(parse_ratfunc(F, v));
    }
    return out;
}

struct TwistSpec {
    std::string prime;
    TextMatrix matrix;
    friend bool operator==(const TwistSpec&, const TwistSpec&) = default;
};

struct LevelSpec {
    std::string prime;
    std::string kind; // "maximal" or "congruence"
    int depth = 0;
    TextMatrix s;     // empty means the identity
    friend bool operator==(const LevelSpec&, const LevelSpec&) = default;
};

inline std::string prime_text(const Fq& F, const json& v, const std::string& where) {
    const auto p = parse_poly(F, detail::text_of(v, where));
    return to_string(make_prime(p).poly);
}

inline std::vector<LevelSpec> level_from_json(const Fq& F, const json& j) {
    if (!j.is_array()) detail::malformed("level must be an array");
    std::vector<LevelSpec> out;
    std::set<std::string> seen;
    for (const auto& e : j) {
        detail::only_keys(e, {"prime", "kind", "depth", "s"}, "level entry");
        LevelSpec l;
        if (!e.contains("prime")) detail::malformed("missing key 'prime' in level entry");
        l.prime = prime_text(F, e["prime"], "level prime");
        if (!seen.insert(l.prime).second) detail::malformed("level lists " + l.prime + " twice");
        l.kind = detail::get<std::string>(e, "kind", "level entry");
        if (l.kind == "congruence") {
            l.depth = detail::get<int>(e, "depth", "level entry");
            if (l.depth < 1) detail::malformed("congruence depth must be >= 1");
        } else if (l.kind != "maximal") {
            detail::malformed("level kind must be maximal or congruence");
        }
        if (e.contains("s")) l.s = matrix_from_json(F, e["s"], "level s");
        out.push_back(std::move(l));
    }
    return out;
}

inline json to_json(const std::vector<LevelSpec>& v) {
    json j = json::array();
    for (const auto& l : v) {
        json e;
        e["prime"] = l.prime;
        e["kind"] = l.kind;
        if (l.kind == "congruence") e["depth"] = l.depth;
        if (!l.s.empty()) e["s"] = l.s;
        j.push_back(std::move(e));
    }
    return j;
}

inline LevelMap build(const Fq& F, const std::vector<LevelSpec>& v, int r) {
    LevelMap K;
    for (const auto& l : v) {
        const auto P = make_prime(parse_poly(F, l.prime));
        RMat s = l.s.empty() ? rmat_identity(F, r) : build(F, l.s);
        require(static_cast<int>(s.size()) == r, ErrorKind::MalformedInput, "level matrix at " + l.prime + " is not " + std::to_string(r) + "x" + std::to_string(r));
        K.set(P, {l.kind == "congruence" ? LocalLevel::Kind::Congruence : LocalLevel::Kind::Maximal, std::move(s), l.depth});
    }
    return K;
}

struct DatumSpec {
    ExtensionSpec extension;
    int r = 1;
    std::vector<TwistSpec> twists;
    std::vector<LevelSpec> level;
    std::optional<std::string> index_override;
    friend bool operator==(const DatumSpec&, const DatumSpec&) = default;
};

inline DatumSpec datum_spec_from_json(const json& j) {
    const std::string where = "datum";
    detail::only_keys(j, {"schema", "extension", "r", "twists", "level", "index_override"}, where);
    detail::check_schema(j, where);
    DatumSpec d;
    if (!j.contains("extension")) detail::malformed("missing key 'extension' in datum");
    d.extension = extension_spec_from_json(j["extension"]);
    const auto F = parse_field_spec(d.extension.base);
    d.r = detail::get<int>(j, "r", where);
    if (d.r < 1) detail::malformed("r must be >= 1");
    if (j.contains("twists")) {
        if (!j["twists"].is_array()) detail::malformed("twists must be an array");
        for (const auto& t : j["twists"]) {
            detail::only_keys(t, {"prime", "matrix"}, "twist");
            if (!t.contains("prime") || !t.contains("matrix")) detail::malformed("twist needs prime and matrix");
            d.twists.push_back({prime_text(F, t["prime"], "twist prime"), matrix_from_json(F, t["matrix"], "twist matrix")});
        }
    }
    if (j.contains("level")) d.level = level_from_json(F, j["level"]);
    if (j.contains("index_override")) {
        const auto s = detail::text_of(j["index_override"], "index_override");
        try {
            const BigInt v(s);
            if (v < 1) detail::malformed("index_override must be positive");
            d.index_override = v.str();
        } catch (const std::runtime_error&) {
            detail::malformed("index_override must be an integer");
        }
    }
    return d;
}

inline json to_json(const DatumSpec& d) {
    json j;
    j["schema"] = kSchema;
    j["extension"] = to_json(d.extension);
    j["r"] = d.r;
    j["twists"] = json::array();
    for (const auto& t : d.twists) j["twists"].push_back({{"prime", t.prime}, {"matrix", t.matrix}});
    j["level"] = to_json(d.level);
    if (d.index_override) j["index_override"] = *d.index_override;
    return j;
}

inline SubvarietyDatum build(const DatumSpec& d) {
    auto X = make_datum(build(d.extension), d.r);
    const auto& F = X.ext.base;
    for (const auto& t : d.twists) {
        auto m = build(F, t.matrix);
        require(static_cast<int>(m.size()) == d.r, ErrorKind::MalformedInput, "twist matrix at " + t.prime + " is not r x r");
        X.twists.push_back({make_prime(parse_poly(F, t.prime)), std::move(m)});
    }
    X.level = build(F, d.level, d.r);
    if (d.index_override) X.index_override = BigInt(*d.index_override);
    return X;
}

/// Big integers print as JSON numbers when they fit in 64 bits, else as strings.
inline json number(const BigInt& x) {
    if (x >= 0 && x <= BigInt(std::numeric_limits<std::uint64_t>::max())) return x.convert_to<std::uint64_t>();
    if (x < 0 && x >= BigInt(std::numeric_limits<std::int64_t>::min())) return x.convert_to<std::int64_t>();
    return x.str();
}

inline json to_json(const std::vector<BigInt>& v) {
    json j = json::array();
    for (const auto& x : v) j.push_back(number(x));
    return j;
}

/// {prime, valuation, digits, precision}: x = sum digits[i] pi^(valuation + i) + O(pi^precision),
/// digits in k(P) as polynomials of degree < deg P. Zeros have null valuation.
inline json to_json(const LocalElement& x) {
    const auto& c = x.context();
    json j;
    j["prime"] = to_string(c->prime.poly);
    j["valuation"] = nullptr;
    j["digits"] = json::array();
    j["precision"] = nullptr;
    if (x.is_inexact_zero()) j["precision"] = x.absolute_precision();
    if (!x.is_nonzero()) return j;
    j["valuation"] = x.valuation();
    Pol u = x.unit();
    for (int i = 0; i < x.relative_precision(); ++i) {
        auto [q, r] = divmod(u, c->pi());
        j["digits"].push_back(to_string(r));
        u = q;
    }
    j["precision"] = x.absolute_precision();
    return j;
}

/// Row-major array of local elements.
inline json to_json(const LocalMatrix& m) {
    json j = json::array();
    for (int i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (int k = 0; k < m.cols(); ++k) row.push_back(to_json(m(i, k)));
        j.push_back(std::move(row));
    }
    return j;
}

} // namespace dmv::io
