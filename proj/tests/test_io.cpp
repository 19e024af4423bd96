#include <gtest/gtest.h>

#include "dmv/io/json.hpp"

using namespace dmv;
using io::json;

namespace {

ErrorKind kind_of(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.kind();
    }
    return ErrorKind::InvalidArgument;
}

} // namespace

TEST(Json, ConfigRoundTrip) {
    io::Config c;
    c.precision = 20;
    c.seed = 9;
    c.output = "tsv";
    EXPECT_EQ(io::config_from_json(io::to_json(c)), c);
    EXPECT_EQ(io::config_from_json(json::parse("{}")), io::Config{});
    EXPECT_EQ(kind_of([] { (void)io::config_from_json(json::parse(R"({"precision": 0})")); }), ErrorKind::MalformedInput);
    EXPECT_EQ(kind_of([] { (void)io::config_from_json(json::parse(R"({"schema": 2})")); }), ErrorKind::MalformedInput);
    EXPECT_EQ(kind_of([] { (void)io::config_from_json(json::parse(R"({"colour": "red"})")); }), ErrorKind::MalformedInput);
}

TEST(Json, ExtensionRoundTripIsFixpoint) {
    for (const char* text : {R"({"kind": "kummer", "n": 2, "a": "t^3+2*t", "base": "3^1"})",
                             R"({"kind": "constant", "n": 3, "base": 2})",
                             R"({"kind": "artin-schreier", "a": "t^3", "base": "2"})",
                             R"({"kind": "generic", "base": "3", "f": "x^3 - t", "genus": 0, "infinity": {"e": 3, "f": 1}})"}) {
        const auto s1 = io::extension_spec_from_json(json::parse(text));
        const auto j1 = io::to_json(s1);
        const auto s2 = io::extension_spec_from_json(j1);
        EXPECT_EQ(s1, s2) << text;
        EXPECT_EQ(io::to_json(s2), j1) << text;
        EXPECT_NO_THROW((void)io::build(s2)) << text;
    }
    EXPECT_EQ(kind_of([] { (void)io::extension_spec_from_json(json::parse(R"({"kind": "kummer", "n": 2, "base": "3"})")); }),
              ErrorKind::MalformedInput);
    EXPECT_EQ(kind_of([] { (void)io::extension_spec_from_json(json::parse(R"({"kind": "cubic", "base": "3"})")); }), ErrorKind::MalformedInput);
    EXPECT_EQ(kind_of([] { (void)io::extension_spec_from_json(json::parse(R"({"kind": "constant", "base": "6"})")); }),
              ErrorKind::MalformedInput);
}

TEST(Json, DatumRoundTripIsFixpoint) {
    const auto text = R"({
      "extension": {"kind": "constant", "n": 2, "base": "2"},
      "r": 2,
      "twists": [{"prime": "t", "matrix": [[1, 0], ["0", "t"]]}],
      "level": [{"prime": "t^3+t+1", "kind": "congruence", "depth": 1},
                {"prime": "t+1", "kind": "maximal", "s": [["1", "1/t"], ["0", "1"]]}],
      "index_override": 12
    })";
    const auto d1 = io::datum_spec_from_json(json::parse(text));
    const auto j1 = io::to_json(d1);
    const auto d2 = io::datum_spec_from_json(j1);
    EXPECT_EQ(d1, d2);
    EXPECT_EQ(io::to_json(d2), j1);
    const auto X = io::build(d2);
    EXPECT_EQ(X.r_prime, 1);
    EXPECT_EQ(X.twists.size(), 1u);
    EXPECT_TRUE(X.level.amply_small());
    EXPECT_EQ(*X.index_override, 12);
    // reducible primes and non-square matrices are rejected
    EXPECT_THROW((void)io::datum_spec_from_json(json::parse(R"({"extension": {"kind": "constant", "base": "2"}, "r": 1,
        "twists": [{"prime": "t^2+t", "matrix": [["1"]]}]})")),
                 Error);
    EXPECT_EQ(kind_of([] {
                  (void)io::datum_spec_from_json(json::parse(R"({"extension": {"kind": "constant", "base": "2"}, "r": 2,
                      "twists": [{"prime": "t", "matrix": [["1", "0"]]}]})"));
              }),
              ErrorKind::MalformedInput);
}

TEST(Json, LocalElementDigitsReconstructValue) {
    const auto F = galois_field(3);
    const auto c = make_local(make_prime(parse_poly(F, "t^2+1")), 6);
    const auto r = parse_ratfunc(F, "(t^5+2*t+1)/(t^2+1)");
    const auto x = LocalElement::from_ratfunc(c, r);
    const auto j = io::to_json(x);
    EXPECT_EQ(j["valuation"], -1);
    EXPECT_EQ(j["precision"], x.absolute_precision());
    // sum digits[i] pi^i equals the unit part modulo pi^rel
    Pol sum(F), pw = Pol::one(F);
    for (const auto& d : j["digits"]) {
        sum = sum + parse_poly(F, d.get<std::string>()) * pw;
        pw = pw * c->pi();
    }
    EXPECT_EQ(sum % pw, x.unit() % pw);
    EXPECT_TRUE(io::to_json(LocalElement::zero(c))["valuation"].is_null());
    EXPECT_EQ(io::to_json(LocalElement::inexact_zero(c, 4))["precision"], 4);
}

TEST(Json, LoadAcceptsInlineTextAndRejectsGarbage) {
    EXPECT_EQ(io::load(R"({"a": 1})")["a"], 1);
    EXPECT_EQ(io::load("[]").size(), 0u);
    EXPECT_EQ(kind_of([] { (void)io::load("{oops"); }), ErrorKind::MalformedInput);
    EXPECT_EQ(kind_of([] { (void)io::load("/nonexistent/file.json"); }), ErrorKind::MalformedInput);
}
