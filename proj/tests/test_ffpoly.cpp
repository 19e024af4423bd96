#include <gtest/gtest.h>

#include <random>

#include "dmv/text.hpp"
#include "dmv/verify/oracles.hpp"

using namespace dmv;

namespace {

void check_field_axioms(const Fq& F) {
    const auto q = F.order();
    for (std::uint64_t i = 0; i < q; ++i) {
        const auto a = F.element(i);
        EXPECT_EQ(F.add(a, F.neg(a)), F.zero());
        if (a != F.zero()) {
            EXPECT_EQ(F.mul(a, F.inv(a)), F.one());
        }
        EXPECT_EQ(F.pow(a, q), a);
        for (std::uint64_t j = 0; j < q; ++j) {
            const auto b = F.element(j);
            EXPECT_EQ(F.add(a, b), F.add(b, a));
            EXPECT_EQ(F.mul(a, b), F.mul(b, a));
            for (std::uint64_t k = 0; k < q; k += 3) {
                const auto c = F.element(k);
                EXPECT_EQ(F.mul(a, F.add(b, c)), F.add(F.mul(a, b), F.mul(a, c)));
                EXPECT_EQ(F.mul(F.mul(a, b), c), F.mul(a, F.mul(b, c)));
            }
        }
    }
}

Pol random_poly(const Fq& F, int deg, std::mt19937_64& rng) {
    std::vector<Fq::value_type> v(static_cast<std::size_t>(deg) + 1);
    for (auto& c : v) c = F.random(rng);
    return Pol(F, v);
}

} // namespace

TEST(FiniteField, AxiomsSmallFields) {
    for (std::uint64_t q : {2, 3, 4, 5, 7, 8, 9, 16, 25, 27}) check_field_axioms(galois_field(q));
}

TEST(FiniteField, SubfieldCodesEmbed) {
    const auto F = galois_field(2);
    const auto F4 = extend_field(F, 2);
    // F_2 inside F_4 keeps codes 0 and 1
    EXPECT_EQ(F4.add(1, 1), 0u);
    EXPECT_EQ(F4.mul(1, 1), 1u);
    const auto F9 = galois_field(9);
    for (std::uint32_t a = 0; a < 3; ++a)
        for (std::uint32_t b = 0; b < 3; ++b) {
            EXPECT_EQ(F9.add(a, b), (a + b) % 3);
            EXPECT_EQ(F9.mul(a, b), (a * b) % 3);
        }
}

TEST(FiniteField, PrimitiveElementGeneratesUnits) {
    for (std::uint64_t q : {4, 8, 9, 25}) {
        const auto F = galois_field(q);
        std::set<std::uint32_t> seen;
        auto x = F.one();
        for (std::uint64_t i = 0; i + 1 < q; ++i) {
            seen.insert(x);
            x = F.mul(x, F.primitive());
        }
        EXPECT_EQ(seen.size(), q - 1);
    }
}

TEST(FiniteField, MalformedSpecRejected) {
    EXPECT_THROW(parse_field_spec("6"), Error);
    EXPECT_THROW(parse_field_spec("2^x"), Error);
    EXPECT_EQ(parse_field_spec("3^2").order(), 9u);
    EXPECT_EQ(parse_field_spec("7").order(), 7u);
}

TEST(Poly, DivisionIdentity) {
    std::mt19937_64 rng(1);
    for (std::uint64_t q : {2, 3, 4, 5}) {
        const auto F = galois_field(q);
        for (int trial = 0; trial < 200; ++trial) {
            auto a = random_poly(F, 7, rng);
            auto b = random_poly(F, 3, rng);
            if (b.is_zero()) continue;
            auto [quo, rem] = divmod(a, b);
            EXPECT_EQ(quo * b + rem, a);
            EXPECT_LT(rem.degree(), b.degree());
        }
    }
}

TEST(Poly, ExtendedGcdBezout) {
    std::mt19937_64 rng(2);
    const auto F = galois_field(3);
    for (int trial = 0; trial < 200; ++trial) {
        auto a = random_poly(F, 5, rng);
        auto b = random_poly(F, 4, rng);
        if (a.is_zero() && b.is_zero()) continue;
        auto [g, s, t] = ext_gcd(a, b);
        EXPECT_EQ(s * a + t * b, g);
        EXPECT_TRUE((a % g).is_zero());
        EXPECT_TRUE((b % g).is_zero());
    }
}

TEST(Poly, IrreducibilityMatchesTrialDivision) {
    for (auto [q, dmax] : std::vector<std::pair<std::uint64_t, int>>{{2, 7}, {3, 4}, {4, 3}, {5, 3}}) {
        const auto F = galois_field(q);
        for (int d = 1; d <= dmax; ++d)
            for (const auto& f : oracle::monic_polys(F, d)) EXPECT_EQ(is_irreducible(f), oracle::is_irreducible(f)) << to_string(f);
    }
}

TEST(Poly, IrreducibleCountFormula) {
    for (auto [q, dmax] : std::vector<std::pair<std::uint64_t, int>>{{2, 8}, {3, 5}, {4, 4}, {5, 3}}) {
        const auto F = galois_field(q);
        for (int d = 1; d <= dmax; ++d) {
            EXPECT_EQ(count_irreducible(q, static_cast<std::uint64_t>(d)), BigInt(oracle::count_irreducible(F, d)));
            EXPECT_EQ(enumerate_primes(F, d).size() - (d > 1 ? enumerate_primes(F, d - 1).size() : 0), oracle::count_irreducible(F, d));
        }
    }
}

TEST(Poly, FactorizationReassembles) {
    std::mt19937_64 rng(3);
    for (std::uint64_t q : {2, 3, 4, 9}) {
        const auto F = galois_field(q);
        for (int trial = 0; trial < 60; ++trial) {
            auto f = random_poly(F, 1 + static_cast<int>(rng() % 9), rng);
            if (f.degree() < 1) continue;
            // force repeated factors now and then
            if (trial % 3 == 0) f = f * f;
            const auto fac = factor(f);
            EXPECT_EQ(fac.product(F), f);
            for (const auto& fa : fac.factors) {
                EXPECT_TRUE(fa.poly.is_monic());
                EXPECT_TRUE(oracle::is_irreducible(fa.poly)) << to_string(fa.poly);
            }
        }
    }
}

TEST(Poly, FactorOverResidueField) {
    // x^2 + x + 1 over F_2[t]/(t^2 + t + 1) = F_4 splits
    const auto F = galois_field(2);
    Residue res(make_prime(parse_poly(F, "t^2+t+1")));
    auto z = res.field.zero();
    auto o = res.field.one();
    Poly<ResidueField> g(res.field, {o, o, o});
    const auto fac = factor(g);
    ASSERT_EQ(fac.factors.size(), 2u);
    EXPECT_EQ(fac.factors[0].poly.degree(), 1);
    EXPECT_EQ(fac.product(res.field), g);
    (void)z;
}

TEST(Text, PolynomialRoundTrip) {
    const auto F = galois_field(5);
    std::mt19937_64 rng(4);
    for (int trial = 0; trial < 100; ++trial) {
        auto f = random_poly(F, 6, rng);
        EXPECT_EQ(parse_poly(F, to_string(f)), f);
    }
    EXPECT_EQ(to_string(parse_poly(F, "(t+1)^2")), "t^2+2*t+1");
    EXPECT_THROW(parse_poly(F, "t +"), Error);
    EXPECT_THROW(parse_poly(F, "1/t"), Error);
}

TEST(Text, BivariateRoundTrip) {
    const auto F = galois_field(3);
    const auto f = parse_bivariate(F, "x^2 - (t^3 - t)");
    ASSERT_EQ(f.size(), 3u);
    EXPECT_EQ(parse_bivariate(F, to_string_bivariate(f)), f);
}
