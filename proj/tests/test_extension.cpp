#include <gtest/gtest.h>

#include "dmv/bounds.hpp"
#include "dmv/verify/oracles.hpp"

using namespace dmv;

namespace {

/// Affine solutions of y^2 + y = a(t) over F_{2^i} plus the point at infinity.
std::uint64_t artin_schreier_points(const Fq& base, const Pol& a, int i) {
    const Fq big = extend_field(base, i);
    const Pol A(big, a.coeffs());
    std::uint64_t n = 1;
    for (std::uint64_t t = 0; t < big.order(); ++t)
        for (std::uint64_t y = 0; y < big.order(); ++y) {
            const auto yy = big.element(y);
            if (big.add(big.mul(yy, yy), yy) == A.eval(big.element(t))) ++n;
        }
    return n;
}

std::vector<Extension> sample_extensions() {
    const auto F2 = galois_field(2), F3 = galois_field(3), F5 = galois_field(5);
    return {make_constant_extension(F2, 2),
            make_constant_extension(F2, 3),
            make_constant_extension(F5, 2),
            make_kummer_extension(F3, 2, parse_poly(F3, "t^3-t")),
            make_kummer_extension(F5, 2, parse_poly(F5, "t")),
            make_kummer_extension(F5, 4, parse_poly(F5, "t^3+t")),
            make_artin_schreier_extension(F2, parse_poly(F2, "t^3")),
            make_generic_extension(F3, parse_bivariate(F3, "x^3-t"), 0, 1, {1, 3})};
}

} // namespace

TEST(Extension, EllipticClassNumber) {
    const auto F = galois_field(3);
    const auto E = make_kummer_extension(F, 2, parse_poly(F, "t^3-t"));
    EXPECT_EQ(E.genus, 1);
    const auto z = zeta_numerator(E, 1 << 16);
    EXPECT_EQ(z.point_counts, std::vector<BigInt>{4});
    EXPECT_EQ(z.numerator, (std::vector<BigInt>{1, 0, 3}));
    EXPECT_EQ(z.class_number, 4);
    EXPECT_EQ(oracle::hyperelliptic_points(F, parse_poly(F, "t^3-t"), 1), 4u);
    EXPECT_EQ(oracle::class_number_from_divisors(3, 1, {4}), 4);
}

TEST(Extension, GenusTwoClassNumberMatchesDivisorCount) {
    const auto F = galois_field(5);
    const auto a = parse_poly(F, "t^5-t+1");
    const auto E = make_kummer_extension(F, 2, a);
    ASSERT_EQ(E.genus, 2);
    std::vector<BigInt> N;
    for (int i = 1; i <= 3; ++i) {
        N.push_back(oracle::hyperelliptic_points(F, a, i));
        EXPECT_EQ(count_rational_points(E, i), N.back()) << i;
    }
    EXPECT_EQ(class_number(E, 1 << 16), oracle::class_number_from_divisors(5, 2, N));
}

TEST(Extension, ArtinSchreierEllipticCurve) {
    const auto F = galois_field(2);
    const auto a = parse_poly(F, "t^3");
    const auto E = make_artin_schreier_extension(F, a);
    EXPECT_EQ(E.genus, 1);
    EXPECT_EQ(count_rational_points(E, 1), BigInt(artin_schreier_points(F, a, 1)));
    EXPECT_EQ(count_rational_points(E, 2), BigInt(artin_schreier_points(F, a, 2)));
    EXPECT_EQ(class_number(E, 1 << 16), oracle::class_number_from_divisors(2, 1, {BigInt(artin_schreier_points(F, a, 1))}));
    // t^4 + t^3 normalizes to t^2 + t^3, then to t^3 + t
    const auto E2 = make_artin_schreier_extension(F, parse_poly(F, "t^4+t^3"));
    EXPECT_EQ(E2.a.degree(), 3);
}

TEST(Extension, FundamentalIdentity) {
    for (const auto& E : sample_extensions())
        for (const auto& P : enumerate_primes(E.base, 3)) {
            try {
                EXPECT_EQ(splitting(E, P).total(), E.m) << to_string(E.kind) << " at " << to_string(P.poly);
            } catch (const Error& e) {
                EXPECT_EQ(e.kind(), ErrorKind::UnsupportedRamifiedPrime);
            }
        }
}

TEST(Extension, ConstantExtensionLaw) {
    const auto F = galois_field(2);
    for (int n : {2, 3, 4}) {
        const auto E = make_constant_extension(F, n);
        for (const auto& P : enumerate_primes(F, 4)) {
            const auto st = splitting(E, P);
            const int g = std::gcd(n, P.degree());
            ASSERT_EQ(static_cast<int>(st.places.size()), g);
            for (const auto& pl : st.places) EXPECT_EQ(pl.f, n / g);
            EXPECT_TRUE(st.unramified);
        }
    }
}

TEST(Extension, KummerSquareLaw) {
    const auto F = galois_field(5);
    const auto E = make_kummer_extension(F, 2, parse_poly(F, "t"));
    for (std::uint32_t c = 0; c < 5; ++c) {
        const auto P = make_prime(Pol(F, {F.neg(c), F.one()}));
        const auto st = splitting(E, P);
        if (c == 0) {
            EXPECT_FALSE(st.unramified);
            continue;
        }
        const bool square = c == 1 || c == 4;
        EXPECT_EQ(st.places.size(), square ? 2u : 1u) << c;
    }
}

TEST(Extension, PlaceCountsAgreeWithPointCounts) {
    for (const auto& E : sample_extensions()) {
        if (E.q_prime != E.q()) continue;
        EXPECT_EQ(count_places(E, 1), count_rational_points(E, 1)) << to_string(E.kind);
    }
}

TEST(Extension, Refusals) {
    const auto F2 = galois_field(2), F3 = galois_field(3);
    auto kind_of = [](auto&& fn) {
        try {
            fn();
        } catch (const Error& e) {
            return e.kind();
        }
        return ErrorKind::InvalidArgument;
    };
    EXPECT_EQ(kind_of([&] { make_kummer_extension(F3, 2, parse_poly(F3, "t^2+1")); }), ErrorKind::MultipleInfinitePlaces);
    EXPECT_EQ(kind_of([&] { make_kummer_extension(F3, 2, parse_poly(F3, "t^2")); }), ErrorKind::UnsupportedShape);
    EXPECT_EQ(kind_of([&] { make_kummer_extension(F2, 2, parse_poly(F2, "t")); }), ErrorKind::UnsupportedShape);
    EXPECT_EQ(kind_of([&] { make_generic_extension(F3, parse_bivariate(F3, "x^2-1"), 0, 1, {1, 2}); }),
              ErrorKind::ReducibleDefiningPolynomial);
    EXPECT_EQ(kind_of([&] { make_generic_extension(F2, parse_bivariate(F2, "x^2-t^2"), 0, 1, {1, 2}); }),
              ErrorKind::ReducibleDefiningPolynomial);
    EXPECT_EQ(kind_of([&] { make_generic_extension(F3, parse_bivariate(F3, "x^2-t"), 0, 2, {1, 1}); }), ErrorKind::MultipleInfinitePlaces);
}

TEST(Extension, InseparableSplitsAsOnePlace) {
    const auto F = galois_field(2);
    const auto E = make_generic_extension(F, parse_bivariate(F, "x^2-t"), 0, 1, {1, 2});
    EXPECT_FALSE(E.separable);
    for (const auto& P : enumerate_primes(F, 4)) {
        const auto st = splitting(E, P);
        ASSERT_EQ(st.places.size(), 1u);
        EXPECT_EQ(st.places[0].e, 2);
        EXPECT_FALSE(st.has_degree_one_place());
    }
}

TEST(Extension, ClassNumberBoundsHold) {
    const auto F3 = galois_field(3), F5 = galois_field(5), F2 = galois_field(2);
    for (const auto& E : {make_kummer_extension(F3, 2, parse_poly(F3, "t^3-t")), make_kummer_extension(F5, 2, parse_poly(F5, "t^5-t+1")),
                          make_artin_schreier_extension(F2, parse_poly(F2, "t^3")), make_kummer_extension(F3, 2, parse_poly(F3, "t^5+t+2"))}) {
        const auto h = class_number(E, 1 << 16);
        EXPECT_GE(Rational(h), clg_lower_bound(E.q_prime, E.genus));
        EXPECT_TRUE(genus_bound_holds(E.q_prime, h, E.genus));
        EXPECT_LE(E.genus, genus_upper_from_classnumber(E.q_prime, h));
    }
}
