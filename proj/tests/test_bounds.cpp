#include <gtest/gtest.h>

#include <random>

#include "dmv/bounds.hpp"

using namespace dmv;

TEST(ClassNumberBound, Values) {
    // (q-1)(q^2g - 2g q^g + 1) / (2g (q^(g+1) - 1)) at g = 1
    EXPECT_EQ(clg_lower_bound(3, 1), Rational(2 * 4, 2 * 8));
    EXPECT_EQ(clg_lower_bound(2, 1), Rational(1 * 1, 2 * 3));
    EXPECT_EQ(clg_lower_bound(3, 2), Rational(2 * (81 - 36 + 1), 4 * 26));
    EXPECT_THROW((void)clg_lower_bound(3, 0), Error);
    for (std::uint64_t q : {2, 3, 4, 5, 7})
        for (int g = 1; g <= 6; ++g) EXPECT_GT(clg_lower_bound(q, g), 0);
}

TEST(GenusBound, Values) {
    EXPECT_DOUBLE_EQ(genus_upper_from_classnumber(5, 1), 8.0);
    EXPECT_NEAR(genus_upper_from_classnumber(3, 4), 8.0 + 2.0 * std::log(4.0) / std::log(3.0), 1e-12);
    EXPECT_NEAR(genus_upper_from_classnumber(2, BigInt(1) << 10), 28.0, 1e-9);
    EXPECT_TRUE(genus_bound_holds(3, 4, 1));
    EXPECT_TRUE(genus_bound_holds(2, BigInt(1) << 10, 28));
    EXPECT_FALSE(genus_bound_holds(2, BigInt(1) << 10, 29));
}

TEST(Castelnuovo, Values) {
    EXPECT_EQ(castelnuovo_normal_closure(2, 1), 8);
    for (int g = 0; g < 5; ++g) EXPECT_EQ(castelnuovo_normal_closure(1, g), g);
    EXPECT_EQ(castelnuovo_pair(2, 3), 16);
}

TEST(Cebotarev, BoundEvaluation) {
    const auto b = cebotarev_bound({5, 2, 2, 1, 0, 1, 0});
    EXPECT_EQ(b.main_term, Rational(25, 2));
    // 6 + sqrt 5 = 8.2360679...
    EXPECT_LE(b.bound.lo, b.bound.hi);
    EXPECT_LT(b.bound.hi - b.bound.lo, Rational(1, 1000000));
    EXPECT_NEAR(b.bound_approx, 6.0 + std::sqrt(5.0), 1e-9);
    EXPECT_THROW((void)cebotarev_bound({5, 3, 2, 1, 0, 1, 0}), Error);
}

TEST(Cebotarev, RelativeBoundShrinks) {
    double prev = 1e9;
    for (int i = 2; i <= 40; i += 2) {
        const auto b = cebotarev_bound({2, i, 1, 1, 0, 1, 0});
        EXPECT_GT(b.bound.lo, 0);
        const double rel = b.bound_approx / b.main_term.convert_to<double>();
        EXPECT_LT(rel, prev);
        prev = rel;
    }
    EXPECT_LT(prev, 1e-4);
}

TEST(Cebotarev, SplitPrimeCounts) {
    const auto F2 = galois_field(2), F3 = galois_field(3), F5 = galois_field(5);
    const auto C25 = make_constant_extension(F5, 2);
    EXPECT_EQ(count_split_primes(C25, 2, 1 << 20), 10);
    EXPECT_EQ(count_split_primes(C25, 1, 1 << 20), 0);
    EXPECT_EQ(count_split_primes(make_kummer_extension(F5, 2, parse_poly(F5, "t")), 1, 1 << 20), 2);
    EXPECT_EQ(extension_degrees(C25), (std::pair<int, int>{2, 1}));
    // q = 3 is not 1 mod 4
    EXPECT_THROW((void)count_split_primes(make_kummer_extension(F3, 4, parse_poly(F3, "t")), 1, 1 << 20), Error);
    EXPECT_THROW((void)count_split_primes(make_artin_schreier_extension(F2, parse_poly(F2, "t^3")), 1, 1 << 20), Error);
}

TEST(Cebotarev, CheckHoldsOnEnumerableCases) {
    const auto F2 = galois_field(2), F5 = galois_field(5);
    const std::vector<Extension> exts = {make_constant_extension(F5, 2), make_constant_extension(F2, 2), make_constant_extension(F2, 3),
                                         make_kummer_extension(F5, 2, parse_poly(F5, "t"))};
    int checked = 0;
    for (const auto& E : exts)
        for (int i = 1; i <= 6; ++i) {
            const auto [n, k] = extension_degrees(E);
            if (i % n != 0) continue;
            if (E.q() == 5 && i > 4) continue;
            const auto rep = cebotarev_check(E, i, 1 << 22);
            EXPECT_TRUE(rep.holds) << to_string(E.kind) << " i=" << i;
            ++checked;
        }
    EXPECT_GE(checked, 8);
    const auto rep = cebotarev_check(exts[0], 2, 1 << 20);
    EXPECT_EQ(rep.count, 10);
    EXPECT_EQ(rep.main_term, Rational(25, 2));
}

TEST(Thresholds, Values) {
    EXPECT_EQ(separable_N(2, 1), 18);
    EXPECT_EQ(separable_N(2, 0), 8);
    EXPECT_EQ(separable_N(3, 2), 84);
    EXPECT_EQ(induction_threshold(2, 3, 2, 3), 5184);
    EXPECT_EQ(induction_threshold(2, 2, 1, 1), 2);
    EXPECT_EQ(bezout(3, 5), 15);
    EXPECT_EQ(hecke_pullback(4, 6), 24);
}

TEST(Thresholds, Monotone) {
    for (std::uint64_t kp : {2, 3, 4})
        for (int r = 1; r <= 4; ++r)
            for (int s = 1; s <= 4; ++s)
                for (int z = 1; z <= 4; ++z) {
                    const auto t = induction_threshold(kp, r, s, z);
                    EXPECT_LE(t, induction_threshold(kp + 1, r, s, z));
                    EXPECT_LE(t, induction_threshold(kp, r + 1, s, z));
                    EXPECT_LE(t, induction_threshold(kp, r, s + 1, z));
                    EXPECT_LE(t, induction_threshold(kp, r, s, z + 1));
                }
    for (int r = 1; r <= 6; ++r)
        for (int s = 0; s <= 8; ++s) {
            const BigInt two_s = BigInt(1) << s;
            EXPECT_EQ(separable_N(r, s), 2 * BigInt(r - 1) * (two_s - 1) + 2 * BigInt(r) * r * two_s);
        }
}

TEST(Thresholds, IntersectionLedger) {
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 1000; ++trial) {
        const BigInt degZ = 1 + rng() % 1000;
        const std::uint64_t kp = 2 + rng() % 50;
        const int r = 1 + static_cast<int>(rng() % 6);
        EXPECT_LE(intersection_bound(degZ, kp, r), degZ * degZ * big_pow(BigInt(kp), static_cast<std::uint64_t>(r - 1)));
    }
}
