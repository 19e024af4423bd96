#include <gtest/gtest.h>

#include <algorithm>

#include "dmv/goodprime.hpp"
#include "dmv/verify/oracles.hpp"

using namespace dmv;

namespace {

Prime prime_of(const Fq& F, const std::string& s) { return make_prime(parse_poly(F, s)); }

RMat diag_rmat(const Fq& F, const std::vector<std::string>& d) {
    auto m = rmat_identity(F, static_cast<int>(d.size()));
    for (std::size_t i = 0; i < d.size(); ++i) m[i][i] = parse_ratfunc(F, d[i]);
    return m;
}

bool has_tag(const GoodPrimeCheck& c, const std::string& t) { return std::find(c.failed.begin(), c.failed.end(), t) != c.failed.end(); }

SubvarietyDatum elliptic_datum() {
    const auto F = galois_field(3);
    return make_datum(make_kummer_extension(F, 2, parse_poly(F, "t^3-t")), 2);
}

ErrorKind kind_of(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.kind();
    }
    return ErrorKind::InvalidArgument;
}

} // namespace

TEST(GoodPrime, ConditionTags) {
    auto X = elliptic_datum();
    const auto& F = X.ext.base;
    const auto P = prime_of(F, "t^2+1");
    auto chk = is_good_prime(X, P);
    EXPECT_EQ(chk.failed, std::vector<std::string>{"a"});

    X.level.set(P, {LocalLevel::Kind::Congruence, rmat_identity(F, 2), 1});
    EXPECT_TRUE(is_good_prime(X, P).certificate.has_value());

    // depth two is not depth one
    X.level.set(P, {LocalLevel::Kind::Congruence, rmat_identity(F, 2), 2});
    EXPECT_EQ(is_good_prime(X, P).failed, std::vector<std::string>{"a"});

    // a ramified prime has no place of local degree one
    const auto Pt = prime_of(F, "t");
    EXPECT_TRUE(has_tag(is_good_prime(X, Pt), "b"));

    // a twist pushing the companion off the integral matrices breaks stability
    X.level.set(P, {LocalLevel::Kind::Congruence, rmat_identity(F, 2), 1});
    X.twists.push_back({P, diag_rmat(F, {"1", "1/(t^2+1)"})});
    chk = is_good_prime(X, P);
    EXPECT_EQ(chk.failed, std::vector<std::string>{"c"});
}

TEST(GoodPrime, InseparableDatumHasNoDegreeOnePlace) {
    const auto F = galois_field(2);
    auto X = make_datum(make_generic_extension(F, parse_bivariate(F, "x^2-t"), 0, 1, {1, 2}), 2);
    const auto primes = enumerate_primes(F, 6);
    ASSERT_EQ(primes.size(), 23u);
    for (const auto& P : primes) {
        auto Y = X;
        Y.level.set(P, {LocalLevel::Kind::Congruence, rmat_identity(F, 2), 1});
        const auto chk = is_good_prime(Y, P);
        EXPECT_FALSE(chk.certificate.has_value());
        EXPECT_TRUE(has_tag(chk, "b")) << to_string(P.poly);
    }
    const auto rep = find_good_prime(X, 1, 6, 1 << 16);
    EXPECT_FALSE(rep.certificate.has_value());
}

TEST(GoodPrime, SearchSelectsFirstAdmissiblePrime) {
    auto X = elliptic_datum();
    X.index_override = BigInt(21);
    const auto rep = find_good_prime(X, 2, 6, 1 << 16);
    EXPECT_EQ(rep.predegree, 84);
    ASSERT_TRUE(rep.certificate.has_value());
    EXPECT_EQ(to_string(rep.certificate->prime.poly), "t^2+1");
    EXPECT_EQ(rep.fail_i + rep.fail_ii + rep.fail_iii + rep.fail_iv + rep.accepted, rep.scanned);
    EXPECT_EQ(rep.fail_i, 3u);
    EXPECT_EQ(rep.accepted, 1u);
    ASSERT_TRUE(rep.shrink.has_value());
    EXPECT_EQ(rep.shrink->index, 5760);
    EXPECT_EQ(rep.shrink->bound, 6561);
    EXPECT_TRUE(rep.shrink->level.amply_small());
    // the certificate yields a Hecke element of the declared degree
    auto Y = X;
    Y.level = rep.shrink->level;
    const auto h = certificate_hecke_element(Y, *rep.certificate);
    const auto c = make_local(rep.certificate->prime, kDefaultPrecision);
    EXPECT_EQ(hecke_degree(level_aligned(h, to_local(c, rep.certificate->s)), 1, 1 << 16).degree, h.declared_degree);
}

TEST(GoodPrime, SearchStopsWhenNormBoundIsReached) {
    auto X = elliptic_datum();
    const auto rep = find_good_prime(X, 2, 6, 1 << 16);
    EXPECT_EQ(rep.predegree, 4);
    EXPECT_FALSE(rep.certificate.has_value());
    EXPECT_FALSE(rep.scan_complete);
    EXPECT_EQ(rep.scanned, 0u);
}

TEST(GoodPrime, SearchRespectsExistingLevel) {
    auto X = elliptic_datum();
    X.index_override = BigInt(21);
    const auto& F = X.ext.base;
    X.level.set(prime_of(F, "t^2+1"), {LocalLevel::Kind::Congruence, rmat_identity(F, 2), 1});
    const auto rep = find_good_prime(X, 2, 6, 1 << 16);
    EXPECT_GE(rep.fail_ii, 1u);
    ASSERT_TRUE(rep.certificate.has_value());
    EXPECT_NE(to_string(rep.certificate->prime.poly), "t^2+1");
}

TEST(ShrinkLevel, IndexAndRefusal) {
    const auto F = galois_field(3);
    const auto P = prime_of(F, "t^2+1");
    LevelMap K;
    const auto sh = shrink_level(K, P, 2);
    EXPECT_EQ(sh.index, 5760);
    EXPECT_EQ(sh.bound, 6561);
    EXPECT_EQ(sh.index, BigInt(oracle::count_matrix_group(P, 2, 1).first));
    EXPECT_EQ(kind_of([&] { (void)shrink_level(sh.level, P, 2); }), ErrorKind::NotMaximalAtPrime);
}

TEST(Transfer, ConstantTower) {
    const auto F = galois_field(2);
    auto X = make_datum(make_constant_extension(F, 4), 4);
    const auto P = prime_of(F, "t^4+t+1");
    X.level.set(P, {LocalLevel::Kind::Congruence, rmat_identity(F, 4), 1});
    const auto chk = is_good_prime(X, P);
    ASSERT_TRUE(chk.certificate.has_value());

    const auto base = transfer_good_prime(X, {TowerStage::Kind::Base, 1}, *chk.certificate);
    EXPECT_EQ(base.residue_size, 16u);
    EXPECT_TRUE(base.inner.certificate.has_value());

    const auto refl = transfer_good_prime(X, {TowerStage::Kind::Reflex, 1}, *chk.certificate);
    EXPECT_EQ(refl.residue_size, 16u);
    EXPECT_TRUE(refl.inner.certificate.has_value());

    const auto mid = transfer_good_prime(X, {TowerStage::Kind::Constant, 2}, *chk.certificate);
    EXPECT_EQ(mid.residue_size, 16u);
    EXPECT_TRUE(mid.inner.certificate.has_value());

    EXPECT_EQ(kind_of([&] { (void)transfer_good_prime(X, {TowerStage::Kind::Constant, 3}, *chk.certificate); }),
              ErrorKind::TowerNotSupported);
}

TEST(IndexIX, MatchesExhaustiveStabilizer) {
    const auto F = galois_field(2);
    const auto P = prime_of(F, "t");
    auto X = make_datum(make_constant_extension(F, 2), 2);
    EXPECT_EQ(index_iX(X, 1 << 16), 1);
    X.twists.push_back({P, diag_rmat(F, {"1", "t"})});
    const auto c = make_local(P, kDefaultPrecision);
    const auto S = make_order(c, X.ext.f, 1);
    EXPECT_EQ(index_iX(X, 1 << 16), BigInt(oracle::stabilizer_index(S, to_local(c, X.twists[0].matrix).residue_mod(1), 1)));
    EXPECT_EQ(index_iX(X, 1 << 16), 3);
    // scaling by a power of the uniformizer changes nothing
    X.twists[0].matrix = diag_rmat(F, {"1/t", "1"});
    EXPECT_EQ(index_iX(X, 1 << 16), 3);
    EXPECT_EQ(predegree(X, 1 << 16), class_number(X.ext, 1 << 16) * 3);
}

TEST(SameSubvariety, OrbitDecision) {
    const auto F = galois_field(2);
    const auto P = prime_of(F, "t");
    auto base = make_datum(make_constant_extension(F, 2), 2);
    auto with = [&](const std::vector<std::string>& d) {
        auto X = base;
        X.twists.push_back({P, diag_rmat(F, d)});
        return X;
    };
    EXPECT_EQ(same_subvariety(with({"1", "t"}), with({"t", "1"}), 1, 1 << 16), Sameness::Same);
    EXPECT_EQ(same_subvariety(with({"1", "t"}), with({"1", "t"}), 2, 1 << 16), Sameness::Same);
    EXPECT_EQ(same_subvariety(with({"1", "t"}), base, 1, 1 << 16), Sameness::Different);
    EXPECT_EQ(same_subvariety(with({"t", "t"}), base, 1, 1 << 16), Sameness::Same);
    EXPECT_EQ(same_subvariety(with({"1", "t"}), with({"t", "1"}), 0, 1 << 16), Sameness::Inconclusive);

    const auto F3 = galois_field(3);
    auto trivial = make_datum(make_constant_extension(F3, 1), 2);
    auto twisted = trivial;
    twisted.twists.push_back({prime_of(F3, "t"), diag_rmat(F3, {"1", "t^2"})});
    EXPECT_EQ(same_subvariety(trivial, twisted, 1, 1 << 16), Sameness::Same);
}

TEST(Components, MatchUnitQuotient) {
    for (std::uint64_t q : {2, 3, 4}) {
        const auto F = galois_field(q);
        const auto primes = enumerate_primes(F, 2);
        for (std::size_t i = 0; i < primes.size(); ++i)
            for (int depth = 1; depth <= 3; ++depth) {
                LevelMap K;
                K.set(primes[i], {LocalLevel::Kind::Congruence, rmat_identity(F, 2), depth});
                std::vector<std::pair<Prime, int>> cong = {{primes[i], depth}};
                const auto& j = primes[(i + 1) % primes.size()];
                if (!(j == primes[i])) {
                    K.set(j, {LocalLevel::Kind::Congruence, rmat_identity(F, 2), 1});
                    cong.push_back({j, 1});
                }
                EXPECT_EQ(count_components(F, K), BigInt(oracle::count_components(F, cong)));
            }
    }
    const auto F3 = galois_field(3);
    EXPECT_EQ(count_components(F3, LevelMap{}), 1);
    LevelMap K;
    K.set(prime_of(F3, "t"), {LocalLevel::Kind::Congruence, rmat_identity(F3, 2), 1});
    EXPECT_EQ(count_components(F3, K), 1);
    K.set(prime_of(F3, "t^2+1"), {LocalLevel::Kind::Congruence, rmat_identity(F3, 2), 1});
    EXPECT_EQ(count_components(F3, K), 8);
}
