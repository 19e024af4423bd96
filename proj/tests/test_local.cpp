#include <gtest/gtest.h>

#include <random>

#include "dmv/lattice.hpp"
#include "dmv/verify/oracles.hpp"

using namespace dmv;

namespace {

Prime prime_of(const Fq& F, const std::string& s) { return make_prime(parse_poly(F, s)); }

LocalElement random_element(const LocalCtx& c, std::mt19937_64& rng, int vmin, int vmax) {
    const int v = vmin + static_cast<int>(rng() % static_cast<std::uint64_t>(vmax - vmin + 1));
    std::vector<Fq::value_type> coeffs(static_cast<std::size_t>(c->degree() * 3));
    for (auto& x : coeffs) x = c->field().random(rng);
    Pol u(c->field(), coeffs);
    if ((u % c->pi()).is_zero()) u = u + Pol::one(c->field());
    if ((u % c->pi()).is_zero()) return LocalElement::zero(c);
    return LocalElement::make(c, v, u, c->cap);
}

LocalMatrix random_unit_matrix(const LocalCtx& c, int r, std::mt19937_64& rng) {
    while (true) {
        LocalMatrix m(c, r, r);
        for (int i = 0; i < r; ++i)
            for (int j = 0; j < r; ++j) m(i, j) = (rng() % 4 == 0) ? LocalElement::zero(c) : random_element(c, rng, 0, 2);
        const auto d = det(m);
        if (d.is_nonzero() && d.valuation() == 0) return m;
    }
}

} // namespace

TEST(LocalElement, ArithmeticIdentities) {
    const auto F = galois_field(3);
    const auto c = make_local(prime_of(F, "t^2+1"), 8);
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 300; ++trial) {
        const auto a = random_element(c, rng, -3, 3);
        const auto b = random_element(c, rng, -3, 3);
        if (!a.is_nonzero() || !b.is_nonzero()) continue;
        EXPECT_EQ((a * b).valuation(), a.valuation() + b.valuation());
        EXPECT_TRUE((a * a.inverse()).approx_equal(LocalElement::one(c)));
        EXPECT_TRUE(((a + b) - b).approx_equal(a));
        EXPECT_GE((a + b).valuation_lower_bound(), std::min(a.valuation(), b.valuation()));
        EXPECT_TRUE(((a / b) * b).approx_equal(a));
    }
}

TEST(LocalElement, ZeroStates) {
    const auto F = galois_field(2);
    const auto c = make_local(prime_of(F, "t"), 6);
    const auto x = LocalElement::from_poly(c, parse_poly(F, "t+1"));
    const auto d = x - x;
    EXPECT_FALSE(d.is_nonzero());
    EXPECT_THROW((void)d.valuation(), Error);
    EXPECT_THROW((void)d.inverse(), Error);
    EXPECT_TRUE(LocalElement::zero(c).is_exact_zero());
    EXPECT_EQ(LocalElement::zero(c).valuation(), kInfiniteValuation);
    EXPECT_THROW((void)LocalElement::zero(c).inverse(), Error);
}

TEST(LocalElement, RationalFunctionValuation) {
    const auto F = galois_field(2);
    const auto c = make_local(prime_of(F, "t"), 6);
    const auto r = parse_ratfunc(F, "(t^3+t^2)/(t+1)^2");
    EXPECT_EQ(LocalElement::from_ratfunc(c, r).valuation(), 2);
    EXPECT_EQ(LocalElement::from_ratfunc(c, parse_ratfunc(F, "1/t")).valuation(), -1);
}

TEST(Smith, ReconstructsAndIsInvariant) {
    std::mt19937_64 rng(12);
    for (std::uint64_t q : {2, 3}) {
        const auto F = galois_field(q);
        const auto c = make_local(prime_of(F, "t"), 12);
        for (int r = 2; r <= 4; ++r)
            for (int trial = 0; trial < 100; ++trial) {
                LocalMatrix m(c, r, r);
                for (int i = 0; i < r; ++i)
                    for (int j = 0; j < r; ++j) m(i, j) = random_element(c, rng, -1, 3);
                std::vector<int> exps;
                try {
                    exps = elementary_divisors(m);
                } catch (const Error& e) {
                    ASSERT_TRUE(e.kind() == ErrorKind::Singular || e.kind() == ErrorKind::PrecisionExhausted);
                    continue;
                }
                EXPECT_TRUE(std::is_sorted(exps.begin(), exps.end()));
                const auto snf = smith_normal_form(m);
                std::vector<int> diag = snf.exponents;
                const auto rebuilt = snf.u * LocalMatrix::diagonal(c, diag) * snf.v;
                for (int i = 0; i < r; ++i)
                    for (int j = 0; j < r; ++j) EXPECT_TRUE(rebuilt(i, j).approx_equal(m(i, j)));
                EXPECT_EQ(det(snf.u).valuation(), 0);
                EXPECT_EQ(det(snf.v).valuation(), 0);
                const auto U = random_unit_matrix(c, r, rng);
                const auto V = random_unit_matrix(c, r, rng);
                EXPECT_EQ(elementary_divisors(U * m * V), exps);
                int total = 0;
                for (int e : exps) total += e;
                EXPECT_EQ(det(m).valuation(), total);
            }
    }
}

TEST(Smith, InverseIsTwoSided) {
    std::mt19937_64 rng(13);
    const auto F = galois_field(5);
    const auto c = make_local(prime_of(F, "t+2"), 10);
    for (int trial = 0; trial < 50; ++trial) {
        LocalMatrix m(c, 3, 3);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) m(i, j) = random_element(c, rng, -2, 2);
        LocalMatrix inv(c, 3, 3);
        try {
            inv = inverse(m);
        } catch (const Error&) {
            continue;
        }
        const auto id = m * inv;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) EXPECT_TRUE(id(i, j).approx_equal(i == j ? LocalElement::one(c) : LocalElement::zero(c)));
    }
}

TEST(Lattice, IndexIsMultiplicativeInTowers) {
    const auto F = galois_field(2);
    const auto c = make_local(prime_of(F, "t^2+t+1"), 10);
    std::mt19937_64 rng(14);
    for (int trial = 0; trial < 40; ++trial) {
        const auto outer = Lattice::standard(c, 3);
        auto b1 = random_unit_matrix(c, 3, rng) * LocalMatrix::diagonal(c, {0, 1, static_cast<int>(rng() % 3)});
        auto b2 = b1 * LocalMatrix::diagonal(c, {static_cast<int>(rng() % 2), 1, 0}) * random_unit_matrix(c, 3, rng);
        const auto mid = Lattice::from_basis(b1);
        const auto inner = Lattice::from_basis(b2);
        ASSERT_TRUE(contains(mid, inner));
        EXPECT_EQ(lattice_index(inner, outer), lattice_index(inner, mid) * lattice_index(mid, outer));
        EXPECT_THROW((void)lattice_index(outer, inner), Error);
    }
}

TEST(Lattice, EqualityIgnoresBasis) {
    const auto F = galois_field(3);
    const auto c = make_local(prime_of(F, "t"), 8);
    std::mt19937_64 rng(15);
    const auto b = LocalMatrix::diagonal(c, {0, 2});
    const auto L1 = Lattice::from_basis(b);
    const auto L2 = Lattice::from_basis(b * random_unit_matrix(c, 2, rng));
    EXPECT_TRUE(L1 == L2);
    EXPECT_FALSE(L1 == Lattice::standard(c, 2));
}

TEST(MatrixGroup, CountMatchesEnumeration) {
    struct Case {
        std::uint64_t q;
        const char* prime;
        int r;
        int k;
    };
    for (const auto& cs : std::vector<Case>{{2, "t", 1, 1}, {2, "t", 1, 4}, {2, "t", 2, 1}, {2, "t", 2, 2}, {3, "t", 2, 1},
                                            {2, "t^2+t+1", 2, 1}, {4, "t", 2, 1}, {5, "t", 1, 2}, {2, "t", 3, 1}}) {
        const auto F = galois_field(cs.q);
        const auto P = prime_of(F, cs.prime);
        const auto want = oracle::count_matrix_group(P, cs.r, cs.k);
        const auto got = count_matrix_group(cs.r, P.residue_size(), cs.k);
        EXPECT_EQ(got.gl, BigInt(want.first)) << cs.q << " " << cs.prime << " r=" << cs.r << " k=" << cs.k;
        EXPECT_EQ(got.mat, BigInt(want.second));
    }
}

TEST(Hermite, FormIsCanonical) {
    const auto F = galois_field(2);
    const auto P = prime_of(F, "t");
    const auto c = make_local(P, 8);
    ChainRing R(P, 3);
    std::mt19937_64 rng(16);
    const auto lattices = enumerate_hermite_sublattices(P, 2, 3);
    std::set<std::vector<std::uint64_t>> keys;
    for (const auto& h : lattices) {
        const auto H = hermite_form(R, h);
        keys.insert(H.key(R));
        auto u = random_unit_matrix(c, 2, rng).residue_mod(3);
        // right multiplication by a unit changes the basis, not the lattice
        EXPECT_EQ(hermite_form(R, pmat_mul(R, h, u)).key(R), H.key(R));
    }
    EXPECT_EQ(keys.size(), lattices.size());
    // sublattices of index 2^n in A^2 number 2^{n+1} - 1 for n = 0..3: 1 + 3 + 7 + 15
    EXPECT_EQ(lattices.size(), 26u);
}

TEST(Stabilizer, StandardLatticeHasIndexOne) {
    const auto F = galois_field(2);
    const auto c = make_local(prime_of(F, "t"), 8);
    const auto S = make_order(c, parse_bivariate(F, "x^2+x+1"), 1);
    EXPECT_EQ(stabilizer_index(S, LocalMatrix::identity(c, 2), 1, 1 << 16).orbit_size, 1u);
}

TEST(Stabilizer, QuadraticUnramifiedExample) {
    // Lambda = A + pi R' inside R' = A[y]/(y^2+y+1) at t over F_2
    const auto F = galois_field(2);
    const auto P = prime_of(F, "t");
    const auto c = make_local(P, 8);
    const auto S = make_order(c, parse_bivariate(F, "x^2+x+1"), 1);
    const auto basis = LocalMatrix::diagonal(c, {0, 1});
    const auto res = stabilizer_index(S, basis, 2, 1 << 16);
    EXPECT_EQ(res.orbit_size, oracle::stabilizer_index(S, basis.residue_mod(2), 2));
    EXPECT_EQ(res.orbit_size, 3u);
    EXPECT_EQ(res.lattice_index, 2);
    EXPECT_TRUE(gitter_inequality(res.orbit_size, res.lattice_index, 2, 2));
}

TEST(Stabilizer, OrbitMatchesExhaustiveGroup) {
    const auto F = galois_field(2);
    const auto P = prime_of(F, "t");
    const auto c = make_local(P, 10);
    for (const char* f : {"x^2+x+1", "x^2+t", "x^2+x", "x^3+x+1", "x^3+t"}) {
        const auto S = make_order(c, parse_bivariate(F, f), 1);
        for (const auto& h : enumerate_hermite_sublattices(P, S.r(), 3)) {
            const auto basis = LocalMatrix::from_polys(c, h);
            const auto divs = elementary_divisors(basis);
            const int k = std::max(1, divs.back());
            ChainRing R(P, k);
            if (!is_saturated(S, R, basis.residue_mod(k))) {
                EXPECT_THROW((void)stabilizer_index(S, basis, k, 1 << 16), Error);
                continue;
            }
            const auto got = stabilizer_index(S, basis, k, 1 << 16);
            EXPECT_EQ(got.orbit_size, oracle::stabilizer_index(S, basis.residue_mod(k), k)) << f;
            // a deeper truncation gives the same index
            EXPECT_EQ(stabilizer_index(S, basis, k + 1, 1 << 16).orbit_size, got.orbit_size) << f;
        }
    }
}

TEST(Stabilizer, BudgetIsEnforced) {
    const auto F = galois_field(2);
    const auto c = make_local(prime_of(F, "t"), 8);
    const auto S = make_order(c, parse_bivariate(F, "x^2+x+1"), 1);
    try {
        (void)stabilizer_index(S, LocalMatrix::diagonal(c, {0, 1}), 2, 1);
        FAIL() << "expected a budget refusal";
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::BudgetExceeded);
    }
}

TEST(Order, RefusesNonMaximalShapes) {
    const auto F = galois_field(2);
    const auto c = make_local(prime_of(F, "t"), 8);
    // y^2 + t^2 is neither squarefree mod t nor Eisenstein
    EXPECT_THROW((void)make_order(c, parse_bivariate(F, "x^2+t^2"), 1), Error);
    EXPECT_EQ(make_order(c, parse_bivariate(F, "x^2+t"), 1).kind, OrderStructure::Kind::Eisenstein);
}
