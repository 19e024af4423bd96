#pragma once

// Brute-force reference computations for the test suite. Each one enumerates the defining
// finite set directly and shares no algorithm with the library beyond
// field arithmetic.

#include <map>
#include <set>

#include "dmv/goodprime.hpp"

namespace oracle {

using namespace dmv;

/// Every monic polynomial of degree d over f.
inline std::vector<Pol> monic_polys(const Fq& f, int d) {
    std::vector<Pol> out;
    const auto n = ipow(f.order(), static_cast<std::uint64_t>(d));
    for (std::uint64_t c = 0; c < n; ++c) {
        std::vector<Fq::value_type> v(static_cast<std::size_t>(d) + 1);
        auto x = c;
        for (int i = 0; i < d; ++i) {
            v[static_cast<std::size_t>(i)] = f.element(x % f.order());
            x /= f.order();
        }
        v[static_cast<std::size_t>(d)] = f.one();
        out.emplace_back(f, std::move(v));
    }
    return out;
}

/// Irreducibility by trial division.
inline bool is_irreducible(const Pol& p) {
    if (p.degree() < 1) return false;
    for (int d = 1; 2 * d <= p.degree(); ++d)
        for (const auto& g : monic_polys(p.field(), d))
            if ((p % g).is_zero()) return false;
    return true;
}

/// Monic irreducible count of degree d by enumeration.
inline std::uint64_t count_irreducible(const Fq& f, int d) {
    std::uint64_t n = 0;
    for (const auto& g : monic_polys(f, d))
        if (is_irreducible(g)) ++n;
    return n;
}

/// Determinant over a commutative ring given by `reduce`, by permutation expansion.
template <class Reduce>
Pol permutation_det(const PMat& a, Reduce&& reduce) {
    const std::size_t n = a.size();
    std::vector<std::size_t> perm(n);
    for (std::size_t i = 0; i < n; ++i) perm[i] = i;
    const auto& F = a[0][0].field();
    Pol total(F);
    do {
        int inversions = 0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j)
                if (perm[i] > perm[j]) ++inversions;
        Pol term = Pol::one(F);
        for (std::size_t i = 0; i < n; ++i) term = reduce(term * a[i][perm[i]]);
        total = reduce(inversions % 2 ? total - term : total + term);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return total;
}

/// All r x r matrices over A/t^k (residue field F) by code.
inline PMat matrix_from_code(const ChainRing& R, int r, std::uint64_t code) {
    PMat m(static_cast<std::size_t>(r), std::vector<Pol>(static_cast<std::size_t>(r)));
    for (auto& row : m)
        for (auto& e : row) {
            e = R.element(code % R.size());
            code /= R.size();
        }
    return m;
}

/// |GL_r(A/P^k)| and |Mat_r(A/P^k)| by enumerating matrices and testing the determinant mod P.
inline std::pair<std::uint64_t, std::uint64_t> count_matrix_group(const Prime& P, int r, int k) {
    ChainRing R(P, k);
    const auto total = ipow(R.size(), static_cast<std::uint64_t>(r * r));
    std::uint64_t gl = 0;
    for (std::uint64_t c = 0; c < total; ++c) {
        auto m = matrix_from_code(R, r, c);
        auto d = permutation_det(m, [&](const Pol& x) { return x % P.poly; });
        if (!d.is_zero()) ++gl;
    }
    return {gl, total};
}

/// [K : K cap g^{-1} K g] for K = 1 + pi^k Mat_r(A_P), by listing coset
/// representatives of K/K(P^{2k}) and comparing them pairwise.
inline std::uint64_t hecke_degree(const LocalMatrix& g, int k) {
    const auto& c = g.context();
    const int r = g.rows();
    ChainRing R(c->prime, k);
    const auto ginv = inverse(g);
    const auto total = ipow(R.size(), static_cast<std::uint64_t>(r * r));
    const auto pik = LocalElement::pi_power(c, k);
    std::vector<LocalMatrix> reps;
    for (std::uint64_t code = 0; code < total; ++code) {
        auto X = matrix_from_code(R, r, code);
        auto kx = LocalMatrix::identity(c, r) + LocalMatrix::from_polys(c, X).scaled(pik);
        bool fresh = true;
        for (const auto& y : reps) {
            // same coset iff g y^{-1} k_x g^{-1} lies in K
            auto z = g * inverse(y) * kx * ginv - LocalMatrix::identity(c, r);
            if (z.min_valuation() >= k) {
                fresh = false;
                break;
            }
        }
        if (fresh) reps.push_back(kx);
    }
    return reps.size();
}

/// Reduced row echelon form over F_q of the F_q-span of t^l * (columns of
/// `gens`) inside (A/pi^k)^r; a canonical key of the submodule.
inline std::vector<std::vector<Fq::value_type>> span_key(const ChainRing& R, const PMat& gens) {
    const auto& F = R.field();
    const std::size_t r = gens.size(), dk = static_cast<std::size_t>(R.dim());
    std::vector<std::vector<Fq::value_type>> rows;
    for (std::size_t j = 0; j < (r ? gens[0].size() : 0); ++j)
        for (std::size_t l = 0; l < dk; ++l) {
            std::vector<Fq::value_type> v(r * dk, F.zero());
            const Pol tl = Pol::monomial(F, F.one(), l);
            for (std::size_t i = 0; i < r; ++i) {
                const Pol e = R.mul(gens[i][j], tl);
                for (std::size_t s = 0; s < dk; ++s) v[i * dk + s] = e.coeff(s);
            }
            rows.push_back(std::move(v));
        }
    std::size_t rank = 0;
    for (std::size_t col = 0; col < r * dk && rank < rows.size(); ++col) {
        std::size_t piv = rank;
        while (piv < rows.size() && F.is_zero(rows[piv][col])) ++piv;
        if (piv == rows.size()) continue;
        std::swap(rows[rank], rows[piv]);
        const auto inv = F.inv(rows[rank][col]);
        for (auto& x : rows[rank]) x = F.mul(x, inv);
        for (std::size_t o = 0; o < rows.size(); ++o) {
            if (o == rank || F.is_zero(rows[o][col])) continue;
            const auto f = rows[o][col];
            for (std::size_t c = 0; c < r * dk; ++c) rows[o][c] = F.sub(rows[o][c], F.mul(f, rows[rank][c]));
        }
        ++rank;
    }
    rows.resize(rank);
    return rows;
}

/// Orbit size of Lambda/pi^k under every element of GL_{r'}(R'/pi^k),
/// the group being listed exhaustively as block matrices over A/pi^k.
inline std::uint64_t stabilizer_index(const OrderStructure& S, const PMat& basis, int k) {
    ChainRing R(S.ctx->prime, k);
    const int m = S.m, rp = S.r_prime;
    PMat comp = S.companion();
    // elements of R'/pi^k as m x m blocks sum c_j C^j
    std::vector<PMat> powers = {pmat_identity(R.field(), m)};
    for (int j = 1; j < m; ++j) powers.push_back(pmat_mul(R, comp, powers.back()));
    const auto ring_size = ipow(R.size(), static_cast<std::uint64_t>(m));
    auto element_block = [&](std::uint64_t code) {
        PMat b(static_cast<std::size_t>(m), std::vector<Pol>(static_cast<std::size_t>(m), Pol(R.field())));
        for (int j = 0; j < m; ++j) {
            const Pol cj = R.element(code % R.size());
            code /= R.size();
            for (int a = 0; a < m; ++a)
                for (int bb = 0; bb < m; ++bb)
                    b[static_cast<std::size_t>(a)][static_cast<std::size_t>(bb)] =
                        R.reduce(b[static_cast<std::size_t>(a)][static_cast<std::size_t>(bb)] + cj * powers[static_cast<std::size_t>(j)][static_cast<std::size_t>(a)][static_cast<std::size_t>(bb)]);
        }
        return b;
    };
    const auto count = ipow(ring_size, static_cast<std::uint64_t>(rp * rp));
    const int n = m * rp;
    std::set<std::vector<std::vector<Fq::value_type>>> orbit;
    for (std::uint64_t code = 0; code < count; ++code) {
        PMat g(static_cast<std::size_t>(n), std::vector<Pol>(static_cast<std::size_t>(n), Pol(R.field())));
        auto x = code;
        for (int a = 0; a < rp; ++a)
            for (int b = 0; b < rp; ++b) {
                auto blk = element_block(x % ring_size);
                x /= ring_size;
                for (int i = 0; i < m; ++i)
                    for (int j = 0; j < m; ++j)
                        g[static_cast<std::size_t>(a * m + i)][static_cast<std::size_t>(b * m + j)] = blk[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
            }
        auto d = permutation_det(g, [&](const Pol& y) { return y % S.ctx->pi(); });
        if (d.is_zero()) continue;
        orbit.insert(span_key(R, pmat_mul(R, g, basis)));
    }
    return orbit.size();
}

/// |prod (A/P^k)^* / F_q^*| by listing unit tuples and their F_q^*-orbits.
inline std::uint64_t count_components(const Fq& F, const std::vector<std::pair<Prime, int>>& congruence) {
    if (congruence.empty()) return 1;
    std::vector<ChainRing> rings;
    for (const auto& [P, k] : congruence) rings.emplace_back(P, k);
    std::vector<std::vector<Pol>> units(rings.size());
    for (std::size_t i = 0; i < rings.size(); ++i)
        for (std::uint64_t c = 0; c < rings[i].size(); ++c) {
            auto a = rings[i].element(c);
            if (!(a % rings[i].prime.poly).is_zero()) units[i].push_back(a);
        }
    std::set<std::vector<std::uint64_t>> classes;
    std::vector<std::size_t> idx(rings.size(), 0);
    while (true) {
        std::vector<std::uint64_t> best;
        for (std::uint64_t s = 1; s < F.order(); ++s) {
            const Pol sc = Pol::constant(F, F.element(s));
            std::vector<std::uint64_t> key;
            for (std::size_t i = 0; i < rings.size(); ++i) key.push_back(rings[i].code(rings[i].mul(sc, units[i][idx[i]])));
            if (best.empty() || key < best) best = key;
        }
        classes.insert(best);
        std::size_t pos = 0;
        while (pos < idx.size() && ++idx[pos] == units[pos].size()) idx[pos++] = 0;
        if (pos == idx.size()) break;
    }
    return classes.size();
}

/// Affine solutions of y^2 = f(t) (odd q) over F_{q^i}, plus the points at infinity.
inline std::uint64_t hyperelliptic_points(const Fq& base, const Pol& f, int i) {
    const Fq big = extend_field(base, i);
    const Pol F(big, f.coeffs());
    std::uint64_t n = 0;
    for (std::uint64_t t = 0; t < big.order(); ++t) {
        const auto v = F.eval(big.element(t));
        for (std::uint64_t y = 0; y < big.order(); ++y)
            if (big.mul(big.element(y), big.element(y)) == v) ++n;
    }
    // odd degree model: one point at infinity
    return n + 1;
}

/// Class number from N_1..N_n via the divisor counts A_d = [u^d] Z(u) and
/// A_n = h (q^{n+1-g} - 1)/(q - 1) for n >= 2g - 1.
inline BigInt class_number_from_divisors(std::uint64_t q, int g, const std::vector<BigInt>& N) {
    const int n = std::max(2 * g - 1, 1);
    // Z(u) = exp(sum N_i u^i / i), as exact rational power series up to u^n
    std::vector<Rational> L(static_cast<std::size_t>(n) + 1, Rational(0));
    for (int i = 1; i <= n; ++i) L[static_cast<std::size_t>(i)] = Rational(N[static_cast<std::size_t>(i - 1)], i);
    std::vector<Rational> Z(static_cast<std::size_t>(n) + 1, Rational(0));
    Z[0] = 1;
    // Z' = L' Z
    for (int d = 1; d <= n; ++d) {
        Rational s = 0;
        for (int i = 1; i <= d; ++i) s += Rational(i) * L[static_cast<std::size_t>(i)] * Z[static_cast<std::size_t>(d - i)];
        Z[static_cast<std::size_t>(d)] = s / d;
    }
    const Rational An = Z[static_cast<std::size_t>(n)];
    const BigInt denom = (big_pow(BigInt(q), static_cast<std::uint64_t>(n + 1 - g)) - 1) / (q - 1);
    const Rational h = An / Rational(denom);
    if (denominator(h) != 1) return -1;
    return numerator(h);
}

} // namespace oracle
