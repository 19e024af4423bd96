#pragma once

#include <random>
#include <string>
#include <vector>

#include "dmv/lattice.hpp"

namespace dmv {

struct NewtonSegment {
    Rational slope;
    int length = 0;
};

/// Lower convex hull of (i, v(a_i)).
struct NewtonPolygon {
    std::vector<std::pair<int, int>> points; // certified (i, v(a_i))
    std::vector<NewtonSegment> segments;

    /// Root valuations (-slope, with multiplicity), ascending.
    std::vector<Rational> root_valuations() const {
        std::vector<Rational> out;
        for (const auto& s : segments)
            for (int i = 0; i < s.length; ++i) out.push_back(-s.slope);
        std::sort(out.begin(), out.end());
        return out;
    }
};

namespace detail {

inline std::vector<std::pair<int, int>> lower_hull(const std::vector<std::pair<int, int>>& pts) {
    std::vector<std::pair<int, int>> h;
    for (const auto& p : pts) {
        while (h.size() >= 2) {
            const auto& a = h[h.size() - 2];
            const auto& b = h.back();
            // drop b when it lies on or above segment a-p
            const long long cross = static_cast<long long>(b.first - a.first) * (p.second - a.second) -
                                    static_cast<long long>(b.second - a.second) * (p.first - a.first);
            if (cross <= 0)
                h.pop_back();
            else
                break;
        }
        h.push_back(p);
    }
    return h;
}

inline Rational hull_value(const std::vector<std::pair<int, int>>& hull, int i) {
    for (std::size_t s = 0; s + 1 < hull.size(); ++s) {
        const auto& a = hull[s];
        const auto& b = hull[s + 1];
        if (a.first <= i && i <= b.first)
            return Rational(a.second) + Rational(b.second - a.second, b.first - a.first) * (i - a.first);
    }
    return Rational(hull.front().second);
}

} // namespace detail

/// Newton polygon of a_0 + a_1 x + ... + a_r x^r. Exact zeros are skipped; an
/// inexact zero is skipped when it provably lies on or above the hull of
/// the other points, otherwise PrecisionExhausted.
inline NewtonPolygon newton_polygon(const std::vector<LocalElement>& coeffs) {
    NewtonPolygon np;
    std::vector<std::pair<int, int>> unknown;
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
        const auto& c = coeffs[i];
        if (c.is_nonzero())
            np.points.emplace_back(static_cast<int>(i), c.valuation());
        else if (c.is_inexact_zero())
            unknown.emplace_back(static_cast<int>(i), c.valuation_lower_bound());
    }
    require(!np.points.empty(), ErrorKind::PrecisionExhausted, "no coefficient has a certified valuation");
    auto hull = detail::lower_hull(np.points);
    for (const auto& [i, n] : unknown) {
        const bool inside = hull.front().first <= i && i <= hull.back().first;
        require(inside && Rational(n) >= detail::hull_value(hull, i), ErrorKind::PrecisionExhausted,
                "coefficient " + std::to_string(i) + " is O(pi^" + std::to_string(n) + ") and may lower the polygon");
    }
    for (std::size_t s = 0; s + 1 < hull.size(); ++s) {
        const int len = hull[s + 1].first - hull[s].first;
        np.segments.push_back({Rational(hull[s + 1].second - hull[s].second, len), len});
    }
    return np;
}

/// Bounded image in PGL_r iff the characteristic polynomial has a single slope.
inline bool projectively_bounded(const LocalMatrix& g) {
    auto cp = char_poly(g);
    require(!cp[0].is_exact_zero(), ErrorKind::Singular, "matrix is singular");
    return newton_polygon(cp).segments.size() == 1;
}

/// e_r - e_1 for the Smith form of g^n.
inline int snf_spread(const LocalMatrix& g, int n) {
    LocalMatrix p = LocalMatrix::identity(g.context(), g.rows());
    for (int i = 0; i < n; ++i) p = p * g;
    auto e = elementary_divisors(p);
    return e.back() - e.front();
}

inline LocalMatrix matrix_power(const LocalMatrix& g, int n) {
    LocalMatrix p = LocalMatrix::identity(g.context(), g.rows());
    for (int i = 0; i < n; ++i) p = p * g;
    return p;
}

/// diag(pi^{-1}, 1, ..., 1).
inline LocalMatrix standard_hecke_matrix(const LocalCtx& c, int r) {
    std::vector<int> e(static_cast<std::size_t>(r), 0);
    e[0] = -1;
    return LocalMatrix::diagonal(c, e);
}

/// Companion matrix of lambda^r - pi (single slope, r-th power scalar).
inline LocalMatrix pi_companion(const LocalCtx& c, int r) {
    LocalMatrix m(c, r, r);
    for (int i = 1; i < r; ++i) m(i, i - 1) = LocalElement::one(c);
    m(0, r - 1) = LocalElement::pi_power(c, 1);
    return m;
}

struct HeckeDegree {
    BigInt degree;
    std::uint64_t enumerated = 0; // |Mat_r(A/pi^k)|
    std::uint64_t fixed = 0;      // elements of K(P^k) cap g^{-1} K(P^k) g modulo K(P^{2k})
};

/// [K : K cap g^{-1} K g] for K = 1 + pi^k Mat_r(A_P), by counting the
/// X in Mat_r(A/pi^k) with g X g^{-1} integral.
inline HeckeDegree hecke_degree(const LocalMatrix& g, int k, std::uint64_t budget) {
    require(k >= 1, ErrorKind::InvalidArgument, "level depth must be >= 1");
    const auto& c = g.context();
    const int r = g.rows();
    const auto ginv = inverse(g);
    require(g.min_valuation() + ginv.min_valuation() >= -k, ErrorKind::QuotientInsufficient,
            "K(P^" + std::to_string(2 * k) + ") is not contained in g^{-1} K(P^" + std::to_string(k) + ") g");
    ChainRing R(c->prime, k);
    const int dk = R.dim();
    const int nbasis = r * r * dk;
    const BigInt total = big_pow(BigInt(c->field().order()), static_cast<std::uint64_t>(nbasis));
    require(total <= budget, ErrorKind::BudgetExceeded,
            "quotient has " + total.str() + " elements, budget " + std::to_string(budget));
    const auto& F = c->field();
    const auto pik = LocalElement::pi_power(c, k);
    // image of the basis element t^l E_ab in (A/pi^k)^{r x r}, flattened to F_q coordinates
    const int len = r * r * dk;
    std::vector<std::vector<Fq::value_type>> images;
    for (int a = 0; a < r; ++a)
        for (int b = 0; b < r; ++b) {
            std::vector<Pol> w; // w_ij = pi^k g_ia ginv_bj mod pi^k
            for (int i = 0; i < r; ++i)
                for (int j = 0; j < r; ++j) w.push_back((pik * g(i, a) * ginv(b, j)).residue_mod(k));
            for (int l = 0; l < dk; ++l) {
                std::vector<Fq::value_type> img(static_cast<std::size_t>(len), F.zero());
                const Pol tl = Pol::monomial(F, F.one(), static_cast<std::size_t>(l));
                for (std::size_t ij = 0; ij < w.size(); ++ij) {
                    const Pol v = R.mul(w[ij], tl);
                    for (int s = 0; s < dk; ++s) img[ij * static_cast<std::size_t>(dk) + static_cast<std::size_t>(s)] = v.coeff(static_cast<std::size_t>(s));
                }
                images.push_back(std::move(img));
            }
        }
    // odometer over all F_q-combinations, maintaining the accumulated image
    const auto q = F.order();
    std::vector<std::uint64_t> digit(static_cast<std::size_t>(nbasis), 0);
    std::vector<Fq::value_type> acc(static_cast<std::size_t>(len), F.zero());
    auto is_zero = [&] {
        for (auto v : acc)
            if (v != F.zero()) return false;
        return true;
    };
    std::uint64_t count = 0;
    const auto n = static_cast<std::uint64_t>(total);
    for (std::uint64_t step = 0; step < n; ++step) {
        if (is_zero()) ++count;
        for (std::size_t pos = 0; pos < digit.size(); ++pos) {
            const auto old = F.element(digit[pos]);
            digit[pos] = (digit[pos] + 1) % q;
            const auto delta = F.sub(F.element(digit[pos]), old);
            const auto& img = images[pos];
            for (std::size_t s = 0; s < acc.size(); ++s) acc[s] = F.add(acc[s], F.mul(delta, img[s]));
            if (digit[pos] != 0) break;
        }
    }
    HeckeDegree res;
    res.enumerated = n;
    res.fixed = count;
    res.degree = total / count;
    return res;
}

/// A Hecke element g = s diag(pi^{-1}, 1, ..., 1) s^{-1}.
struct HeckeElement {
    LocalMatrix g;
    LocalMatrix conjugator; // s
    BigInt declared_degree;
    int r = 0;
};

/// Hensel lift of a simple root (given modulo P) of a monic f with coefficients in A.
inline LocalElement hensel_root(const LocalCtx& c, const std::vector<Pol>& f, const Pol& root_mod_p) {
    std::vector<LocalElement> fl, dfl;
    for (const auto& a : f) fl.push_back(LocalElement::from_poly(c, a));
    for (std::size_t i = 1; i < f.size(); ++i) dfl.push_back(LocalElement::from_int(c, static_cast<std::int64_t>(i)) * fl[i]);
    auto eval = [&](const std::vector<LocalElement>& p, const LocalElement& x) {
        LocalElement acc = LocalElement::zero(c);
        for (std::size_t i = p.size(); i-- > 0;) acc = acc * x + p[i];
        return acc;
    };
    LocalElement x = LocalElement::from_poly(c, root_mod_p);
    require(eval(fl, x).valuation_lower_bound() >= 1, ErrorKind::InvalidArgument, "not a root modulo the prime");
    const auto d = eval(dfl, x);
    require(d.is_nonzero() && d.valuation() == 0, ErrorKind::InvalidArgument, "root is not simple modulo the prime");
    for (int it = 0; it < c->cap + 2; ++it) {
        const auto fx = eval(fl, x);
        if (!fx.is_nonzero()) break;
        x = x - fx / eval(dfl, x);
    }
    return x;
}

namespace detail {

/// Greedy choice of columns of `m` whose reductions mod P are independent,
/// appended to `chosen` (reduced vectors kept in echelon form in `basis`).
inline void pick_independent(const Residue& res, const LocalMatrix& m, int want, std::vector<std::vector<ResidueField::value_type>>& basis,
                             std::vector<std::size_t>& pivots, std::vector<LocalMatrix>& chosen) {
    const auto& K = res.field;
    const int r = m.rows();
    int got = 0;
    for (int j = 0; j < m.cols() && got < want; ++j) {
        std::vector<ResidueField::value_type> v;
        for (int i = 0; i < r; ++i) v.push_back(res.reduce(m(i, j).residue_mod(1)));
        for (std::size_t b = 0; b < basis.size(); ++b) {
            const auto& piv = v[pivots[b]];
            if (K.is_zero(piv)) continue;
            for (int i = 0; i < r; ++i) v[static_cast<std::size_t>(i)] = K.sub(v[static_cast<std::size_t>(i)], K.mul(piv, basis[b][static_cast<std::size_t>(i)]));
        }
        std::size_t p = 0;
        while (p < v.size() && K.is_zero(v[p])) ++p;
        if (p == v.size()) continue;
        const auto inv = K.inv(v[p]);
        for (auto& e : v) e = K.mul(e, inv);
        basis.push_back(v);
        pivots.push_back(p);
        chosen.push_back(m.column(j));
        ++got;
    }
    require(got == want, ErrorKind::PrecisionExhausted, "could not find enough independent columns modulo the prime");
}

} // namespace detail

/// Builds the Hecke element attached to a degree-one place: `f` is the
/// generator polynomial of A' over A, `root` a simple root of f mod P,
/// `s` the level conjugator and `twist` the local deviation of b.
inline HeckeElement exhecke_element(const OrderStructure& S, const LocalMatrix& s, const LocalMatrix& twist, const Pol& root) {
    const auto& c = S.ctx;
    const int r = S.r();
    const int rp = S.r_prime;
    const auto sinv = inverse(s);
    const auto tinv = inverse(twist);
    const LocalMatrix M = sinv * tinv * S.multiplication_local() * twist * s;
    require(M.is_integral(), ErrorKind::InvalidArgument, "lattice is not stable under the order");
    const auto ct = hensel_root(c, S.f, root);
    // G(y) = f(y) / (y - ct), coefficients high to low by synthetic division
    std::vector<LocalElement> G(static_cast<std::size_t>(S.m), LocalElement::zero(c));
    LocalElement carry = LocalElement::one(c);
    for (int j = S.m - 1; j >= 0; --j) {
        G[static_cast<std::size_t>(j)] = carry;
        carry = LocalElement::from_poly(c, S.f[static_cast<std::size_t>(j)]) + ct * carry;
    }
    LocalMatrix GM(c, r, r);
    LocalElement Gc = LocalElement::zero(c);
    const auto I = LocalMatrix::identity(c, r);
    for (int j = S.m - 1; j >= 0; --j) {
        GM = GM * M + I.scaled(G[static_cast<std::size_t>(j)]);
        Gc = Gc * ct + G[static_cast<std::size_t>(j)];
    }
    const LocalMatrix E = GM.scaled(Gc.inverse());
    Residue res(c->prime);
    std::vector<std::vector<ResidueField::value_type>> basis;
    std::vector<std::size_t> pivots;
    std::vector<LocalMatrix> cols;
    detail::pick_independent(res, E, rp, basis, pivots, cols);
    detail::pick_independent(res, I - E, r - rp, basis, pivots, cols);
    LocalMatrix P(c, r, r);
    for (int j = 0; j < r; ++j)
        for (int i = 0; i < r; ++i) P(i, j) = cols[static_cast<std::size_t>(j)](i, 0);
    const LocalMatrix sp = s * P;
    HeckeElement h;
    h.r = r;
    h.conjugator = sp;
    h.g = sp * standard_hecke_matrix(c, r) * inverse(sp);
    h.declared_degree = big_pow(BigInt(c->residue_size()), static_cast<std::uint64_t>(r - 1));
    return h;
}

struct SampleOutcome {
    int v_a0 = 0;
    int v_ar1 = 0;
    std::size_t segments = 0;
    bool pass = false;
};

/// v(a_0) = v(a_{r-1}) = -1 and at least two Newton segments.
inline SampleOutcome check_sample(const LocalMatrix& m) {
    const int r = m.rows();
    auto cp = char_poly(m);
    SampleOutcome o;
    o.v_a0 = cp[0].valuation();
    o.v_ar1 = cp[static_cast<std::size_t>(r - 1)].valuation();
    o.segments = newton_polygon(cp).segments.size();
    o.pass = o.v_a0 == -1 && o.v_ar1 == -1 && o.segments >= 2;
    return o;
}

struct SampleReport {
    int samples = 0;
    int passed = 0;
    std::vector<int> violations; // sample indices
};

/// Random element 1 + pi X of the depth-1 congruence group.
template <class Rng>
LocalMatrix random_congruence_element(const LocalCtx& c, int r, Rng& rng) {
    const auto& F = c->field();
    const int n = c->degree() * c->cap;
    LocalMatrix k = LocalMatrix::identity(c, r);
    const auto pi = LocalElement::pi_power(c, 1);
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < r; ++j) {
            std::vector<Fq::value_type> v(static_cast<std::size_t>(n));
            for (auto& x : v) x = F.random(rng);
            k(i, j) += pi * LocalElement::from_poly(c, Pol(F, v));
        }
    return k;
}

/// Samples k_1 g k_2 with k_i in the depth-1 congruence group (g given in
/// level-aligned coordinates) and checks each characteristic polynomial.
inline SampleReport unboundedness_sample_check(const LocalMatrix& g, int samples, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    SampleReport rep;
    rep.samples = samples;
    for (int s = 0; s < samples; ++s) {
        auto k1 = random_congruence_element(g.context(), g.rows(), rng);
        auto k2 = random_congruence_element(g.context(), g.rows(), rng);
        if (check_sample(k1 * g * k2).pass)
            ++rep.passed;
        else
            rep.violations.push_back(s);
    }
    return rep;
}

} // namespace dmv
