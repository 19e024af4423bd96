#pragma once

#include <numeric>
#include <string>
#include <tuple>
#include <vector>

#include "dmv/lattice.hpp"

namespace dmv {

enum class ExtensionKind { Constant, Kummer, ArtinSchreier, Generic };

inline std::string to_string(ExtensionKind k) {
    switch (k) {
    case ExtensionKind::Constant: return "constant";
    case ExtensionKind::Kummer: return "kummer";
    case ExtensionKind::ArtinSchreier: return "artin-schreier";
    case ExtensionKind::Generic: return "generic";
    }
    return "unknown";
}

/// A place of F' above a place of F: residue degree f, ramification index e.
struct PlaceType {
    int f = 1;
    int e = 1;
    friend bool operator==(const PlaceType&, const PlaceType&) = default;
};

/// F' = F(y) with y a root of f, monic in x with coefficients in A, and a
/// single place above infinity.
struct Extension {
    ExtensionKind kind = ExtensionKind::Constant;
    Fq base;
    int n = 1;                // Constant / Kummer degree
    Pol a;                    // Kummer / Artin-Schreier datum (normalized)
    std::vector<Pol> f;       // defining polynomial, index = power of x
    int m = 1;                // [F' : F]
    int genus = 0;
    std::uint64_t q_prime = 0; // size of the constant field of F'
    PlaceType infinity;       // the unique place above infinity
    bool separable = true;

    std::uint64_t q() const { return base.order(); }
};

namespace detail {

inline std::vector<Pol> embed_polys(const Fq& big, const std::vector<Pol>& v) {
    std::vector<Pol> out;
    for (const auto& p : v) out.emplace_back(big, p.coeffs());
    return out;
}

/// Residue degrees of the irreducible factors of a squarefree polynomial over k(P).
inline std::vector<int> residue_degrees(const Poly<ResidueField>& g) { return factor_degrees_squarefree(g); }

inline Poly<ResidueField> reduce_in_x(const Residue& res, const std::vector<Pol>& f) {
    std::vector<ResidueField::value_type> c;
    for (const auto& p : f) c.push_back(res.reduce(p));
    return Poly<ResidueField>(res.field, c);
}

} // namespace detail

inline Extension make_constant_extension(const Fq& F, int n) {
    require(n >= 1, ErrorKind::InvalidArgument, "constant extension degree must be >= 1");
    Extension E;
    E.kind = ExtensionKind::Constant;
    E.base = F;
    E.n = n;
    E.m = n;
    E.genus = 0;
    E.q_prime = ipow(F.order(), static_cast<std::uint64_t>(n));
    E.infinity = {n, 1};
    const auto h = first_irreducible(F, n);
    for (std::size_t i = 0; i < h.coeffs().size(); ++i) E.f.push_back(Pol::constant(F, h.coeffs()[i]));
    return E;
}

/// x^n = a(t) with gcd(n, p) = 1.
inline Extension make_kummer_extension(const Fq& F, int n, const Pol& a) {
    require(n >= 2, ErrorKind::UnsupportedShape, "Kummer degree must be >= 2");
    require(std::gcd(static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(F.characteristic())) == 1,
            ErrorKind::UnsupportedShape, "Kummer degree must be prime to the characteristic");
    require(!a.is_zero(), ErrorKind::ReducibleDefiningPolynomial, "x^n = 0 is reducible");
    auto fac = factor(a);
    std::uint64_t g = static_cast<std::uint64_t>(n);
    for (const auto& fa : fac.factors) g = std::gcd(g, static_cast<std::uint64_t>(fa.multiplicity));
    require(g == 1, ErrorKind::UnsupportedShape,
            "x^n - a is not geometrically irreducible (a is a power up to constants)");
    Extension E;
    E.kind = ExtensionKind::Kummer;
    E.base = F;
    E.n = n;
    E.a = a;
    E.m = n;
    E.q_prime = F.order();
    // the infinite place: v(a) = -deg a, residue equation z^g = lc(a)
    const int D = a.degree();
    const int gi = std::gcd(n, D);
    if (gi > 1) {
        auto z = Pol::monomial(F, F.one(), static_cast<std::size_t>(gi)) - Pol::constant(F, a.lead());
        require(is_irreducible(z), ErrorKind::MultipleInfinitePlaces,
                "z^" + std::to_string(gi) + " - " + std::to_string(F.index(a.lead())) + " splits, giving several places over infinity");
    }
    E.infinity = {gi, n / gi};
    // 2g - 2 = -2n + sum (n - gcd(n, v_P)) deg P, including infinity
    long twice = -2L * n + 2;
    long ram = n - std::gcd(n, D);
    for (const auto& fa : fac.factors) ram += static_cast<long>(n - std::gcd(n, fa.multiplicity)) * fa.poly.degree();
    require((twice + ram) % 2 == 0, ErrorKind::InvalidArgument, "inconsistent ramification data");
    E.genus = static_cast<int>((twice + ram) / 2);
    E.f = {-a};
    for (int i = 1; i < n; ++i) E.f.push_back(Pol(F));
    E.f.push_back(Pol::one(F));
    return E;
}

/// x^p - x = a(t), normalized so that p does not divide deg a.
inline Extension make_artin_schreier_extension(const Fq& F, Pol a) {
    const auto p = F.characteristic();
    while (a.degree() > 0 && a.degree() % static_cast<int>(p) == 0) {
        const int j = a.degree() / static_cast<int>(p);
        const auto c = a.lead();
        const auto b = F.pth_root(c);
        a = a - Pol::monomial(F, c, static_cast<std::size_t>(a.degree())) + Pol::monomial(F, b, static_cast<std::size_t>(j));
    }
    require(a.degree() >= 1, ErrorKind::UnsupportedShape,
            "x^p - x = a with a equivalent to a constant is reducible or a constant field extension");
    Extension E;
    E.kind = ExtensionKind::ArtinSchreier;
    E.base = F;
    E.n = static_cast<int>(p);
    E.a = a;
    E.m = static_cast<int>(p);
    E.q_prime = F.order();
    E.genus = static_cast<int>((p - 1) * static_cast<std::uint32_t>(a.degree() - 1) / 2);
    E.infinity = {1, static_cast<int>(p)};
    E.f = {-a, -Pol::one(F)};
    for (std::uint32_t i = 2; i < p; ++i) E.f.push_back(Pol(F));
    E.f.push_back(Pol::one(F));
    return E;
}

/// Caller-supplied shape. Irreducibility is certified by a prime modulo which
/// f stays irreducible (scanning primes up to scan_degree); inseparable input
/// is accepted only as x^p - a(t) with a not a p-th power.
inline Extension make_generic_extension(const Fq& F, std::vector<Pol> f, int genus, int infinity_place_count, PlaceType inf,
                                        int scan_degree = 6) {
    while (!f.empty() && f.back().is_zero()) f.pop_back();
    require(f.size() >= 2 && f.back().is_one(), ErrorKind::MalformedInput, "defining polynomial must be monic in x of degree >= 1");
    require(genus >= 0, ErrorKind::MalformedInput, "genus must be non-negative");
    require(infinity_place_count == 1, ErrorKind::MultipleInfinitePlaces,
            std::to_string(infinity_place_count) + " places over infinity");
    Extension E;
    E.kind = ExtensionKind::Generic;
    E.base = F;
    E.m = static_cast<int>(f.size()) - 1;
    E.n = E.m;
    E.genus = genus;
    E.q_prime = F.order();
    E.infinity = inf;
    require(inf.e * inf.f == E.m, ErrorKind::MalformedInput, "infinity data must satisfy e f = degree");
    const auto p = F.characteristic();
    bool derivative_zero = true;
    for (std::size_t i = 1; i < f.size(); ++i)
        if (!f[i].is_zero() && i % p != 0) derivative_zero = false;
    if (derivative_zero) {
        bool shape = E.m == static_cast<int>(p);
        for (int i = 1; i < E.m; ++i) shape = shape && f[static_cast<std::size_t>(i)].is_zero();
        require(shape, ErrorKind::UnsupportedShape, "only x^p - a(t) is supported among inseparable shapes");
        require(!(-f[0]).derivative().is_zero(), ErrorKind::ReducibleDefiningPolynomial,
                "x^p - a is reducible when a is a p-th power");
        E.separable = false;
        E.a = -f[0];
        E.f = std::move(f);
        return E;
    }
    E.f = f;
    if (E.m == 1) return E;
    bool certified = false;
    for (int d = 1; d <= scan_degree && !certified; ++d)
        for_each_prime_of_degree(F, d, [&](const Prime& P) {
            Residue res(P);
            auto red = detail::reduce_in_x(res, E.f);
            if (red.degree() == E.m && is_irreducible(red)) certified = true;
            return !certified;
        });
    require(certified, ErrorKind::ReducibleDefiningPolynomial,
            "no prime of degree <= " + std::to_string(scan_degree) + " certifies irreducibility");
    return E;
}

/// The same curve over the constant field extension `big` (built over E.base).
inline Extension rebase(const Extension& E, const Fq& big) {
    Extension X = E;
    X.base = big;
    X.f = detail::embed_polys(big, E.f);
    X.a = Pol(big, E.a.coeffs());
    return X;
}

/// Decomposition of P in F'.
struct SplittingType {
    Prime prime;
    std::vector<PlaceType> places; // sorted by (f, e)
    bool unramified = true;

    int total() const {
        int s = 0;
        for (const auto& pl : places) s += pl.e * pl.f;
        return s;
    }
    bool has_degree_one_place() const {
        for (const auto& pl : places)
            if (pl.e * pl.f == 1) return true;
        return false;
    }
};

inline SplittingType splitting(const Extension& E, const Prime& P) {
    require(P.field() == E.base, ErrorKind::InvalidArgument, "prime and extension live over different fields");
    SplittingType st;
    st.prime = P;
    Residue res(P);
    auto finish = [&](std::vector<PlaceType> pl) {
        std::sort(pl.begin(), pl.end(), [](const PlaceType& x, const PlaceType& y) { return std::tie(x.f, x.e) < std::tie(y.f, y.e); });
        st.places = std::move(pl);
        st.unramified = std::all_of(st.places.begin(), st.places.end(), [](const PlaceType& x) { return x.e == 1; });
        return st;
    };
    if (!E.separable) return finish({{1, E.m}});
    if (E.kind == ExtensionKind::Kummer) {
        auto [v, u] = split_pi(E.a, P.poly, INT_MAX);
        if (v > 0) {
            const int g = std::gcd(E.n, v);
            const int e = E.n / g;
            std::vector<ResidueField::value_type> z(static_cast<std::size_t>(g) + 1, res.field.zero());
            z[0] = res.field.neg(res.reduce(u));
            z[static_cast<std::size_t>(g)] = res.field.one();
            std::vector<PlaceType> pl;
            for (int fd : detail::residue_degrees(Poly<ResidueField>(res.field, z))) pl.push_back({fd, e});
            return finish(std::move(pl));
        }
    }
    auto red = detail::reduce_in_x(res, E.f);
    require(is_squarefree(red), ErrorKind::UnsupportedRamifiedPrime,
            "f is not squarefree modulo " + to_string(P.poly) + "; splitting there is not determined by factoring");
    std::vector<PlaceType> pl;
    for (int fd : detail::residue_degrees(red)) pl.push_back({fd, 1});
    return finish(std::move(pl));
}

/// Number of places of F' of degree d (over the constant field of F).
inline BigInt count_places(const Extension& E, int d) {
    require(d >= 1, ErrorKind::InvalidArgument, "place degree must be >= 1");
    BigInt count = 0;
    for (auto dd : divisors(static_cast<std::uint64_t>(d)))
        for_each_prime_of_degree(E.base, static_cast<int>(dd), [&](const Prime& P) {
            for (const auto& pl : splitting(E, P).places)
                if (pl.f * static_cast<int>(dd) == d) ++count;
            return true;
        });
    if (E.infinity.f == d) ++count;
    return count;
}

struct ZetaData {
    int genus = 0;
    std::uint64_t q = 0;
    std::vector<BigInt> point_counts; // N_1..N_g
    std::vector<BigInt> numerator;    // a_0..a_{2g}
    BigInt class_number = 1;
};

/// Degree-one places of F' over F_{q^i} by counting above each t - c and infinity.
inline BigInt count_rational_points(const Extension& E, int i) {
    const Fq big = extend_field(E.base, i);
    const Extension X = rebase(E, big);
    BigInt N = 0;
    for (std::uint64_t c = 0; c < big.order(); ++c) {
        Prime P{Pol(big, {big.neg(big.element(c)), big.one()})};
        for (const auto& pl : splitting(X, P).places)
            if (pl.f == 1) ++N;
    }
    if (i % E.infinity.f == 0) N += E.infinity.f;
    return N;
}

/// P(u) from N_1..N_g via Newton's identities and the functional equation.
inline ZetaData zeta_from_counts(int g, std::uint64_t q, const std::vector<BigInt>& N) {
    ZetaData z;
    z.genus = g;
    z.q = q;
    z.point_counts = N;
    std::vector<BigInt> a(static_cast<std::size_t>(2 * g) + 1, 0);
    a[0] = 1;
    std::vector<BigInt> S(static_cast<std::size_t>(g) + 1, 0);
    for (int j = 1; j <= g; ++j) S[static_cast<std::size_t>(j)] = big_pow(BigInt(q), static_cast<std::uint64_t>(j)) + 1 - N[static_cast<std::size_t>(j - 1)];
    for (int k = 1; k <= g; ++k) {
        BigInt sum = 0;
        for (int j = 1; j <= k; ++j) sum += S[static_cast<std::size_t>(j)] * a[static_cast<std::size_t>(k - j)];
        require(sum % k == 0, ErrorKind::InvalidArgument, "point counts are inconsistent with a zeta numerator");
        a[static_cast<std::size_t>(k)] = -sum / k;
    }
    for (int i = 0; i < g; ++i) a[static_cast<std::size_t>(2 * g - i)] = big_pow(BigInt(q), static_cast<std::uint64_t>(g - i)) * a[static_cast<std::size_t>(i)];
    z.numerator = a;
    z.class_number = 0;
    for (const auto& c : a) z.class_number += c;
    return z;
}

/// Zeta numerator of F'; `budget` caps the number of fibres inspected.
inline ZetaData zeta_numerator(const Extension& E, std::uint64_t budget) {
    if (E.genus == 0) return zeta_from_counts(0, E.q_prime, {});
    require(E.kind != ExtensionKind::Constant, ErrorKind::InvalidArgument, "constant extensions have genus zero");
    BigInt work = 0;
    for (int i = 1; i <= E.genus; ++i) work += big_pow(BigInt(E.q()), static_cast<std::uint64_t>(i));
    require(work <= budget, ErrorKind::BudgetExceeded, "point counting needs " + work.str() + " fibres, budget " + std::to_string(budget));
    std::vector<BigInt> N;
    for (int i = 1; i <= E.genus; ++i) N.push_back(count_rational_points(E, i));
    return zeta_from_counts(E.genus, E.q(), N);
}

inline BigInt class_number(const Extension& E, std::uint64_t budget) { return zeta_numerator(E, budget).class_number; }

/// D = h(F') * i.
inline BigInt predegree(const Extension& E, const BigInt& i, std::uint64_t budget) {
    require(i >= 1, ErrorKind::InvalidArgument, "index must be >= 1");
    return class_number(E, budget) * i;
}

/// The local order A_P[y] without a maximality check.
inline OrderStructure order_at(const Extension& E, const LocalCtx& ctx, int r_prime) {
    return OrderStructure{ctx, E.f, E.m, r_prime, OrderStructure::Kind::Unramified};
}

} // namespace dmv
