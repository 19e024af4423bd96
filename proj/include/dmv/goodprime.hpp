#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "dmv/extension.hpp"
#include "dmv/hecke.hpp"

namespace dmv {

/// Matrix over F = F_q(t); twists and level conjugators are global and exact.
using RMat = std::vector<std::vector<RatFunc>>;

inline RMat rmat_identity(const Fq& F, int r) {
    RMat m(static_cast<std::size_t>(r), std::vector<RatFunc>(static_cast<std::size_t>(r), RatFunc::from(Pol(F))));
    for (int i = 0; i < r; ++i) m[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] = RatFunc::from(Pol::one(F));
    return m;
}

inline LocalMatrix to_local(const LocalCtx& c, const RMat& m) {
    const int r = static_cast<int>(m.size());
    LocalMatrix out(c, r, r);
    for (int i = 0; i < r; ++i) {
        require(static_cast<int>(m[static_cast<std::size_t>(i)].size()) == r, ErrorKind::MalformedInput, "matrix must be square");
        for (int j = 0; j < r; ++j) out(i, j) = LocalElement::from_ratfunc(c, m[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]);
    }
    return out;
}

struct LocalLevel {
    enum class Kind { Maximal, Congruence };
    Kind kind = Kind::Maximal;
    RMat s;
    int depth = 0;
};

/// Finitely supported level; Maximal(identity) off the support.
struct LevelMap {
    std::vector<std::pair<Prime, LocalLevel>> entries;

    const LocalLevel* find(const Prime& p) const {
        for (const auto& [q, l] : entries)
            if (q == p) return &l;
        return nullptr;
    }
    LocalLevel at(const Prime& p, int r) const {
        if (const auto* l = find(p)) return *l;
        return {LocalLevel::Kind::Maximal, rmat_identity(p.field(), r), 0};
    }
    void set(const Prime& p, LocalLevel l) {
        for (auto& [q, old] : entries)
            if (q == p) {
                old = std::move(l);
                return;
            }
        entries.emplace_back(p, std::move(l));
    }
    bool amply_small() const {
        for (const auto& [p, l] : entries)
            if (l.kind == LocalLevel::Kind::Congruence && l.depth >= 1) return true;
        return false;
    }
};

struct Twist {
    Prime prime;
    RMat matrix;
};

/// (F', b) with b given by local twists of the standard power-basis map, plus a level.
struct SubvarietyDatum {
    Extension ext;
    int r = 1;
    int r_prime = 1;
    std::vector<Twist> twists;
    LevelMap level;
    std::optional<BigInt> index_override; // replaces i(X) when set

    RMat twist_at(const Prime& p) const {
        for (const auto& t : twists)
            if (t.prime == p) return t.matrix;
        return rmat_identity(p.field(), r);
    }
};

inline SubvarietyDatum make_datum(Extension E, int r) {
    require(r >= 1 && r % E.m == 0, ErrorKind::InvalidArgument,
            "r = " + std::to_string(r) + " is not a multiple of [F':F] = " + std::to_string(E.m));
    SubvarietyDatum X;
    X.r = r;
    X.r_prime = r / E.m;
    X.ext = std::move(E);
    return X;
}

/// s^{-1} T^{-1} C_y T s for the block-companion action of y.
inline LocalMatrix conjugated_multiplication(const SubvarietyDatum& X, const LocalCtx& c, const RMat& s) {
    const auto S = order_at(X.ext, c, X.r_prime);
    const auto T = to_local(c, X.twist_at(c->prime));
    const auto sl = to_local(c, s);
    return inverse(sl) * inverse(T) * S.multiplication_local() * T * sl;
}

struct GoodPrimeCertificate {
    Prime prime;
    RMat s;
    PlaceType witness;      // the place above P of local degree one
    Pol root;               // simple root of f mod P cutting out that place
    LocalMatrix stability;  // s^{-1} T^{-1} C_y T s, integral
};

struct GoodPrimeCheck {
    std::optional<GoodPrimeCertificate> certificate;
    std::vector<std::string> failed; // subset of {"a", "b", "c"}
};

namespace detail {

/// A simple root in k(P) of f mod P, lifted to A.
inline std::optional<Pol> simple_residue_root(const Extension& E, const Prime& P) {
    Residue res(P);
    auto red = reduce_in_x(res, E.f);
    auto fac = factor(red);
    for (const auto& fa : fac.factors)
        if (fa.poly.degree() == 1 && fa.multiplicity == 1) return res.lift(res.field.neg(fa.poly.coeff(0)));
    return std::nullopt;
}

} // namespace detail

/// Conditions (a) depth-one congruence level, (b) a place of local degree one,
/// (c) stability of the transported lattice under y.
inline GoodPrimeCheck is_good_prime(const SubvarietyDatum& X, const Prime& P, int precision = kDefaultPrecision) {
    GoodPrimeCheck out;
    const auto level = X.level.at(P, X.r);
    if (!(level.kind == LocalLevel::Kind::Congruence && level.depth == 1)) out.failed.push_back("a");
    const auto st = splitting(X.ext, P);
    PlaceType witness{0, 0};
    for (const auto& pl : st.places)
        if (pl.e * pl.f == 1) witness = pl;
    if (witness.f == 0) out.failed.push_back("b");
    const auto c = make_local(P, precision);
    const auto stab = conjugated_multiplication(X, c, level.s);
    if (!stab.is_integral()) out.failed.push_back("c");
    if (!out.failed.empty()) return out;
    auto root = detail::simple_residue_root(X.ext, P);
    require(root.has_value(), ErrorKind::UnsupportedOrder,
            "the degree-one place above " + to_string(P.poly) + " is not cut out by a simple root of f");
    out.certificate = GoodPrimeCertificate{P, level.s, witness, *root, stab};
    return out;
}

/// Hecke element of a certificate; its level-aligned form is s^{-1} g s.
inline HeckeElement certificate_hecke_element(const SubvarietyDatum& X, const GoodPrimeCertificate& cert, int precision = kDefaultPrecision) {
    const auto c = make_local(cert.prime, precision);
    return exhecke_element(order_at(X.ext, c, X.r_prime), to_local(c, cert.s), to_local(c, X.twist_at(cert.prime)), cert.root);
}

inline LocalMatrix level_aligned(const HeckeElement& h, const LocalMatrix& s) { return inverse(s) * h.g * s; }

struct ShrinkResult {
    LevelMap level;
    BigInt index;
    BigInt bound; // |k(P)|^{r^2}
};

/// Replaces Maximal(s) at P by Congruence(s, 1).
inline ShrinkResult shrink_level(const LevelMap& K, const Prime& P, int r) {
    const auto cur = K.at(P, r);
    require(cur.kind == LocalLevel::Kind::Maximal, ErrorKind::NotMaximalAtPrime, "level is not maximal at " + to_string(P.poly));
    ShrinkResult res;
    res.level = K;
    res.level.set(P, {LocalLevel::Kind::Congruence, cur.s, 1});
    res.index = count_matrix_group(r, P.residue_size(), 1).gl;
    res.bound = big_pow(BigInt(P.residue_size()), static_cast<std::uint64_t>(r) * static_cast<std::uint64_t>(r));
    require(res.index < res.bound, ErrorKind::InvalidArgument, "shrinking index is not below |k(P)|^{r^2}");
    return res;
}

/// i(X): product of local stabilizer indices over the twist support.
inline BigInt index_iX(const SubvarietyDatum& X, std::uint64_t budget, int precision = kDefaultPrecision) {
    if (X.index_override) return *X.index_override;
    BigInt total = 1;
    for (const auto& tw : X.twists) {
        const auto c = make_local(tw.prime, precision);
        auto T = to_local(c, tw.matrix);
        const int shift = T.min_valuation();
        T = T.scaled(LocalElement::pi_power(c, -shift));
        const auto S = make_order(c, X.ext.f, X.r_prime);
        const auto divs = elementary_divisors(T);
        total *= stabilizer_index(S, T, std::max(1, divs.back()), budget).orbit_size;
    }
    return total;
}

inline BigInt predegree(const SubvarietyDatum& X, std::uint64_t budget, int precision = kDefaultPrecision) {
    return class_number(X.ext, budget) * index_iX(X, budget, precision);
}

struct SearchReport {
    std::optional<GoodPrimeCertificate> certificate;
    std::optional<ShrinkResult> shrink;
    BigInt predegree;
    int N = 0;
    std::uint64_t scanned = 0;
    std::uint64_t fail_i = 0;   // no place of local degree one
    std::uint64_t fail_ii = 0;  // level not maximal at P
    std::uint64_t fail_iii = 0; // lattice not stable
    std::uint64_t fail_iv = 0;  // |k(P)|^N >= D(X)
    std::uint64_t accepted = 0;
    bool scan_complete = true;  // false when stopped because (iv) fails for all larger degrees
};

/// Scans primes by degree for one satisfying (i)-(iv), shrinks the level there
/// and re-certifies (a)-(c). Every scanned prime is attributed to its first
/// failing condition.
inline SearchReport find_good_prime(const SubvarietyDatum& X, int N, int max_degree, std::uint64_t budget,
                                    int precision = kDefaultPrecision) {
    SearchReport rep;
    rep.N = N;
    rep.predegree = predegree(X, budget, precision);
    const auto& F = X.ext.base;
    for (int d = 1; d <= max_degree && !rep.certificate; ++d) {
        const BigInt size = big_pow(BigInt(F.order()), static_cast<std::uint64_t>(d));
        if (big_pow(size, static_cast<std::uint64_t>(N)) >= rep.predegree) {
            rep.scan_complete = false;
            break;
        }
        for_each_prime_of_degree(F, d, [&](const Prime& P) {
            ++rep.scanned;
            bool ok = false;
            try {
                ok = splitting(X.ext, P).has_degree_one_place();
            } catch (const Error& e) {
                if (e.kind() != ErrorKind::UnsupportedRamifiedPrime) throw;
            }
            if (!ok) {
                ++rep.fail_i;
                return true;
            }
            const auto lvl = X.level.at(P, X.r);
            if (lvl.kind != LocalLevel::Kind::Maximal) {
                ++rep.fail_ii;
                return true;
            }
            const auto c = make_local(P, precision);
            if (!conjugated_multiplication(X, c, lvl.s).is_integral()) {
                ++rep.fail_iii;
                return true;
            }
            if (big_pow(BigInt(P.residue_size()), static_cast<std::uint64_t>(N)) >= rep.predegree) {
                ++rep.fail_iv;
                return true;
            }
            ++rep.accepted;
            auto sh = shrink_level(X.level, P, X.r);
            SubvarietyDatum Y = X;
            Y.level = sh.level;
            auto chk = is_good_prime(Y, P, precision);
            require(chk.certificate.has_value(), ErrorKind::InvalidArgument, "re-certification failed after shrinking");
            rep.certificate = chk.certificate;
            rep.shrink = std::move(sh);
            return false;
        });
    }
    return rep;
}

/// Intermediate field F'' of a transfer.
struct TowerStage {
    enum class Kind { Base, Reflex, Constant };
    Kind kind = Kind::Base;
    int degree = 1; // for Constant
};

struct TransferResult {
    std::string place;        // description of P''
    std::uint64_t residue_size = 0;
    GoodPrimeCheck inner;
};

/// Moves a certificate for X (reflex F') to the datum with reflex F''.
inline TransferResult transfer_good_prime(const SubvarietyDatum& X, const TowerStage& inner, const GoodPrimeCertificate& cert,
                                          int precision = kDefaultPrecision) {
    const auto& P = cert.prime;
    TransferResult res;
    switch (inner.kind) {
    case TowerStage::Kind::Base: {
        auto Y = make_datum(make_constant_extension(X.ext.base, 1), X.r);
        Y.level = X.level;
        res.place = to_string(P.poly);
        res.residue_size = P.residue_size();
        res.inner = is_good_prime(Y, P, precision);
        return res;
    }
    case TowerStage::Kind::Reflex:
        res.place = "(" + to_string(P.poly) + ", y - (" + to_string(cert.root) + "))";
        res.residue_size = ipow(P.residue_size(), static_cast<std::uint64_t>(cert.witness.f));
        res.inner = is_good_prime(X, P, precision);
        return res;
    case TowerStage::Kind::Constant: {
        require(X.ext.kind == ExtensionKind::Constant && inner.degree >= 1 && X.ext.n % inner.degree == 0, ErrorKind::TowerNotSupported,
                "intermediate field is not a constant subextension of the reflex field");
        require(X.twists.empty(), ErrorKind::TowerNotSupported, "twisted data cannot be restricted along a constant tower");
        auto Y = make_datum(make_constant_extension(X.ext.base, inner.degree), X.r);
        Y.level = X.level;
        const Fq big = extend_field(X.ext.base, inner.degree);
        auto fac = factor(Pol(big, P.poly.coeffs()));
        const auto& first = fac.factors.front().poly;
        res.place = to_string(first) + " over " + big.spec();
        res.residue_size = ipow(big.order(), static_cast<std::uint64_t>(first.degree()));
        res.inner = is_good_prime(Y, P, precision);
        return res;
    }
    }
    fail(ErrorKind::TowerNotSupported, "unknown tower stage");
}

enum class Sameness { Same, Different, Inconclusive };

inline std::string to_string(Sameness s) {
    switch (s) {
    case Sameness::Same: return "same";
    case Sameness::Different: return "different";
    case Sameness::Inconclusive: return "inconclusive";
    }
    return "unknown";
}

namespace detail {

/// Lambda = T A^r scaled into A^r; with the order, checks saturation.
inline LocalMatrix normalized_lattice(const LocalCtx& c, const RMat& T) {
    auto L = to_local(c, T);
    return L.scaled(LocalElement::pi_power(c, -L.min_valuation()));
}

} // namespace detail

/// Whether b_1(A^r) and b_2(A^r) lie in one GL_{r'}(A'_P)-orbit at every twist prime.
inline Sameness same_subvariety(const SubvarietyDatum& X1, const SubvarietyDatum& X2, int k, std::uint64_t budget,
                                int precision = kDefaultPrecision) {
    require(X1.r == X2.r && X1.ext.m == X2.ext.m && X1.ext.f == X2.ext.f, ErrorKind::InvalidArgument,
            "data must share the extension and r");
    std::vector<Prime> support;
    for (const auto* X : {&X1, &X2})
        for (const auto& t : X->twists)
            if (std::find(support.begin(), support.end(), t.prime) == support.end()) support.push_back(t.prime);
    if (X1.ext.m == 1) return Sameness::Same; // GL_r(F_P) acts transitively on lattices
    Sameness verdict = Sameness::Same;
    for (const auto& P : support) {
        const auto c = make_local(P, precision);
        const auto S = make_order(c, X1.ext.f, X1.r_prime);
        const auto L1 = detail::normalized_lattice(c, X1.twist_at(P));
        const auto L2 = detail::normalized_lattice(c, X2.twist_at(P));
        const auto d1 = elementary_divisors(L1);
        const auto d2 = elementary_divisors(L2);
        const int emax = std::max(d1.back(), d2.back());
        ChainRing R(P, std::max(k, 1));
        for (const auto* L : {&L1, &L2})
            require(is_saturated(S, ChainRing(P, std::max(emax, 1)), L->residue_mod(std::max(emax, 1))), ErrorKind::NotSaturated,
                    "lattice is not saturated at " + to_string(P.poly));
        if (d1 != d2) return Sameness::Different;
        const auto h1 = hermite_form(R, L1.residue_mod(R.k));
        const auto h2 = hermite_form(R, L2.residue_mod(R.k));
        const auto gens = order_gl_generators(S, R, budget);
        std::set<std::vector<std::uint64_t>> seen = {h1.key(R)};
        std::deque<PMat> queue = {h1.h};
        const auto target = h2.key(R);
        bool found = seen.count(target) > 0;
        while (!queue.empty() && !found) {
            PMat h = std::move(queue.front());
            queue.pop_front();
            for (const auto& g : gens) {
                auto img = hermite_form(R, pmat_mul(R, g, h));
                auto key = img.key(R);
                if (seen.insert(key).second) {
                    require(seen.size() <= budget, ErrorKind::BudgetExceeded, "orbit exceeds the budget");
                    if (key == target) found = true;
                    queue.push_back(std::move(img.h));
                }
            }
        }
        if (!found) return Sameness::Different;
        if (k < emax) verdict = Sameness::Inconclusive;
    }
    return verdict;
}

/// h(F) |A^*/(F_q^* det K)| for F = F_q(t).
inline BigInt count_components(const Fq& F, const LevelMap& K) {
    BigInt units = 1;
    bool any = false;
    for (const auto& [P, l] : K.entries) {
        if (l.kind != LocalLevel::Kind::Congruence || l.depth < 1) continue;
        any = true;
        const BigInt Q = P.residue_size();
        units *= (Q - 1) * big_pow(Q, static_cast<std::uint64_t>(l.depth - 1));
    }
    if (!any) return 1;
    return units / (F.order() - 1);
}

} // namespace dmv
