#pragma once

#include <cmath>
#include <cstdint>

#include "dmv/extension.hpp"

namespace dmv {

/// (q-1)(q^{2g} - 2g q^g + 1) / (2g (q^{g+1} - 1)), a lower bound for h when g >= 1.
inline Rational clg_lower_bound(std::uint64_t q, int g) {
    require(g >= 1, ErrorKind::GenusZero, "the class-number lower bound needs genus >= 1");
    require(q >= 2, ErrorKind::InvalidArgument, "q must be >= 2");
    const BigInt Q(q);
    const auto ug = static_cast<std::uint64_t>(g);
    const BigInt num = (Q - 1) * (big_pow(Q, 2 * ug) - 2 * BigInt(g) * big_pow(Q, ug) + 1);
    const BigInt den = 2 * BigInt(g) * (big_pow(Q, ug + 1) - 1);
    return Rational(num, den);
}

/// 8 + 2 log_q h, for display only.
inline double genus_upper_from_classnumber(std::uint64_t q, const BigInt& h) {
    require(h >= 1 && q >= 2, ErrorKind::InvalidArgument, "need h >= 1 and q >= 2");
    return 8.0 + 2.0 * std::log(h.convert_to<double>()) / std::log(static_cast<double>(q));
}

/// Exact form of g <= 8 + 2 log_q h: g <= 8 or q^{g-8} <= h^2.
inline bool genus_bound_holds(std::uint64_t q, const BigInt& h, int g) {
    require(h >= 1 && q >= 2, ErrorKind::InvalidArgument, "need h >= 1 and q >= 2");
    if (g <= 8) return true;
    return big_pow(BigInt(q), static_cast<std::uint64_t>(g - 8)) <= h * h;
}

/// (r-1) r^r + r^r g(F'), a genus bound for the normal closure.
inline BigInt castelnuovo_normal_closure(int r, const BigInt& g) {
    require(r >= 1, ErrorKind::InvalidArgument, "r must be >= 1");
    const BigInt rr = big_pow(BigInt(r), static_cast<std::uint64_t>(r));
    return BigInt(r - 1) * rr + rr * g;
}

/// Genus bound for a compositum of two fields of degree r' and genus g.
inline BigInt castelnuovo_pair(int r_prime, const BigInt& g) { return 2 * BigInt(r_prime) * g + BigInt(r_prime) * r_prime; }

struct CebotarevParams {
    std::uint64_t q = 2;
    int i = 1;
    int n = 1;  // constant-extension degree
    int k = 1;  // geometric degree
    int g = 0;  // genus of the extension
    int d = 1;  // [F : F_q(theta)]
    int g_base = 0; // genus of F
};

struct CebotarevBound {
    Rational main_term;   // q^i / (i k)
    RationalInterval bound;
    double bound_approx = 0.0;
};

/// (2/(ik)) ((k+g) q^{i/2} + k (2 g_F + 1) q^{i/4} + g + d k), enclosed in an
/// interval of width below 1/scale.
inline CebotarevBound cebotarev_bound(const CebotarevParams& p, const BigInt& scale = BigInt(1) << 64) {
    require(p.i >= 1 && p.n >= 1 && p.k >= 1 && p.g >= 0 && p.d >= 1, ErrorKind::InvalidArgument, "parameters out of range");
    require(p.i % p.n == 0, ErrorKind::InapplicableDegree,
            "constant-extension degree " + std::to_string(p.n) + " does not divide i = " + std::to_string(p.i));
    const auto ui = static_cast<unsigned>(p.i);
    const auto half = rational_power(p.q, ui, 2, scale);
    const auto quarter = rational_power(p.q, ui, 4, scale);
    const Rational lead(2, BigInt(p.i) * p.k);
    const Rational a(p.k + p.g), b(static_cast<long long>(p.k) * (2 * p.g_base + 1)), c(p.g + p.d * p.k);
    CebotarevBound out;
    out.main_term = Rational(big_pow(BigInt(p.q), ui), BigInt(p.i) * p.k);
    out.bound = {lead * (a * half.lo + b * quarter.lo + c), lead * (a * half.hi + b * quarter.hi + c)};
    out.bound_approx = out.bound.lo.convert_to<double>();
    return out;
}

/// Constant-extension degree and geometric degree of E over F.
inline std::pair<int, int> extension_degrees(const Extension& E) {
    int n = 0;
    for (std::uint64_t s = 1; s < E.q_prime; s *= E.q()) ++n;
    n = std::max(n, 1);
    return {n, E.m / n};
}

/// Degree-i primes of F splitting completely and unramified in E.
inline BigInt count_split_primes(const Extension& E, int i, std::uint64_t budget) {
    const bool normal = E.kind == ExtensionKind::Constant ||
                        (E.kind == ExtensionKind::Kummer && E.separable && (E.q() - 1) % static_cast<std::uint64_t>(E.n) == 0);
    require(normal, ErrorKind::NotNormal, "normality is only known for constant and split Kummer extensions");
    require(count_irreducible(E.q(), static_cast<std::uint64_t>(i)) <= budget, ErrorKind::BudgetExceeded,
            "too many primes of degree " + std::to_string(i));
    BigInt count = 0;
    for_each_prime_of_degree(E.base, i, [&](const Prime& P) {
        const auto st = splitting(E, P);
        if (st.unramified && static_cast<int>(st.places.size()) == E.m) ++count;
        return true;
    });
    return count;
}

struct CebotarevReport {
    BigInt count;
    Rational main_term;
    RationalInterval bound;
    double bound_approx = 0.0;
    bool holds = false;
};

/// holds iff |count - q^i/(ik)| < bound, decided with certified enclosures.
inline CebotarevReport cebotarev_check(const Extension& E, int i, std::uint64_t budget) {
    const auto [n, k] = extension_degrees(E);
    CebotarevParams p{E.q(), i, n, k, E.genus, 1, 0};
    CebotarevReport rep;
    rep.count = count_split_primes(E, i, budget);
    const Rational diff = abs(Rational(rep.count) - Rational(big_pow(BigInt(E.q()), static_cast<std::uint64_t>(i)), BigInt(i) * k));
    for (BigInt scale = BigInt(1) << 64;; scale *= scale) {
        const auto b = cebotarev_bound(p, scale);
        rep.main_term = b.main_term;
        rep.bound = b.bound;
        rep.bound_approx = b.bound_approx;
        if (diff < b.bound.lo) {
            rep.holds = true;
            break;
        }
        if (diff >= b.bound.hi || scale > (BigInt(1) << 1024)) break;
    }
    return rep;
}

/// kp^{(r-1)(2^s - 1)} degZ^{2^s}.
inline BigInt induction_threshold(std::uint64_t kp, int r, int s, const BigInt& degZ) {
    require(s >= 1 && r >= 1 && s < 32, ErrorKind::InvalidArgument, "need s >= 1 and r >= 1");
    const std::uint64_t two_s = std::uint64_t{1} << s;
    return big_pow(BigInt(kp), static_cast<std::uint64_t>(r - 1) * (two_s - 1)) * big_pow(degZ, two_s);
}

/// 2(r-1)(2^s - 1) + r^2 2^{s+1}.
inline BigInt separable_N(int r, int s) {
    require(s >= 0 && r >= 1 && s < 62, ErrorKind::InvalidArgument, "need s >= 0 and r >= 1");
    const BigInt two_s = BigInt(1) << s;
    return 2 * BigInt(r - 1) * (two_s - 1) + BigInt(r) * r * 2 * two_s;
}

inline BigInt bezout(const BigInt& degV, const BigInt& degW) { return degV * degW; }

inline BigInt hecke_pullback(const BigInt& deg, const BigInt& index) { return deg * index; }

/// deg(Z cap T_g Z) bound: degZ^2 |k(P)|^{r-1}.
inline BigInt intersection_bound(const BigInt& degZ, std::uint64_t kp, int r) {
    return bezout(degZ, hecke_pullback(degZ, big_pow(BigInt(kp), static_cast<std::uint64_t>(r - 1))));
}

} // namespace dmv
