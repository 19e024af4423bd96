#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "dmv/error.hpp"

namespace dmv {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline BigInt big_pow(const BigInt& base, std::uint64_t exp) {
    BigInt result = 1;
    BigInt b = base;
    while (exp) {
        if (exp & 1U) result *= b;
        exp >>= 1U;
        if (exp) b *= b;
    }
    return result;
}

/// Checked integer power; throws InvalidArgument on 64-bit overflow.
inline std::uint64_t ipow(std::uint64_t base, std::uint64_t exp) {
    std::uint64_t result = 1;
    for (std::uint64_t i = 0; i < exp; ++i) {
        if (base != 0 && result > UINT64_MAX / base)
            fail(ErrorKind::InvalidArgument, "integer power overflows 64 bits");
        result *= base;
    }
    return result;
}

inline bool is_prime(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

inline std::vector<std::uint64_t> prime_divisors(std::uint64_t n) {
    std::vector<std::uint64_t> out;
    for (std::uint64_t d = 2; d * d <= n; ++d) {
        if (n % d == 0) {
            out.push_back(d);
            while (n % d == 0) n /= d;
        }
    }
    if (n > 1) out.push_back(n);
    return out;
}

inline std::vector<std::uint64_t> divisors(std::uint64_t n) {
    std::vector<std::uint64_t> out;
    for (std::uint64_t d = 1; d <= n; ++d)
        if (n % d == 0) out.push_back(d);
    return out;
}

inline int mobius(std::uint64_t n) {
    int sign = 1;
    for (std::uint64_t d = 2; d * d <= n; ++d) {
        if (n % d == 0) {
            n /= d;
            if (n % d == 0) return 0;
            sign = -sign;
        }
    }
    if (n > 1) sign = -sign;
    return sign;
}

/// (p, e) with q = p^e, or nullopt-like failure when q is not a prime power.
inline std::pair<std::uint32_t, std::uint32_t> prime_power(std::uint64_t q) {
    if (q < 2) fail(ErrorKind::InvalidArgument, "field size must be >= 2");
    auto ps = prime_divisors(q);
    if (ps.size() != 1) fail(ErrorKind::InvalidArgument, "field size " + std::to_string(q) + " is not a prime power");
    std::uint32_t e = 0;
    while (q > 1) {
        q /= ps[0];
        ++e;
    }
    return {static_cast<std::uint32_t>(ps[0]), e};
}

/// Number of monic irreducible polynomials of degree d over F_q.
inline BigInt count_irreducible(std::uint64_t q, std::uint64_t d) {
    BigInt sum = 0;
    for (auto e : divisors(d)) sum += mobius(e) * big_pow(BigInt(q), d / e);
    return sum / d;
}

inline std::string to_string(const Rational& x) {
    return boost::multiprecision::numerator(x).str() + "/" + boost::multiprecision::denominator(x).str();
}

/// Largest integer s with s^k <= n (n >= 0).
inline BigInt iroot(const BigInt& n, unsigned k) {
    if (n < 0) fail(ErrorKind::InvalidArgument, "iroot of a negative number");
    if (n < 2 || k == 1) return n;
    BigInt lo = 0;
    BigInt hi = 1;
    while (big_pow(hi, k) <= n) hi *= 2;
    while (hi - lo > 1) {
        BigInt mid = (lo + hi) / 2;
        if (big_pow(mid, k) <= n)
            lo = mid;
        else
            hi = mid;
    }
    return lo;
}

/// Rational enclosure [lo, hi] of base^(num/den) with width at most 1/scale.
struct RationalInterval {
    Rational lo;
    Rational hi;
};

inline RationalInterval rational_power(std::uint64_t base, unsigned num, unsigned den, const BigInt& scale) {
    // base^(num/den) = (base^num * scale^den)^(1/den) / scale
    BigInt n = big_pow(BigInt(base), num) * big_pow(scale, den);
    BigInt r = iroot(n, den);
    Rational lo(r, scale);
    Rational hi = (big_pow(r, den) == n) ? lo : Rational(r + 1, scale);
    return {lo, hi};
}

} // namespace dmv
