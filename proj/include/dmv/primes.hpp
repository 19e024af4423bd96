#pragma once

#include <functional>
#include <string>
#include <vector>

#include "dmv/field.hpp"
#include "dmv/poly.hpp"

namespace dmv {

using Fq = FiniteField;
using Pol = Poly<FiniteField>;
using ResidueField = QuotientField<FiniteField>;

/// Monic polynomial of degree d with the given code for its lower coefficients.
inline Pol monic_from_code(const Fq& f, int d, std::uint64_t code) {
    std::vector<Fq::value_type> v(static_cast<std::size_t>(d) + 1);
    for (int i = 0; i < d; ++i) {
        v[static_cast<std::size_t>(i)] = f.element(code % f.order());
        code /= f.order();
    }
    v[static_cast<std::size_t>(d)] = f.one();
    return Pol(f, std::move(v));
}

/// First monic irreducible of degree d over f in enumeration order.
inline Pol first_irreducible(const Fq& f, int d) {
    const std::uint64_t n = ipow(f.order(), static_cast<std::uint64_t>(d));
    for (std::uint64_t c = 0; c < n; ++c) {
        auto g = monic_from_code(f, d, c);
        if (is_irreducible(g)) return g;
    }
    fail(ErrorKind::InvalidArgument, "no irreducible polynomial found");
}

/// F_{q^d} built on top of f, so that f's codes embed unchanged.
inline Fq extend_field(const Fq& f, int d) {
    if (d == 1) return f;
    auto m = first_irreducible(f, d);
    std::vector<std::uint32_t> codes(m.coeffs().begin(), m.coeffs().end());
    return Fq::extension(f, codes);
}

/// F_{p^e} over the prime field.
inline Fq galois_field(std::uint32_t p, std::uint32_t e) { return extend_field(Fq::prime(p), static_cast<int>(e)); }

inline Fq galois_field(std::uint64_t q) {
    auto [p, e] = prime_power(q);
    return galois_field(p, e);
}

/// Parses "p^e" or a plain prime power "q".
inline Fq parse_field_spec(const std::string& s) {
    auto caret = s.find('^');
    try {
        if (caret == std::string::npos) return galois_field(std::stoull(s));
        auto p = std::stoul(s.substr(0, caret));
        auto e = std::stoul(s.substr(caret + 1));
        require(e >= 1, ErrorKind::MalformedInput, "field degree must be positive");
        return galois_field(static_cast<std::uint32_t>(p), static_cast<std::uint32_t>(e));
    } catch (const Error& err) {
        fail(ErrorKind::MalformedInput, "bad field spec '" + s + "': " + err.what());
    } catch (const std::exception&) {
        fail(ErrorKind::MalformedInput, "bad field spec '" + s + "'");
    }
}

/// A finite place of F_q(t): a monic irreducible polynomial.
struct Prime {
    Pol poly;

    int degree() const { return poly.degree(); }
    std::uint64_t residue_size() const { return ipow(poly.field().order(), static_cast<std::uint64_t>(poly.degree())); }
    const Fq& field() const { return poly.field(); }

    friend bool operator==(const Prime& a, const Prime& b) { return a.poly == b.poly; }
    friend bool operator<(const Prime& a, const Prime& b) { return a.poly < b.poly; }
};

inline Prime make_prime(const Pol& p) {
    require(p.is_monic() && is_irreducible(p), ErrorKind::InvalidArgument, "prime must be monic irreducible");
    return Prime{p};
}

/// Calls `fn` on every prime of degree d in enumeration order; stops when fn returns false.
inline bool for_each_prime_of_degree(const Fq& f, int d, const std::function<bool(const Prime&)>& fn) {
    const std::uint64_t n = ipow(f.order(), static_cast<std::uint64_t>(d));
    for (std::uint64_t c = 0; c < n; ++c) {
        auto g = monic_from_code(f, d, c);
        if (!is_irreducible(g)) continue;
        if (!fn(Prime{std::move(g)})) return false;
    }
    return true;
}

/// All primes of degree <= d_max sorted by (degree, coefficient code).
inline std::vector<Prime> enumerate_primes(const Fq& f, int d_max) {
    require(d_max >= 1, ErrorKind::InvalidArgument, "d_max must be >= 1");
    std::vector<Prime> out;
    for (int d = 1; d <= d_max; ++d)
        for_each_prime_of_degree(f, d, [&](const Prime& p) {
            out.push_back(p);
            return true;
        });
    return out;
}

/// k(P) = A/P with the reduction A -> k(P) and a section back.
struct Residue {
    Prime prime;
    ResidueField field;

    explicit Residue(Prime p) : prime(std::move(p)) {
        std::vector<Fq::value_type> m(prime.poly.coeffs().begin(), prime.poly.coeffs().end());
        field = ResidueField(prime.field(), std::move(m));
    }

    ResidueField::value_type reduce(const Pol& a) const {
        auto r = a % prime.poly;
        auto v = field.zero();
        for (std::size_t i = 0; i < r.coeffs().size(); ++i) v[i] = r.coeffs()[i];
        return v;
    }
    Pol lift(const ResidueField::value_type& v) const { return Pol(prime.field(), v); }
    std::uint64_t size() const { return field.order(); }
};

} // namespace dmv
