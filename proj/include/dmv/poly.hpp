#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include "dmv/error.hpp"
#include "dmv/field.hpp"
#include "dmv/numeric.hpp"

namespace dmv {

/// Dense univariate polynomial over a Field, coefficients low-to-high,
/// always normalized (no zero leading coefficient).
template <Field F>
class Poly {
public:
    using field_type = F;
    using value_type = typename F::value_type;

    Poly() = default;
    explicit Poly(F field) : f_(std::move(field)) {}
    Poly(F field, std::vector<value_type> coeffs) : f_(std::move(field)), c_(std::move(coeffs)) { trim(); }

    static Poly constant(const F& f, const value_type& c) { return Poly(f, {c}); }
    static Poly monomial(const F& f, const value_type& c, std::size_t deg) {
        std::vector<value_type> v(deg + 1, f.zero());
        v[deg] = c;
        return Poly(f, std::move(v));
    }
    static Poly x(const F& f) { return monomial(f, f.one(), 1); }
    static Poly one(const F& f) { return constant(f, f.one()); }

    const F& field() const { return f_; }
    int degree() const { return static_cast<int>(c_.size()) - 1; }
    bool is_zero() const { return c_.empty(); }
    bool is_one() const { return c_.size() == 1 && f_.eq(c_[0], f_.one()); }
    bool is_constant() const { return c_.size() <= 1; }
    bool is_monic() const { return !c_.empty() && f_.eq(c_.back(), f_.one()); }
    value_type lead() const { return c_.empty() ? f_.zero() : c_.back(); }
    value_type coeff(std::size_t i) const { return i < c_.size() ? c_[i] : f_.zero(); }
    const std::vector<value_type>& coeffs() const { return c_; }

    value_type eval(const value_type& a) const {
        value_type r = f_.zero();
        for (std::size_t i = c_.size(); i-- > 0;) r = f_.add(f_.mul(r, a), c_[i]);
        return r;
    }

    Poly monic() const {
        if (is_zero()) return *this;
        const auto li = f_.inv(lead());
        return scaled(li);
    }
    Poly scaled(const value_type& s) const {
        std::vector<value_type> v(c_.size());
        for (std::size_t i = 0; i < c_.size(); ++i) v[i] = f_.mul(c_[i], s);
        return Poly(f_, std::move(v));
    }
    Poly shifted(std::size_t k) const {
        if (is_zero()) return *this;
        std::vector<value_type> v(k, f_.zero());
        v.insert(v.end(), c_.begin(), c_.end());
        return Poly(f_, std::move(v));
    }
    Poly derivative() const {
        if (c_.size() <= 1) return Poly(f_);
        std::vector<value_type> v(c_.size() - 1);
        for (std::size_t i = 1; i < c_.size(); ++i) v[i - 1] = f_.mul(f_.from_int(static_cast<std::int64_t>(i)), c_[i]);
        return Poly(f_, std::move(v));
    }
    /// Truncation to the coefficients of t^0..t^{k-1}.
    Poly truncated(std::size_t k) const {
        if (c_.size() <= k) return *this;
        return Poly(f_, std::vector<value_type>(c_.begin(), c_.begin() + static_cast<std::ptrdiff_t>(k)));
    }

    friend Poly operator+(const Poly& a, const Poly& b) {
        const auto& f = a.is_zero() && !b.c_.empty() ? b.f_ : a.f_;
        std::vector<value_type> v(std::max(a.c_.size(), b.c_.size()), f.zero());
        for (std::size_t i = 0; i < a.c_.size(); ++i) v[i] = a.c_[i];
        for (std::size_t i = 0; i < b.c_.size(); ++i) v[i] = f.add(v[i], b.c_[i]);
        return Poly(f, std::move(v));
    }
    friend Poly operator-(const Poly& a) {
        std::vector<value_type> v(a.c_.size());
        for (std::size_t i = 0; i < a.c_.size(); ++i) v[i] = a.f_.neg(a.c_[i]);
        return Poly(a.f_, std::move(v));
    }
    friend Poly operator-(const Poly& a, const Poly& b) { return a + (-b); }
    friend Poly operator*(const Poly& a, const Poly& b) {
        if (a.is_zero() || b.is_zero()) return Poly(a.f_);
        const auto& f = a.f_;
        std::vector<value_type> v(a.c_.size() + b.c_.size() - 1, f.zero());
        for (std::size_t i = 0; i < a.c_.size(); ++i) {
            if (f.is_zero(a.c_[i])) continue;
            for (std::size_t j = 0; j < b.c_.size(); ++j) v[i + j] = f.add(v[i + j], f.mul(a.c_[i], b.c_[j]));
        }
        return Poly(f, std::move(v));
    }
    Poly& operator+=(const Poly& o) { return *this = *this + o; }
    Poly& operator-=(const Poly& o) { return *this = *this - o; }
    Poly& operator*=(const Poly& o) { return *this = *this * o; }

    /// (quotient, remainder); divisor must be nonzero.
    friend std::pair<Poly, Poly> divmod(const Poly& a, const Poly& b) {
        require(!b.is_zero(), ErrorKind::ZeroPolynomial, "division by the zero polynomial");
        const auto& f = b.f_;
        if (a.degree() < b.degree()) return {Poly(f), a};
        std::vector<value_type> r = a.c_;
        const std::size_t db = b.c_.size() - 1;
        std::vector<value_type> q(r.size() - db, f.zero());
        const auto li = f.inv(b.c_.back());
        for (std::size_t k = r.size(); k-- > db;) {
            if (f.is_zero(r[k])) continue;
            const auto c = f.mul(r[k], li);
            q[k - db] = c;
            for (std::size_t j = 0; j <= db; ++j) r[k - db + j] = f.sub(r[k - db + j], f.mul(c, b.c_[j]));
        }
        r.resize(db);
        return {Poly(f, std::move(q)), Poly(f, std::move(r))};
    }
    friend Poly operator/(const Poly& a, const Poly& b) { return divmod(a, b).first; }
    friend Poly operator%(const Poly& a, const Poly& b) { return divmod(a, b).second; }

    friend bool operator==(const Poly& a, const Poly& b) {
        if (a.c_.size() != b.c_.size()) return false;
        for (std::size_t i = 0; i < a.c_.size(); ++i)
            if (!a.f_.eq(a.c_[i], b.c_[i])) return false;
        return true;
    }
    /// Canonical order: degree, then coefficients from the top down by field index.
    friend bool operator<(const Poly& a, const Poly& b) {
        if (a.c_.size() != b.c_.size()) return a.c_.size() < b.c_.size();
        for (std::size_t i = a.c_.size(); i-- > 0;) {
            auto x = a.f_.index(a.c_[i]);
            auto y = b.f_.index(b.c_[i]);
            if (x != y) return x < y;
        }
        return false;
    }

    /// Index of this polynomial in the enumeration of polynomials of its degree.
    BigInt code() const {
        BigInt r = 0;
        for (std::size_t i = c_.size(); i-- > 0;) r = r * f_.order() + f_.index(c_[i]);
        return r;
    }

private:
    void trim() {
        while (!c_.empty() && f_.is_zero(c_.back())) c_.pop_back();
    }

    F f_;
    std::vector<value_type> c_;
};

template <Field F>
Poly<F> gcd(Poly<F> a, Poly<F> b) {
    while (!b.is_zero()) {
        auto r = a % b;
        a = std::move(b);
        b = std::move(r);
    }
    return a.monic();
}

/// Extended Euclid: returns (g, s, t) with s a + t b = g, g monic.
template <Field F>
std::tuple<Poly<F>, Poly<F>, Poly<F>> ext_gcd(const Poly<F>& a, const Poly<F>& b) {
    const auto& f = a.field();
    Poly<F> r0 = a, r1 = b, s0 = Poly<F>::one(f), s1(f), t0(f), t1 = Poly<F>::one(f);
    while (!r1.is_zero()) {
        auto [q, r] = divmod(r0, r1);
        r0 = std::exchange(r1, r);
        s0 = std::exchange(s1, s0 - q * s1);
        t0 = std::exchange(t1, t0 - q * t1);
    }
    if (r0.is_zero()) return {r0, s0, t0};
    auto li = f.inv(r0.lead());
    return {r0.scaled(li), s0.scaled(li), t0.scaled(li)};
}

template <Field F>
Poly<F> mul_mod(const Poly<F>& a, const Poly<F>& b, const Poly<F>& m) {
    return (a * b) % m;
}

template <Field F>
Poly<F> pow_mod(Poly<F> a, const BigInt& e, const Poly<F>& m) {
    Poly<F> r = Poly<F>::one(a.field()) % m;
    a = a % m;
    if (e <= 0) return r;
    for (long bit = static_cast<long>(boost::multiprecision::msb(e)); bit >= 0; --bit) {
        r = mul_mod(r, r, m);
        if (boost::multiprecision::bit_test(e, static_cast<unsigned>(bit))) r = mul_mod(r, a, m);
    }
    return r;
}

template <Field F>
Poly<F> poly_pow(const Poly<F>& a, std::uint64_t e) {
    Poly<F> r = Poly<F>::one(a.field());
    Poly<F> b = a;
    while (e) {
        if (e & 1U) r *= b;
        e >>= 1U;
        if (e) b *= b;
    }
    return r;
}

/// Rabin's irreducibility test over a finite field.
template <Field F>
bool is_irreducible(const Poly<F>& f) {
    const int n = f.degree();
    if (n < 1) return false;
    if (n == 1) return true;
    const auto& fld = f.field();
    const BigInt q = fld.order();
    const auto x = Poly<F>::x(fld);
    // x^(q^k) mod f for k = 1..n via repeated Frobenius
    std::vector<Poly<F>> frob(static_cast<std::size_t>(n) + 1);
    frob[0] = x % f;
    for (int k = 1; k <= n; ++k) frob[static_cast<std::size_t>(k)] = pow_mod(frob[static_cast<std::size_t>(k - 1)], q, f);
    if (!(frob[static_cast<std::size_t>(n)] == x % f)) return false;
    for (auto l : prime_divisors(static_cast<std::uint64_t>(n))) {
        auto g = gcd(frob[static_cast<std::size_t>(n) / l] - x, f);
        if (!g.is_one()) return false;
    }
    return true;
}

template <Field F>
struct Factor {
    Poly<F> poly; // monic irreducible
    int multiplicity = 1;
};

template <Field F>
struct Factorization {
    typename F::value_type unit; // leading coefficient
    std::vector<Factor<F>> factors;

    Poly<F> product(const F& f) const {
        Poly<F> r = Poly<F>::constant(f, unit);
        for (const auto& fa : factors) r *= poly_pow(fa.poly, static_cast<std::uint64_t>(fa.multiplicity));
        return r;
    }
};

namespace detail {

template <Field F>
Poly<F> pth_root_poly(const Poly<F>& f) {
    const auto& fld = f.field();
    const std::uint32_t p = fld.characteristic();
    const BigInt root_exp = BigInt(fld.order()) / p; // a^(q/p) is the p-th root
    std::vector<typename F::value_type> v;
    for (std::size_t i = 0; i < f.coeffs().size(); i += p) v.push_back(field_pow(fld, f.coeffs()[i], root_exp));
    return Poly<F>(fld, std::move(v));
}

/// Square-free decomposition of a monic polynomial: pairs (squarefree part, multiplicity).
template <Field F>
std::vector<std::pair<Poly<F>, int>> squarefree_parts(const Poly<F>& f) {
    std::vector<std::pair<Poly<F>, int>> out;
    if (f.degree() < 1) return out;
    const auto& fld = f.field();
    const int p = static_cast<int>(fld.characteristic());
    Poly<F> c = gcd(f, f.derivative());
    Poly<F> w = f / c;
    int i = 1;
    while (!w.is_one()) {
        Poly<F> y = gcd(w, c);
        Poly<F> fac = w / y;
        if (fac.degree() > 0) out.emplace_back(fac.monic(), i);
        w = y;
        c = c / y;
        ++i;
    }
    if (!c.is_one() && c.degree() > 0) {
        for (auto& [g, m] : squarefree_parts(pth_root_poly(c.monic()))) out.emplace_back(g, m * p);
    }
    return out;
}

/// Distinct-degree split of a monic squarefree polynomial: (product of factors of degree d, d).
template <Field F>
std::vector<std::pair<Poly<F>, int>> distinct_degree(Poly<F> f) {
    std::vector<std::pair<Poly<F>, int>> out;
    const auto& fld = f.field();
    const BigInt q = fld.order();
    const auto x = Poly<F>::x(fld);
    Poly<F> h = x % f;
    int d = 0;
    while (f.degree() >= 2 * (d + 1)) {
        ++d;
        h = pow_mod(h, q, f);
        auto g = gcd(h - x, f);
        if (!g.is_one()) {
            out.emplace_back(g, d);
            f = f / g;
            h = h % f;
        }
    }
    if (f.degree() > 0) out.emplace_back(f.monic(), f.degree());
    return out;
}

/// Equal-degree split (Cantor-Zassenhaus) of a product of distinct monic irreducibles of degree d.
template <Field F, class Rng>
void equal_degree(const Poly<F>& f, int d, Rng& rng, std::vector<Poly<F>>& out) {
    if (f.degree() == d) {
        out.push_back(f.monic());
        return;
    }
    const auto& fld = f.field();
    const BigInt q = fld.order();
    const std::uint32_t p = fld.characteristic();
    for (;;) {
        std::vector<typename F::value_type> v(static_cast<std::size_t>(f.degree()));
        for (auto& c : v) c = fld.random(rng);
        Poly<F> a(fld, std::move(v));
        if (a.degree() < 1) continue;
        Poly<F> b;
        if (p == 2) {
            // trace from F_{q^d} to F_2: a + a^2 + ... + a^(2^(k d - 1)), q = 2^k
            std::uint64_t k = 0;
            for (std::uint64_t t = fld.order(); t > 1; t >>= 1U) ++k;
            Poly<F> term = a % f;
            b = term;
            for (std::uint64_t i = 1; i < k * static_cast<std::uint64_t>(d); ++i) {
                term = mul_mod(term, term, f);
                b += term;
            }
        } else {
            BigInt e = (boost::multiprecision::pow(q, static_cast<unsigned>(d)) - 1) / 2;
            b = pow_mod(a, e, f) - Poly<F>::one(fld);
        }
        auto g = gcd(b, f);
        if (g.degree() > 0 && g.degree() < f.degree()) {
            equal_degree(g, d, rng, out);
            equal_degree(f / g, d, rng, out);
            return;
        }
    }
}

} // namespace detail

/// Complete factorization into monic irreducibles (sorted canonically).
template <Field F>
Factorization<F> factor(const Poly<F>& f) {
    require(!f.is_zero(), ErrorKind::ZeroPolynomial, "cannot factor the zero polynomial");
    const auto& fld = f.field();
    Factorization<F> result{f.lead(), {}};
    std::mt19937_64 rng(0x5eedULL);
    for (auto& [part, mult] : detail::squarefree_parts(f.monic())) {
        for (auto& [block, d] : detail::distinct_degree(part)) {
            std::vector<Poly<F>> irr;
            detail::equal_degree(block, d, rng, irr);
            for (auto& g : irr) result.factors.push_back({std::move(g), mult});
        }
    }
    std::sort(result.factors.begin(), result.factors.end(), [](const auto& a, const auto& b) {
        if (a.poly == b.poly) return a.multiplicity < b.multiplicity;
        return a.poly < b.poly;
    });
    // merge equal factors coming from different square-free layers
    std::vector<Factor<F>> merged;
    for (auto& fa : result.factors) {
        if (!merged.empty() && merged.back().poly == fa.poly)
            merged.back().multiplicity += fa.multiplicity;
        else
            merged.push_back(fa);
    }
    result.factors = std::move(merged);
    (void)fld;
    return result;
}

/// Degrees of the irreducible factors of a squarefree polynomial, without splitting blocks.
template <Field F>
std::vector<int> factor_degrees_squarefree(const Poly<F>& f) {
    std::vector<int> out;
    for (auto& [block, d] : detail::distinct_degree(f.monic()))
        for (int i = 0; i < block.degree() / d; ++i) out.push_back(d);
    std::sort(out.begin(), out.end());
    return out;
}

template <Field F>
bool is_squarefree(const Poly<F>& f) {
    if (f.degree() < 1) return true;
    return gcd(f, f.derivative()).is_one();
}

} // namespace dmv
