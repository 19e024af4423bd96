#pragma once

#include <concepts>
#include <cstdint>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "dmv/error.hpp"
#include "dmv/numeric.hpp"

namespace dmv {

/// Operations shared by every coefficient field used with Poly<F>.
///
/// Elements are plain values; the field object is a cheap handle that
/// carries the arithmetic. `index`/`element` give a bijection with
/// [0, order()) whose order is the canonical enumeration order.
template <class F>
concept Field = std::copy_constructible<F> && requires(const F& f, const typename F::value_type& a, std::uint64_t n) {
    typename F::value_type;
    { f.zero() } -> std::convertible_to<typename F::value_type>;
    { f.one() } -> std::convertible_to<typename F::value_type>;
    { f.add(a, a) } -> std::convertible_to<typename F::value_type>;
    { f.sub(a, a) } -> std::convertible_to<typename F::value_type>;
    { f.neg(a) } -> std::convertible_to<typename F::value_type>;
    { f.mul(a, a) } -> std::convertible_to<typename F::value_type>;
    { f.inv(a) } -> std::convertible_to<typename F::value_type>;
    { f.is_zero(a) } -> std::convertible_to<bool>;
    { f.eq(a, a) } -> std::convertible_to<bool>;
    { f.order() } -> std::convertible_to<std::uint64_t>;
    { f.characteristic() } -> std::convertible_to<std::uint32_t>;
    { f.index(a) } -> std::convertible_to<std::uint64_t>;
    { f.element(n) } -> std::convertible_to<typename F::value_type>;
    { f.from_int(std::int64_t{}) } -> std::convertible_to<typename F::value_type>;
    { f == f } -> std::convertible_to<bool>;
};

namespace detail {

struct FieldTables {
    std::uint32_t p = 0;
    std::uint32_t degree = 0; // over F_p
    std::uint32_t q = 0;
    std::vector<std::uint32_t> exp; // length 2(q-1)
    std::vector<std::uint32_t> log; // length q, log[0] unused
    std::vector<std::uint16_t> add_table; // q*q when small
    std::vector<std::uint32_t> neg;
    // how the field was built: base field (null for F_p) and modulus over it
    std::shared_ptr<const FieldTables> base;
    std::vector<std::uint32_t> modulus; // low-to-high, monic
};

inline constexpr std::uint32_t kAddTableLimit = 512;
inline constexpr std::uint32_t kFieldSizeLimit = 1U << 22;

} // namespace detail

/// Table-driven finite field F_q, q = p^e <= 2^22.
///
/// An element is its code: the base-p digits of its coordinates in the
/// polynomial basis over the field it was built from (recursively), so
/// addition is digitwise mod p and the subfield the field was built over
/// sits in the codes [0, base order).
class FiniteField {
public:
    using value_type = std::uint32_t;

    FiniteField() = default;

    /// The prime field F_p.
    static FiniteField prime(std::uint32_t p) {
        require(is_prime(p), ErrorKind::InvalidArgument, "characteristic " + std::to_string(p) + " is not prime");
        auto t = std::make_shared<detail::FieldTables>();
        t->p = p;
        t->degree = 1;
        t->q = p;
        t->modulus = {0, 1};
        auto mul = [p](std::uint32_t a, std::uint32_t b) {
            return static_cast<std::uint32_t>((std::uint64_t(a) * b) % p);
        };
        finish(*t, mul);
        return FiniteField(std::move(t));
    }

    /// base[y]/(modulus); `modulus` is monic (low-to-high codes) and must be
    /// irreducible over `base`, which is verified by the primitive-element search.
    static FiniteField extension(const FiniteField& base, const std::vector<std::uint32_t>& modulus) {
        const auto n = static_cast<std::uint32_t>(modulus.size()) - 1;
        require(modulus.size() >= 2 && modulus.back() == 1, ErrorKind::InvalidArgument, "modulus must be monic of degree >= 1");
        if (n == 1) return base;
        const std::uint64_t size = ipow(base.order(), n);
        require(size <= detail::kFieldSizeLimit, ErrorKind::UnsupportedField,
                "field of size " + std::to_string(size) + " exceeds the table limit");
        auto t = std::make_shared<detail::FieldTables>();
        t->p = base.characteristic();
        t->degree = base.degree() * n;
        t->q = static_cast<std::uint32_t>(size);
        t->base = base.t_;
        t->modulus = modulus;
        const std::uint32_t bq = base.order();
        auto unpack = [bq, n](std::uint32_t c) {
            std::vector<std::uint32_t> v(n);
            for (std::uint32_t i = 0; i < n; ++i) {
                v[i] = c % bq;
                c /= bq;
            }
            return v;
        };
        auto pack = [bq, n](const std::vector<std::uint32_t>& v) {
            std::uint32_t c = 0;
            for (std::uint32_t i = n; i-- > 0;) c = c * bq + v[i];
            return c;
        };
        auto mul = [&](std::uint32_t a, std::uint32_t b) {
            auto x = unpack(a);
            auto y = unpack(b);
            std::vector<std::uint32_t> prod(2 * n - 1, 0);
            for (std::uint32_t i = 0; i < n; ++i) {
                if (x[i] == 0) continue;
                for (std::uint32_t j = 0; j < n; ++j)
                    prod[i + j] = base.add(prod[i + j], base.mul(x[i], y[j]));
            }
            for (std::uint32_t k = 2 * n - 1; k-- > n;) {
                const std::uint32_t c = prod[k];
                if (c == 0) continue;
                for (std::uint32_t j = 0; j < n; ++j)
                    prod[k - n + j] = base.sub(prod[k - n + j], base.mul(c, modulus[j]));
                prod[k] = 0;
            }
            prod.resize(n);
            return pack(prod);
        };
        finish(*t, mul);
        return FiniteField(std::move(t));
    }

    std::uint32_t characteristic() const { return t_->p; }
    std::uint32_t degree() const { return t_->degree; }
    std::uint64_t order() const { return t_->q; }
    std::string spec() const { return std::to_string(t_->p) + "^" + std::to_string(t_->degree); }
    const std::vector<std::uint32_t>& modulus() const { return t_->modulus; }
    FiniteField base() const { return t_->base ? FiniteField(t_->base) : *this; }
    bool is_prime_field() const { return t_->degree == 1; }

    value_type zero() const { return 0; }
    value_type one() const { return 1; }
    value_type from_int(std::int64_t n) const {
        std::int64_t p = t_->p;
        return static_cast<value_type>(((n % p) + p) % p);
    }
    value_type element(std::uint64_t i) const { return static_cast<value_type>(i); }
    std::uint64_t index(value_type a) const { return a; }

    value_type add(value_type a, value_type b) const {
        const auto& t = *t_;
        if (t.degree == 1) {
            std::uint32_t s = a + b;
            return s >= t.p ? s - t.p : s;
        }
        if (t.p == 2) return a ^ b;
        if (!t.add_table.empty()) return t.add_table[std::size_t(a) * t.q + b];
        std::uint32_t r = 0;
        std::uint32_t place = 1;
        while (a || b) {
            std::uint32_t d = (a % t.p + b % t.p) % t.p;
            r += d * place;
            place *= t.p;
            a /= t.p;
            b /= t.p;
        }
        return r;
    }
    value_type neg(value_type a) const { return t_->neg[a]; }
    value_type sub(value_type a, value_type b) const { return add(a, t_->neg[b]); }
    value_type mul(value_type a, value_type b) const {
        if (a == 0 || b == 0) return 0;
        return t_->exp[t_->log[a] + t_->log[b]];
    }
    value_type inv(value_type a) const {
        require(a != 0, ErrorKind::InvalidArgument, "inverse of zero");
        const std::uint32_t qm1 = t_->q - 1;
        return t_->exp[(qm1 - t_->log[a]) % qm1];
    }
    value_type div(value_type a, value_type b) const { return mul(a, inv(b)); }
    value_type pow(value_type a, std::uint64_t e) const {
        if (e == 0) return 1;
        if (a == 0) return 0;
        const std::uint64_t qm1 = t_->q - 1;
        return t_->exp[(std::uint64_t(t_->log[a]) * (e % qm1)) % qm1];
    }
    /// The unique p-th root (Frobenius is bijective).
    value_type pth_root(value_type a) const { return pow(a, t_->q / t_->p); }
    bool is_zero(value_type a) const { return a == 0; }
    bool eq(value_type a, value_type b) const { return a == b; }
    /// A fixed generator of the multiplicative group.
    value_type primitive() const { return t_->exp[1 % std::max<std::uint32_t>(1, t_->q - 1)]; }
    std::uint32_t log(value_type a) const { return t_->log[a]; }

    template <class Rng>
    value_type random(Rng& rng) const {
        return std::uniform_int_distribution<std::uint32_t>(0, t_->q - 1)(rng);
    }

    friend bool operator==(const FiniteField& a, const FiniteField& b) {
        if (a.t_ == b.t_) return true;
        if (!a.t_ || !b.t_) return false;
        return same_tower(*a.t_, *b.t_);
    }

private:
    explicit FiniteField(std::shared_ptr<const detail::FieldTables> t) : t_(std::move(t)) {}

    static bool same_tower(const detail::FieldTables& a, const detail::FieldTables& b) {
        if (a.q != b.q || a.p != b.p || a.modulus != b.modulus) return false;
        if (!a.base || !b.base) return !a.base && !b.base;
        return a.base == b.base || same_tower(*a.base, *b.base);
    }

    template <class Mul>
    static void finish(detail::FieldTables& t, Mul&& mul) {
        const std::uint32_t q = t.q;
        const std::uint32_t qm1 = q - 1;
        // neg via digits
        t.neg.resize(q);
        for (std::uint32_t a = 0; a < q; ++a) {
            std::uint32_t r = 0, place = 1, x = a;
            for (std::uint32_t i = 0; i < t.degree; ++i) {
                std::uint32_t d = x % t.p;
                r += ((t.p - d) % t.p) * place;
                place *= t.p;
                x /= t.p;
            }
            t.neg[a] = r;
        }
        t.exp.assign(2 * std::size_t(qm1) + 1, 0);
        t.log.assign(q, 0);
        if (q == 2) {
            t.exp = {1, 1, 1};
            t.log = {0, 0};
        } else {
            auto primes = prime_divisors(qm1);
            auto power = [&](std::uint32_t g, std::uint64_t e) {
                std::uint32_t r = 1;
                while (e) {
                    if (e & 1U) r = mul(r, g);
                    e >>= 1U;
                    if (e) g = mul(g, g);
                }
                return r;
            };
            std::uint32_t gen = 0;
            for (std::uint32_t g = 2; g < q && gen == 0; ++g) {
                if (power(g, qm1) != 1) continue;
                bool primitive = true;
                for (auto l : primes)
                    if (power(g, qm1 / l) == 1) {
                        primitive = false;
                        break;
                    }
                if (primitive) gen = g;
            }
            require(gen != 0, ErrorKind::InvalidArgument, "modulus is not irreducible (no primitive element)");
            std::uint32_t x = 1;
            for (std::uint32_t i = 0; i < qm1; ++i) {
                t.exp[i] = x;
                t.log[x] = i;
                x = mul(x, gen);
            }
            for (std::uint32_t i = qm1; i < 2 * qm1 + 1; ++i) t.exp[i] = t.exp[i - qm1];
        }
        if (t.degree > 1 && t.p != 2 && q <= detail::kAddTableLimit) {
            t.add_table.resize(std::size_t(q) * q);
            for (std::uint32_t a = 0; a < q; ++a)
                for (std::uint32_t b = 0; b < q; ++b) {
                    std::uint32_t r = 0, place = 1, x = a, y = b;
                    for (std::uint32_t i = 0; i < t.degree; ++i) {
                        r += ((x % t.p + y % t.p) % t.p) * place;
                        place *= t.p;
                        x /= t.p;
                        y /= t.p;
                    }
                    t.add_table[std::size_t(a) * q + b] = static_cast<std::uint16_t>(r);
                }
        }
    }

    std::shared_ptr<const detail::FieldTables> t_;
};

static_assert(Field<FiniteField>);

/// Table-free field base[y]/(modulus) for residue fields too large to tabulate.
/// Elements are dense coordinate vectors of length deg(modulus).
template <Field Base>
class QuotientField {
public:
    using base_type = Base;
    using base_value = typename Base::value_type;
    using value_type = std::vector<base_value>;

    QuotientField() = default;
    /// `modulus` low-to-high, monic, irreducible over base (caller guarantees).
    QuotientField(Base base, std::vector<base_value> modulus) : base_(std::move(base)), mod_(std::move(modulus)) {
        require(mod_.size() >= 2 && base_.eq(mod_.back(), base_.one()), ErrorKind::InvalidArgument,
                "quotient modulus must be monic of degree >= 1");
        n_ = mod_.size() - 1;
        order_ = ipow(base_.order(), n_);
    }

    const Base& base() const { return base_; }
    std::size_t degree() const { return n_; }
    const std::vector<base_value>& modulus() const { return mod_; }

    std::uint32_t characteristic() const { return base_.characteristic(); }
    std::uint64_t order() const { return order_; }

    value_type zero() const { return value_type(n_, base_.zero()); }
    value_type one() const {
        auto v = zero();
        v[0] = base_.one();
        return v;
    }
    value_type from_int(std::int64_t k) const {
        auto v = zero();
        v[0] = base_.from_int(k);
        return v;
    }
    value_type embed(const base_value& c) const {
        auto v = zero();
        v[0] = c;
        return v;
    }
    value_type generator() const {
        auto v = zero();
        if (n_ == 1)
            v[0] = base_.neg(mod_[0]);
        else
            v[1] = base_.one();
        return v;
    }
    value_type element(std::uint64_t idx) const {
        auto v = zero();
        const std::uint64_t bq = base_.order();
        for (std::size_t i = 0; i < n_; ++i) {
            v[i] = base_.element(idx % bq);
            idx /= bq;
        }
        return v;
    }
    std::uint64_t index(const value_type& a) const {
        std::uint64_t idx = 0;
        const std::uint64_t bq = base_.order();
        for (std::size_t i = n_; i-- > 0;) idx = idx * bq + base_.index(a[i]);
        return idx;
    }

    value_type add(const value_type& a, const value_type& b) const {
        value_type r(n_);
        for (std::size_t i = 0; i < n_; ++i) r[i] = base_.add(a[i], b[i]);
        return r;
    }
    value_type sub(const value_type& a, const value_type& b) const {
        value_type r(n_);
        for (std::size_t i = 0; i < n_; ++i) r[i] = base_.sub(a[i], b[i]);
        return r;
    }
    value_type neg(const value_type& a) const {
        value_type r(n_);
        for (std::size_t i = 0; i < n_; ++i) r[i] = base_.neg(a[i]);
        return r;
    }
    value_type mul(const value_type& a, const value_type& b) const {
        std::vector<base_value> prod(2 * n_ - 1, base_.zero());
        for (std::size_t i = 0; i < n_; ++i) {
            if (base_.is_zero(a[i])) continue;
            for (std::size_t j = 0; j < n_; ++j) prod[i + j] = base_.add(prod[i + j], base_.mul(a[i], b[j]));
        }
        for (std::size_t k = 2 * n_ - 1; k-- > n_;) {
            const auto c = prod[k];
            if (base_.is_zero(c)) continue;
            for (std::size_t j = 0; j < n_; ++j) prod[k - n_ + j] = base_.sub(prod[k - n_ + j], base_.mul(c, mod_[j]));
        }
        prod.resize(n_);
        return prod;
    }
    value_type pow(value_type a, const BigInt& e) const {
        value_type r = one();
        for (auto bit = msb_index(e); bit >= 0; --bit) {
            r = mul(r, r);
            if (boost::multiprecision::bit_test(e, static_cast<unsigned>(bit))) r = mul(r, a);
        }
        return r;
    }
    value_type inv(const value_type& a) const {
        require(!is_zero(a), ErrorKind::InvalidArgument, "inverse of zero");
        return pow(a, BigInt(order_) - 2);
    }
    bool is_zero(const value_type& a) const {
        for (const auto& c : a)
            if (!base_.is_zero(c)) return false;
        return true;
    }
    bool eq(const value_type& a, const value_type& b) const {
        for (std::size_t i = 0; i < n_; ++i)
            if (!base_.eq(a[i], b[i])) return false;
        return true;
    }
    template <class Rng>
    value_type random(Rng& rng) const {
        value_type v(n_);
        for (auto& c : v) c = base_.random(rng);
        return v;
    }

    friend bool operator==(const QuotientField& a, const QuotientField& b) {
        return a.base_ == b.base_ && a.mod_ == b.mod_;
    }

private:
    static long msb_index(const BigInt& e) {
        if (e <= 0) return -1;
        return static_cast<long>(boost::multiprecision::msb(e));
    }

    Base base_;
    std::vector<base_value> mod_;
    std::size_t n_ = 0;
    std::uint64_t order_ = 0;
};

static_assert(Field<QuotientField<FiniteField>>);

/// a^e in any Field by square-and-multiply.
template <Field F>
typename F::value_type field_pow(const F& f, typename F::value_type a, const BigInt& e) {
    typename F::value_type r = f.one();
    if (e <= 0) return r;
    for (long bit = static_cast<long>(boost::multiprecision::msb(e)); bit >= 0; --bit) {
        r = f.mul(r, r);
        if (boost::multiprecision::bit_test(e, static_cast<unsigned>(bit))) r = f.mul(r, a);
    }
    return r;
}

} // namespace dmv
