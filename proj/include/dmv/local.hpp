#pragma once

#include <climits>
#include <memory>
#include <string>
#include <vector>

#include "dmv/primes.hpp"
#include "dmv/text.hpp"

namespace dmv {

inline constexpr int kDefaultPrecision = 12;
inline constexpr int kInfiniteValuation = INT_MAX;

/// The completion at a prime, truncated to a relative precision cap.
struct LocalContext {
    Prime prime;
    int cap = kDefaultPrecision;
    std::vector<Pol> pi_pow; // pi^0 .. pi^(2 cap)

    const Fq& field() const { return prime.field(); }
    const Pol& pi() const { return prime.poly; }
    int degree() const { return prime.degree(); }
    std::uint64_t residue_size() const { return prime.residue_size(); }
    const Pol& power(int k) const {
        require(k >= 0 && static_cast<std::size_t>(k) < pi_pow.size(), ErrorKind::PrecisionExhausted,
                "pi-power " + std::to_string(k) + " outside the working range");
        return pi_pow[static_cast<std::size_t>(k)];
    }
};

using LocalCtx = std::shared_ptr<const LocalContext>;

inline LocalCtx make_local(const Prime& p, int precision = kDefaultPrecision) {
    require(precision >= 1, ErrorKind::InvalidArgument, "precision must be positive");
    auto c = std::make_shared<LocalContext>();
    c->prime = p;
    c->cap = precision;
    c->pi_pow.push_back(Pol::one(p.field()));
    for (int i = 1; i <= 2 * precision + 2; ++i) c->pi_pow.push_back(c->pi_pow.back() * p.poly);
    return c;
}

/// Number of factors of pi dividing a (capped at limit) and the cofactor.
inline std::pair<int, Pol> split_pi(Pol a, const Pol& pi, int limit) {
    int v = 0;
    if (a.is_zero()) return {limit, a};
    while (v < limit) {
        auto [q, r] = divmod(a, pi);
        if (!r.is_zero()) break;
        a = std::move(q);
        ++v;
    }
    return {v, a};
}

/// Inverse of a unit modulo m (gcd(u, m) = 1).
inline Pol inverse_mod(const Pol& u, const Pol& m) {
    auto [g, s, t] = ext_gcd(u % m, m);
    require(g.is_one(), ErrorKind::InvalidArgument, "element is not a unit modulo the given polynomial");
    return s % m;
}

/// Element pi^v * u of the completion with u a unit known modulo pi^rel.
///
/// Three states: exact zero, inexact zero O(pi^N) (known only to lie in
/// pi^N A_P), and nonzero with certified valuation.
class LocalElement {
public:
    enum class State { ExactZero, InexactZero, Nonzero };

    LocalElement() = default;

    static LocalElement zero(const LocalCtx& c) { return LocalElement(c, State::ExactZero, 0, Pol(c->field()), 0); }
    static LocalElement inexact_zero(const LocalCtx& c, int abs_prec) {
        return LocalElement(c, State::InexactZero, abs_prec, Pol(c->field()), 0);
    }
    static LocalElement one(const LocalCtx& c) { return pi_power(c, 0); }
    static LocalElement pi_power(const LocalCtx& c, int n) {
        return LocalElement(c, State::Nonzero, n, Pol::one(c->field()), c->cap);
    }
    /// An element of A = F_q[t], exact up to the relative cap.
    static LocalElement from_poly(const LocalCtx& c, const Pol& a) {
        if (a.is_zero()) return zero(c);
        auto [v, u] = split_pi(a, c->pi(), INT_MAX);
        return LocalElement(c, State::Nonzero, v, u % c->power(c->cap), c->cap);
    }
    static LocalElement from_ratfunc(const LocalCtx& c, const RatFunc& r) {
        if (r.is_zero()) return zero(c);
        auto n = from_poly(c, r.num);
        auto d = from_poly(c, r.den);
        return n * d.inverse();
    }
    static LocalElement from_int(const LocalCtx& c, std::int64_t k) {
        return from_poly(c, Pol::constant(c->field(), c->field().from_int(k)));
    }
    /// pi^v * u with u given modulo pi^rel (u must be a unit).
    static LocalElement make(const LocalCtx& c, int v, const Pol& u, int rel) {
        require(rel >= 1, ErrorKind::InvalidArgument, "relative precision must be positive");
        rel = std::min(rel, c->cap);
        auto uu = u % c->power(rel);
        require(!(uu % c->pi()).is_zero(), ErrorKind::InvalidArgument, "unit part is divisible by the prime");
        return LocalElement(c, State::Nonzero, v, uu, rel);
    }

    const LocalCtx& context() const { return ctx_; }
    State state() const { return state_; }
    bool is_exact_zero() const { return state_ == State::ExactZero; }
    bool is_inexact_zero() const { return state_ == State::InexactZero; }
    bool is_nonzero() const { return state_ == State::Nonzero; }
    const Pol& unit() const { return unit_; }
    int relative_precision() const { return rel_; }

    /// Certified valuation; +infinity for exact zero.
    int valuation() const {
        if (state_ == State::ExactZero) return kInfiniteValuation;
        require(state_ == State::Nonzero, ErrorKind::PrecisionExhausted,
                "valuation of O(pi^" + std::to_string(val_) + ") cannot be certified");
        return val_;
    }
    /// A certified lower bound for the valuation.
    int valuation_lower_bound() const { return state_ == State::ExactZero ? kInfiniteValuation : val_; }
    /// Absolute precision: the element is known modulo pi^absolute_precision.
    int absolute_precision() const {
        if (state_ == State::ExactZero) return kInfiniteValuation;
        if (state_ == State::InexactZero) return val_;
        return val_ + rel_;
    }

    /// v >= 0 certified (throws when an inexact zero has negative absolute precision).
    bool is_integral() const {
        if (state_ == State::InexactZero && val_ < 0)
            fail(ErrorKind::PrecisionExhausted, "integrality of O(pi^" + std::to_string(val_) + ") undecided");
        return valuation_lower_bound() >= 0;
    }

    /// Representative in A of this integral element modulo pi^k.
    Pol residue_mod(int k) const {
        const auto& c = *ctx_;
        if (k <= 0) return Pol(c.field());
        if (state_ == State::ExactZero) return Pol(c.field());
        require(absolute_precision() >= k, ErrorKind::PrecisionExhausted,
                "element known only modulo pi^" + std::to_string(absolute_precision()));
        require(val_ >= 0, ErrorKind::InvalidArgument, "element is not integral");
        if (state_ == State::InexactZero || val_ >= k) return Pol(c.field());
        return (c.power(val_) * unit_) % c.power(k);
    }

    /// pi-adic digits of the unit part as residue-field codes.
    std::vector<std::uint64_t> digits() const {
        std::vector<std::uint64_t> out;
        if (state_ != State::Nonzero) return out;
        Residue res(ctx_->prime);
        Pol u = unit_;
        for (int i = 0; i < rel_; ++i) {
            auto [q, r] = divmod(u, ctx_->pi());
            out.push_back(res.field.index(res.reduce(r)));
            u = std::move(q);
        }
        return out;
    }

    LocalElement inverse() const {
        if (state_ == State::ExactZero) fail(ErrorKind::Singular, "inverse of zero");
        if (state_ == State::InexactZero)
            fail(ErrorKind::PrecisionExhausted, "inverse of O(pi^" + std::to_string(val_) + ")");
        return LocalElement(ctx_, State::Nonzero, -val_, inverse_mod(unit_, ctx_->power(rel_)), rel_);
    }

    friend LocalElement operator*(const LocalElement& a, const LocalElement& b) {
        const auto& c = a.ctx_ ? a.ctx_ : b.ctx_;
        if (a.is_exact_zero() || b.is_exact_zero()) return zero(c);
        if (a.is_inexact_zero() || b.is_inexact_zero()) return inexact_zero(c, a.val_ + b.val_);
        const int rel = std::min(a.rel_, b.rel_);
        return LocalElement(c, State::Nonzero, a.val_ + b.val_, (a.unit_ * b.unit_) % c->power(rel), rel);
    }
    friend LocalElement operator+(const LocalElement& a, const LocalElement& b) {
        if (a.is_exact_zero()) return b;
        if (b.is_exact_zero()) return a;
        const auto& c = a.ctx_;
        const int abs = std::min(a.absolute_precision(), b.absolute_precision());
        const int m = std::min(a.val_, b.val_);
        if (m >= abs) return inexact_zero(c, abs);
        const int width = abs - m;
        const Pol& mod = c->power(width);
        Pol s(c->field());
        for (const auto* x : {&a, &b})
            if (x->is_nonzero() && x->val_ < abs) s += c->power(x->val_ - m) * x->unit_;
        s = s % mod;
        auto [t, u] = split_pi(s, c->pi(), width);
        if (t >= width) return inexact_zero(c, abs);
        const int rel = std::min(width - t, c->cap);
        return LocalElement(c, State::Nonzero, m + t, u % c->power(rel), rel);
    }
    friend LocalElement operator-(const LocalElement& a) {
        if (!a.is_nonzero()) return a;
        return LocalElement(a.ctx_, State::Nonzero, a.val_, -a.unit_, a.rel_);
    }
    friend LocalElement operator-(const LocalElement& a, const LocalElement& b) { return a + (-b); }
    friend LocalElement operator/(const LocalElement& a, const LocalElement& b) { return a * b.inverse(); }
    LocalElement& operator+=(const LocalElement& o) { return *this = *this + o; }
    LocalElement& operator-=(const LocalElement& o) { return *this = *this - o; }
    LocalElement& operator*=(const LocalElement& o) { return *this = *this * o; }

    /// Equal to the lesser of the two absolute precisions.
    bool approx_equal(const LocalElement& o) const {
        auto d = *this - o;
        return !d.is_nonzero();
    }

private:
    LocalElement(LocalCtx c, State s, int v, Pol u, int rel)
        : ctx_(std::move(c)), state_(s), val_(v), unit_(std::move(u)), rel_(rel) {}

    LocalCtx ctx_;
    State state_ = State::ExactZero;
    int val_ = 0;
    Pol unit_;
    int rel_ = 0;
};

inline std::string to_string(const LocalElement& a) {
    switch (a.state()) {
    case LocalElement::State::ExactZero: return "0";
    case LocalElement::State::InexactZero: return "O(pi^" + std::to_string(a.absolute_precision()) + ")";
    case LocalElement::State::Nonzero: break;
    }
    return "pi^" + std::to_string(a.valuation()) + "*(" + to_string(a.unit()) + ")+O(pi^" +
           std::to_string(a.absolute_precision()) + ")";
}

/// Square or rectangular matrix over the completion, row-major.
class LocalMatrix {
public:
    LocalMatrix() = default;
    LocalMatrix(LocalCtx c, int rows, int cols)
        : ctx_(std::move(c)), rows_(rows), cols_(cols),
          a_(static_cast<std::size_t>(rows * cols), LocalElement::zero(ctx_)) {}

    static LocalMatrix identity(const LocalCtx& c, int r) {
        LocalMatrix m(c, r, r);
        for (int i = 0; i < r; ++i) m(i, i) = LocalElement::one(c);
        return m;
    }
    static LocalMatrix diagonal(const LocalCtx& c, const std::vector<int>& exps) {
        const int r = static_cast<int>(exps.size());
        LocalMatrix m(c, r, r);
        for (int i = 0; i < r; ++i) m(i, i) = LocalElement::pi_power(c, exps[static_cast<std::size_t>(i)]);
        return m;
    }
    static LocalMatrix from_polys(const LocalCtx& c, const std::vector<std::vector<Pol>>& rows) {
        const int r = static_cast<int>(rows.size());
        const int n = r ? static_cast<int>(rows[0].size()) : 0;
        LocalMatrix m(c, r, n);
        for (int i = 0; i < r; ++i)
            for (int j = 0; j < n; ++j) m(i, j) = LocalElement::from_poly(c, rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]);
        return m;
    }

    const LocalCtx& context() const { return ctx_; }
    int rows() const { return rows_; }
    int cols() const { return cols_; }
    LocalElement& operator()(int i, int j) { return a_[static_cast<std::size_t>(i * cols_ + j)]; }
    const LocalElement& operator()(int i, int j) const { return a_[static_cast<std::size_t>(i * cols_ + j)]; }

    friend LocalMatrix operator*(const LocalMatrix& x, const LocalMatrix& y) {
        require(x.cols_ == y.rows_, ErrorKind::InvalidArgument, "matrix dimension mismatch");
        LocalMatrix z(x.ctx_, x.rows_, y.cols_);
        for (int i = 0; i < x.rows_; ++i)
            for (int k = 0; k < x.cols_; ++k) {
                const auto& xik = x(i, k);
                if (xik.is_exact_zero()) continue;
                for (int j = 0; j < y.cols_; ++j) z(i, j) += xik * y(k, j);
            }
        return z;
    }
    friend LocalMatrix operator+(const LocalMatrix& x, const LocalMatrix& y) {
        LocalMatrix z = x;
        for (std::size_t i = 0; i < z.a_.size(); ++i) z.a_[i] += y.a_[i];
        return z;
    }
    friend LocalMatrix operator-(const LocalMatrix& x, const LocalMatrix& y) {
        LocalMatrix z = x;
        for (std::size_t i = 0; i < z.a_.size(); ++i) z.a_[i] -= y.a_[i];
        return z;
    }
    LocalMatrix scaled(const LocalElement& s) const {
        LocalMatrix z = *this;
        for (auto& e : z.a_) e = e * s;
        return z;
    }

    /// Smallest certified valuation lower bound among the entries.
    int min_valuation() const {
        int m = kInfiniteValuation;
        for (const auto& e : a_) m = std::min(m, e.valuation_lower_bound());
        return m;
    }
    bool is_integral() const {
        for (const auto& e : a_)
            if (!e.is_integral()) return false;
        return true;
    }
    /// Entries reduced modulo pi^k (requires integrality).
    std::vector<std::vector<Pol>> residue_mod(int k) const {
        std::vector<std::vector<Pol>> out(static_cast<std::size_t>(rows_));
        for (int i = 0; i < rows_; ++i)
            for (int j = 0; j < cols_; ++j) out[static_cast<std::size_t>(i)].push_back((*this)(i, j).residue_mod(k));
        return out;
    }

    LocalMatrix transpose() const {
        LocalMatrix t(ctx_, cols_, rows_);
        for (int i = 0; i < rows_; ++i)
            for (int j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
        return t;
    }

    LocalMatrix column(int j) const {
        LocalMatrix c(ctx_, rows_, 1);
        for (int i = 0; i < rows_; ++i) c(i, 0) = (*this)(i, j);
        return c;
    }

private:
    LocalCtx ctx_;
    int rows_ = 0;
    int cols_ = 0;
    std::vector<LocalElement> a_;
};

namespace detail {

/// Position of the minimum-valuation entry among rows/cols in the given ranges
/// (row-major tie break). Throws PrecisionExhausted if an inexact zero could
/// undercut it and Singular if everything is zero.
inline std::pair<int, int> min_valuation_pivot(const LocalMatrix& a, int r0, int r1, int c0, int c1) {
    int best = kInfiniteValuation;
    int bi = -1, bj = -1;
    int inexact_floor = kInfiniteValuation;
    for (int i = r0; i < r1; ++i)
        for (int j = c0; j < c1; ++j) {
            const auto& e = a(i, j);
            if (e.is_nonzero()) {
                if (e.valuation() < best) {
                    best = e.valuation();
                    bi = i;
                    bj = j;
                }
            } else if (e.is_inexact_zero()) {
                inexact_floor = std::min(inexact_floor, e.valuation_lower_bound());
            }
        }
    if (bi < 0) {
        if (inexact_floor != kInfiniteValuation)
            fail(ErrorKind::Singular, "matrix is zero to working precision");
        fail(ErrorKind::Singular, "matrix is singular");
    }
    if (inexact_floor <= best)
        fail(ErrorKind::PrecisionExhausted, "pivot valuation cannot be certified at working precision");
    return {bi, bj};
}

} // namespace detail

/// Inverse by Gauss-Jordan with minimum-valuation column pivoting.
inline LocalMatrix inverse(const LocalMatrix& m) {
    require(m.rows() == m.cols(), ErrorKind::InvalidArgument, "inverse of a non-square matrix");
    const int n = m.rows();
    const auto& c = m.context();
    LocalMatrix a = m;
    LocalMatrix b = LocalMatrix::identity(c, n);
    for (int col = 0; col < n; ++col) {
        auto [pi, pj] = detail::min_valuation_pivot(a, col, n, col, col + 1);
        (void)pj;
        if (pi != col)
            for (int j = 0; j < n; ++j) {
                std::swap(a(pi, j), a(col, j));
                std::swap(b(pi, j), b(col, j));
            }
        const auto inv = a(col, col).inverse();
        for (int j = 0; j < n; ++j) {
            a(col, j) = a(col, j) * inv;
            b(col, j) = b(col, j) * inv;
        }
        a(col, col) = LocalElement::one(c);
        for (int i = 0; i < n; ++i) {
            if (i == col) continue;
            const auto f = a(i, col);
            if (f.is_exact_zero()) continue;
            for (int j = 0; j < n; ++j) {
                a(i, j) -= f * a(col, j);
                b(i, j) -= f * b(col, j);
            }
            a(i, col) = LocalElement::zero(c);
        }
    }
    return b;
}

/// Characteristic polynomial det(lambda I - M), coefficients a_0..a_r
/// (a_r = 1), by the division-free Berkowitz recursion.
inline std::vector<LocalElement> char_poly(const LocalMatrix& m) {
    require(m.rows() == m.cols(), ErrorKind::InvalidArgument, "characteristic polynomial of a non-square matrix");
    const int n = m.rows();
    const auto& c = m.context();
    // p holds coefficients highest degree first
    std::vector<LocalElement> p = {LocalElement::one(c)};
    for (int k = 0; k < n; ++k) {
        // A_k = leading (k+1)x(k+1) block; R = row k cols 0..k-1; C = col k rows 0..k-1
        std::vector<LocalElement> col(static_cast<std::size_t>(k) + 2, LocalElement::zero(c));
        col[0] = LocalElement::one(c);
        col[1] = -m(k, k);
        std::vector<LocalElement> v(static_cast<std::size_t>(k));
        for (int i = 0; i < k; ++i) v[static_cast<std::size_t>(i)] = m(i, k);
        for (int s = 2; s <= k + 1; ++s) {
            LocalElement dot = LocalElement::zero(c);
            for (int i = 0; i < k; ++i) dot += m(k, i) * v[static_cast<std::size_t>(i)];
            col[static_cast<std::size_t>(s)] = -dot;
            std::vector<LocalElement> w(static_cast<std::size_t>(k), LocalElement::zero(c));
            for (int i = 0; i < k; ++i)
                for (int j = 0; j < k; ++j) w[static_cast<std::size_t>(i)] += m(i, j) * v[static_cast<std::size_t>(j)];
            v = std::move(w);
        }
        std::vector<LocalElement> q(static_cast<std::size_t>(k) + 2, LocalElement::zero(c));
        for (std::size_t i = 0; i < q.size(); ++i)
            for (std::size_t j = 0; j < p.size() && j <= i; ++j) q[i] += col[i - j] * p[j];
        p = std::move(q);
    }
    std::reverse(p.begin(), p.end());
    return p;
}

inline LocalElement det(const LocalMatrix& m) {
    auto p = char_poly(m);
    return (m.rows() % 2 == 0) ? p[0] : -p[0];
}

/// M = U * diag(pi^exponents) * V with U, V in GL_r(A_P).
struct SmithForm {
    LocalMatrix u;
    std::vector<int> exponents;
    LocalMatrix v;
};

inline SmithForm smith_normal_form(const LocalMatrix& m) {
    require(m.rows() == m.cols(), ErrorKind::InvalidArgument, "Smith form of a non-square matrix");
    const int n = m.rows();
    const auto& c = m.context();
    LocalMatrix a = m;
    LocalMatrix u = LocalMatrix::identity(c, n);
    LocalMatrix v = LocalMatrix::identity(c, n);
    std::vector<int> exps;
    for (int t = 0; t < n; ++t) {
        auto [pi, pj] = detail::min_valuation_pivot(a, t, n, t, n);
        if (pi != t) {
            for (int j = 0; j < n; ++j) std::swap(a(pi, j), a(t, j));
            for (int i = 0; i < n; ++i) std::swap(u(i, pi), u(i, t));
        }
        if (pj != t) {
            for (int i = 0; i < n; ++i) std::swap(a(i, pj), a(i, t));
            for (int j = 0; j < n; ++j) std::swap(v(pj, j), v(t, j));
        }
        const int e = a(t, t).valuation();
        // scale row t so the pivot becomes pi^e
        const auto unit = a(t, t) * LocalElement::pi_power(c, -e);
        const auto unit_inv = unit.inverse();
        for (int j = t; j < n; ++j) a(t, j) = a(t, j) * unit_inv;
        for (int i = 0; i < n; ++i) u(i, t) = u(i, t) * unit;
        const auto pivot_inv = LocalElement::pi_power(c, -e);
        for (int i = t + 1; i < n; ++i) {
            if (a(i, t).is_exact_zero()) continue;
            const auto f = a(i, t) * pivot_inv;
            for (int j = t + 1; j < n; ++j) a(i, j) -= f * a(t, j);
            a(i, t) = LocalElement::zero(c);
            for (int r = 0; r < n; ++r) u(r, t) += u(r, i) * f;
        }
        for (int j = t + 1; j < n; ++j) {
            if (a(t, j).is_exact_zero()) continue;
            const auto f = a(t, j) * pivot_inv;
            a(t, j) = LocalElement::zero(c);
            for (int s = 0; s < n; ++s) v(t, s) += f * v(j, s);
        }
        a(t, t) = LocalElement::pi_power(c, e);
        exps.push_back(e);
    }
    return {u, exps, v};
}

/// Elementary divisor exponents only.
inline std::vector<int> elementary_divisors(const LocalMatrix& m) { return smith_normal_form(m).exponents; }

} // namespace dmv
