#pragma once

#include <cctype>
#include <string>
#include <vector>

#include "dmv/primes.hpp"

namespace dmv {

/// Descending `c*t^k` terms joined by `+`; coefficients are element codes.
inline std::string to_string(const Pol& f, const std::string& var = "t") {
    if (f.is_zero()) return "0";
    std::string out;
    const auto& fld = f.field();
    for (int k = f.degree(); k >= 0; --k) {
        const auto c = f.coeff(static_cast<std::size_t>(k));
        if (fld.is_zero(c)) continue;
        if (!out.empty()) out += "+";
        const auto code = std::to_string(fld.index(c));
        if (k == 0) {
            out += code;
            continue;
        }
        if (code != "1") out += code + "*";
        out += var;
        if (k > 1) out += "^" + std::to_string(k);
    }
    return out;
}

/// Element of F_q(t) as num/den with den monic and gcd 1.
struct RatFunc {
    Pol num;
    Pol den;

    static RatFunc from(const Pol& p) { return {p, Pol::one(p.field())}; }
    bool is_zero() const { return num.is_zero(); }
    bool is_polynomial() const { return den.degree() == 0; }

    static RatFunc make(Pol n, Pol d) {
        require(!d.is_zero(), ErrorKind::MalformedInput, "division by zero");
        if (n.is_zero()) return {n, Pol::one(d.field())};
        auto g = gcd(n, d);
        n = n / g;
        d = d / g;
        auto li = d.field().inv(d.lead());
        return {n.scaled(li), d.scaled(li)};
    }
    friend RatFunc operator+(const RatFunc& a, const RatFunc& b) { return make(a.num * b.den + b.num * a.den, a.den * b.den); }
    friend RatFunc operator-(const RatFunc& a) { return {-a.num, a.den}; }
    friend RatFunc operator-(const RatFunc& a, const RatFunc& b) { return a + (-b); }
    friend RatFunc operator*(const RatFunc& a, const RatFunc& b) { return make(a.num * b.num, a.den * b.den); }
    friend RatFunc operator/(const RatFunc& a, const RatFunc& b) {
        require(!b.is_zero(), ErrorKind::MalformedInput, "division by zero");
        return make(a.num * b.den, a.den * b.num);
    }
    friend bool operator==(const RatFunc& a, const RatFunc& b) { return a.num == b.num && a.den == b.den; }
};

inline std::string to_string(const RatFunc& r) {
    if (r.is_polynomial()) return to_string(r.num);
    return "(" + to_string(r.num) + ")/(" + to_string(r.den) + ")";
}

/// Polynomial in x with coefficients in F_q(t), index = power of x.
using BiRat = std::vector<RatFunc>;

namespace detail {

class ExprParser {
public:
    ExprParser(const Fq& f, const std::string& s) : f_(f), s_(s) {}

    BiRat parse() {
        auto v = expr();
        skip();
        if (pos_ != s_.size()) error("unexpected character '" + std::string(1, s_[pos_]) + "'");
        return v;
    }

private:
    [[noreturn]] void error(const std::string& m) const {
        fail(ErrorKind::MalformedInput, "cannot parse '" + s_ + "' at offset " + std::to_string(pos_) + ": " + m);
    }
    void skip() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    bool eat(char c) {
        skip();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    RatFunc zero() const { return RatFunc::from(Pol(f_)); }
    BiRat constant(const RatFunc& r) const { return normalize({r}); }
    BiRat normalize(BiRat v) const {
        while (!v.empty() && v.back().is_zero()) v.pop_back();
        return v;
    }
    BiRat add(const BiRat& a, const BiRat& b) const {
        BiRat r(std::max(a.size(), b.size()), zero());
        for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i];
        for (std::size_t i = 0; i < b.size(); ++i) r[i] = r[i] + b[i];
        return normalize(r);
    }
    BiRat neg(const BiRat& a) const {
        BiRat r = a;
        for (auto& c : r) c = -c;
        return r;
    }
    BiRat mul(const BiRat& a, const BiRat& b) const {
        if (a.empty() || b.empty()) return {};
        BiRat r(a.size() + b.size() - 1, zero());
        for (std::size_t i = 0; i < a.size(); ++i)
            for (std::size_t j = 0; j < b.size(); ++j) r[i + j] = r[i + j] + a[i] * b[j];
        return normalize(r);
    }

    BiRat expr() {
        BiRat v = term();
        for (;;) {
            if (eat('+'))
                v = add(v, term());
            else if (eat('-'))
                v = add(v, neg(term()));
            else
                return v;
        }
    }
    BiRat term() {
        BiRat v = unary();
        for (;;) {
            if (eat('*')) {
                v = mul(v, unary());
            } else if (eat('/')) {
                auto d = unary();
                if (d.size() > 1) error("division by an expression involving x");
                if (d.empty()) error("division by zero");
                for (auto& c : v) c = c / d[0];
            } else {
                return v;
            }
        }
    }
    BiRat unary() {
        if (eat('-')) return neg(unary());
        if (eat('+')) return unary();
        return power();
    }
    BiRat power() {
        BiRat base = atom();
        if (eat('^')) {
            skip();
            std::size_t start = pos_;
            while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
            if (start == pos_) error("expected a non-negative integer exponent");
            const auto e = std::stoull(s_.substr(start, pos_ - start));
            if (e > 4096) error("exponent too large");
            BiRat r = constant(RatFunc::from(Pol::one(f_)));
            for (std::uint64_t i = 0; i < e; ++i) r = mul(r, base);
            return r;
        }
        return base;
    }
    BiRat atom() {
        skip();
        if (pos_ >= s_.size()) error("unexpected end of input");
        const char c = s_[pos_];
        if (c == '(') {
            ++pos_;
            auto v = expr();
            if (!eat(')')) error("expected ')'");
            return v;
        }
        if (c == 't') {
            ++pos_;
            return constant(RatFunc::from(Pol::x(f_)));
        }
        if (c == 'x') {
            ++pos_;
            return {zero(), RatFunc::from(Pol::one(f_))};
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t start = pos_;
            while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
            BigInt n(s_.substr(start, pos_ - start));
            const auto code = static_cast<std::uint64_t>(n % f_.order());
            return constant(RatFunc::from(Pol::constant(f_, f_.element(code))));
        }
        error("unexpected character '" + std::string(1, c) + "'");
    }

    const Fq& f_;
    const std::string& s_;
    std::size_t pos_ = 0;
};

} // namespace detail

inline BiRat parse_birat(const Fq& f, const std::string& s) { return detail::ExprParser(f, s).parse(); }

/// An element of F_q(t); x must not occur.
inline RatFunc parse_ratfunc(const Fq& f, const std::string& s) {
    auto v = parse_birat(f, s);
    require(v.size() <= 1, ErrorKind::MalformedInput, "'" + s + "' must not involve x");
    return v.empty() ? RatFunc::from(Pol(f)) : v[0];
}

/// A polynomial in t; x and denominators must not occur.
inline Pol parse_poly(const Fq& f, const std::string& s) {
    auto r = parse_ratfunc(f, s);
    require(r.is_polynomial(), ErrorKind::MalformedInput, "'" + s + "' is not a polynomial in t");
    return r.num;
}

/// A polynomial in x over A = F_q[t], coefficients indexed by the power of x.
inline std::vector<Pol> parse_bivariate(const Fq& f, const std::string& s) {
    auto v = parse_birat(f, s);
    std::vector<Pol> out;
    for (auto& c : v) {
        require(c.is_polynomial(), ErrorKind::MalformedInput, "'" + s + "' has non-polynomial coefficients in t");
        out.push_back(c.num);
    }
    return out;
}

inline std::string to_string_bivariate(const std::vector<Pol>& f) {
    std::string out;
    for (std::size_t k = f.size(); k-- > 0;) {
        if (f[k].is_zero()) continue;
        if (!out.empty()) out += "+";
        std::string c = to_string(f[k]);
        if (k == 0) {
            out += (f[k].degree() > 0 && c.find('+') != std::string::npos) ? "(" + c + ")" : c;
            continue;
        }
        if (c != "1") out += "(" + c + ")*";
        out += "x";
        if (k > 1) out += "^" + std::to_string(k);
    }
    return out.empty() ? "0" : out;
}

} // namespace dmv
