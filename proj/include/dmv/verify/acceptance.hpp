#pragma once

#include <chrono>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "dmv/bounds.hpp"
#include "dmv/goodprime.hpp"
#include "dmv/verify/oracles.hpp"

namespace dmv::acceptance {

struct Options {
    int precision = 12;
    std::uint64_t budget = std::uint64_t{1} << 16;
    int scan_max_degree = 6;
    std::uint64_t seed = 0;
};

struct Result {
    int id = 0;
    std::string name;
    bool passed = false;
    bool budget_exceeded = false;
    std::string detail;
    double seconds = 0.0;
    double limit_seconds = 0.0; // 0 means no runtime limit

    std::string line() const {
        std::ostringstream os;
        os << "criterion " << id << " " << (passed ? "PASS" : "FAIL") << "  " << name << "  " << detail << "  [" << std::fixed;
        os.precision(2);
        os << seconds << " s";
        if (limit_seconds > 0) os << " / limit " << limit_seconds << " s";
        os << "]";
        return os.str();
    }
};

namespace detail {

inline Prime first_prime(const Fq& F, int d) {
    std::optional<Prime> out;
    for_each_prime_of_degree(F, d, [&](const Prime& P) {
        out = P;
        return false;
    });
    return *out;
}

/// Accumulates a verdict with a short failure log.
struct Tally {
    std::uint64_t checked = 0;
    std::uint64_t failures = 0;
    std::string first_failure;

    void expect(bool ok, const std::string& what) {
        ++checked;
        if (!ok && failures++ == 0) first_failure = what;
    }
    std::string summary() const {
        std::string s = "checked=" + std::to_string(checked) + " failures=" + std::to_string(failures);
        if (failures) s += " first=" + first_failure;
        return s;
    }
};

inline std::string str(const BigInt& x) { return x.str(); }

} // namespace detail

/// Hecke degree of diag(pi^{-1}, 1, ..., 1) at depth one equals |k(P)|^{r-1}.
inline std::string hecke_degree_formula(const Options& o, detail::Tally& t) {
    for (std::uint64_t q : {2, 3})
        for (int d : {1, 2})
            for (int r : {2, 3}) {
                const auto Q = ipow(q, static_cast<std::uint64_t>(d));
                if (ipow(Q, static_cast<std::uint64_t>(r * r)) > (std::uint64_t{1} << 16)) continue;
                const auto F = galois_field(q);
                const auto P = detail::first_prime(F, d);
                const auto c = make_local(P, o.precision);
                const auto g = standard_hecke_matrix(c, r);
                const auto got = hecke_degree(g, 1, o.budget).degree;
                const auto want = big_pow(BigInt(Q), static_cast<std::uint64_t>(r - 1));
                const std::string tag = "q=" + std::to_string(q) + ",d=" + std::to_string(d) + ",r=" + std::to_string(r);
                t.expect(got == want, tag + " degree " + detail::str(got));
                t.expect(BigInt(oracle::hecke_degree(g, 1)) == want, tag + " coset oracle");
            }
    return {};
}

/// stabilizer index >= (1 - 1/q)^r index^{1/r} over all sublattices of index <= 2^4, q = 2, r <= 3.
inline std::string gitter_bound(const Options& o, detail::Tally& t) {
    const auto F = galois_field(2);
    const auto P = make_prime(parse_poly(F, "t"));
    const auto c = make_local(P, o.precision);
    const std::vector<std::pair<std::string, int>> orders = {{"x", 1},       {"x", 2},       {"x", 3},           {"x^2+x+1", 1}, {"x^2+t", 1},
                                                             {"x^2+x", 1},   {"x^3+x+1", 1}, {"x^3+t", 1},       {"x^3+x^2+x", 1}};
    std::uint64_t skipped = 0;
    for (const auto& [f, rp] : orders) {
        const auto S = make_order(c, parse_bivariate(F, f), rp);
        std::map<int, std::vector<PMat>> gens; // by depth
        for (const auto& h : enumerate_hermite_sublattices(P, S.r(), 4)) {
            const auto basis = LocalMatrix::from_polys(c, h);
            const auto divs = elementary_divisors(basis);
            const int k = std::max(1, divs.back());
            if (!is_saturated(S, ChainRing(P, k), basis.residue_mod(k))) {
                ++skipped;
                continue;
            }
            if (!gens.count(k)) gens[k] = order_gl_generators(S, ChainRing(P, k), o.budget);
            const auto res = stabilizer_index(S, basis, k, o.budget, gens[k]);
            t.expect(gitter_inequality(res.orbit_size, res.lattice_index, 2, S.r()),
                     f + " r'=" + std::to_string(rp) + " orbit " + std::to_string(res.orbit_size) + " index " + detail::str(res.lattice_index));
        }
    }
    return "skipped_unsaturated=" + std::to_string(skipped);
}

/// Closed-form |GL_r(R/m^k)| and |Mat_r(R/m^k)| against enumeration; |GL|/|Mat| >= (1 - 1/q')^r.
inline std::string matrix_group_count(const Options&, detail::Tally& t) {
    std::uint64_t cases = 0;
    for (auto [q, d] : std::vector<std::pair<std::uint64_t, int>>{{2, 1}, {3, 1}, {4, 1}, {5, 1}, {7, 1}, {8, 1}, {9, 1}, {16, 1}, {2, 2}, {3, 2}, {2, 3}, {2, 4}}) {
        const auto F = galois_field(q);
        const auto P = detail::first_prime(F, d);
        const auto Q = P.residue_size();
        for (int r = 1; r <= 3; ++r)
            for (int k = 1;; ++k) {
                const BigInt total = big_pow(BigInt(Q), static_cast<std::uint64_t>(k * r * r));
                if (total > (BigInt(1) << 16)) break;
                ++cases;
                const auto closed = count_matrix_group(r, Q, k);
                const auto [gl, all] = oracle::count_matrix_group(P, r, k);
                const std::string tag = "Q=" + std::to_string(Q) + ",r=" + std::to_string(r) + ",k=" + std::to_string(k);
                t.expect(closed.gl == gl && closed.mat == all, tag + " count");
                // |GL|/|Mat| >= ((Q-1)/Q)^r
                t.expect(closed.gl * big_pow(BigInt(Q), static_cast<std::uint64_t>(r)) >=
                             closed.mat * big_pow(BigInt(Q - 1), static_cast<std::uint64_t>(r)),
                         tag + " density");
            }
    }
    return "cases=" + std::to_string(cases);
}

/// Samples k_1 D k_2 with k_i in the depth-1 congruence group; the companion of lambda^r - pi stays bounded.
inline std::string newton_certification(const Options& o, detail::Tally& t) {
    for (std::uint64_t q : {2, 3})
        for (int r : {2, 3}) {
            const auto F = galois_field(q);
            const auto c = make_local(make_prime(parse_poly(F, "t")), o.precision);
            const auto rep = unboundedness_sample_check(standard_hecke_matrix(c, r), 100, o.seed + 17 * q + r);
            const std::string tag = "q=" + std::to_string(q) + ",r=" + std::to_string(r);
            t.expect(rep.samples == 100 && rep.passed == 100, tag + " passed " + std::to_string(rep.passed) + "/100");
            const auto comp = pi_companion(c, r);
            t.expect(projectively_bounded(comp), tag + " companion bounded");
            t.expect(!check_sample(comp).pass && check_sample(comp).segments == 1, tag + " companion single segment");
            // its r-th power is pi times the identity
            const auto pw = matrix_power(comp, r);
            bool scalar = true;
            for (int i = 0; i < r; ++i)
                for (int j = 0; j < r; ++j) scalar = scalar && pw(i, j).approx_equal(i == j ? LocalElement::pi_power(c, 1) : LocalElement::zero(c));
            t.expect(scalar, tag + " companion power scalar");
        }
    return {};
}

/// Single-slope predicate against SNF-spread growth at n = r, 2r, 3r.
inline std::string boundedness_cross_check(const Options& o, detail::Tally& t) {
    std::mt19937_64 rng(o.seed + 5);
    const auto F = galois_field(2);
    // spreads of cubes of valuation-[-2,2] entries stay far inside this cap
    const auto c = make_local(make_prime(parse_poly(F, "t")), std::max(o.precision, 40));
    int drawn = 0, bounded = 0;
    while (drawn < 200) {
        LocalMatrix m(c, 2, 2);
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) {
                std::vector<Fq::value_type> u = {1, static_cast<Fq::value_type>(rng() & 1), static_cast<Fq::value_type>(rng() & 1)};
                m(i, j) = LocalElement::pi_power(c, static_cast<int>(rng() % 5) - 2) * LocalElement::from_poly(c, Pol(F, u));
            }
        const auto d = det(m);
        if (!d.is_nonzero()) continue;
        ++drawn;
        try {
            const bool b = projectively_bounded(m);
            const int s1 = snf_spread(m, 2), s2 = snf_spread(m, 4), s3 = snf_spread(m, 6);
            bounded += b;
            t.expect(b == !(s1 < s2 && s2 < s3), "sample " + std::to_string(drawn));
        } catch (const Error& e) {
            t.expect(false, "sample " + std::to_string(drawn) + " raised " + std::string(to_string(e.kind())));
        }
    }
    return "bounded=" + std::to_string(bounded) + "/200";
}

/// h(y^2 = t^3 - t over F_3) = 4 against divisor counting, with the class-number and genus bounds.
inline std::string class_number_check(const Options& o, detail::Tally& t) {
    const auto F = galois_field(3);
    const auto a = parse_poly(F, "t^3-t");
    const auto E = make_kummer_extension(F, 2, a);
    const auto h = class_number(E, o.budget);
    const auto oracle_h = oracle::class_number_from_divisors(3, E.genus, {BigInt(oracle::hyperelliptic_points(F, a, 1))});
    t.expect(h == 4, "h=" + detail::str(h));
    t.expect(oracle_h == 4, "divisor oracle h=" + detail::str(oracle_h));
    const auto lb = clg_lower_bound(E.q_prime, E.genus);
    t.expect(Rational(h) >= lb, "lower bound " + to_string(lb));
    t.expect(Rational(h) >= Rational(2, 13), "h >= 2/13");
    t.expect(genus_bound_holds(E.q_prime, h, E.genus), "genus bound");
    t.expect(E.genus <= genus_upper_from_classnumber(E.q_prime, h), "genus <= 8 + 2 log_q h");
    return "h=" + detail::str(h) + " genus=" + std::to_string(E.genus) + " clg_bound=" + to_string(lb);
}

/// |#split - q^i/(ik)| < bound for the enumerable normal extensions, i <= 6.
inline std::string cebotarev_matrix(const Options& o, detail::Tally& t) {
    const auto F2 = galois_field(2), F5 = galois_field(5);
    const std::vector<std::pair<std::string, Extension>> exts = {{"C2/F5", make_constant_extension(F5, 2)},
                                                                 {"C2/F2", make_constant_extension(F2, 2)},
                                                                 {"C3/F2", make_constant_extension(F2, 3)},
                                                                 {"x^2=t/F5", make_kummer_extension(F5, 2, parse_poly(F5, "t"))}};
    int cases = 0;
    for (const auto& [name, E] : exts)
        for (int i = 1; i <= 6; ++i) {
            if (i % extension_degrees(E).first != 0) continue;
            ++cases;
            const auto rep = cebotarev_check(E, i, o.budget);
            t.expect(rep.holds, name + " i=" + std::to_string(i) + " count " + detail::str(rep.count));
        }
    const auto rep = cebotarev_check(exts[0].second, 2, o.budget);
    t.expect(rep.count == 10, "C2/F5 i=2 count " + detail::str(rep.count));
    t.expect(rep.main_term == Rational(25, 2), "main term " + to_string(rep.main_term));
    t.expect(std::abs(rep.bound_approx - 8.2360679775) < 1e-6, "bound " + std::to_string(rep.bound_approx));
    std::ostringstream os;
    os << "cases=" << cases << " C2/F5,i=2: count=" << rep.count << " main=" << to_string(rep.main_term) << " bound~" << rep.bound_approx;
    return os.str();
}

/// Search, shrink and Hecke element for the elliptic datum; refusal for the inseparable datum.
inline std::string good_prime_pipeline(const Options& o, detail::Tally& t) {
    const auto F = galois_field(3);
    auto X = make_datum(make_kummer_extension(F, 2, parse_poly(F, "t^3-t")), 2);
    X.index_override = BigInt(21);
    const auto rep = find_good_prime(X, 1, o.scan_max_degree, o.budget, o.precision);
    t.expect(rep.predegree > 81, "D(X)=" + detail::str(rep.predegree));
    t.expect(rep.certificate.has_value(), "certificate found");
    std::string found = "none";
    if (rep.certificate && rep.shrink) {
        const auto& P = rep.certificate->prime;
        found = to_string(P.poly);
        const auto Q = P.residue_size();
        t.expect(rep.shrink->index == BigInt(oracle::count_matrix_group(P, 2, 1).first), "shrink index " + detail::str(rep.shrink->index));
        t.expect(rep.shrink->index < big_pow(BigInt(Q), 4), "shrink index below |k(P)|^4");
        auto Y = X;
        Y.level = rep.shrink->level;
        const auto h = certificate_hecke_element(Y, *rep.certificate, o.precision);
        const auto c = make_local(P, o.precision);
        const auto g = level_aligned(h, to_local(c, rep.certificate->s));
        const auto want = BigInt(Q);
        t.expect(hecke_degree(g, 1, o.budget).degree == want, "hecke degree");
        t.expect(BigInt(oracle::hecke_degree(g, 1)) == want, "hecke degree oracle");
        const auto samples = unboundedness_sample_check(g, 100, o.seed + 8);
        t.expect(samples.passed == samples.samples, "newton samples " + std::to_string(samples.passed));
    }
    const auto F2 = galois_field(2);
    auto Z = make_datum(make_generic_extension(F2, parse_bivariate(F2, "x^2-t"), 0, 1, {1, 2}), 2);
    int refused = 0;
    for (const auto& P : enumerate_primes(F2, 6)) {
        auto W = Z;
        W.level.set(P, {LocalLevel::Kind::Congruence, rmat_identity(F2, 2), 1});
        const auto chk = is_good_prime(W, P, o.precision);
        const bool b = std::find(chk.failed.begin(), chk.failed.end(), "b") != chk.failed.end();
        refused += b;
        t.expect(!chk.certificate && b, "inseparable at " + to_string(P.poly));
    }
    return "prime=" + found + " scanned=" + std::to_string(rep.scanned) + " inseparable_refused=" + std::to_string(refused) + "/23";
}

/// Components: 1 for maximal level, 3 for depth-1 congruence at t^2+t+1 over F_2.
inline std::string components_check(const Options&, detail::Tally& t) {
    for (std::uint64_t q : {2, 3, 4, 5}) {
        const auto F = galois_field(q);
        t.expect(count_components(F, LevelMap{}) == 1 && oracle::count_components(F, {}) == 1, "maximal q=" + std::to_string(q));
    }
    const auto F = galois_field(2);
    const auto P = make_prime(parse_poly(F, "t^2+t+1"));
    LevelMap K;
    K.set(P, {LocalLevel::Kind::Congruence, rmat_identity(F, 2), 1});
    const auto got = count_components(F, K);
    t.expect(got == 3, "t^2+t+1 gives " + detail::str(got));
    t.expect(oracle::count_components(F, {{P, 1}}) == 3, "oracle at t^2+t+1");
    return "t^2+t+1: " + detail::str(got);
}

/// Threshold values and the intersection ledger on random triples.
inline std::string thresholds_check(const Options& o, detail::Tally& t) {
    t.expect(separable_N(2, 1) == 18, "N(2,1)");
    t.expect(separable_N(2, 0) == 8, "N(2,0)");
    t.expect(separable_N(3, 2) == 84, "N(3,2)");
    t.expect(induction_threshold(2, 3, 2, 3) == 5184, "threshold(2,3,2,3)");
    t.expect(induction_threshold(2, 2, 1, 1) == 2, "threshold(2,2,1,1)");
    std::mt19937_64 rng(o.seed + 10);
    for (int i = 0; i < 1000; ++i) {
        const BigInt degZ = 1 + rng() % 100000;
        const std::uint64_t kp = 2 + rng() % 1000;
        const int r = 1 + static_cast<int>(rng() % 8);
        t.expect(intersection_bound(degZ, kp, r) <= degZ * degZ * big_pow(BigInt(kp), static_cast<std::uint64_t>(r - 1)),
                 "triple " + std::to_string(i));
    }
    return {};
}

struct Criterion {
    int id;
    std::string name;
    double limit_seconds;
    std::function<std::string(const Options&, detail::Tally&)> run;
};

inline std::vector<Criterion> criteria() {
    return {{1, "hecke-degree-formula", 60, hecke_degree_formula},   {2, "gitter-bound", 120, gitter_bound},
            {3, "matrix-group-count", 0, matrix_group_count},        {4, "newton-certification", 0, newton_certification},
            {5, "boundedness-cross-check", 0, boundedness_cross_check}, {6, "class-number", 0, class_number_check},
            {7, "cebotarev", 0, cebotarev_matrix},                   {8, "good-prime-pipeline", 60, good_prime_pipeline},
            {9, "components", 0, components_check},                  {10, "thresholds", 0, thresholds_check}};
}

inline Result run(const Criterion& c, const Options& o) {
    Result r;
    r.id = c.id;
    r.name = c.name;
    r.limit_seconds = c.limit_seconds;
    detail::Tally t;
    const auto start = std::chrono::steady_clock::now();
    std::string extra;
    bool raised = false;
    try {
        extra = c.run(o, t);
    } catch (const Error& e) {
        raised = true;
        r.budget_exceeded = e.kind() == ErrorKind::BudgetExceeded;
        extra = std::string("raised ") + e.what();
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = c.limit_seconds <= 0 || r.seconds < c.limit_seconds;
    r.passed = !raised && t.failures == 0 && t.checked > 0 && in_time;
    r.detail = t.summary();
    if (!extra.empty()) r.detail += " " + extra;
    if (!in_time) r.detail += " over time limit";
    return r;
}

inline std::vector<Result> run_all(const Options& o, const std::function<void(const Result&)>& on_result = {}) {
    std::vector<Result> out;
    for (const auto& c : criteria()) {
        out.push_back(run(c, o));
        if (on_result) on_result(out.back());
    }
    return out;
}

} // namespace dmv::acceptance
