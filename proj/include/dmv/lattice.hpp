#pragma once

#include <deque>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "dmv/local.hpp"

namespace dmv {

/// Matrix over A (or A/pi^k), row-major.
using PMat = std::vector<std::vector<Pol>>;

/// The chain ring A/pi^k. Elements are polynomials of degree < d k.
struct ChainRing {
    Prime prime;
    int k = 1;
    Pol modulus;

    ChainRing(Prime p, int depth) : prime(std::move(p)), k(depth) {
        require(k >= 1, ErrorKind::InvalidArgument, "depth must be >= 1");
        modulus = poly_pow(prime.poly, static_cast<std::uint64_t>(k));
    }

    const Fq& field() const { return prime.field(); }
    int dim() const { return prime.degree() * k; } // dimension over F_q
    std::uint64_t size() const { return ipow(field().order(), static_cast<std::uint64_t>(dim())); }

    Pol reduce(const Pol& a) const { return a % modulus; }
    Pol mul(const Pol& a, const Pol& b) const { return (a * b) % modulus; }
    /// Valuation capped at k (k means zero in the ring).
    int val(const Pol& a) const { return split_pi(a % modulus, prime.poly, k).first; }
    Pol pi_power(int e) const { return poly_pow(prime.poly, static_cast<std::uint64_t>(e)) % modulus; }
    Pol unit_inverse(const Pol& u) const { return inverse_mod(u, modulus); }
    /// a / pi^e for a with val(a) >= e, as an element modulo pi^(k-e), lifted.
    Pol divide_pi(const Pol& a, int e) const { return a / poly_pow(prime.poly, static_cast<std::uint64_t>(e)); }

    Pol element(std::uint64_t code) const {
        std::vector<Fq::value_type> v(static_cast<std::size_t>(dim()));
        for (auto& c : v) {
            c = field().element(code % field().order());
            code /= field().order();
        }
        return Pol(field(), std::move(v));
    }
    std::uint64_t code(const Pol& a) const {
        std::uint64_t c = 0;
        const auto r = a % modulus;
        for (std::size_t i = static_cast<std::size_t>(dim()); i-- > 0;) c = c * field().order() + field().index(r.coeff(i));
        return c;
    }
};

inline PMat pmat_identity(const Fq& f, int n) {
    PMat m(static_cast<std::size_t>(n), std::vector<Pol>(static_cast<std::size_t>(n), Pol(f)));
    for (int i = 0; i < n; ++i) m[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] = Pol::one(f);
    return m;
}

inline PMat pmat_mul(const ChainRing& R, const PMat& a, const PMat& b) {
    const std::size_t n = a.size(), m = b.size(), p = b.empty() ? 0 : b[0].size();
    PMat c(n, std::vector<Pol>(p, Pol(R.field())));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < m; ++k) {
            if (a[i][k].is_zero()) continue;
            for (std::size_t j = 0; j < p; ++j) c[i][j] += a[i][k] * b[k][j];
        }
    for (auto& row : c)
        for (auto& e : row) e = R.reduce(e);
    return c;
}

/// Column Hermite form of the lattice spanned by the columns of `gens` plus
/// pi^k A^r, over A/pi^k: upper triangular, diagonal pi^{e_i}, entry (i, j)
/// for j > i reduced modulo pi^{e_i}. Distinct lattices give distinct forms.
struct Hermite {
    PMat h;
    std::vector<int> exps;

    std::vector<std::uint64_t> key(const ChainRing& R) const {
        std::vector<std::uint64_t> out;
        for (const auto& row : h)
            for (const auto& e : row) out.push_back(R.code(e));
        return out;
    }
    int total() const {
        int s = 0;
        for (int e : exps) s += e;
        return s;
    }
};

inline Hermite hermite_form(const ChainRing& R, const PMat& gens) {
    const std::size_t r = gens.size();
    const std::size_t ncols = r ? gens[0].size() : 0;
    std::vector<std::vector<Pol>> live; // columns
    for (std::size_t j = 0; j < ncols; ++j) {
        std::vector<Pol> col(r);
        for (std::size_t i = 0; i < r; ++i) col[i] = R.reduce(gens[i][j]);
        live.push_back(std::move(col));
    }
    PMat h(r, std::vector<Pol>(r, Pol(R.field())));
    std::vector<int> exps(r, R.k);
    for (std::size_t i = r; i-- > 0;) {
        int best = R.k;
        std::size_t bc = live.size();
        for (std::size_t c = 0; c < live.size(); ++c) {
            const int v = R.val(live[c][i]);
            if (v < best) {
                best = v;
                bc = c;
            }
        }
        std::vector<Pol> pivot(r, Pol(R.field()));
        if (bc == live.size()) {
            pivot[i] = R.pi_power(R.k); // zero in the ring; marks pi^k e_i
            for (auto& col : live) col[i] = Pol(R.field());
        } else {
            pivot = live[bc];
            live.erase(live.begin() + static_cast<std::ptrdiff_t>(bc));
            const Pol unit = R.divide_pi(pivot[i], best);
            const Pol uinv = R.unit_inverse(unit);
            for (auto& e : pivot) e = R.mul(e, uinv);
            for (auto& col : live) {
                if (col[i].is_zero()) continue;
                const Pol f = R.divide_pi(col[i], best);
                for (std::size_t s = 0; s <= i; ++s) col[s] = R.reduce(col[s] - f * pivot[s]);
            }
            // pi^{k-e} * pivot vanishes in row i but may add vectors above it
            if (best > 0) {
                std::vector<Pol> extra(r, Pol(R.field()));
                bool nonzero = false;
                const Pol scale = R.pi_power(R.k - best);
                for (std::size_t s = 0; s < i; ++s) {
                    extra[s] = R.mul(pivot[s], scale);
                    nonzero = nonzero || !extra[s].is_zero();
                }
                if (nonzero) live.push_back(std::move(extra));
            }
        }
        exps[i] = best;
        for (std::size_t s = 0; s < r; ++s) h[s][i] = pivot[s];
    }
    // reduce above-diagonal entries: column j, rows j-1 down to 0
    for (std::size_t j = 0; j < r; ++j)
        for (std::size_t i = j; i-- > 0;) {
            const int e = exps[i];
            if (e >= R.k) continue; // entries already reduced modulo pi^k
            if (e == 0) {
                const Pol f = h[i][j];
                for (std::size_t s = 0; s <= i; ++s) h[s][j] = R.reduce(h[s][j] - f * h[s][i]);
                continue;
            }
            const Pol pe = R.pi_power(e);
            const Pol f = h[i][j] / pe;
            if (f.is_zero()) continue;
            for (std::size_t s = 0; s <= i; ++s) h[s][j] = R.reduce(h[s][j] - f * h[s][i]);
        }
    return {h, exps};
}

/// Full-rank A_P-lattice spanned by the columns of `basis`.
struct Lattice {
    LocalMatrix basis;
    std::vector<int> divisors; // elementary divisors relative to A_P^r

    static Lattice from_basis(LocalMatrix b) {
        auto d = elementary_divisors(b);
        return {std::move(b), std::move(d)};
    }
    static Lattice standard(const LocalCtx& c, int r) { return from_basis(LocalMatrix::identity(c, r)); }
    int rank() const { return basis.rows(); }
};

/// Lambda contained in Lambda' (columns of basis'^{-1} basis integral).
inline bool contains(const Lattice& outer, const Lattice& inner) { return (inverse(outer.basis) * inner.basis).is_integral(); }

/// Equality by the unit-integral test.
inline bool operator==(const Lattice& a, const Lattice& b) {
    auto m = inverse(a.basis) * b.basis;
    if (!m.is_integral()) return false;
    return det(m).valuation() == 0;
}

/// [Lambda' : Lambda] for Lambda inside Lambda'.
inline BigInt lattice_index(const Lattice& inner, const Lattice& outer) {
    auto m = inverse(outer.basis) * inner.basis;
    auto e = elementary_divisors(m);
    int s = 0;
    for (int x : e) {
        require(x >= 0, ErrorKind::NotContained, "lattice is not contained in the reference lattice");
        s += x;
    }
    return big_pow(BigInt(outer.basis.context()->residue_size()), static_cast<std::uint64_t>(s));
}

struct GroupCounts {
    BigInt gl;
    BigInt mat;
};

/// |GL_r(R/m^k)| and |Mat_r(R/m^k)| for residue field size qp.
inline GroupCounts count_matrix_group(int r, std::uint64_t qp, int k) {
    require(r >= 1 && k >= 1, ErrorKind::InvalidArgument, "r and k must be >= 1");
    const BigInt Q = qp;
    BigInt gl = big_pow(Q, static_cast<std::uint64_t>((k - 1) * r * r));
    for (int i = 0; i < r; ++i) gl *= big_pow(Q, static_cast<std::uint64_t>(r)) - big_pow(Q, static_cast<std::uint64_t>(i));
    return {gl, big_pow(Q, static_cast<std::uint64_t>(k * r * r))};
}

/// The local order R' = A_P[y]/(f) acting on A_P^r = (R')^{r'} through
/// block-diagonal copies of the companion matrix of f.
struct OrderStructure {
    enum class Kind { Unramified, Eisenstein };

    LocalCtx ctx;
    std::vector<Pol> f; // monic in y, coefficients in A, low to high
    int m = 1;          // degree of f
    int r_prime = 1;
    Kind kind = Kind::Unramified;

    int r() const { return m * r_prime; }

    /// Companion block (m x m) of f with entries in A.
    PMat companion() const {
        const auto& F = ctx->field();
        PMat c(static_cast<std::size_t>(m), std::vector<Pol>(static_cast<std::size_t>(m), Pol(F)));
        for (int i = 1; i < m; ++i) c[static_cast<std::size_t>(i)][static_cast<std::size_t>(i - 1)] = Pol::one(F);
        for (int i = 0; i < m; ++i) c[static_cast<std::size_t>(i)][static_cast<std::size_t>(m - 1)] = -f[static_cast<std::size_t>(i)];
        return c;
    }
    /// Multiplication by y on A_P^r.
    PMat multiplication() const {
        const auto& F = ctx->field();
        const int n = r();
        PMat big(static_cast<std::size_t>(n), std::vector<Pol>(static_cast<std::size_t>(n), Pol(F)));
        auto c = companion();
        for (int b = 0; b < r_prime; ++b)
            for (int i = 0; i < m; ++i)
                for (int j = 0; j < m; ++j)
                    big[static_cast<std::size_t>(b * m + i)][static_cast<std::size_t>(b * m + j)] = c[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
        return big;
    }
    LocalMatrix multiplication_local() const { return LocalMatrix::from_polys(ctx, multiplication()); }
};

/// Builds R' for a monic f (coefficients in A) at the prime of ctx; refuses
/// orders that are not visibly maximal (f mod P squarefree, or Eisenstein).
inline OrderStructure make_order(const LocalCtx& ctx, const std::vector<Pol>& f, int r_prime) {
    require(f.size() >= 2 && f.back().is_one(), ErrorKind::InvalidArgument, "order generator polynomial must be monic in y");
    require(r_prime >= 1, ErrorKind::InvalidArgument, "r' must be >= 1");
    OrderStructure s{ctx, f, static_cast<int>(f.size()) - 1, r_prime, OrderStructure::Kind::Unramified};
    if (s.m == 1) return s;
    Residue res(ctx->prime);
    std::vector<ResidueField::value_type> red;
    for (const auto& c : f) red.push_back(res.reduce(c));
    Poly<ResidueField> fr(res.field, red);
    if (is_squarefree(fr)) return s;
    bool eisenstein = true;
    for (int i = 0; i < s.m; ++i) {
        const auto v = split_pi(f[static_cast<std::size_t>(i)], ctx->pi(), 2).first;
        if (v < 1 || (i == 0 && v != 1)) eisenstein = false;
    }
    require(eisenstein, ErrorKind::UnsupportedOrder,
            "A[y] is neither unramified nor Eisenstein at " + to_string(ctx->pi()));
    s.kind = OrderStructure::Kind::Eisenstein;
    return s;
}

/// Order R' = A_P^r itself (m = 1).
inline OrderStructure trivial_order(const LocalCtx& ctx, int r) {
    const auto& F = ctx->field();
    return OrderStructure{ctx, {Pol(F), Pol::one(F)}, 1, r, OrderStructure::Kind::Unramified};
}

namespace detail {

/// Block of an element sum c_j y^j of R'/pi^k acting on (A/pi^k)^m.
inline PMat order_element_block(const ChainRing& R, const PMat& comp, const std::vector<Pol>& coords) {
    const int m = static_cast<int>(comp.size());
    PMat acc(static_cast<std::size_t>(m), std::vector<Pol>(static_cast<std::size_t>(m), Pol(R.field())));
    PMat power = pmat_identity(R.field(), m);
    for (int j = 0; j < m; ++j) {
        const auto& c = coords[static_cast<std::size_t>(j)];
        if (!c.is_zero())
            for (int a = 0; a < m; ++a)
                for (int b = 0; b < m; ++b)
                    acc[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] =
                        R.reduce(acc[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] + c * power[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)]);
        power = pmat_mul(R, power, comp);
    }
    return acc;
}

inline Pol pmat_det(const ChainRing& R, PMat a) {
    // division-free expansion is fine for the small sizes used here
    const std::size_t n = a.size();
    if (n == 1) return R.reduce(a[0][0]);
    Pol total(R.field());
    for (std::size_t j = 0; j < n; ++j) {
        PMat minor;
        for (std::size_t i = 1; i < n; ++i) {
            std::vector<Pol> row;
            for (std::size_t c = 0; c < n; ++c)
                if (c != j) row.push_back(a[i][c]);
            minor.push_back(std::move(row));
        }
        Pol term = R.mul(a[0][j], pmat_det(R, minor));
        total = (j % 2 == 0) ? total + term : total - term;
    }
    return R.reduce(total);
}

/// Embeds an r'xr' matrix of R'-blocks into an r x r matrix over A/pi^k.
inline PMat embed_blocks(const Fq& F, int m, int rp, const std::vector<std::vector<PMat>>& blocks) {
    const int n = m * rp;
    PMat g(static_cast<std::size_t>(n), std::vector<Pol>(static_cast<std::size_t>(n), Pol(F)));
    for (int a = 0; a < rp; ++a)
        for (int b = 0; b < rp; ++b)
            for (int i = 0; i < m; ++i)
                for (int j = 0; j < m; ++j)
                    g[static_cast<std::size_t>(a * m + i)][static_cast<std::size_t>(b * m + j)] =
                        blocks[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)][static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    return g;
}

/// Generating set of the unit group of R'/pi^k, as m x m blocks.
inline std::vector<PMat> unit_group_generators(const ChainRing& R, const PMat& comp, std::uint64_t budget) {
    const int m = static_cast<int>(comp.size());
    const BigInt total = big_pow(BigInt(R.size()), static_cast<std::uint64_t>(m));
    require(total <= budget, ErrorKind::BudgetExceeded,
            "unit group enumeration needs " + total.str() + " elements, budget " + std::to_string(budget));
    const auto n = static_cast<std::uint64_t>(total);
    auto coords_of = [&](std::uint64_t code) {
        std::vector<Pol> v;
        for (int j = 0; j < m; ++j) {
            v.push_back(R.element(code % R.size()));
            code /= R.size();
        }
        return v;
    };
    // units are detected modulo pi, where the block determinant depends only on residues
    std::map<std::vector<std::uint64_t>, bool> unit_mod_pi;
    auto is_unit = [&](std::uint64_t code, const PMat& b) {
        std::vector<std::uint64_t> res;
        for (const auto& c : coords_of(code)) res.push_back(R.code(c % R.prime.poly));
        auto it = unit_mod_pi.find(res);
        if (it == unit_mod_pi.end()) it = unit_mod_pi.emplace(res, R.val(pmat_det(R, b)) == 0).first;
        return it->second;
    };
    // R' is commutative, so an element is determined by its block's first column
    // and u * g acts on that column through the block of g
    auto apply = [&](const PMat& g, const std::vector<Pol>& v) {
        std::vector<Pol> out(static_cast<std::size_t>(m), Pol(R.field()));
        for (int i = 0; i < m; ++i) {
            Pol acc(R.field());
            for (int j = 0; j < m; ++j) acc += g[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] * v[static_cast<std::size_t>(j)];
            out[static_cast<std::size_t>(i)] = R.reduce(acc);
        }
        return out;
    };
    auto vkey = [&](const std::vector<Pol>& v) {
        std::vector<std::uint64_t> k;
        for (const auto& e : v) k.push_back(R.code(e));
        return k;
    };
    std::vector<PMat> gens;
    std::vector<std::vector<Pol>> elems;
    {
        std::vector<Pol> one(static_cast<std::size_t>(m), Pol(R.field()));
        one[0] = Pol::one(R.field());
        elems.push_back(std::move(one));
    }
    std::set<std::vector<std::uint64_t>> group = {vkey(elems[0])};
    for (std::uint64_t code = 1; code < n; ++code) {
        // the first column of the block of sum c_j y^j is (c_0, ..., c_{m-1})
        const auto coords = coords_of(code);
        if (group.count(vkey(coords))) continue;
        auto b = order_element_block(R, comp, coords);
        if (!is_unit(code, b)) continue;
        gens.push_back(std::move(b));
        // extend the closure: old elements times the new generator, new elements times everything
        const std::size_t old = elems.size();
        for (std::size_t idx = 0; idx < elems.size(); ++idx) {
            const std::size_t first = idx < old ? gens.size() - 1 : 0;
            for (std::size_t gi = first; gi < gens.size(); ++gi) {
                auto prod = apply(gens[gi], elems[idx]);
                if (group.insert(vkey(prod)).second) elems.push_back(std::move(prod));
            }
        }
    }
    return gens;
}

} // namespace detail

/// Generators of GL_{r'}(R'/pi^k) acting on (A/pi^k)^r: elementary matrices
/// over an additive basis plus diag(u, 1, ..., 1) for unit generators u.
inline std::vector<PMat> order_gl_generators(const OrderStructure& S, const ChainRing& R, std::uint64_t budget) {
    const auto& F = R.field();
    const int m = S.m, rp = S.r_prime;
    PMat comp = S.companion();
    for (auto& row : comp)
        for (auto& e : row) e = R.reduce(e);
    auto zero_block = PMat(static_cast<std::size_t>(m), std::vector<Pol>(static_cast<std::size_t>(m), Pol(F)));
    auto id_block = pmat_identity(F, m);
    std::vector<PMat> gens;
    // additive basis of R'/pi^k over F_p: (prime-field basis of F_q) * t^l * y^j
    std::vector<Pol> scalars;
    const auto p = F.characteristic();
    std::uint64_t code = 1;
    for (std::uint32_t s = 0; s < F.degree(); ++s, code *= p)
        for (int l = 0; l < R.dim(); ++l) scalars.push_back(Pol::monomial(F, F.element(code), static_cast<std::size_t>(l)));
    for (int a = 0; a < rp; ++a)
        for (int b = 0; b < rp; ++b) {
            if (a == b) continue;
            for (const auto& sc : scalars)
                for (int j = 0; j < m; ++j) {
                    std::vector<Pol> coords(static_cast<std::size_t>(m), Pol(F));
                    coords[static_cast<std::size_t>(j)] = sc;
                    std::vector<std::vector<PMat>> blocks(static_cast<std::size_t>(rp), std::vector<PMat>(static_cast<std::size_t>(rp), zero_block));
                    for (int i = 0; i < rp; ++i) blocks[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] = id_block;
                    blocks[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] = detail::order_element_block(R, comp, coords);
                    gens.push_back(detail::embed_blocks(F, m, rp, blocks));
                }
        }
    for (const auto& u : detail::unit_group_generators(R, comp, budget)) {
        std::vector<std::vector<PMat>> blocks(static_cast<std::size_t>(rp), std::vector<PMat>(static_cast<std::size_t>(rp), zero_block));
        for (int i = 0; i < rp; ++i) blocks[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] = id_block;
        blocks[0][0] = u;
        gens.push_back(detail::embed_blocks(F, m, rp, blocks));
    }
    return gens;
}

/// Saturation R' Lambda = R'^{r'} for an integral basis (mod pi^k).
inline bool is_saturated(const OrderStructure& S, const ChainRing& R, const PMat& basis) {
    const auto y = S.multiplication();
    PMat cur = basis;
    for (auto& row : cur)
        for (auto& e : row) e = R.reduce(e);
    PMat all = cur;
    for (int j = 1; j < S.m; ++j) {
        cur = pmat_mul(R, y, cur);
        for (std::size_t i = 0; i < all.size(); ++i) all[i].insert(all[i].end(), cur[i].begin(), cur[i].end());
    }
    return hermite_form(R, all).total() == 0;
}

struct StabilizerResult {
    std::uint64_t orbit_size = 0;
    int depth = 0;
    BigInt lattice_index; // [R'^{r'} : Lambda]
};

/// [GL_{r'}(R') : Stab(Lambda)] as the size of the orbit of Lambda/pi^k R'^{r'}
/// under GL_{r'}(R'/pi^k). `basis` columns span Lambda inside A_P^r; k >= e_max.
/// The budget caps the number of orbit elements and unit-group elements visited.
/// `gens` must generate GL_{r'}(R'/pi^k), as returned by order_gl_generators(S, ChainRing(P, k)).
inline StabilizerResult stabilizer_index(const OrderStructure& S, const LocalMatrix& basis, int k, std::uint64_t budget,
                                         const std::vector<PMat>& gens) {
    require(basis.rows() == S.r() && basis.cols() == S.r(), ErrorKind::InvalidArgument, "lattice rank does not match the order");
    require(basis.is_integral(), ErrorKind::NotContained, "lattice is not contained in the standard lattice");
    const auto divs = elementary_divisors(basis);
    const int emax = divs.empty() ? 0 : divs.back();
    require(k >= std::max(emax, 1), ErrorKind::InvalidArgument,
            "depth " + std::to_string(k) + " is below the largest elementary divisor " + std::to_string(emax));
    ChainRing R(S.ctx->prime, k);
    const PMat b = basis.residue_mod(k);
    require(is_saturated(S, R, b), ErrorKind::NotSaturated, "R' Lambda differs from R'^{r'}");
    int total = 0;
    for (int e : divs) total += e;
    StabilizerResult res;
    res.depth = k;
    res.lattice_index = big_pow(BigInt(S.ctx->residue_size()), static_cast<std::uint64_t>(total));
    const auto start = hermite_form(R, b);
    std::set<std::vector<std::uint64_t>> seen = {start.key(R)};
    std::deque<PMat> queue = {start.h};
    while (!queue.empty()) {
        PMat h = std::move(queue.front());
        queue.pop_front();
        for (const auto& g : gens) {
            auto img = hermite_form(R, pmat_mul(R, g, h));
            if (seen.insert(img.key(R)).second) {
                require(seen.size() <= budget, ErrorKind::BudgetExceeded,
                        "orbit exceeds the budget of " + std::to_string(budget));
                queue.push_back(std::move(img.h));
            }
        }
    }
    res.orbit_size = seen.size();
    return res;
}

inline StabilizerResult stabilizer_index(const OrderStructure& S, const LocalMatrix& basis, int k, std::uint64_t budget) {
    return stabilizer_index(S, basis, k, budget, order_gl_generators(S, ChainRing(S.ctx->prime, k), budget));
}

/// stabilizer index >= (1 - 1/q)^r * index^{1/r}, decided exactly as
/// S^r q^{r^2} >= (q-1)^{r^2} index.
inline bool gitter_inequality(const BigInt& stab, const BigInt& index, std::uint64_t q, int r) {
    const auto rr = static_cast<std::uint64_t>(r) * static_cast<std::uint64_t>(r);
    return big_pow(stab, static_cast<std::uint64_t>(r)) * big_pow(BigInt(q), rr) >= big_pow(BigInt(q - 1), rr) * index;
}

inline bool gitter_bound_check(const OrderStructure& S, const LocalMatrix& basis, int k, std::uint64_t budget) {
    auto res = stabilizer_index(S, basis, k, budget);
    return gitter_inequality(res.orbit_size, res.lattice_index, S.ctx->field().order(), S.r());
}

/// Every sublattice of A_P^r with [A_P^r : Lambda] <= |k(P)|^max_total, as Hermite bases.
inline std::vector<PMat> enumerate_hermite_sublattices(const Prime& p, int r, int max_total) {
    const auto& F = p.field();
    std::vector<PMat> out;
    std::vector<int> e(static_cast<std::size_t>(r), 0);
    std::function<void(int, int)> rec_exps = [&](int i, int left) {
        if (i == r) {
            // off-diagonal (i, j), j > i, ranges over A/pi^{e_i}
            std::vector<std::pair<int, int>> slots;
            for (int a = 0; a < r; ++a)
                for (int b = a + 1; b < r; ++b)
                    if (e[static_cast<std::size_t>(a)] > 0) slots.emplace_back(a, b);
            PMat h(static_cast<std::size_t>(r), std::vector<Pol>(static_cast<std::size_t>(r), Pol(F)));
            for (int a = 0; a < r; ++a) h[static_cast<std::size_t>(a)][static_cast<std::size_t>(a)] = poly_pow(p.poly, static_cast<std::uint64_t>(e[static_cast<std::size_t>(a)]));
            std::function<void(std::size_t)> rec_slots = [&](std::size_t s) {
                if (s == slots.size()) {
                    out.push_back(h);
                    return;
                }
                auto [a, b] = slots[s];
                ChainRing R(p, e[static_cast<std::size_t>(a)]);
                for (std::uint64_t c = 0; c < R.size(); ++c) {
                    h[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] = R.element(c);
                    rec_slots(s + 1);
                }
                h[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] = Pol(F);
            };
            rec_slots(0);
            return;
        }
        for (int x = 0; x <= left; ++x) {
            e[static_cast<std::size_t>(i)] = x;
            rec_exps(i + 1, left - x);
        }
    };
    rec_exps(0, max_total);
    return out;
}

} // namespace dmv
