#pragma once

// Univariate polynomials over a runtime field handle, with complete
// factorization: squarefree decomposition (including the char-p pitfall
// f = g^p), distinct-degree splitting, and equal-degree splitting via
// random gcd probes (odd q) or the additive trace map (char 2). Degrees
// stay small in every use case, so multiplication is schoolbook with a
// Karatsuba path above a fixed threshold and nothing fancier.

#include <string>
#include <utility>
#include <vector>

#include "tchebff/field.hpp"
#include "tchebff/util.hpp"

namespace tchebff {

class UniPoly {
  public:
    UniPoly() = default;
    explicit UniPoly(FieldHandle f) : field_(std::move(f)) {}
    UniPoly(FieldHandle f, std::vector<FieldElement> coeffs)
        : field_(std::move(f)), c_(std::move(coeffs)) {
        normalize();
    }

    static UniPoly zero(const FieldHandle& f) { return UniPoly(f); }
    static UniPoly one(const FieldHandle& f) { return constant(f->one()); }
    static UniPoly constant(const FieldElement& a) {
        UniPoly r(a.field());
        if (!a.is_zero()) r.c_.push_back(a);
        return r;
    }
    // The monomial x (or a*x^n).
    static UniPoly monomial(const FieldHandle& f, size_t n, const FieldElement& a) {
        UniPoly r(f);
        if (!a.is_zero()) {
            r.c_.assign(n, f->zero());
            r.c_.push_back(a);
        }
        return r;
    }
    static UniPoly variable(const FieldHandle& f) { return monomial(f, 1, f->one()); }

    const FieldHandle& field() const { return field_; }
    const std::vector<FieldElement>& coeffs() const { return c_; }

    int degree() const { return int(c_.size()) - 1; }
    bool is_zero() const { return c_.empty(); }
    bool is_one() const { return c_.size() == 1 && c_[0].is_one(); }
    bool is_monic() const { return !c_.empty() && c_.back().is_one(); }

    FieldElement coeff(size_t i) const {
        return i < c_.size() ? c_[i] : field_->zero();
    }
    const FieldElement& leading() const {
        if (c_.empty()) throw validation_error("zero polynomial has no leading coefficient");
        return c_.back();
    }

    UniPoly operator+(const UniPoly& o) const {
        std::vector<FieldElement> r;
        size_t n = std::max(c_.size(), o.c_.size());
        r.reserve(n);
        for (size_t i = 0; i < n; ++i) r.push_back(coeff(i) + o.coeff(i));
        return UniPoly(field_, std::move(r));
    }
    UniPoly operator-(const UniPoly& o) const {
        std::vector<FieldElement> r;
        size_t n = std::max(c_.size(), o.c_.size());
        r.reserve(n);
        for (size_t i = 0; i < n; ++i) r.push_back(coeff(i) - o.coeff(i));
        return UniPoly(field_, std::move(r));
    }
    UniPoly operator-() const {
        std::vector<FieldElement> r;
        r.reserve(c_.size());
        for (const auto& a : c_) r.push_back(-a);
        return UniPoly(field_, std::move(r));
    }

    UniPoly operator*(const UniPoly& o) const {
        if (is_zero() || o.is_zero()) return UniPoly(field_);
        return UniPoly(field_, mul_vec(c_, o.c_, *field_));
    }

    UniPoly operator*(const FieldElement& s) const {
        if (s.is_zero()) return UniPoly(field_);
        std::vector<FieldElement> r;
        r.reserve(c_.size());
        for (const auto& a : c_) r.push_back(a * s);
        return UniPoly(field_, std::move(r));
    }

    bool operator==(const UniPoly& o) const { return c_ == o.c_; }
    bool operator!=(const UniPoly& o) const { return !(*this == o); }

    UniPoly monic() const {
        if (is_zero() || is_monic()) return *this;
        return *this * leading().inverse();
    }

    FieldElement eval(const FieldElement& x) const {
        FieldElement acc = field_->zero();
        for (size_t i = c_.size(); i-- > 0;) acc = acc * x + c_[i];
        return acc;
    }

    // Canonical order: degree first, then the little-endian coefficient
    // sequence compared by element index. Gives reproducible factor lists.
    bool less_canonical(const UniPoly& o) const {
        if (degree() != o.degree()) return degree() < o.degree();
        for (size_t i = 0; i < c_.size(); ++i) {
            uint64_t a = c_[i].index(), b = o.c_[i].index();
            if (a != b) return a < b;
        }
        return false;
    }

    std::string to_string(const std::string& var) const;

  private:
    static constexpr size_t karatsuba_threshold = 32;

    static std::vector<FieldElement> mul_vec(const std::vector<FieldElement>& a,
                                             const std::vector<FieldElement>& b,
                                             const Field& f) {
        if (std::min(a.size(), b.size()) < karatsuba_threshold) {
            std::vector<FieldElement> r(a.size() + b.size() - 1, FieldElement());
            for (auto& x : r) x = a[0].field()->zero();
            for (size_t i = 0; i < a.size(); ++i) {
                if (a[i].is_zero()) continue;
                for (size_t j = 0; j < b.size(); ++j) r[i + j] = r[i + j] + a[i] * b[j];
            }
            return r;
        }
        // Karatsuba split at half the shorter length.
        size_t h = std::min(a.size(), b.size()) / 2;
        std::vector<FieldElement> a0(a.begin(), a.begin() + h), a1(a.begin() + h, a.end());
        std::vector<FieldElement> b0(b.begin(), b.begin() + h), b1(b.begin() + h, b.end());
        auto z0 = mul_vec(a0, b0, f);
        auto z2 = mul_vec(a1, b1, f);
        auto add_vecs = [&](const std::vector<FieldElement>& u, const std::vector<FieldElement>& v) {
            std::vector<FieldElement> s(std::max(u.size(), v.size()), a[0].field()->zero());
            for (size_t i = 0; i < u.size(); ++i) s[i] = s[i] + u[i];
            for (size_t i = 0; i < v.size(); ++i) s[i] = s[i] + v[i];
            return s;
        };
        auto z1 = mul_vec(add_vecs(a0, a1), add_vecs(b0, b1), f);
        std::vector<FieldElement> r(a.size() + b.size() - 1, a[0].field()->zero());
        auto acc = [&](const std::vector<FieldElement>& src, size_t shift, bool negate2) {
            for (size_t i = 0; i < src.size(); ++i) {
                if (i + shift >= r.size()) break;
                r[i + shift] = negate2 ? r[i + shift] - src[i] : r[i + shift] + src[i];
            }
        };
        acc(z0, 0, false);
        acc(z2, 2 * h, false);
        acc(z1, h, false);
        acc(z0, h, true);
        acc(z2, h, true);
        return r;
    }

    void normalize() {
        while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
    }

    FieldHandle field_;
    std::vector<FieldElement> c_;
};

inline std::pair<UniPoly, UniPoly> divmod(const UniPoly& a, const UniPoly& b) {
    if (b.is_zero()) throw validation_error("polynomial division by zero");
    const FieldHandle& f = a.field();
    if (a.degree() < b.degree()) return {UniPoly::zero(f), a};
    FieldElement lc_inv = b.leading().inverse();
    std::vector<FieldElement> rem(a.coeffs());
    std::vector<FieldElement> quot(size_t(a.degree() - b.degree()) + 1, f->zero());
    for (int d = a.degree(); d >= b.degree(); --d) {
        FieldElement top = rem[size_t(d)];
        if (top.is_zero()) continue;
        FieldElement q = top * lc_inv;
        quot[size_t(d - b.degree())] = q;
        for (int i = 0; i <= b.degree(); ++i) {
            size_t pos = size_t(d - b.degree() + i);
            rem[pos] = rem[pos] - q * b.coeff(size_t(i));
        }
    }
    return {UniPoly(f, std::move(quot)), UniPoly(f, std::move(rem))};
}

// Exact division; remainder must vanish.
inline UniPoly div_exact(const UniPoly& a, const UniPoly& b) {
    auto [q, r] = divmod(a, b);
    if (!r.is_zero()) throw error("inexact polynomial division where exactness was guaranteed");
    return q;
}

inline UniPoly poly_gcd(UniPoly a, UniPoly b) {
    while (!b.is_zero()) {
        auto [q, r] = divmod(a, b);
        (void)q;
        a = std::move(b);
        b = std::move(r);
    }
    return a.is_zero() ? a : a.monic();
}

inline UniPoly derivative(const UniPoly& a) {
    const FieldHandle& f = a.field();
    if (a.degree() <= 0) return UniPoly::zero(f);
    std::vector<FieldElement> r;
    r.reserve(size_t(a.degree()));
    for (int i = 1; i <= a.degree(); ++i)
        r.push_back(a.coeff(size_t(i)) * f->from_integer(uint64_t(i)));
    return UniPoly(f, std::move(r));
}

inline UniPoly mulmod(const UniPoly& a, const UniPoly& b, const UniPoly& m) {
    return divmod(a * b, m).second;
}

inline UniPoly powmod(UniPoly base, uint64_t e, const UniPoly& m) {
    UniPoly r = UniPoly::one(m.field());
    base = divmod(base, m).second;
    while (e) {
        if (e & 1) r = mulmod(r, base, m);
        base = mulmod(base, base, m);
        e >>= 1;
    }
    return r;
}

// p-th root of f when f = g(Y^p): pull the coefficients at indices divisible
// by p and take their p-th roots (c^(1/p) = c^(p^(k-1)) in F_{p^k}).
inline UniPoly pth_root(const UniPoly& f) {
    const FieldHandle& fld = f.field();
    uint32_t p = fld->characteristic();
    std::vector<FieldElement> r;
    for (int i = 0; i <= f.degree(); i += int(p))
        r.push_back(frobenius(f.coeff(size_t(i)), fld->degree() - 1));
    return UniPoly(fld, std::move(r));
}

// f = unit * prod g_i^(e_i) with the g_i monic, squarefree, pairwise coprime.
// Char-p version of Yun's algorithm: the separable part is peeled multiplicity
// by multiplicity, and whatever survives with derivative zero is a p-th power
// handled by recursion on its p-th root.
inline std::vector<std::pair<UniPoly, uint32_t>> squarefree_decomposition(const UniPoly& f0) {
    if (f0.is_zero()) throw validation_error("squarefree decomposition of the zero polynomial");
    UniPoly f = f0.monic();
    std::vector<std::pair<UniPoly, uint32_t>> out;
    if (f.degree() == 0) return out;
    uint32_t p = f.field()->characteristic();

    UniPoly d = derivative(f);
    if (d.is_zero()) {
        for (auto& [g, e] : squarefree_decomposition(pth_root(f))) out.emplace_back(g, e * p);
        return out;
    }

    UniPoly c = poly_gcd(f, d);
    UniPoly w = div_exact(f, c);
    uint32_t j = 1;
    while (w.degree() > 0) {
        UniPoly y = poly_gcd(w, c);
        UniPoly z = div_exact(w, y);
        if (z.degree() > 0) out.emplace_back(z, j);
        w = std::move(y);
        c = div_exact(c, w);
        ++j;
    }
    if (c.degree() > 0) {
        for (auto& [g, e] : squarefree_decomposition(pth_root(c))) out.emplace_back(g, e * p);
    }
    // Multiplicity classes from the separable pass and the wild pass can
    // repeat (e.g. multiplicities 1 and p both contributing); merge by gcd is
    // unnecessary because the two passes produce coprime polynomials, but the
    // list may be out of order.
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.second < b.second; });
    return out;
}

// Radical (product of the distinct irreducible factors, monic) and whether
// the input already was squarefree.
inline std::pair<UniPoly, bool> squarefree_part(const UniPoly& f) {
    if (f.is_zero()) throw validation_error("squarefree part of the zero polynomial");
    auto dec = squarefree_decomposition(f);
    UniPoly rad = UniPoly::one(f.field());
    for (const auto& [g, e] : dec) rad = rad * g;
    bool flag = rad.degree() == f.degree();
    return {rad, flag};
}

struct Factorization {
    FieldElement unit;
    std::vector<std::pair<UniPoly, uint32_t>> factors;  // (monic irreducible, multiplicity)

    UniPoly reassemble() const {
        UniPoly r = UniPoly::constant(unit);
        for (const auto& [g, e] : factors)
            for (uint32_t i = 0; i < e; ++i) r = r * g;
        return r;
    }
};

namespace detail {

// Distinct-degree splitting of a monic squarefree f: returns (product of the
// irreducible factors of degree d, d) pairs.
inline std::vector<std::pair<UniPoly, uint32_t>> distinct_degree(const UniPoly& f) {
    std::vector<std::pair<UniPoly, uint32_t>> out;
    const FieldHandle& fld = f.field();
    uint64_t q = fld->cardinality();
    UniPoly v = f;
    UniPoly x = UniPoly::variable(fld);
    UniPoly h = divmod(x, v).second;  // x^(q^d) mod v, starting at d=0
    uint32_t d = 0;
    while (v.degree() >= 2 * int(d + 1)) {
        ++d;
        h = powmod(h, q, v);
        UniPoly g = poly_gcd(h - x, v);
        if (g.degree() > 0) {
            out.emplace_back(g, d);
            v = div_exact(v, g);
            h = divmod(h, v).second;
        }
    }
    if (v.degree() > 0) out.emplace_back(v, uint32_t(v.degree()));
    return out;
}

inline UniPoly random_poly_below(const FieldHandle& fld, int degree_bound, rng& r) {
    std::vector<FieldElement> c;
    c.reserve(size_t(degree_bound));
    for (int i = 0; i < degree_bound; ++i)
        c.push_back(fld->element_at(r.below(fld->cardinality())));
    return UniPoly(fld, std::move(c));
}

// Equal-degree splitting: f monic squarefree, all irreducible factors of
// degree d. Cantor-Zassenhaus probes; char 2 uses the trace map because the
// (q^d-1)/2 exponent trick needs odd q.
inline void equal_degree(const UniPoly& f, uint32_t d, rng& r, std::vector<UniPoly>& out) {
    if (f.degree() == int(d)) {
        out.push_back(f.monic());
        return;
    }
    const FieldHandle& fld = f.field();
    uint64_t q = fld->cardinality();
    UniPoly split = UniPoly::zero(fld);
    while (true) {
        UniPoly h = random_poly_below(fld, f.degree(), r);
        if (h.degree() < 1) continue;
        UniPoly g;
        if (fld->characteristic() == 2) {
            // additive trace from F_{q^d} down to F_2: sum of h^(2^i)
            uint32_t steps = fld->degree() * d;
            UniPoly t = divmod(h, f).second;
            UniPoly acc = t;
            for (uint32_t i = 1; i < steps; ++i) {
                t = mulmod(t, t, f);
                acc = acc + t;
            }
            g = poly_gcd(acc, f);
        } else {
            // norm to F_q then raise to (q-1)/2: equals h^((q^d-1)/2) without
            // needing a wide exponent
            UniPoly t = divmod(h, f).second;
            UniPoly norm = t;
            for (uint32_t i = 1; i < d; ++i) {
                t = powmod(t, q, f);
                norm = mulmod(norm, t, f);
            }
            UniPoly w = powmod(norm, (q - 1) / 2, f);
            g = poly_gcd(w - UniPoly::one(fld), f);
        }
        if (g.degree() > 0 && g.degree() < f.degree()) {
            split = g;
            break;
        }
    }
    equal_degree(split, d, r, out);
    equal_degree(div_exact(f, split), d, r, out);
}

}  // namespace detail

// Complete factorization over the coefficient field. Deterministic for a
// fixed seed; the canonical sort makes the output independent of the probe
// path anyway.
inline Factorization factor(const UniPoly& f, uint64_t seed) {
    if (f.is_zero()) throw validation_error("factorization of the zero polynomial");
    Factorization out{f.leading(), {}};
    if (f.degree() == 0) return out;
    rng r(derive_seed(seed, "factor"));
    for (const auto& [g, mult] : squarefree_decomposition(f)) {
        for (const auto& [prod, d] : detail::distinct_degree(g)) {
            std::vector<UniPoly> irreducibles;
            detail::equal_degree(prod, d, r, irreducibles);
            for (auto& irr : irreducibles) out.factors.emplace_back(std::move(irr), mult);
        }
    }
    std::sort(out.factors.begin(), out.factors.end(), [](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first.less_canonical(b.first);
        return a.second < b.second;
    });
    return out;
}

// Certificate: a monic degree-d polynomial is irreducible iff x^(q^d) = x
// mod f and gcd(x^(q^(d/r)) - x, f) = 1 for every prime r dividing d.
inline bool is_irreducible(const UniPoly& f0) {
    if (f0.degree() <= 0) return false;
    UniPoly f = f0.monic();
    uint32_t d = uint32_t(f.degree());
    if (d == 1) return true;
    const FieldHandle& fld = f.field();
    uint64_t q = fld->cardinality();
    UniPoly x = UniPoly::variable(fld);
    auto frob_power = [&](uint32_t j) {
        UniPoly t = divmod(x, f).second;
        for (uint32_t i = 0; i < j; ++i) t = powmod(t, q, f);
        return t;
    };
    if (frob_power(d) != divmod(x, f).second) return false;
    for (uint64_t rp : prime_factors(d)) {
        UniPoly g = poly_gcd(frob_power(d / uint32_t(rp)) - x, f);
        if (g.degree() != 0) return false;
    }
    return true;
}

// Roots of f in its own coefficient field, with multiplicities. (Embedding
// into an extension first is tower.hpp's roots_in_field.)
inline std::vector<std::pair<FieldElement, uint32_t>> roots_with_multiplicity(const UniPoly& f,
                                                                              uint64_t seed) {
    if (f.is_zero()) throw validation_error("root search on the zero polynomial");
    const FieldHandle& fld = f.field();
    std::vector<std::pair<FieldElement, uint32_t>> out;
    if (f.degree() == 0) return out;
    // Linear factors of the radical are exactly gcd(rad, x^q - x).
    auto [rad, sf] = squarefree_part(f);
    (void)sf;
    UniPoly x = UniPoly::variable(fld);
    UniPoly xq = powmod(x, fld->cardinality(), rad);
    UniPoly lin = poly_gcd(xq - x, rad);
    if (lin.degree() <= 0) return out;
    rng r(derive_seed(seed, "roots"));
    std::vector<UniPoly> linear_factors;
    detail::equal_degree(lin, 1, r, linear_factors);
    for (const auto& lf : linear_factors) {
        FieldElement root = -lf.coeff(0);
        // multiplicity by repeated exact division
        uint32_t mult = 0;
        UniPoly rest = f;
        while (true) {
            auto [quot, rem] = divmod(rest, lf);
            if (!rem.is_zero()) break;
            ++mult;
            rest = quot;
        }
        out.emplace_back(root, mult);
    }
    std::sort(out.begin(), out.end(),
              [](const auto& a, const auto& b) { return a.first.index() < b.first.index(); });
    return out;
}

inline std::string UniPoly::to_string(const std::string& var) const {
    if (is_zero()) return "0";
    const uint32_t p = field_->characteristic();
    std::string s;
    for (int i = degree(); i >= 0; --i) {
        const FieldElement& a = coeff(size_t(i));
        if (a.is_zero()) continue;
        bool prime_subfield = true;
        for (size_t j = 1; j < a.coeffs().size(); ++j)
            if (a.coeffs()[j]) prime_subfield = false;
        std::string cs;
        if (prime_subfield) {
            cs = std::to_string(a.coeffs()[0] % p);
        } else {
            cs = "[";
            for (size_t j = 0; j < a.coeffs().size(); ++j)
                cs += (j ? ";" : "") + std::to_string(a.coeffs()[j]);
            cs += "]";
        }
        if (!s.empty()) s += "+";
        if (i == 0) {
            s += cs;
        } else {
            if (cs != "1") s += cs + "*";
            s += var;
            if (i > 1) s += "^" + std::to_string(i);
        }
    }
    return s;
}

}  // namespace tchebff
