#pragma once

// Covers of the projective line: a bivariate polynomial P(T, Y) over F_q
// viewed as a polynomial in Y whose coefficients live in F_q[T]. The branch
// locus is the monic radical of resultant_Y(P, dP/dY) times the leading
// Y-coefficient; the point at infinity is inspected through the T-reversal
// S^degT * P(1/S, Y) at S = 0. Specializing at t0 factors the fiber
// P(t0, Y) and records the irreducible factor degrees, whose lcm is the
// local degree at t0.

#include <optional>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "tchebff/field.hpp"
#include "tchebff/poly.hpp"
#include "tchebff/tower.hpp"
#include "tchebff/util.hpp"

namespace tchebff {

class BiPoly {
  public:
    BiPoly() = default;
    explicit BiPoly(FieldHandle f) : field_(std::move(f)) {}
    BiPoly(FieldHandle f, std::vector<UniPoly> ycoeffs)
        : field_(std::move(f)), c_(std::move(ycoeffs)) {
        for (const auto& g : c_)
            if (!g.is_zero() && !g.field()->same_presentation(*field_))
                throw validation_error("coefficient polynomial over a different field");
        normalize();
    }

    static BiPoly zero(const FieldHandle& f) { return BiPoly(f); }

    const FieldHandle& field() const { return field_; }
    const std::vector<UniPoly>& ycoeffs() const { return c_; }

    bool is_zero() const { return c_.empty(); }
    int y_degree() const { return int(c_.size()) - 1; }
    int t_degree() const {
        int d = -1;
        for (const auto& g : c_) d = std::max(d, g.degree());
        return d;
    }

    UniPoly ycoeff(size_t j) const { return j < c_.size() ? c_[j] : UniPoly::zero(field_); }

    BiPoly y_derivative() const {
        std::vector<UniPoly> r;
        for (size_t j = 1; j < c_.size(); ++j)
            r.push_back(c_[j] * field_->from_integer(uint64_t(j)));
        return BiPoly(field_, std::move(r));
    }

    // The fiber polynomial P(t0, Y); coefficients must already live in t0's
    // field (embed first when specializing over an extension).
    UniPoly eval_t(const FieldElement& t0) const {
        std::vector<FieldElement> r;
        r.reserve(c_.size());
        for (const auto& g : c_) r.push_back(g.eval(t0));
        return UniPoly(t0.field(), std::move(r));
    }

    std::string to_string(const std::string& var_t, const std::string& var_y) const {
        if (is_zero()) return "0";
        std::string s;
        for (int j = y_degree(); j >= 0; --j) {
            const UniPoly& g = c_[size_t(j)];
            if (g.is_zero()) continue;
            std::string cs = g.to_string(var_t);
            if (!s.empty()) s += "+";
            if (j == 0) {
                s += cs;
                continue;
            }
            if (cs != "1") {
                bool needs_parens = cs.find('+') != std::string::npos;
                s += needs_parens ? "(" + cs + ")*" : cs + "*";
            }
            s += var_y;
            if (j > 1) s += "^" + std::to_string(j);
        }
        return s;
    }

  private:
    void normalize() {
        while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
    }

    FieldHandle field_;
    std::vector<UniPoly> c_;
};

namespace detail {

inline UniPoly unipoly_pow(const UniPoly& base, uint32_t e) {
    UniPoly r = UniPoly::one(base.field());
    for (uint32_t i = 0; i < e; ++i) r = r * base;
    return r;
}

}  // namespace detail

// Resultant with respect to Y: determinant of the Sylvester matrix over
// F_q[T], evaluated by fraction-free Bareiss elimination so every division
// is exact.
inline UniPoly resultant_in_y(const BiPoly& a, const BiPoly& b) {
    if (a.is_zero() || b.is_zero())
        throw validation_error("resultant of a zero polynomial");
    const FieldHandle& f = a.field();
    int n = a.y_degree(), m = b.y_degree();
    if (n == 0 && m == 0) return UniPoly::one(f);
    if (n == 0) return detail::unipoly_pow(a.ycoeff(0), uint32_t(m));
    if (m == 0) return detail::unipoly_pow(b.ycoeff(0), uint32_t(n));

    int size = n + m;
    std::vector<std::vector<UniPoly>> mat(size_t(size), std::vector<UniPoly>(size_t(size), UniPoly::zero(f)));
    for (int row = 0; row < m; ++row)
        for (int j = 0; j <= n; ++j) mat[size_t(row)][size_t(row + j)] = a.ycoeff(size_t(n - j));
    for (int row = 0; row < n; ++row)
        for (int j = 0; j <= m; ++j) mat[size_t(m + row)][size_t(row + j)] = b.ycoeff(size_t(m - j));

    bool negate = false;
    UniPoly prev = UniPoly::one(f);
    for (int k = 0; k + 1 < size; ++k) {
        int pivot = -1;
        for (int r = k; r < size; ++r)
            if (!mat[size_t(r)][size_t(k)].is_zero()) {
                pivot = r;
                break;
            }
        if (pivot < 0) return UniPoly::zero(f);
        if (pivot != k) {
            std::swap(mat[size_t(pivot)], mat[size_t(k)]);
            negate = !negate;
        }
        for (int i = k + 1; i < size; ++i) {
            for (int j = k + 1; j < size; ++j)
                mat[size_t(i)][size_t(j)] = div_exact(
                    mat[size_t(i)][size_t(j)] * mat[size_t(k)][size_t(k)] -
                        mat[size_t(i)][size_t(k)] * mat[size_t(k)][size_t(j)],
                    prev);
            mat[size_t(i)][size_t(k)] = UniPoly::zero(f);
        }
        prev = mat[size_t(k)][size_t(k)];
    }
    UniPoly det = mat[size_t(size - 1)][size_t(size - 1)];
    return negate ? -det : det;
}

// S^degT * P(1/S, Y): each Y-coefficient reversed at the total T-degree, so
// the fiber over S = 0 describes the cover at T = infinity.
inline BiPoly reverse_t(const BiPoly& p) {
    if (p.is_zero()) return p;
    const FieldHandle& f = p.field();
    int e = p.t_degree();
    std::vector<UniPoly> out;
    out.reserve(size_t(p.y_degree()) + 1);
    for (int j = 0; j <= p.y_degree(); ++j) {
        UniPoly c = p.ycoeff(size_t(j));
        std::vector<FieldElement> rev(size_t(e) + 1, f->zero());
        for (int i = 0; i <= c.degree(); ++i) rev[size_t(e - i)] = c.coeff(size_t(i));
        out.emplace_back(f, std::move(rev));
    }
    return BiPoly(f, std::move(out));
}

enum class IrreducibilityStatus { certified, assumed, refuted };

inline std::string to_string(IrreducibilityStatus s) {
    switch (s) {
        case IrreducibilityStatus::certified: return "certified";
        case IrreducibilityStatus::assumed: return "assumed";
        case IrreducibilityStatus::refuted: return "refuted";
    }
    return "assumed";
}

struct Cover {
    FieldHandle base;
    BiPoly poly;
    BiPoly reversed;
    UniPoly branch_locus;  // monic radical in T; the constant 1 when empty
    bool branches_at_infinity = false;
    IrreducibilityStatus irreducibility = IrreducibilityStatus::assumed;
    uint32_t y_degree = 0;
};

namespace detail {

// Monic divisors of f, built from its factorization. Includes 1 and the
// monic part of f itself.
inline std::vector<UniPoly> monic_divisors(const UniPoly& f, uint64_t seed) {
    std::vector<UniPoly> divs{UniPoly::one(f.field())};
    for (const auto& [g, e] : factor(f, seed).factors) {
        size_t old = divs.size();
        UniPoly pw = UniPoly::one(f.field());
        for (uint32_t i = 1; i <= e; ++i) {
            pw = pw * g;
            for (size_t t = 0; t < old; ++t) divs.push_back(divs[t] * pw);
        }
    }
    return divs;
}

// Rational root search for fibers of Y-degree 2 or 3: a root u/v in lowest
// terms has u dividing the constant coefficient (up to a scalar) and v
// dividing the leading one. For a fixed monic pair (u0, v0) the scalar
// lambda with u = lambda u0 must kill sum_j c_j (lambda u0)^j v0^(n-j)
// coefficient by coefficient in T, which pins lambda down as a common root
// of polynomials of degree at most n instead of a sweep over F_q.
inline bool has_rational_root(const BiPoly& p, uint64_t seed) {
    const FieldHandle& f = p.field();
    int n = p.y_degree();
    UniPoly c0 = p.ycoeff(0);
    if (c0.is_zero()) return true;  // Y divides P
    auto us = monic_divisors(c0, seed);
    auto vs = monic_divisors(p.ycoeff(size_t(n)), seed);
    for (const auto& u0 : us) {
        for (const auto& v0 : vs) {
            if (poly_gcd(u0, v0).degree() != 0) continue;
            // r_j(T) = c_j * u0^j * v0^(n-j); lambda must zero out
            // sum_j r_j lambda^j in every T-coefficient simultaneously.
            std::vector<UniPoly> rj;
            UniPoly upow = UniPoly::one(f);
            int tmax = -1;
            for (int j = 0; j <= n; ++j) {
                rj.push_back(p.ycoeff(size_t(j)) * upow * unipoly_pow(v0, uint32_t(n - j)));
                tmax = std::max(tmax, rj.back().degree());
                upow = upow * u0;
            }
            UniPoly g = UniPoly::zero(f);
            for (int i = 0; i <= tmax && g.degree() != 0; ++i) {
                std::vector<FieldElement> lc;
                for (int j = 0; j <= n; ++j) lc.push_back(rj[size_t(j)].coeff(size_t(i)));
                g = poly_gcd(g, UniPoly(f, std::move(lc)));
            }
            if (g.is_zero()) return true;  // identically zero for every lambda
            if (g.degree() == 0) continue;
            for (const auto& [root, mult] : roots_with_multiplicity(g, seed)) {
                (void)mult;
                if (!root.is_zero()) return true;
            }
        }
    }
    return false;
}

}  // namespace detail

// Validates the defining polynomial, computes the branch data, and settles
// what can be settled about irreducibility over F_q(T): degrees 2 and 3 by
// rational root search, degree 1 trivially, higher degrees left as assumed.
inline Cover build_cover(const BiPoly& p, uint64_t seed) {
    if (p.y_degree() < 1)
        throw validation_error("cover polynomial must have positive degree in Y");
    BiPoly dp = p.y_derivative();
    if (dp.is_zero())
        throw validation_error("cover polynomial is not squarefree in Y (derivative vanishes)");
    UniPoly res = resultant_in_y(p, dp);
    if (res.is_zero())
        throw validation_error("cover polynomial is not squarefree in Y");

    Cover c;
    c.base = p.field();
    c.poly = p;
    c.y_degree = uint32_t(p.y_degree());
    UniPoly disc = res * p.ycoeff(size_t(p.y_degree()));
    c.branch_locus = squarefree_part(disc).first;
    c.reversed = reverse_t(p);

    BiPoly rev_dp = c.reversed.y_derivative();
    if (rev_dp.is_zero()) {
        c.branches_at_infinity = true;
    } else {
        UniPoly rev_res = resultant_in_y(c.reversed, rev_dp);
        FieldElement at0 = rev_res.eval(c.base->zero()) *
                           c.reversed.ycoeff(size_t(c.reversed.y_degree())).eval(c.base->zero());
        c.branches_at_infinity = at0.is_zero();
    }

    if (c.y_degree == 1) {
        c.irreducibility = IrreducibilityStatus::certified;
    } else if (c.y_degree <= 3) {
        c.irreducibility = detail::has_rational_root(p, seed) ? IrreducibilityStatus::refuted
                                                              : IrreducibilityStatus::certified;
    } else {
        c.irreducibility = IrreducibilityStatus::assumed;
    }
    return c;
}

// One specialized fiber. Finite points are identified by their enumeration
// index in the degree-m extension along with the little-endian prime-field
// coordinate vector; the fiber's irreducible factor degrees are listed with
// multiplicity in ascending order.
struct SpecializationRecord {
    uint32_t m = 1;
    bool at_infinity = false;
    uint64_t point_index = 0;
    std::vector<uint32_t> point;
    bool ramified = false;
    bool degenerate = false;
    std::vector<uint32_t> degrees;
    uint64_t local_degree = 0;

    bool operator==(const SpecializationRecord& o) const = default;
};

namespace detail {

struct EmbeddedCover {
    FieldHandle ext;
    std::vector<UniPoly> cy;  // Y-coefficients of P over ext
    UniPoly delta;            // branch locus over ext
    UniPoly infinity_fiber;   // reversed poly's fiber at S = 0, over ext
};

inline EmbeddedCover embed_cover(const Cover& c, const FieldHandle& ext) {
    EmbeddedCover e;
    e.ext = ext;
    Embedding emb = find_embedding(c.base, ext);
    for (int j = 0; j <= c.poly.y_degree(); ++j) e.cy.push_back(emb.apply(c.poly.ycoeff(size_t(j))));
    e.delta = emb.apply(c.branch_locus);
    std::vector<FieldElement> inf;
    for (int j = 0; j <= c.reversed.y_degree(); ++j)
        inf.push_back(emb.apply(c.reversed.ycoeff(size_t(j)).eval(c.base->zero())));
    e.infinity_fiber = UniPoly(ext, std::move(inf));
    return e;
}

inline void classify_fiber(SpecializationRecord& rec, const UniPoly& fiber, bool suspect,
                           uint32_t full_degree, uint64_t point_seed) {
    if (fiber.degree() < 1) {
        rec.degenerate = true;
        rec.ramified = true;
        return;
    }
    auto fac = factor(fiber, point_seed);
    bool repeated = false;
    for (const auto& [g, mult] : fac.factors) {
        if (mult > 1) repeated = true;
        for (uint32_t i = 0; i < mult; ++i) rec.degrees.push_back(uint32_t(g.degree()));
    }
    std::sort(rec.degrees.begin(), rec.degrees.end());
    rec.local_degree = 1;
    for (uint32_t d : rec.degrees) rec.local_degree = lcm_u64(rec.local_degree, d);
    rec.ramified = suspect || repeated || fiber.degree() < int(full_degree);
}

inline SpecializationRecord specialize_embedded(const Cover& c, const EmbeddedCover& e, uint32_t m,
                                                uint64_t idx, bool at_infinity, uint64_t seed) {
    SpecializationRecord rec;
    rec.m = m;
    rec.at_infinity = at_infinity;
    uint64_t point_seed = derive_seed(derive_seed(seed, m), at_infinity ? e.ext->cardinality() : idx);
    if (at_infinity) {
        rec.point_index = e.ext->cardinality();
        classify_fiber(rec, e.infinity_fiber, c.branches_at_infinity, c.y_degree, point_seed);
        // the reversal can keep full degree at S = 0 yet still sit over a
        // branch point of the reversed cover; the flag is authoritative
        rec.ramified = rec.ramified || c.branches_at_infinity;
        return rec;
    }
    FieldElement t0 = e.ext->element_at(idx);
    rec.point_index = idx;
    rec.point = t0.coeffs();
    std::vector<FieldElement> fc;
    fc.reserve(e.cy.size());
    for (const auto& g : e.cy) fc.push_back(g.eval(t0));
    UniPoly fiber(e.ext, std::move(fc));
    classify_fiber(rec, fiber, e.delta.eval(t0).is_zero(), c.y_degree, point_seed);
    return rec;
}

}  // namespace detail

// Fiber pattern at a single point of P^1(F_{q^m}); nullopt means the point
// at infinity. The seed fixes the degree-m extension presentation, so equal
// seeds give equal point indexing across calls.
inline SpecializationRecord specialize(const Cover& c, uint32_t m,
                                       std::optional<uint64_t> point_index, uint64_t seed) {
    if (m < 1) throw validation_error("extension degree must be at least 1");
    auto count = checked_pow(c.base->cardinality(), m, caps::enumeration);
    if (!count) throw cap_error("extension exceeds the enumeration cap");
    FieldHandle ext = extend_field(c.base, m, seed);
    auto e = detail::embed_cover(c, ext);
    if (point_index && *point_index >= *count)
        throw validation_error("point index out of range for the extension");
    return detail::specialize_embedded(c, e, m, point_index.value_or(0), !point_index.has_value(),
                                       seed);
}

struct ScanResult {
    uint32_t max_ext = 0;
    uint32_t completed_ext = 0;
    bool truncated = false;
    std::vector<SpecializationRecord> records;
};

// Exhaustive specialization over P^1(F_{q^m}) for m = 1..max_ext, finite
// points in enumeration order and then infinity. Levels whose point count
// exceeds the enumeration cap truncate the scan. Worker threads split the
// finite range into contiguous slices; per-point seeds depend only on
// (seed, m, index), so the record list is identical for any thread count.
inline ScanResult scan(const Cover& c, uint32_t max_ext, uint64_t seed, uint32_t threads = 1) {
    if (max_ext < 1) throw validation_error("scan depth must be at least 1");
    if (threads < 1) threads = 1;
    ScanResult out;
    out.max_ext = max_ext;
    for (uint32_t m = 1; m <= max_ext; ++m) {
        auto count = checked_pow(c.base->cardinality(), m, caps::enumeration);
        if (!count) {
            out.truncated = true;
            break;
        }
        FieldHandle ext = extend_field(c.base, m, seed);
        detail::EmbeddedCover e = detail::embed_cover(c, ext);
        size_t offset = out.records.size();
        out.records.resize(offset + size_t(*count) + 1);
        uint64_t n = *count;
        uint32_t workers = uint32_t(std::min<uint64_t>(threads, std::max<uint64_t>(n, 1)));
        if (workers <= 1) {
            for (uint64_t i = 0; i < n; ++i)
                out.records[offset + i] = detail::specialize_embedded(c, e, m, i, false, seed);
        } else {
            std::vector<std::thread> pool;
            for (uint32_t w = 0; w < workers; ++w) {
                uint64_t lo = n * w / workers, hi = n * (w + 1) / workers;
                pool.emplace_back([&, lo, hi] {
                    for (uint64_t i = lo; i < hi; ++i)
                        out.records[offset + i] = detail::specialize_embedded(c, e, m, i, false, seed);
                });
            }
            for (auto& t : pool) t.join();
        }
        out.records[offset + size_t(n)] = detail::specialize_embedded(c, e, m, n, true, seed);
        out.completed_ext = m;
    }
    return out;
}

}  // namespace tchebff
