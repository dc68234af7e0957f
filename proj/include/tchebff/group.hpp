#pragma once

// Finite groups materialized by exhaustive closure from generators. Elements
// are flat uint32 vectors interpreted by a universe object (permutation
// images, extraspecial triples, dihedral pairs, abelian vectors, or
// module-by-extraspecial pairs), so the closure, order, and subgroup
// machinery is shared across all constructions. Everything here works with
// integers mod a prime below 2^31; nothing depends on the field tower.

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <type_traits>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "tchebff/util.hpp"

namespace tchebff {

namespace groups {

using Element = std::vector<uint32_t>;

struct ElementHash {
    size_t operator()(const Element& v) const {
        uint64_t h = 1469598103934665603ull;
        for (uint32_t x : v) {
            h ^= x;
            h *= 1099511628211ull;
        }
        return size_t(h);
    }
};

inline uint32_t addm(uint32_t a, uint32_t b, uint32_t n) { return uint32_t((uint64_t(a) + b) % n); }
inline uint32_t subm(uint32_t a, uint32_t b, uint32_t n) { return uint32_t((uint64_t(a) + n - b) % n); }
inline uint32_t mulm(uint32_t a, uint32_t b, uint32_t n) { return uint32_t(uint64_t(a) * b % n); }
inline uint32_t powm(uint32_t a, uint64_t e, uint32_t n) {
    uint64_t r = 1 % n, base = a % n;
    while (e) {
        if (e & 1) r = r * base % n;
        base = base * base % n;
        e >>= 1;
    }
    return uint32_t(r);
}

// Permutations on {0, .., degree-1} stored as image vectors; (a*b)(i) =
// a[b[i]], so the right factor acts first.
struct PermUniverse {
    uint32_t degree = 0;

    Element identity() const {
        Element e(degree);
        for (uint32_t i = 0; i < degree; ++i) e[i] = i;
        return e;
    }
    Element multiply(const Element& a, const Element& b) const {
        Element r(degree);
        for (uint32_t i = 0; i < degree; ++i) r[i] = a[b[i]];
        return r;
    }
    Element inverse(const Element& a) const {
        Element r(degree);
        for (uint32_t i = 0; i < degree; ++i) r[a[i]] = i;
        return r;
    }
};

// Triples (a, b, c) with a, b in (Z/l)^m and c in Z/l, multiplied by
// (a, b, c)(a', b', c') = (a + a', b + b', c + c' + a.b'). Layout:
// a[0..m), b[0..m), then c.
struct ExtraspecialUniverse {
    uint32_t ell = 3;
    uint32_t m = 1;

    size_t width() const { return 2 * size_t(m) + 1; }
    Element identity() const { return Element(width(), 0); }
    Element multiply(const Element& x, const Element& y) const {
        Element r(width());
        uint64_t dot = 0;
        for (uint32_t i = 0; i < m; ++i) {
            r[i] = addm(x[i], y[i], ell);
            r[m + i] = addm(x[m + i], y[m + i], ell);
            dot += uint64_t(x[i]) * y[m + i];
        }
        r[2 * m] = addm(addm(x[2 * m], y[2 * m], ell), uint32_t(dot % ell), ell);
        return r;
    }
    Element inverse(const Element& x) const {
        Element r(width());
        uint64_t dot = 0;
        for (uint32_t i = 0; i < m; ++i) {
            r[i] = subm(0, x[i], ell);
            r[m + i] = subm(0, x[m + i], ell);
            dot += uint64_t(x[i]) * x[m + i];
        }
        r[2 * m] = addm(subm(0, x[2 * m], ell), uint32_t(dot % ell), ell);
        return r;
    }
};

// Pairs (x, s) with x mod p^m and s in {0, 1}; s = 1 inverts the rotation
// part, so (x, 1) are the reflections.
struct DihedralUniverse {
    uint32_t modulus = 1;

    Element identity() const { return {0, 0}; }
    Element multiply(const Element& a, const Element& b) const {
        uint32_t moved = a[1] ? subm(0, b[0], modulus) : b[0];
        return {addm(a[0], moved, modulus), a[1] ^ b[1]};
    }
    Element inverse(const Element& a) const {
        if (a[1]) return a;
        return {subm(0, a[0], modulus), 0};
    }
};

// Vectors in (Z/modulus)^dim under addition.
struct AbelianUniverse {
    uint32_t modulus = 2;
    uint32_t dim = 1;

    Element identity() const { return Element(dim, 0); }
    Element multiply(const Element& a, const Element& b) const {
        Element r(dim);
        for (uint32_t i = 0; i < dim; ++i) r[i] = addm(a[i], b[i], modulus);
        return r;
    }
    Element inverse(const Element& a) const {
        Element r(dim);
        for (uint32_t i = 0; i < dim; ++i) r[i] = subm(0, a[i], modulus);
        return r;
    }
};

}  // namespace groups

// The monomial representation of the extraspecial group on F_q^(l^m):
// basis vectors are indexed by x in (Z/l)^m and a triple (a, b, c) acts by
// e_x -> zeta^(c + a.x) e_(x+b), where zeta is the smallest integer of
// multiplicative order l mod q. Requires q = 1 (mod l) for zeta to exist.
struct HeisenbergModule {
    uint32_t ell = 3;
    uint32_t m = 1;
    uint32_t q = 7;
    uint32_t zeta = 2;
    uint32_t dim = 3;  // ell^m

    // index <-> digit vector in base ell, little-endian
    std::vector<uint32_t> digits(uint32_t idx) const {
        std::vector<uint32_t> d(m);
        for (uint32_t i = 0; i < m; ++i) {
            d[i] = idx % ell;
            idx /= ell;
        }
        return d;
    }
    uint32_t index_of(const std::vector<uint32_t>& d) const {
        uint32_t idx = 0;
        for (uint32_t i = m; i-- > 0;) idx = idx * ell + (d[i] % ell);
        return idx;
    }

    // scalar and target row for the column of e_x under (a, b, c)
    std::pair<uint32_t, uint32_t> column_action(const groups::Element& triple, uint32_t x) const {
        auto xd = digits(x);
        uint64_t dot = triple[2 * m];
        std::vector<uint32_t> shifted(m);
        for (uint32_t i = 0; i < m; ++i) {
            dot += uint64_t(triple[i]) * xd[i];
            shifted[i] = groups::addm(xd[i], triple[m + i], ell);
        }
        uint32_t scalar = groups::powm(zeta, dot % ell, q);
        return {index_of(shifted), scalar};
    }

    // dense dim x dim matrix, row-major: out_i = sum_j M[i][j] w_j
    std::vector<uint32_t> matrix_of(const groups::Element& triple) const {
        std::vector<uint32_t> mat(size_t(dim) * dim, 0);
        for (uint32_t x = 0; x < dim; ++x) {
            auto [row, scalar] = column_action(triple, x);
            mat[size_t(row) * dim + x] = scalar;
        }
        return mat;
    }

    std::vector<uint32_t> apply(const groups::Element& triple, const std::vector<uint32_t>& w) const {
        std::vector<uint32_t> out(dim, 0);
        for (uint32_t x = 0; x < dim; ++x) {
            if (!w[x]) continue;
            auto [row, scalar] = column_action(triple, x);
            out[row] = groups::addm(out[row], groups::mulm(scalar, w[x], q), q);
        }
        return out;
    }
};

inline HeisenbergModule heisenberg_module(uint32_t ell, uint32_t m, uint32_t q) {
    if (!is_prime_u64(ell) || ell == 2) throw validation_error("module parameter l must be an odd prime");
    if (m < 1) throw validation_error("module rank must be at least 1");
    if (!is_prime_u64(q)) throw validation_error("module characteristic must be prime");
    if (q % ell != 1)
        throw validation_error("module requires q = 1 (mod l); no primitive l-th root of unity otherwise");
    HeisenbergModule mod;
    mod.ell = ell;
    mod.m = m;
    mod.q = q;
    auto d = checked_pow(ell, m, caps::enumeration);
    if (!d) throw cap_error("module dimension exceeds the enumeration cap");
    mod.dim = uint32_t(*d);
    mod.zeta = 0;
    for (uint32_t z = 2; z < q; ++z) {
        if (groups::powm(z, ell, q) == 1) {
            mod.zeta = z;
            break;
        }
    }
    if (!mod.zeta) throw error("no l-th root of unity found (internal inconsistency)");
    return mod;
}

// Exhaustive homomorphism check: the matrix of a product equals the product
// of the matrices for every pair of group elements, and the center acts by
// the scalar zeta^c.
inline bool verify_module_relations(const HeisenbergModule& mod) {
    groups::ExtraspecialUniverse u{mod.ell, mod.m};
    std::vector<groups::Element> all;
    uint64_t total = *checked_pow(mod.ell, 2 * mod.m + 1, caps::enumeration);
    for (uint64_t i = 0; i < total; ++i) {
        groups::Element t(u.width());
        uint64_t v = i;
        for (auto& digit : t) {
            digit = uint32_t(v % mod.ell);
            v /= mod.ell;
        }
        all.push_back(std::move(t));
    }
    auto matmul = [&](const std::vector<uint32_t>& a, const std::vector<uint32_t>& b) {
        std::vector<uint32_t> r(size_t(mod.dim) * mod.dim, 0);
        for (uint32_t i = 0; i < mod.dim; ++i)
            for (uint32_t k = 0; k < mod.dim; ++k) {
                uint32_t aik = a[size_t(i) * mod.dim + k];
                if (!aik) continue;
                for (uint32_t j = 0; j < mod.dim; ++j)
                    r[size_t(i) * mod.dim + j] = groups::addm(
                        r[size_t(i) * mod.dim + j],
                        groups::mulm(aik, b[size_t(k) * mod.dim + j], mod.q), mod.q);
            }
        return r;
    };
    std::vector<std::vector<uint32_t>> mats;
    mats.reserve(all.size());
    for (const auto& t : all) mats.push_back(mod.matrix_of(t));
    for (size_t i = 0; i < all.size(); ++i)
        for (size_t j = 0; j < all.size(); ++j)
            if (matmul(mats[i], mats[j]) != mod.matrix_of(u.multiply(all[i], all[j]))) return false;
    // central triples (0, 0, c) act as zeta^c times the identity
    for (uint32_t c = 0; c < mod.ell; ++c) {
        groups::Element z(u.width(), 0);
        z[2 * mod.m] = c;
        auto mat = mod.matrix_of(z);
        uint32_t s = groups::powm(mod.zeta, c, mod.q);
        for (uint32_t i = 0; i < mod.dim; ++i)
            for (uint32_t j = 0; j < mod.dim; ++j)
                if (mat[size_t(i) * mod.dim + j] != (i == j ? s : 0)) return false;
    }
    return true;
}

struct InvariantSubspaceReport {
    uint64_t subspaces_checked = 0;
    bool irreducible = true;
    uint32_t invariant_dimension = 0;  // dimension of a proper invariant subspace found
};

namespace detail {

// Gaussian elimination basis over Z/q (q prime): rows kept in echelon form.
struct RowBasis {
    uint32_t q;
    std::vector<std::vector<uint32_t>> rows;  // each with leading 1 at pivot
    std::vector<uint32_t> pivots;

    bool insert(std::vector<uint32_t> v) {
        for (size_t r = 0; r < rows.size(); ++r) {
            uint32_t c = v[pivots[r]];
            if (!c) continue;
            for (size_t j = 0; j < v.size(); ++j)
                v[j] = groups::subm(v[j], groups::mulm(c, rows[r][j], q), q);
        }
        size_t piv = v.size();
        for (size_t j = 0; j < v.size(); ++j)
            if (v[j]) {
                piv = j;
                break;
            }
        if (piv == v.size()) return false;
        uint32_t inv = groups::powm(v[piv], q - 2, q);
        for (auto& x : v) x = groups::mulm(x, inv, q);
        rows.push_back(std::move(v));
        pivots.push_back(uint32_t(piv));
        return true;
    }
    size_t dimension() const { return rows.size(); }
};

}  // namespace detail

// Scans for proper invariant subspaces under the generating matrices of the
// extraspecial action. Every projective line representative is grown to the
// smallest invariant subspace containing it (vector closure); in dimension 3
// the hyperplanes are additionally checked through the transposed action, so
// the count for (l, m) = (3, 1) covers lines and planes separately.
inline InvariantSubspaceReport invariant_subspace_scan(const HeisenbergModule& mod) {
    groups::ExtraspecialUniverse u{mod.ell, mod.m};
    std::vector<groups::Element> gens;
    for (uint32_t i = 0; i < mod.m; ++i) {
        groups::Element a(u.width(), 0), b(u.width(), 0);
        a[i] = 1;
        b[mod.m + i] = 1;
        gens.push_back(std::move(a));
        gens.push_back(std::move(b));
    }
    std::vector<std::vector<uint32_t>> mats, mats_t;
    for (const auto& g : gens) {
        auto mat = mod.matrix_of(g);
        std::vector<uint32_t> t(mat.size());
        for (uint32_t i = 0; i < mod.dim; ++i)
            for (uint32_t j = 0; j < mod.dim; ++j)
                t[size_t(j) * mod.dim + i] = mat[size_t(i) * mod.dim + j];
        mats.push_back(std::move(mat));
        mats_t.push_back(std::move(t));
    }
    auto apply_mat = [&](const std::vector<uint32_t>& mat, const std::vector<uint32_t>& w) {
        std::vector<uint32_t> out(mod.dim, 0);
        for (uint32_t i = 0; i < mod.dim; ++i) {
            uint64_t acc = 0;
            for (uint32_t j = 0; j < mod.dim; ++j) acc += uint64_t(mat[size_t(i) * mod.dim + j]) * w[j];
            out[i] = uint32_t(acc % mod.q);
        }
        return out;
    };

    uint64_t line_count = 1;
    std::vector<std::vector<uint32_t>> reps;
    // projective representatives: first nonzero coordinate equals 1
    for (uint32_t lead = 0; lead < mod.dim; ++lead) {
        uint64_t tail = mod.dim - lead - 1;
        uint64_t combos = 1;
        for (uint64_t i = 0; i < tail; ++i) {
            combos *= mod.q;
            if (combos > caps::class_computation) throw cap_error("too many lines to scan");
        }
        for (uint64_t c = 0; c < combos; ++c) {
            std::vector<uint32_t> v(mod.dim, 0);
            v[lead] = 1;
            uint64_t x = c;
            for (uint32_t j = lead + 1; j < mod.dim; ++j) {
                v[j] = uint32_t(x % mod.q);
                x /= mod.q;
            }
            reps.push_back(std::move(v));
            if (++line_count > caps::class_computation) throw cap_error("too many lines to scan");
        }
    }

    InvariantSubspaceReport rep;
    for (const auto& v : reps) {
        ++rep.subspaces_checked;
        detail::RowBasis basis{mod.q, {}, {}};
        basis.insert(v);
        std::vector<std::vector<uint32_t>> frontier{v};
        while (!frontier.empty() && basis.dimension() < mod.dim) {
            std::vector<std::vector<uint32_t>> next;
            for (const auto& w : frontier)
                for (const auto& mat : mats) {
                    auto image = apply_mat(mat, w);
                    if (basis.insert(image)) next.push_back(std::move(image));
                }
            frontier = std::move(next);
        }
        if (basis.dimension() < mod.dim) {
            rep.irreducible = false;
            rep.invariant_dimension = uint32_t(basis.dimension());
        }
    }
    if (mod.dim == 3) {
        // hyperplanes: the plane with normal vector n is invariant exactly
        // when every transposed generator fixes the line through n
        for (const auto& n : reps) {
            ++rep.subspaces_checked;
            bool invariant = true;
            for (const auto& t : mats_t) {
                auto image = apply_mat(t, n);
                // proportionality test
                uint32_t ratio = 0;
                bool proportional = true;
                for (uint32_t j = 0; j < mod.dim && proportional; ++j) {
                    if (n[j] == 0) {
                        if (image[j] != 0) proportional = false;
                        continue;
                    }
                    uint32_t r = groups::mulm(image[j], groups::powm(n[j], mod.q - 2, mod.q), mod.q);
                    if (!ratio)
                        ratio = r;
                    else if (ratio != r)
                        proportional = false;
                }
                if (!proportional || ratio == 0) {
                    invariant = false;
                    break;
                }
            }
            if (invariant) {
                rep.irreducible = false;
                rep.invariant_dimension = 2;
            }
        }
    }
    return rep;
}

// Module vectors paired with extraspecial triples: (w, e)(w', e') =
// (w + rho(e) w', e e'). Layout: w[0..dim), then the triple.
struct SemidirectUniverse {
    HeisenbergModule mod;
    groups::ExtraspecialUniverse e;

    size_t width() const { return mod.dim + e.width(); }
    groups::Element identity() const { return groups::Element(width(), 0); }

    groups::Element multiply(const groups::Element& x, const groups::Element& y) const {
        groups::Element r(width());
        std::vector<uint32_t> wy(y.begin(), y.begin() + mod.dim);
        groups::Element ex(x.begin() + mod.dim, x.end());
        auto moved = mod.apply(ex, wy);
        for (uint32_t i = 0; i < mod.dim; ++i) r[i] = groups::addm(x[i], moved[i], mod.q);
        groups::Element ey(y.begin() + mod.dim, y.end());
        auto ee = e.multiply(ex, ey);
        std::copy(ee.begin(), ee.end(), r.begin() + mod.dim);
        return r;
    }
    groups::Element inverse(const groups::Element& x) const {
        groups::Element r(width());
        groups::Element ex(x.begin() + mod.dim, x.end());
        auto einv = e.inverse(ex);
        std::vector<uint32_t> wx(x.begin(), x.begin() + mod.dim);
        auto moved = mod.apply(einv, wx);
        for (uint32_t i = 0; i < mod.dim; ++i) r[i] = groups::subm(0, moved[i], mod.q);
        std::copy(einv.begin(), einv.end(), r.begin() + mod.dim);
        return r;
    }
};

struct CyclicSubgroupClass {
    uint64_t order = 1;
    uint64_t class_size = 1;

    bool operator==(const CyclicSubgroupClass& o) const = default;
};

struct GroupSummary {
    uint64_t order = 1;
    uint64_t exponent = 1;
    std::vector<uint64_t> element_orders;                      // sorted, distinct
    std::vector<std::pair<uint64_t, uint64_t>> order_counts;   // (order, multiplicity)
    std::vector<std::vector<uint32_t>> cycle_types;            // permutation groups only
    uint32_t perm_degree = 0;
};

template <typename U>
class FiniteGroup {
  public:
    using Element = groups::Element;

    static FiniteGroup close(U universe, std::vector<Element> generators) {
        FiniteGroup g;
        g.universe_ = std::move(universe);
        g.generators_ = std::move(generators);
        g.elements_ = close_under(g.universe_, g.generators_, caps::group_enumeration);
        g.index_.reserve(g.elements_.size() * 2);
        for (uint32_t i = 0; i < g.elements_.size(); ++i) g.index_.emplace(g.elements_[i], i);
        return g;
    }

    const U& universe() const { return universe_; }
    const std::vector<Element>& elements() const { return elements_; }
    const std::vector<Element>& generators() const { return generators_; }
    uint64_t order() const { return elements_.size(); }

    bool contains(const Element& x) const { return index_.count(x) > 0; }
    uint32_t index_of(const Element& x) const {
        auto it = index_.find(x);
        if (it == index_.end()) throw validation_error("element does not belong to the group");
        return it->second;
    }

    Element multiply(const Element& a, const Element& b) const { return universe_.multiply(a, b); }
    Element inverse(const Element& a) const { return universe_.inverse(a); }
    Element conjugate(const Element& g, const Element& h) const {
        return universe_.multiply(universe_.multiply(g, h), universe_.inverse(g));
    }
    Element power(const Element& x, uint64_t e) const {
        Element r = universe_.identity(), base = x;
        while (e) {
            if (e & 1) r = universe_.multiply(r, base);
            base = universe_.multiply(base, base);
            e >>= 1;
        }
        return r;
    }

    // The order is computed twice: by walking the cyclic chain and by probing
    // the sorted divisors of |G|. A mismatch would mean corrupted arithmetic,
    // so it is a hard error rather than a test failure.
    uint64_t element_order(const Element& x) const {
        Element id = universe_.identity();
        uint64_t chain = 1;
        Element cur = x;
        while (cur != id) {
            cur = universe_.multiply(cur, x);
            ++chain;
            if (chain > order()) throw error("element order exceeds the group order (internal inconsistency)");
        }
        for (uint64_t d : divisors_sorted(order())) {
            if (power(x, d) == id) {
                if (d != chain)
                    throw error("element order routes disagree (internal inconsistency)");
                return d;
            }
        }
        throw error("element order not found among divisors (internal inconsistency)");
    }

    const GroupSummary& summary() const {
        if (!summary_) summary_ = compute_summary();
        return *summary_;
    }
    uint64_t exponent() const { return summary().exponent; }

    // Smallest subgroup containing x that is closed under conjugation: grow
    // the generating set with escaped conjugates until every member's
    // conjugates stay inside.
    std::vector<uint32_t> normal_closure_indices(const Element& x) const {
        std::vector<Element> hgens{x};
        std::vector<Element> conj_by = generators_;
        for (const auto& g : generators_) conj_by.push_back(universe_.inverse(g));
        std::vector<Element> closed;
        while (true) {
            closed = close_under(universe_, hgens, order());
            std::unordered_set<Element, groups::ElementHash> members(closed.begin(), closed.end());
            std::vector<Element> additions;
            for (const auto& h : closed) {
                for (const auto& g : conj_by) {
                    Element c = conjugate(g, h);
                    if (members.insert(c).second) additions.push_back(std::move(c));
                }
                if (!additions.empty()) break;
            }
            if (additions.empty()) break;
            for (auto& c : additions) hgens.push_back(std::move(c));
        }
        std::vector<uint32_t> idx;
        idx.reserve(closed.size());
        for (const auto& h : closed) idx.push_back(index_of(h));
        std::sort(idx.begin(), idx.end());
        return idx;
    }

    // Subgroup generated by all elements whose order is a power of p.
    FiniteGroup sylow_generated(uint64_t p) const {
        std::vector<Element> red;
        std::unordered_set<Element, groups::ElementHash> have;
        have.insert(universe_.identity());
        for (const auto& x : elements_) {
            uint64_t n = element_order(x);
            bool ppower = true;
            while (n > 1) {
                if (n % p) {
                    ppower = false;
                    break;
                }
                n /= p;
            }
            if (!ppower || have.count(x)) continue;
            red.push_back(x);
            auto closed = close_under(universe_, red, order());
            have = {closed.begin(), closed.end()};
        }
        return close(universe_, red);
    }

    std::vector<uint32_t> center_indices() const {
        std::vector<uint32_t> idx;
        for (uint32_t i = 0; i < elements_.size(); ++i) {
            bool central = true;
            for (const auto& g : generators_) {
                if (universe_.multiply(elements_[i], g) != universe_.multiply(g, elements_[i])) {
                    central = false;
                    break;
                }
            }
            if (central) idx.push_back(i);
        }
        return idx;
    }

    // Normal closure of all generator commutators.
    std::vector<uint32_t> derived_subgroup_indices() const {
        std::set<uint32_t> acc;
        acc.insert(index_of(universe_.identity()));
        for (const auto& a : generators_) {
            for (const auto& b : generators_) {
                Element comm = universe_.multiply(universe_.multiply(a, b),
                                                  universe_.inverse(universe_.multiply(b, a)));
                for (uint32_t i : normal_closure_indices(comm)) acc.insert(i);
            }
        }
        // the union of normal subgroups need not be closed; close it
        std::vector<Element> gens;
        for (uint32_t i : acc) gens.push_back(elements_[i]);
        auto closed = close_under(universe_, gens, order());
        std::vector<uint32_t> idx;
        for (const auto& h : closed) idx.push_back(index_of(h));
        std::sort(idx.begin(), idx.end());
        return idx;
    }

    // Cyclic subgroups up to conjugacy: distinct subgroups keyed by their
    // element-index sets, merged along conjugation by the group generators.
    std::vector<CyclicSubgroupClass> cyclic_subgroup_classes() const {
        std::map<std::vector<uint32_t>, uint32_t> ids;
        std::vector<std::vector<uint32_t>> keys;
        std::vector<uint32_t> rep_elem;  // index of a generator of each subgroup
        for (uint32_t i = 0; i < elements_.size(); ++i) {
            auto key = cyclic_key(elements_[i]);
            if (ids.emplace(key, uint32_t(keys.size())).second) {
                keys.push_back(key);
                rep_elem.push_back(i);
                if (keys.size() > caps::class_computation)
                    throw cap_error("too many cyclic subgroups to classify");
            }
        }
        std::vector<uint32_t> parent(keys.size());
        for (uint32_t i = 0; i < parent.size(); ++i) parent[i] = i;
        auto find = [&](uint32_t a) {
            while (parent[a] != a) a = parent[a] = parent[parent[a]];
            return a;
        };
        for (uint32_t s = 0; s < keys.size(); ++s) {
            for (const auto& g : generators_) {
                Element image = conjugate(g, elements_[rep_elem[s]]);
                uint32_t t = ids.at(cyclic_key(image));
                uint32_t a = find(s), b = find(t);
                if (a != b) parent[a] = b;
            }
        }
        std::map<std::pair<uint64_t, uint32_t>, uint64_t> buckets;  // (order, root) -> count
        for (uint32_t s = 0; s < keys.size(); ++s)
            ++buckets[{keys[s].size(), find(s)}];
        std::vector<CyclicSubgroupClass> out;
        for (const auto& [k, count] : buckets) out.push_back({k.first, count});
        std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
            return a.order != b.order ? a.order < b.order : a.class_size < b.class_size;
        });
        return out;
    }

    static std::vector<Element> close_under(const U& u, const std::vector<Element>& gens,
                                            uint64_t cap) {
        std::vector<Element> out{u.identity()};
        std::unordered_set<Element, groups::ElementHash> seen{out[0]};
        for (size_t head = 0; head < out.size(); ++head) {
            Element cur = out[head];  // copy: out may reallocate
            for (const auto& g : gens) {
                Element next = u.multiply(cur, g);
                if (seen.insert(next).second) {
                    out.push_back(std::move(next));
                    if (out.size() > cap) throw cap_error("group closure exceeds the enumeration cap");
                }
            }
        }
        return out;
    }

  private:
    std::vector<uint32_t> cyclic_key(const Element& x) const {
        std::vector<uint32_t> key;
        Element id = universe_.identity();
        Element cur = x;
        while (true) {
            key.push_back(index_of(cur));
            if (cur == id) break;
            cur = universe_.multiply(cur, x);
        }
        std::sort(key.begin(), key.end());
        return key;
    }

    GroupSummary compute_summary() const {
        GroupSummary s;
        s.order = order();
        std::map<uint64_t, uint64_t> counts;
        for (const auto& x : elements_) ++counts[element_order(x)];
        std::set<std::vector<uint32_t>> types;
        if constexpr (std::is_same_v<U, groups::PermUniverse>) {
            s.perm_degree = universe_.degree;
            for (const auto& x : elements_) {
                std::vector<uint32_t> type;
                std::vector<bool> seen(universe_.degree, false);
                for (uint32_t i = 0; i < universe_.degree; ++i) {
                    if (seen[i]) continue;
                    uint32_t len = 0, j = i;
                    do {
                        seen[j] = true;
                        j = x[j];
                        ++len;
                    } while (j != i);
                    type.push_back(len);
                }
                std::sort(type.begin(), type.end());
                types.insert(std::move(type));
            }
        }
        s.exponent = 1;
        for (const auto& [ord, count] : counts) {
            s.exponent = lcm_u64(s.exponent, ord);
            s.element_orders.push_back(ord);
            s.order_counts.emplace_back(ord, count);
        }
        s.cycle_types = {types.begin(), types.end()};
        return s;
    }

    U universe_;
    std::vector<Element> elements_;
    std::vector<Element> generators_;
    std::unordered_map<Element, uint32_t, groups::ElementHash> index_;
    mutable std::optional<GroupSummary> summary_;
};

// -- constructions --

inline FiniteGroup<groups::PermUniverse> cyclic_group(uint32_t n) {
    if (n < 1) throw validation_error("cyclic group order must be at least 1");
    if (n > caps::group_enumeration) throw cap_error("cyclic group order exceeds the enumeration cap");
    groups::PermUniverse u{n};
    std::vector<groups::Element> gens;
    if (n > 1) {
        groups::Element c(n);
        for (uint32_t i = 0; i < n; ++i) c[i] = (i + 1) % n;
        gens.push_back(std::move(c));
    }
    return FiniteGroup<groups::PermUniverse>::close(u, std::move(gens));
}

inline FiniteGroup<groups::PermUniverse> symmetric_group(uint32_t n) {
    if (n < 1) throw validation_error("symmetric group degree must be at least 1");
    uint64_t fact = 1;
    for (uint32_t i = 2; i <= n; ++i) {
        fact *= i;
        if (fact > caps::group_enumeration)
            throw cap_error("symmetric group order exceeds the enumeration cap");
    }
    groups::PermUniverse u{n};
    std::vector<groups::Element> gens;
    if (n >= 2) {
        groups::Element t = u.identity();
        std::swap(t[0], t[1]);
        gens.push_back(std::move(t));
    }
    if (n >= 3) {
        groups::Element c(n);
        for (uint32_t i = 0; i < n; ++i) c[i] = (i + 1) % n;
        gens.push_back(std::move(c));
    }
    return FiniteGroup<groups::PermUniverse>::close(u, std::move(gens));
}

inline FiniteGroup<groups::DihedralUniverse> dihedral_group(uint32_t p, uint32_t m) {
    if (!is_prime_u64(p) || p == 2) throw validation_error("dihedral tower parameter must be an odd prime");
    if (m < 1) throw validation_error("dihedral tower height must be at least 1");
    auto pm = checked_pow(p, m, caps::group_enumeration / 2);
    if (!pm) throw cap_error("dihedral group order exceeds the enumeration cap");
    groups::DihedralUniverse u{uint32_t(*pm)};
    return FiniteGroup<groups::DihedralUniverse>::close(u, {{1, 0}, {0, 1}});
}

inline FiniteGroup<groups::ExtraspecialUniverse> extra_special_group(uint32_t ell, uint32_t m) {
    if (!is_prime_u64(ell) || ell == 2)
        throw validation_error("extraspecial parameter l must be an odd prime");
    if (m < 1) throw validation_error("extraspecial rank must be at least 1");
    if (!checked_pow(ell, 2 * m + 1, caps::group_enumeration))
        throw cap_error("extraspecial group order exceeds the enumeration cap");
    groups::ExtraspecialUniverse u{ell, m};
    std::vector<groups::Element> gens;
    for (uint32_t i = 0; i < m; ++i) {
        groups::Element a(u.width(), 0), b(u.width(), 0);
        a[i] = 1;
        b[m + i] = 1;
        gens.push_back(std::move(a));
        gens.push_back(std::move(b));
    }
    return FiniteGroup<groups::ExtraspecialUniverse>::close(u, std::move(gens));
}

struct ExtraspecialCertificate {
    bool ok = false;
    uint64_t order = 0;
    uint64_t exponent = 0;
    uint64_t center_order = 0;
    bool center_is_derived = false;
};

inline ExtraspecialCertificate certify_extra_special(
    const FiniteGroup<groups::ExtraspecialUniverse>& g) {
    ExtraspecialCertificate cert;
    uint32_t ell = g.universe().ell, m = g.universe().m;
    cert.order = g.order();
    cert.exponent = g.exponent();
    auto center = g.center_indices();
    auto derived = g.derived_subgroup_indices();
    cert.center_order = center.size();
    cert.center_is_derived = center == derived;
    uint64_t expected = *checked_pow(ell, 2 * m + 1, caps::group_enumeration);
    cert.ok = cert.order == expected && cert.exponent == ell && cert.center_order == ell &&
              cert.center_is_derived;
    return cert;
}

// W semidirect E with W = F_q^(l^m) and E extraspecial acting through the
// monomial module.
inline FiniteGroup<SemidirectUniverse> semidirect_group(uint32_t ell, uint32_t m, uint32_t q) {
    HeisenbergModule mod = heisenberg_module(ell, m, q);
    auto wsize = checked_pow(q, mod.dim, caps::group_enumeration);
    auto esize = checked_pow(ell, 2 * m + 1, caps::group_enumeration);
    if (!wsize || !esize || !checked_pow(q, mod.dim, caps::group_enumeration / *esize))
        throw cap_error("semidirect product order exceeds the enumeration cap");
    SemidirectUniverse u{mod, groups::ExtraspecialUniverse{ell, m}};
    std::vector<groups::Element> gens;
    groups::Element w0(u.width(), 0);
    w0[0] = 1;
    gens.push_back(std::move(w0));
    for (uint32_t i = 0; i < m; ++i) {
        groups::Element a(u.width(), 0), b(u.width(), 0);
        a[mod.dim + i] = 1;
        b[mod.dim + m + i] = 1;
        gens.push_back(std::move(a));
        gens.push_back(std::move(b));
    }
    return FiniteGroup<SemidirectUniverse>::close(u, std::move(gens));
}

struct NormalityReport {
    bool is_subgroup = false;
    bool is_normal = false;
    bool is_minimal = false;
};

// N is minimal normal in G exactly when it is normal, nontrivial, and the
// normal closure of every nontrivial element of N is all of N.
template <typename U>
inline NormalityReport minimal_normal_check(const FiniteGroup<U>& g,
                                            const std::vector<groups::Element>& n_elems) {
    NormalityReport rep;
    std::unordered_set<groups::Element, groups::ElementHash> nset(n_elems.begin(), n_elems.end());
    groups::Element id = g.universe().identity();
    if (!nset.count(id) || nset.size() < 2) return rep;
    for (const auto& a : n_elems) {
        if (!g.contains(a)) return rep;
        for (const auto& b : n_elems)
            if (!nset.count(g.multiply(a, b))) return rep;
    }
    rep.is_subgroup = true;
    for (const auto& a : n_elems)
        for (const auto& gen : g.generators())
            if (!nset.count(g.conjugate(gen, a))) return rep;
    rep.is_normal = true;
    for (const auto& a : n_elems) {
        if (a == id) continue;
        auto closure = g.normal_closure_indices(a);
        if (closure.size() != nset.size()) return rep;
    }
    rep.is_minimal = true;
    return rep;
}

struct AbelianBoundReport {
    uint64_t order = 0;
    uint64_t bound = 0;
    bool within_bound = false;
};

// Ambient (Z/delta)^r, r random generators constrained to multiply to the
// identity: the group they generate has order at most delta^(r-1).
inline AbelianBoundReport abelian_product_bound_check(uint32_t delta, uint32_t r, uint64_t seed) {
    if (delta < 2) throw validation_error("ambient modulus must be at least 2");
    if (r < 2) throw validation_error("need at least two generators");
    auto bound = checked_pow(delta, r - 1, caps::group_enumeration);
    if (!bound) throw cap_error("generated group bound exceeds the enumeration cap");
    groups::AbelianUniverse u{delta, r};
    rng rand(derive_seed(seed, "abelian-bound"));
    std::vector<groups::Element> gens;
    groups::Element sum(r, 0);
    for (uint32_t i = 0; i + 1 < r; ++i) {
        groups::Element v(r);
        for (auto& x : v) x = uint32_t(rand.below(delta));
        sum = u.multiply(sum, v);
        gens.push_back(std::move(v));
    }
    gens.push_back(u.inverse(sum));
    auto g = FiniteGroup<groups::AbelianUniverse>::close(u, std::move(gens));
    AbelianBoundReport rep;
    rep.order = g.order();
    rep.bound = *bound;
    rep.within_bound = rep.order <= rep.bound;
    return rep;
}

}  // namespace tchebff
