#pragma once

// Brute-force reference implementations used only by the tests. Factorization
// here is trial division against an exhaustively enumerated table of monic
// irreducibles, so it shares no code path with the library's distinct-degree
// and equal-degree splitting.

#include <cstdint>
#include <utility>
#include <vector>

#include "tchebff/poly.hpp"

namespace oracle {

// Monic polynomial of the given degree whose lower coefficients spell idx in
// base q (little-endian, digit i picks element_at of the coefficient of x^i).
inline tchebff::UniPoly monic_at(const tchebff::FieldHandle& f, uint32_t degree, uint64_t idx) {
    std::vector<tchebff::FieldElement> c;
    c.reserve(degree + 1);
    uint64_t q = f->cardinality();
    for (uint32_t i = 0; i < degree; ++i) {
        c.push_back(f->element_at(idx % q));
        idx /= q;
    }
    c.push_back(f->one());
    return tchebff::UniPoly(f, std::move(c));
}

inline bool divides(const tchebff::UniPoly& d, const tchebff::UniPoly& f) {
    return tchebff::divmod(f, d).second.is_zero();
}

// All monic irreducibles of degree 1..max_degree, in enumeration order within
// each degree. A candidate is irreducible iff no earlier table entry of at
// most half its degree divides it.
inline std::vector<tchebff::UniPoly> monic_irreducibles_up_to(const tchebff::FieldHandle& f,
                                                              uint32_t max_degree) {
    std::vector<tchebff::UniPoly> table;
    uint64_t q = f->cardinality();
    for (uint32_t d = 1; d <= max_degree; ++d) {
        uint64_t count = 1;
        for (uint32_t i = 0; i < d; ++i) count *= q;
        for (uint64_t idx = 0; idx < count; ++idx) {
            tchebff::UniPoly cand = monic_at(f, d, idx);
            bool reducible = false;
            for (const auto& irr : table) {
                if (2 * uint32_t(irr.degree()) > d) break;
                if (divides(irr, cand)) {
                    reducible = true;
                    break;
                }
            }
            if (!reducible) table.push_back(cand);
        }
    }
    return table;
}

// Trial-division factorization against a table that must reach the degree of
// f. Output is sorted with the library's canonical comparator so lists can be
// compared directly; the factor values themselves never touch library
// factorization code.
inline tchebff::Factorization factor_by_trial_division(const tchebff::UniPoly& f0,
                                                       const std::vector<tchebff::UniPoly>& table) {
    tchebff::Factorization out{f0.leading(), {}};
    tchebff::UniPoly f = f0.monic();
    for (const auto& irr : table) {
        if (f.degree() < 1) break;
        // Everything of degree at most half of f has been divided out, so
        // once the table passes that point the remainder is irreducible.
        if (2 * irr.degree() > f.degree()) {
            out.factors.emplace_back(f, 1);
            f = tchebff::UniPoly::one(f.field());
            break;
        }
        uint32_t mult = 0;
        while (divides(irr, f)) {
            f = tchebff::div_exact(f, irr);
            ++mult;
        }
        if (mult) out.factors.emplace_back(irr, mult);
    }
    if (f.degree() > 0) out.factors.emplace_back(f, 1);
    std::sort(out.factors.begin(), out.factors.end(), [](const auto& a, const auto& b) {
        return a.first.less_canonical(b.first);
    });
    return out;
}

}  // namespace oracle
