#pragma once

// Field construction and tower plumbing. Defining polynomials come from a
// seeded pseudorandom search (first irreducible candidate wins), so a fixed
// (p, absolute degree, seed) triple reproduces the identical presentation
// everywhere; in particular building F_{q^{mn}} directly or through F_{q^m}
// yields the same handle presentation. Embeddings pick the image of the base
// generator canonically with respect to the base's whole stored chain: at
// each level, the smallest root (in element enumeration order) of that
// level's defining polynomial whose induced map extends the embedding chosen
// one level down. That choice is what makes embeddings compose exactly.

#include <string>
#include <vector>

#include "tchebff/field.hpp"
#include "tchebff/poly.hpp"
#include "tchebff/util.hpp"

namespace tchebff {

namespace detail {

inline UniPoly lift_prime_coeffs(const std::vector<uint32_t>& coeffs, const FieldHandle& dst) {
    std::vector<FieldElement> c;
    c.reserve(coeffs.size());
    for (uint32_t a : coeffs) c.push_back(dst->from_integer(a));
    return UniPoly(dst, std::move(c));
}

// First monic irreducible of the given degree over F_p along the seeded
// candidate stream. Depends only on (p, degree, seed).
inline std::vector<uint32_t> search_defining_polynomial(const FieldHandle& prime, uint32_t degree,
                                                        uint64_t seed) {
    uint32_t p = prime->characteristic();
    rng r(derive_seed(seed, "defining:" + std::to_string(p) + ":" + std::to_string(degree)));
    while (true) {
        std::vector<FieldElement> c;
        c.reserve(degree + 1);
        for (uint32_t i = 0; i < degree; ++i) c.push_back(prime->from_integer(r.below(p)));
        c.push_back(prime->one());
        UniPoly candidate(prime, std::move(c));
        if (candidate.degree() == int(degree) && is_irreducible(candidate)) {
            std::vector<uint32_t> out;
            out.reserve(degree + 1);
            for (uint32_t i = 0; i <= degree; ++i) out.push_back(candidate.coeff(i).coeffs()[0]);
            return out;
        }
    }
}

}  // namespace detail

inline FieldHandle make_prime_field(uint32_t p) {
    if (!is_prime_u64(p)) throw validation_error("characteristic must be prime: " + std::to_string(p));
    return std::make_shared<Field>(p, 1, std::vector<uint32_t>{}, nullptr, std::vector<uint32_t>{});
}

// F_{p^k} with a seeded deterministic defining polynomial. The handle's base
// reference is the prime field (absent for k = 1).
inline FieldHandle make_field(uint32_t p, uint32_t k, uint64_t seed) {
    if (p >= (uint32_t(1) << 31)) throw validation_error("characteristic must be below 2^31");
    if (k < 1) throw validation_error("field degree must be at least 1");
    FieldHandle prime = make_prime_field(p);
    if (k == 1) return prime;
    if (!checked_pow(p, k, caps::arithmetic))
        throw cap_error("field cardinality exceeds the arithmetic cap");
    std::vector<uint32_t> defining = detail::search_defining_polynomial(prime, k, seed);
    return std::make_shared<Field>(p, k, std::move(defining), prime,
                                   std::vector<uint32_t>{1});
}

// The canonical embedding data: src's power basis mapped into dst through
// the image of src's generator.
struct Embedding {
    FieldHandle src;
    FieldHandle dst;
    std::vector<FieldElement> gen_powers;  // gen_image^0 .. gen_image^(src_k - 1)

    FieldElement apply(const FieldElement& x) const {
        if (!x.field()->same_presentation(*src))
            throw validation_error("element does not belong to the embedding's source field");
        FieldElement acc = dst->zero();
        for (size_t i = 0; i < x.coeffs().size(); ++i) {
            if (x.coeffs()[i] == 0) continue;
            acc = acc + gen_powers[i] * dst->from_integer(x.coeffs()[i]);
        }
        return acc;
    }

    UniPoly apply(const UniPoly& f) const {
        std::vector<FieldElement> c;
        c.reserve(f.coeffs().size());
        for (const auto& a : f.coeffs()) c.push_back(apply(a));
        return UniPoly(dst, std::move(c));
    }
};

inline Embedding make_embedding(const FieldHandle& src, const FieldHandle& dst,
                                const FieldElement& gen_image) {
    Embedding e{src, dst, {}};
    e.gen_powers.reserve(src->degree());
    FieldElement pw = dst->one();
    for (uint32_t i = 0; i < src->degree(); ++i) {
        e.gen_powers.push_back(pw);
        if (i + 1 < src->degree()) pw = pw * gen_image;
    }
    return e;
}

namespace detail {

// Image of src's generator in dst, canonical with respect to src's stored
// chain. Recurses down the chain and picks, at this level, the smallest
// root whose induced embedding extends the one below.
inline FieldElement chain_canonical_generator_image(const FieldHandle& src, const FieldHandle& dst,
                                                    uint64_t seed) {
    if (src->characteristic() != dst->characteristic())
        throw validation_error("cannot embed across different characteristics");
    if (src->degree() == 1) return dst->one();
    if (dst->degree() % src->degree() != 0)
        throw error("embedding root not found: degree does not divide");

    UniPoly f_src = lift_prime_coeffs(src->defining_polynomial(), dst);
    auto roots = roots_with_multiplicity(f_src, seed);  // sorted by element index
    if (roots.empty()) throw error("embedding root not found (internal inconsistency)");

    const FieldHandle& below = src->base();
    if (!below || below->degree() == 1) return roots.front().first;

    // The root must induce, on the stored image of below's generator, the
    // same element the chain-canonical embedding of `below` picks.
    FieldElement target = chain_canonical_generator_image(below, dst, seed);
    for (const auto& [r, mult] : roots) {
        (void)mult;
        Embedding cand = make_embedding(src, dst, r);
        FieldElement induced = cand.apply(src->element(src->base_generator_image()));
        if (induced == target) return r;
    }
    throw error("embedding root not found compatible with the base chain (internal inconsistency)");
}

}  // namespace detail

// F_{q^m} over base = F_q, flattened to an absolute extension of the prime
// field, with the stored embedding of base. m = 1 returns base itself.
inline FieldHandle extend_field(const FieldHandle& base, uint32_t m, uint64_t seed) {
    if (m < 1) throw validation_error("extension degree must be at least 1");
    if (m == 1) return base;
    uint32_t p = base->characteristic();
    uint32_t degree = base->degree() * m;
    if (!checked_pow(p, degree, caps::arithmetic))
        throw cap_error("extension cardinality exceeds the arithmetic cap");
    FieldHandle prime = base->degree() == 1 ? base : make_prime_field(p);
    std::vector<uint32_t> defining = detail::search_defining_polynomial(prime, degree, seed);
    auto ext = std::make_shared<Field>(p, degree, std::move(defining), base,
                                       std::vector<uint32_t>{});
    FieldElement gen_image = detail::chain_canonical_generator_image(base, ext, seed);
    // Rebuild with the embedding recorded (Field is immutable once shared).
    return std::make_shared<Field>(p, degree, ext->defining_polynomial(), base,
                                   gen_image.coeffs());
}

// Embedding of src into dst along dst's stored base chain. Fails when src is
// not in the chain (and is not the prime field); no ad-hoc embeddings are
// invented outside constructed towers.
inline Embedding find_embedding(const FieldHandle& src, const FieldHandle& dst) {
    if (src->characteristic() != dst->characteristic())
        throw validation_error("cannot embed across different characteristics");
    if (src->same_presentation(*dst)) return make_embedding(src, dst, dst->generator());
    if (src->degree() == 1) return make_embedding(src, dst, dst->one());
    const FieldHandle& below = dst->base();
    if (!below) throw validation_error("missing embedding: field is not an extension of the source");
    if (below->same_presentation(*src)) {
        if (dst->base_generator_image().empty())
            throw validation_error("missing embedding: extension carries no stored base image");
        return make_embedding(src, dst, dst->element(dst->base_generator_image()));
    }
    // src sits deeper in the chain: compose below->dst with src->below.
    // src->degree() >= 2 here, so its generator image is gen_powers[1].
    Embedding lower = find_embedding(src, below);
    Embedding step = find_embedding(below, dst);
    return make_embedding(src, dst, step.apply(lower.gen_powers[1]));
}

// All roots of f in ext (which must extend f's field via stored embeddings),
// listed once each with multiplicity.
inline std::vector<std::pair<FieldElement, uint32_t>> roots_in_field(const UniPoly& f,
                                                                     const FieldHandle& ext,
                                                                     uint64_t seed) {
    Embedding e = find_embedding(f.field(), ext);
    return roots_with_multiplicity(e.apply(f), seed);
}

// Smallest multiplicative generator in enumeration order; exhaustive test
// support for the cyclic-multiplicative-group invariant.
inline FieldElement multiplicative_generator(const FieldHandle& f) {
    uint64_t n = f->cardinality() - 1;
    auto primes = prime_factors(n);
    for (uint64_t i = 1; i < f->cardinality(); ++i) {
        FieldElement x = f->element_at(i);
        bool ok = true;
        for (uint64_t r : primes) {
            if (x.pow(n / r).is_one()) {
                ok = false;
                break;
            }
        }
        if (ok) return x;
    }
    throw error("no multiplicative generator found (internal inconsistency)");
}

}  // namespace tchebff
