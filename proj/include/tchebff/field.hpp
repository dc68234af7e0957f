#pragma once

// Finite fields F_{p^k} at runtime-chosen (p, k). Every extension is stored
// as an absolute extension of F_p: elements are coefficient vectors of
// length k (little-endian in the power basis of the defining polynomial),
// and the relative structure of a tower survives only as the embedding data
// on the handle (base handle + image of the base generator). Handles are
// immutable and shared; construction lives in tower.hpp because it needs
// polynomial factorization.

#include <cassert>
#include <memory>
#include <vector>

#include "tchebff/util.hpp"

namespace tchebff {

class Field;
using FieldHandle = std::shared_ptr<const Field>;

class FieldElement {
  public:
    FieldElement() = default;
    FieldElement(FieldHandle f, std::vector<uint32_t> coeffs);

    const FieldHandle& field() const { return field_; }
    const std::vector<uint32_t>& coeffs() const { return c_; }

    bool is_zero() const;
    bool is_one() const;

    // Position in the enumeration order: the base-p value of the coefficient
    // vector read from the top power down. Doubles as the canonical sort key
    // and hash.
    uint64_t index() const;

    FieldElement operator+(const FieldElement& o) const;
    FieldElement operator-(const FieldElement& o) const;
    FieldElement operator-() const;
    FieldElement operator*(const FieldElement& o) const;
    FieldElement operator/(const FieldElement& o) const;
    FieldElement inverse() const;
    FieldElement pow(uint64_t e) const;

    bool operator==(const FieldElement& o) const;
    bool operator!=(const FieldElement& o) const { return !(*this == o); }

  private:
    FieldHandle field_;
    std::vector<uint32_t> c_;
};

class Field : public std::enable_shared_from_this<Field> {
  public:
    // Use make_field / extend_field (tower.hpp); this constructor only
    // records already-validated data.
    Field(uint32_t p, uint32_t k, std::vector<uint32_t> defining,
          FieldHandle base, std::vector<uint32_t> base_gen_image)
        : p_(p), k_(k), defining_(std::move(defining)), base_(std::move(base)),
          base_gen_image_(std::move(base_gen_image)) {
        auto q = checked_pow(p_, k_, caps::arithmetic);
        if (!q) throw cap_error("field cardinality exceeds the arithmetic cap");
        q_ = *q;
    }

    uint32_t characteristic() const { return p_; }
    uint32_t degree() const { return k_; }
    uint64_t cardinality() const { return q_; }

    // Monic irreducible over F_p, little-endian, length k+1; empty for k=1.
    const std::vector<uint32_t>& defining_polynomial() const { return defining_; }

    // Tower bookkeeping: the field this one was built over (null for
    // make_field results over the prime field) and the image of that field's
    // generator here, as a coefficient vector.
    const FieldHandle& base() const { return base_; }
    const std::vector<uint32_t>& base_generator_image() const { return base_gen_image_; }

    // Two handles are interchangeable iff they present the same field the
    // same way; arithmetic accepts either.
    bool same_presentation(const Field& o) const {
        return p_ == o.p_ && k_ == o.k_ && defining_ == o.defining_;
    }

    FieldElement zero() const { return element(std::vector<uint32_t>(k_, 0)); }
    FieldElement one() const { return from_integer(1); }
    FieldElement from_integer(uint64_t n) const {
        std::vector<uint32_t> c(k_, 0);
        c[0] = uint32_t(n % p_);
        return element(std::move(c));
    }
    FieldElement element(std::vector<uint32_t> coeffs) const {
        if (coeffs.size() < k_) coeffs.resize(k_, 0);
        return FieldElement(shared_from_this(), std::move(coeffs));
    }
    // The power-basis generator x (for k=1: the element 1).
    FieldElement generator() const {
        std::vector<uint32_t> c(k_, 0);
        c[k_ > 1 ? 1 : 0] = 1;
        return element(std::move(c));
    }
    FieldElement element_at(uint64_t idx) const {
        std::vector<uint32_t> c(k_);
        for (uint32_t i = 0; i < k_; ++i) {
            c[i] = uint32_t(idx % p_);
            idx /= p_;
        }
        return element(std::move(c));
    }

    // -- raw coefficient-vector arithmetic (mod p, mod defining) --

    std::vector<uint32_t> add(const std::vector<uint32_t>& a, const std::vector<uint32_t>& b) const {
        std::vector<uint32_t> r(k_);
        for (uint32_t i = 0; i < k_; ++i) r[i] = addp(a[i], b[i]);
        return r;
    }

    std::vector<uint32_t> sub(const std::vector<uint32_t>& a, const std::vector<uint32_t>& b) const {
        std::vector<uint32_t> r(k_);
        for (uint32_t i = 0; i < k_; ++i) r[i] = subp(a[i], b[i]);
        return r;
    }

    std::vector<uint32_t> neg(const std::vector<uint32_t>& a) const {
        std::vector<uint32_t> r(k_);
        for (uint32_t i = 0; i < k_; ++i) r[i] = a[i] ? p_ - a[i] : 0;
        return r;
    }

    std::vector<uint32_t> mul(const std::vector<uint32_t>& a, const std::vector<uint32_t>& b) const {
        if (k_ == 1) return {mulp(a[0], b[0])};
        std::vector<uint64_t> prod(2 * k_ - 1, 0);
        for (uint32_t i = 0; i < k_; ++i) {
            if (a[i] == 0) continue;
            for (uint32_t j = 0; j < k_; ++j)
                prod[i + j] = (prod[i + j] + uint64_t(a[i]) * b[j]) % p_;
        }
        // reduce mod the monic defining polynomial
        for (uint32_t d = 2 * k_ - 2; d >= k_; --d) {
            uint64_t lead = prod[d];
            if (lead) {
                prod[d] = 0;
                for (uint32_t i = 0; i < k_; ++i) {
                    uint64_t s = uint64_t(p_) - defining_[i];  // -defining_[i] mod p
                    prod[d - k_ + i] = (prod[d - k_ + i] + lead * (s % p_)) % p_;
                }
            }
        }
        std::vector<uint32_t> r(k_);
        for (uint32_t i = 0; i < k_; ++i) r[i] = uint32_t(prod[i]);
        return r;
    }

    std::vector<uint32_t> pow(std::vector<uint32_t> a, uint64_t e) const {
        std::vector<uint32_t> r(k_, 0);
        r[0] = 1;
        while (e) {
            if (e & 1) r = mul(r, a);
            a = mul(a, a);
            e >>= 1;
        }
        return r;
    }

    std::vector<uint32_t> inv(const std::vector<uint32_t>& a) const;

    bool vec_is_zero(const std::vector<uint32_t>& a) const {
        for (uint32_t x : a)
            if (x) return false;
        return true;
    }

    uint32_t addp(uint32_t a, uint32_t b) const {
        uint32_t s = a + b;
        return s >= p_ ? s - p_ : s;
    }
    uint32_t subp(uint32_t a, uint32_t b) const { return a >= b ? a - b : a + p_ - b; }
    uint32_t mulp(uint32_t a, uint32_t b) const { return uint32_t(uint64_t(a) * b % p_); }
    uint32_t invp(uint32_t a) const {
        // extended Euclid mod p
        if (a == 0) throw validation_error("division by zero in F_p");
        int64_t t = 0, nt = 1, r = p_, nr = a;
        while (nr) {
            int64_t q = r / nr;
            std::swap(t -= q * nt, nt);
            std::swap(r -= q * nr, nr);
        }
        return uint32_t(t < 0 ? t + p_ : t);
    }

  private:
    uint32_t p_;
    uint32_t k_;
    uint64_t q_;
    std::vector<uint32_t> defining_;
    FieldHandle base_;
    std::vector<uint32_t> base_gen_image_;
};

inline FieldElement::FieldElement(FieldHandle f, std::vector<uint32_t> coeffs)
    : field_(std::move(f)), c_(std::move(coeffs)) {
    if (c_.size() != field_->degree())
        throw validation_error("coefficient vector length does not match the field degree");
    for (uint32_t& x : c_) x %= field_->characteristic();
}

inline bool FieldElement::is_zero() const { return field_->vec_is_zero(c_); }

inline bool FieldElement::is_one() const {
    if (c_[0] != 1) return false;
    for (size_t i = 1; i < c_.size(); ++i)
        if (c_[i]) return false;
    return true;
}

inline uint64_t FieldElement::index() const {
    uint64_t v = 0;
    uint32_t p = field_->characteristic();
    for (size_t i = c_.size(); i-- > 0;) v = v * p + c_[i];
    return v;
}

namespace detail {
inline void require_same_field(const FieldElement& a, const FieldElement& b) {
    if (a.field().get() != b.field().get() && !a.field()->same_presentation(*b.field()))
        throw validation_error("field handle mismatch in element arithmetic");
}
}  // namespace detail

inline FieldElement FieldElement::operator+(const FieldElement& o) const {
    detail::require_same_field(*this, o);
    return FieldElement(field_, field_->add(c_, o.c_));
}
inline FieldElement FieldElement::operator-(const FieldElement& o) const {
    detail::require_same_field(*this, o);
    return FieldElement(field_, field_->sub(c_, o.c_));
}
inline FieldElement FieldElement::operator-() const {
    return FieldElement(field_, field_->neg(c_));
}
inline FieldElement FieldElement::operator*(const FieldElement& o) const {
    detail::require_same_field(*this, o);
    return FieldElement(field_, field_->mul(c_, o.c_));
}
inline FieldElement FieldElement::operator/(const FieldElement& o) const {
    detail::require_same_field(*this, o);
    return FieldElement(field_, field_->mul(c_, field_->inv(o.c_)));
}
inline FieldElement FieldElement::inverse() const {
    return FieldElement(field_, field_->inv(c_));
}
inline FieldElement FieldElement::pow(uint64_t e) const {
    return FieldElement(field_, field_->pow(c_, e));
}
inline bool FieldElement::operator==(const FieldElement& o) const {
    detail::require_same_field(*this, o);
    return c_ == o.c_;
}

// x^(p^iterate). The Galois group of F_{p^k}/F_p has order k, so the
// iterate only matters mod k; after reduction the exponent p^i fits in
// 64 bits whenever the cardinality does.
inline FieldElement frobenius(const FieldElement& x, uint32_t iterate) {
    const Field& f = *x.field();
    uint32_t i = f.degree() > 0 ? iterate % f.degree() : 0;
    uint64_t e = 1;
    for (uint32_t j = 0; j < i; ++j) e *= f.characteristic();
    return x.pow(e);
}

// All q elements, index order (0 first). Materializes the list; callers that
// stream should use Field::element_at.
inline std::vector<FieldElement> enumerate_elements(const FieldHandle& f) {
    if (f->cardinality() > caps::enumeration)
        throw cap_error("field cardinality exceeds the enumeration cap");
    std::vector<FieldElement> out;
    out.reserve(size_t(f->cardinality()));
    for (uint64_t i = 0; i < f->cardinality(); ++i) out.push_back(f->element_at(i));
    return out;
}

inline std::vector<uint32_t> Field::inv(const std::vector<uint32_t>& a) const {
    if (vec_is_zero(a)) throw validation_error("division by zero");
    if (k_ == 1) return {invp(a[0])};
    // Extended Euclid over F_p[x] between a (degree < k) and the defining
    // polynomial. Invariant: g = u*a mod defining, with g shrinking to a unit.
    auto deg = [](const std::vector<uint32_t>& v) {
        int d = int(v.size()) - 1;
        while (d >= 0 && v[size_t(d)] == 0) --d;
        return d;
    };
    std::vector<uint32_t> r0 = defining_, r1 = a;
    r1.resize(k_ + 1, 0);
    std::vector<uint32_t> u0(k_ + 1, 0), u1(k_ + 1, 0);
    u1[0] = 1;
    while (true) {
        int d1 = deg(r1);
        if (d1 < 0) throw validation_error("element not invertible (defining polynomial not irreducible?)");
        int d0 = deg(r0);
        if (d1 == 0) break;
        if (d0 < d1) {
            std::swap(r0, r1);
            std::swap(u0, u1);
            continue;
        }
        // kill r0's leading term with a shifted multiple of r1
        uint32_t factor = mulp(r0[size_t(d0)], invp(r1[size_t(d1)]));
        int shift = d0 - d1;
        for (int i = 0; i <= d1; ++i)
            r0[size_t(i + shift)] = subp(r0[size_t(i + shift)], mulp(factor, r1[size_t(i)]));
        for (int i = 0; i + shift <= int(k_); ++i)
            u0[size_t(i + shift)] = subp(u0[size_t(i + shift)], mulp(factor, u1[size_t(i)]));
    }
    uint32_t scale = invp(r1[0]);
    std::vector<uint32_t> out(k_, 0);
    for (uint32_t i = 0; i < k_; ++i) out[i] = mulp(u1[i], scale);
    return out;
}

}  // namespace tchebff
