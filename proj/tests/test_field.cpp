#include <catch2/catch_amalgamated.hpp>

#include <set>
#include <vector>

#include "tchebff/field.hpp"
#include "tchebff/poly.hpp"
#include "tchebff/tower.hpp"

using namespace tchebff;

namespace {
constexpr uint64_t kSeed = 20260101;

FieldHandle F(uint32_t p, uint32_t k = 1) { return make_field(p, k, kSeed); }
}  // namespace

TEST_CASE("prime field basics") {
    auto f7 = F(7);
    REQUIRE(f7->characteristic() == 7);
    REQUIRE(f7->degree() == 1);
    REQUIRE(f7->cardinality() == 7);
    REQUIRE(f7->defining_polynomial().empty());
    REQUIRE(f7->from_integer(10) == f7->from_integer(3));
    REQUIRE((f7->from_integer(3) + f7->from_integer(5)) == f7->one());
    REQUIRE((f7->from_integer(3) * f7->from_integer(5)) == f7->one());
    REQUIRE(f7->from_integer(3).inverse() == f7->from_integer(5));
    REQUIRE((-f7->one()) == f7->from_integer(6));
}

TEST_CASE("prime field arithmetic matches integer arithmetic mod p") {
    auto f = F(101);
    rng r(1);
    for (int i = 0; i < 300; ++i) {
        uint64_t a = r.below(101), b = r.below(101);
        REQUIRE((f->from_integer(a) + f->from_integer(b)) == f->from_integer((a + b) % 101));
        REQUIRE((f->from_integer(a) * f->from_integer(b)) == f->from_integer((a * b) % 101));
        REQUIRE((f->from_integer(a) - f->from_integer(b)) == f->from_integer((101 + a - b) % 101));
        if (a) REQUIRE(f->from_integer(a).inverse() == f->from_integer(a).pow(99));
    }
}

TEST_CASE("extension construction produces a monic irreducible defining polynomial") {
    for (auto [p, k] : std::vector<std::pair<uint32_t, uint32_t>>{
             {2, 2}, {2, 3}, {2, 8}, {3, 2}, {3, 4}, {5, 3}, {7, 2}, {19, 3}}) {
        auto f = make_field(p, k, kSeed);
        REQUIRE(f->cardinality() == *checked_pow(p, k, caps::arithmetic));
        const auto& def = f->defining_polynomial();
        REQUIRE(def.size() == size_t(k) + 1);
        REQUIRE(def.back() == 1);
        auto prime = make_field(p, 1, kSeed);
        std::vector<FieldElement> c;
        for (uint32_t a : def) c.push_back(prime->from_integer(a));
        REQUIRE(is_irreducible(UniPoly(prime, c)));
    }
}

TEST_CASE("identical parameters and seed give bit-identical fields") {
    auto a = make_field(5, 4, 42);
    auto b = make_field(5, 4, 42);
    REQUIRE(a->defining_polynomial() == b->defining_polynomial());
    REQUIRE(a->same_presentation(*b));
    auto c = extend_field(make_field(5, 1, 42), 4, 42);
    REQUIRE(c->same_presentation(*a));
}

TEST_CASE("every element satisfies the q-th power identity") {
    for (auto [p, k] : std::vector<std::pair<uint32_t, uint32_t>>{
             {2, 1}, {3, 1}, {2, 2}, {5, 1}, {7, 1}, {2, 3}, {3, 2}, {2, 4}, {5, 2}, {3, 3}, {7, 2}}) {
        auto f = make_field(p, k, kSeed);
        uint64_t q = f->cardinality();
        for (const auto& x : enumerate_elements(f)) {
            REQUIRE(x.pow(q) == x);
            if (!x.is_zero()) REQUIRE(x.pow(q - 1).is_one());
        }
    }
}

TEST_CASE("multiplicative group is cyclic for every field up to 10^4") {
    std::vector<std::pair<uint32_t, uint32_t>> shapes = {
        {2, 1},  {3, 1},  {5, 1}, {7, 1}, {11, 1}, {101, 1}, {1009, 1}, {9973, 1},
        {2, 2},  {2, 3},  {2, 4}, {2, 10}, {3, 2},  {3, 4},   {3, 6},    {3, 8},
        {5, 2},  {5, 4},  {5, 5}, {7, 2},  {7, 4},  {11, 2},  {13, 3}};
    for (auto [p, k] : shapes) {
        auto f = make_field(p, k, kSeed);
        REQUIRE(f->cardinality() <= 10000);
        FieldElement g = multiplicative_generator(f);
        std::set<uint64_t> seen;
        FieldElement x = f->one();
        for (uint64_t i = 0; i + 1 < f->cardinality(); ++i) {
            REQUIRE_FALSE(x.is_zero());
            seen.insert(x.index());
            x = x * g;
        }
        REQUIRE(x.is_one());
        REQUIRE(seen.size() == f->cardinality() - 1);
    }
}

TEST_CASE("smallest multiplicative generators of small prime fields") {
    REQUIRE(multiplicative_generator(F(5)) == F(5)->from_integer(2));
    REQUIRE(multiplicative_generator(F(7)) == F(7)->from_integer(3));
    REQUIRE(multiplicative_generator(F(3)) == F(3)->from_integer(2));
}

TEST_CASE("frobenius is the p-th power map and fixes the field at iterate k") {
    auto f27 = F(3, 3);
    for (const auto& x : enumerate_elements(f27)) {
        REQUIRE(frobenius(x, 1) == x.pow(3));
        REQUIRE(frobenius(x, 2) == x.pow(9));
        REQUIRE(frobenius(x, 3) == x);
        REQUIRE(frobenius(x, 0) == x);
    }
    auto f49 = F(7, 2);
    for (const auto& x : enumerate_elements(f49)) {
        REQUIRE(frobenius(x, 1) == x.pow(7));
        REQUIRE(frobenius(x, 2) == x);
    }
}

TEST_CASE("enumeration order round-trips through element indices") {
    auto f = F(7, 2);
    for (uint64_t i = 0; i < f->cardinality(); ++i) REQUIRE(f->element_at(i).index() == i);
    auto e = enumerate_elements(f);
    REQUIRE(e.size() == 49);
    REQUIRE(e[0].is_zero());
    REQUIRE(e[1].is_one());
}

TEST_CASE("inverses exist for every nonzero element") {
    auto f8 = F(2, 3);
    for (const auto& x : enumerate_elements(f8)) {
        if (x.is_zero()) {
            REQUIRE_THROWS_AS(x.inverse(), validation_error);
            continue;
        }
        REQUIRE((x * x.inverse()).is_one());
        REQUIRE((f8->one() / x) == x.inverse());
    }
}

TEST_CASE("elements from equal presentations interoperate, others are rejected") {
    auto a = make_field(3, 2, 7);
    auto b = make_field(3, 2, 7);
    REQUIRE((a->element({2, 1}) + b->element({1, 2})) == a->zero());
    auto sum = a->element({2, 1}) + b->element({2, 1});
    REQUIRE(sum == a->element({1, 2}));

    auto f9 = F(3, 2);
    auto f4 = F(2, 2);
    auto f3 = F(3);
    REQUIRE_THROWS_AS(f9->one() + f4->one(), validation_error);
    REQUIRE_THROWS_AS(f9->one() * f3->one(), validation_error);
}

TEST_CASE("construction caps and validation") {
    REQUIRE_THROWS_AS(make_field(2, 49, kSeed), cap_error);
    REQUIRE_THROWS_AS(make_field(6, 1, kSeed), validation_error);
    REQUIRE_THROWS_AS(make_field(1, 1, kSeed), validation_error);
    REQUIRE_THROWS_AS(make_field(2147483659u, 1, kSeed), validation_error);
    REQUIRE_THROWS_AS(make_field(2, 0, kSeed), validation_error);

    auto big = make_field(2, 25, kSeed);
    REQUIRE(big->cardinality() == (uint64_t(1) << 25));
    REQUIRE_THROWS_AS(enumerate_elements(big), cap_error);
}

TEST_CASE("coefficient vectors longer than the degree are rejected") {
    auto f9 = F(3, 2);
    REQUIRE_THROWS_AS(f9->element({1, 2, 1}), validation_error);
    REQUIRE(f9->element({2}) == f9->from_integer(2));
}

TEST_CASE("extension by degree one returns the base field itself") {
    auto f9 = F(3, 2);
    REQUIRE(extend_field(f9, 1, kSeed).get() == f9.get());
}

TEST_CASE("tower and direct constructions agree and embeddings compose") {
    auto k0 = make_field(3, 2, kSeed);
    auto k1 = extend_field(k0, 2, kSeed);
    auto k2 = extend_field(k1, 2, kSeed);
    auto k2_direct = extend_field(k0, 4, kSeed);
    REQUIRE(k1->cardinality() == 81);
    REQUIRE(k2->cardinality() == 6561);
    REQUIRE(k2->same_presentation(*k2_direct));

    auto e1 = find_embedding(k0, k1);
    auto e2 = find_embedding(k1, k2);
    auto direct = find_embedding(k0, k2_direct);
    for (const auto& x : enumerate_elements(k0)) {
        FieldElement through_tower = e2.apply(e1.apply(x));
        FieldElement straight = direct.apply(x);
        REQUIRE(through_tower.coeffs() == straight.coeffs());
    }
}

TEST_CASE("embeddings preserve field structure") {
    auto base = make_field(2, 2, kSeed);
    auto ext = extend_field(base, 3, kSeed);
    auto e = find_embedding(base, ext);
    for (const auto& x : enumerate_elements(base)) {
        for (const auto& y : enumerate_elements(base)) {
            REQUIRE(e.apply(x + y) == e.apply(x) + e.apply(y));
            REQUIRE(e.apply(x * y) == e.apply(x) * e.apply(y));
        }
    }
    REQUIRE(e.apply(base->one()).is_one());
    // injectivity
    std::set<uint64_t> images;
    for (const auto& x : enumerate_elements(base)) images.insert(e.apply(x).index());
    REQUIRE(images.size() == base->cardinality());
}

TEST_CASE("prime subfield embeds everywhere, unrelated fields do not") {
    auto f3 = F(3);
    auto k1 = extend_field(make_field(3, 2, kSeed), 2, kSeed);
    auto e = find_embedding(f3, k1);
    REQUIRE(e.apply(f3->from_integer(2)) == k1->from_integer(2));

    auto b = make_field(2, 2, kSeed);
    auto direct6 = make_field(2, 6, kSeed);
    // direct6 records only the prime field below it, so there is no stored
    // route from the quadratic field into it.
    REQUIRE_THROWS_AS(find_embedding(b, direct6), validation_error);
    REQUIRE_THROWS_AS(find_embedding(F(3, 2), F(2, 2)), validation_error);
}

TEST_CASE("roots found through a tower actually vanish") {
    auto f3 = F(3);
    UniPoly f(f3, {f3->one(), f3->zero(), f3->one()});  // y^2 + 1
    REQUIRE(roots_with_multiplicity(f, kSeed).empty());
    auto f9 = extend_field(f3, 2, kSeed);
    auto rs = roots_in_field(f, f9, kSeed);
    REQUIRE(rs.size() == 2);
    for (const auto& [r, m] : rs) {
        REQUIRE(m == 1);
        REQUIRE((r * r) == -f9->one());
    }

    auto f5 = F(5);
    UniPoly g(f5, {f5->from_integer(3), f5->zero(), f5->one()});  // y^2 - 2
    REQUIRE(roots_with_multiplicity(g, kSeed).empty());
    auto f25 = extend_field(f5, 2, kSeed);
    REQUIRE(roots_in_field(g, f25, kSeed).size() == 2);
}
