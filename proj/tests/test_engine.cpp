#include <catch2/catch_amalgamated.hpp>

#include <optional>
#include <vector>

#include "tchebff/engine.hpp"
#include "tchebff/tower.hpp"

using namespace tchebff;

namespace {

UniPoly T(const std::shared_ptr<const Field>& f, const std::vector<uint32_t>& coeffs) {
    std::vector<FieldElement> c;
    for (uint32_t x : coeffs) c.push_back(f->from_integer(x));
    return UniPoly(f, std::move(c));
}

BiPoly bip(const std::shared_ptr<const Field>& f, const std::vector<std::vector<uint32_t>>& rows) {
    std::vector<UniPoly> cs;
    for (const auto& row : rows) cs.push_back(T(f, row));
    return BiPoly(f, std::move(cs));
}

// Y^3 - T over F_7: mu_3 lies in F_7, so every unramified fiber is split or
// inert of degree 3.
Cover kummer_cover() {
    auto f7 = make_prime_field(7);
    return build_cover(bip(f7, {{0, 6}, {}, {}, {1}}), 11);
}

// Y^2 - Y - (T^3 - T) over F_3: every residue of T^3 - T at a rational point
// lies in the prime field where the quadratic splits, so degree 2 only shows
// up from level 2 on.
Cover additive_cover() {
    auto f3 = make_prime_field(3);
    return build_cover(bip(f3, {{0, 1, 0, 2}, {2}, {1}}), 11);
}

}  // namespace

TEST_CASE("default extension bound is the least m with q^m clearing 4 exp^2") {
    CHECK(default_max_ext(3, 2) == 3);    // 27 >= 16
    CHECK(default_max_ext(7, 3) == 2);    // 49 >= 36
    CHECK(default_max_ext(19, 9) == 2);   // 361 >= 324
    CHECK(default_max_ext(2, 1) == 2);    // 4 >= 4
    CHECK(default_max_ext(101, 2) == 1);  // 101 >= 16
    CHECK_THROWS_AS(default_max_ext(1, 2), validation_error);
    CHECK_THROWS_AS(default_max_ext(3, 0), validation_error);
}

TEST_CASE("split-everywhere cover at level 1 fails strict but passes existence") {
    auto cover = additive_cover();
    auto group = cyclic_group(2).summary();
    auto rep = check(cover, group);

    CHECK(rep.used_default_max_ext);
    CHECK(rep.max_ext == 3);
    CHECK_FALSE(rep.truncated);
    CHECK(rep.completed_ext == 3);

    CHECK(rep.strict == Verdict::fail);
    CHECK(rep.existence == Verdict::pass);
    CHECK(rep.order_subset == Verdict::pass);
    CHECK(rep.exponent_lcm == Verdict::pass);

    REQUIRE(rep.witnesses.size() == 2);
    CHECK(rep.witnesses[0].order == 1);
    CHECK(rep.witnesses[0].witness->m == 1);
    CHECK(rep.witnesses[1].order == 2);
    CHECK(rep.witnesses[1].witness->m == 2);  // earliest inert point sits one level up
}

TEST_CASE("cubic radical cover passes all verdicts at level 1") {
    auto cover = kummer_cover();
    auto group = cyclic_group(3).summary();
    auto rep = check(cover, group);

    CHECK(rep.max_ext == 2);
    CHECK(rep.strict == Verdict::pass);
    CHECK(rep.existence == Verdict::pass);
    CHECK(rep.order_subset == Verdict::pass);
    CHECK(rep.exponent_lcm == Verdict::pass);
    CHECK(rep.observed_orders == std::vector<uint64_t>{1, 3});
    CHECK(rep.observed_lcm == 3);

    REQUIRE(rep.levels.size() == 2);
    CHECK(rep.levels[0].points == 8);
    CHECK(rep.levels[0].unramified == 6);
    CHECK(rep.levels[0].ramified == 2);
    CHECK(rep.levels[1].points == 50);
    CHECK(rep.levels[1].unramified == 48);

    for (const auto& w : rep.witnesses) {
        REQUIRE(w.witness.has_value());
        CHECK(w.witness->m == 1);
        CHECK_FALSE(w.witness->ramified);
        CHECK(w.witness->local_degree == w.order);
    }
}

TEST_CASE("witness records reproduce under direct specialization") {
    auto cover = kummer_cover();
    auto group = cyclic_group(3).summary();
    CheckOptions opt;
    opt.seed = 5;
    auto rep = check(cover, group, opt);
    for (const auto& w : rep.witnesses) {
        REQUIRE(w.witness.has_value());
        std::optional<uint64_t> point;
        if (!w.witness->at_infinity) point = w.witness->point_index;
        auto direct = specialize(cover, w.witness->m, point, 5);
        CHECK(direct == *w.witness);
    }
}

TEST_CASE("declaring the wrong group fails the order subset verdict") {
    auto cover = kummer_cover();
    auto group = cyclic_group(2).summary();
    auto rep = check(cover, group);
    CHECK(rep.max_ext == 2);  // exponent 2 gives bound 16, and 49 >= 16
    CHECK(rep.order_subset == Verdict::fail);   // degree 3 fibers are not orders of Z/2
    CHECK(rep.existence == Verdict::fail);      // no inert quadratic point exists
    CHECK(rep.exponent_lcm == Verdict::unknown);
}

TEST_CASE("order subset and exponent verdicts separate for a non-normal cubic") {
    // Y^3 - T over F_5: cube roots come one per point at level 1, so fibers
    // split 1+2 there, while level 2 contains the cube roots of unity
    auto f5 = make_prime_field(5);
    auto cover = build_cover(bip(f5, {{0, 4}, {}, {}, {1}}), 11);
    auto group = cyclic_group(3).summary();
    CheckOptions opt;
    opt.max_ext = 2;
    auto rep = check(cover, group, opt);
    CHECK(rep.existence == Verdict::pass);  // orders 1 and 3 both witnessed by level 2
    CHECK(rep.order_subset == Verdict::fail);  // the 1+2 fiber shape is alien to Z/3
    CHECK(rep.observed_orders == std::vector<uint64_t>{1, 2, 3});
    CHECK(rep.observed_lcm == 6);
    CHECK(rep.exponent_lcm == Verdict::fail);
}

TEST_CASE("strict pass implies existence pass on a quadratic cover") {
    auto f5 = make_prime_field(5);
    auto cover = build_cover(bip(f5, {{0, 4}, {}, {1}}), 11);  // Y^2 - T
    auto rep = check(cover, cyclic_group(2).summary());
    CHECK(rep.strict == Verdict::pass);
    CHECK(rep.existence == Verdict::pass);
}

TEST_CASE("checks without a group report observations only") {
    auto cover = kummer_cover();
    CheckOptions opt;
    opt.max_ext = 2;
    auto rep = check(cover, std::nullopt, opt);
    CHECK(rep.existence == Verdict::unknown);
    CHECK(rep.strict == Verdict::unknown);
    CHECK(rep.order_subset == Verdict::pass);  // nothing declared, nothing violated
    CHECK(rep.exponent_lcm == Verdict::unknown);
    CHECK(rep.observed_orders == std::vector<uint64_t>{1, 3});
    CHECK(rep.witnesses.empty());

    CHECK_THROWS_AS(check(cover, std::nullopt, {}), validation_error);
}

TEST_CASE("a truncated scan leaves the verdicts inconclusive") {
    uint64_t p = (uint64_t(1) << 24) + 1;
    while (!is_prime_u64(p)) ++p;
    auto fp = make_prime_field(p);
    auto cover = build_cover(bip(fp, {{0, uint32_t(p - 1)}, {}, {1}}), 11);  // Y^2 - T
    CheckOptions opt;
    opt.max_ext = 2;
    auto rep = check(cover, cyclic_group(2).summary(), opt);
    CHECK(rep.truncated);
    CHECK(rep.completed_ext == 0);
    CHECK(rep.existence == Verdict::unknown);
    CHECK(rep.strict == Verdict::unknown);
}

TEST_CASE("cycle type coverage grows with the scan depth") {
    auto f5 = make_prime_field(5);
    auto cover = build_cover(bip(f5, {{0, 4}, {}, {}, {1}}), 11);  // Y^3 - T
    auto s3 = symmetric_group(3).summary();

    auto shallow = cycle_type_coverage(cover, s3, 1);
    CHECK(shallow.coverage == Catch::Approx(1.0 / 3.0));
    CHECK(shallow.observed_types == std::vector<std::vector<uint32_t>>{{1, 2}});
    CHECK_FALSE(shallow.alarm);
    CHECK(shallow.missing.size() == 2);

    auto deep = cycle_type_coverage(cover, s3, 2);
    CHECK(deep.coverage == Catch::Approx(1.0));
    CHECK(deep.observed_types.size() == 3);
    CHECK_FALSE(deep.alarm);
    CHECK(deep.missing.empty());
    CHECK(deep.coverage >= shallow.coverage);
}

TEST_CASE("fiber shapes outside the declared group raise the alarm") {
    auto f5 = make_prime_field(5);
    auto cover = build_cover(bip(f5, {{0, 4}, {}, {}, {1}}), 11);  // Y^3 - T
    auto c3 = cyclic_group(3).summary();
    auto rep = cycle_type_coverage(cover, c3, 1);
    CHECK(rep.alarm);
    REQUIRE(rep.alien.size() == 1);
    CHECK(rep.alien[0] == std::vector<uint32_t>{1, 2});

    // degree mismatch and non-permutation groups are rejected up front
    auto quad = build_cover(bip(f5, {{0, 4}, {}, {1}}), 11);
    CHECK_THROWS_AS(cycle_type_coverage(quad, c3, 1), validation_error);
    GroupSummary abstract;
    abstract.perm_degree = 0;
    CHECK_THROWS_AS(cycle_type_coverage(cover, abstract, 1), validation_error);
}

TEST_CASE("observed densities stay inside the square root envelope") {
    auto cover = kummer_cover();
    auto group = cyclic_group(3).summary();

    auto rep3 = density_stats(cover, group, 3, 2);
    CHECK(rep3.expected == Catch::Approx(2.0 / 3.0));
    REQUIRE(rep3.levels.size() == 2);
    CHECK(rep3.levels[0].unramified == 6);
    CHECK(rep3.levels[0].hits == 4);
    CHECK(rep3.levels[0].deviation == Catch::Approx(0.0));
    CHECK(rep3.levels[0].envelope == Catch::Approx(1.0 / std::sqrt(7.0)));
    CHECK(rep3.levels[1].hits == 32);
    CHECK(rep3.levels[1].unramified == 48);
    CHECK(rep3.all_within);

    auto rep1 = density_stats(cover, group, 1, 2);
    CHECK(rep1.expected == Catch::Approx(1.0 / 3.0));
    CHECK(rep1.levels[0].hits == 2);
    CHECK(rep1.all_within);
}

TEST_CASE("envelope constant scales the density comparison") {
    auto cover = additive_cover();
    auto group = cyclic_group(2).summary();

    auto rep = density_stats(cover, group, 2, 2);
    REQUIRE(rep.levels.size() == 2);
    CHECK(rep.levels[0].hits == 0);  // every level 1 point splits
    CHECK(rep.levels[0].unramified == 3);
    CHECK(rep.levels[0].deviation == Catch::Approx(0.5));
    CHECK(rep.levels[0].within);  // 0.5 <= 3^(-1/2)
    CHECK(rep.levels[1].unramified == 9);
    CHECK(rep.levels[1].hits == 6);
    CHECK(rep.levels[1].deviation == Catch::Approx(1.0 / 6.0));
    CHECK(rep.all_within);

    auto tight = density_stats(cover, group, 2, 2, 0.1);
    CHECK_FALSE(tight.all_within);

    CHECK_THROWS_AS(density_stats(cover, group, 2, 2, 0.0), validation_error);
}

TEST_CASE("radical towers strictly grow their observed degree lcm") {
    auto f19 = make_prime_field(19);
    auto layer1 = build_cover(bip(f19, {{0, 18}, {}, {}, {1}}), 11);  // Y^3 - T
    auto layer2 =
        build_cover(bip(f19, {{0, 18}, {}, {}, {}, {}, {}, {}, {}, {}, {1}}), 11);  // Y^9 - T

    auto rep = tower_report({layer1, layer2}, 1);
    REQUIRE(rep.layers.size() == 2);
    CHECK(rep.layers[0].observed_lcm == 3);
    CHECK(rep.layers[1].observed_lcm == 9);
    CHECK(rep.layers[1].grew);
    CHECK(rep.strictly_growing);

    auto reversed = tower_report({layer2, layer1}, 1);
    CHECK_FALSE(reversed.strictly_growing);

    auto single = tower_report({layer1}, 1);
    CHECK(single.strictly_growing);

    CHECK_THROWS_AS(tower_report({}, 1), validation_error);
}
