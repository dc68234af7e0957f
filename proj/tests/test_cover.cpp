#include <catch2/catch_amalgamated.hpp>

#include <map>
#include <vector>

#include "tchebff/cover.hpp"

using namespace tchebff;

namespace {
constexpr uint64_t kSeed = 20260101;

FieldHandle F(uint32_t p, uint32_t k = 1) { return make_field(p, k, kSeed); }

UniPoly T(const FieldHandle& f, const std::vector<uint64_t>& c) {
    std::vector<FieldElement> v;
    for (uint64_t a : c) v.push_back(f->from_integer(a));
    return UniPoly(f, std::move(v));
}

// rows[j] holds the T-coefficients (little-endian) of the Y^j coefficient
BiPoly bip(const FieldHandle& f, const std::vector<std::vector<uint64_t>>& rows) {
    std::vector<UniPoly> c;
    for (const auto& row : rows) c.push_back(T(f, row));
    return BiPoly(f, std::move(c));
}
}  // namespace

TEST_CASE("resultants of linear and split polynomials") {
    auto f7 = F(7);
    // res_Y(Y - a, Y - b) = a - b
    BiPoly a = bip(f7, {{0, 0, 6}, {1}});  // Y - T^2
    BiPoly b = bip(f7, {{6, 6}, {1}});     // Y - (T + 1)
    REQUIRE(resultant_in_y(a, b) == T(f7, {6, 6, 1}));  // T^2 - T - 1

    // res_Y(f, Y - c) = f(c) for monic quadratic f
    BiPoly f = bip(f7, {{0, 0, 2}, {0, 4}, {1}});  // (Y - T)(Y - 2T)
    REQUIRE(resultant_in_y(f, b) == T(f7, {1, 6}));  // (T - T - 1)(2T - T - 1)

    // shared factor forces a zero resultant: g = (Y - T)(Y - T^2)
    BiPoly h1 = bip(f7, {{0, 6}, {1}});     // Y - T
    BiPoly h2 = bip(f7, {{0, 0, 6}, {1}});  // Y - T^2
    UniPoly c0 = T(f7, {0, 6}) * T(f7, {0, 0, 6});
    UniPoly c1 = T(f7, {0, 6}) + T(f7, {0, 0, 6});
    BiPoly g(f7, {c0, c1, UniPoly::one(f7)});
    REQUIRE(resultant_in_y(g, h1).is_zero());
    REQUIRE(resultant_in_y(g, h2).is_zero());

    // constant in Y: res(f, b0) = b0^degY(f)
    BiPoly cst = bip(f7, {{0, 1}});  // the polynomial T
    REQUIRE(resultant_in_y(f, cst) == T(f7, {0, 0, 1}));
}

TEST_CASE("branch locus of the cube root cover") {
    auto f7 = F(7);
    Cover c = build_cover(bip(f7, {{0, 6}, {}, {}, {1}}), kSeed);  // Y^3 - T
    REQUIRE(c.y_degree == 3);
    REQUIRE(c.branch_locus == T(f7, {0, 1}));
    REQUIRE(c.branches_at_infinity);
    REQUIRE(c.irreducibility == IrreducibilityStatus::certified);
    REQUIRE(c.poly.to_string("T", "Y") == "Y^3+6*T");
}

TEST_CASE("branch locus of an additive cover in characteristic 3") {
    auto f3 = F(3);
    // Y^2 - Y - (T^3 - T)
    Cover c = build_cover(bip(f3, {{0, 1, 0, 2}, {2}, {1}}), kSeed);
    REQUIRE(c.branch_locus == T(f3, {1, 2, 0, 1}));
    REQUIRE(c.branches_at_infinity);
    REQUIRE(c.irreducibility == IrreducibilityStatus::certified);
    REQUIRE(is_irreducible(c.branch_locus));
    REQUIRE(c.poly.to_string("T", "Y") == "Y^2+2*Y+2*T^3+T");
}

TEST_CASE("branch locus of the square root cover") {
    auto f5 = F(5);
    Cover c = build_cover(bip(f5, {{0, 4}, {}, {1}}), kSeed);  // Y^2 - T
    REQUIRE(c.branch_locus == T(f5, {0, 1}));
    REQUIRE(c.branches_at_infinity);
    REQUIRE(c.irreducibility == IrreducibilityStatus::certified);
}

TEST_CASE("non-squarefree and inseparable defining polynomials are rejected") {
    auto f5 = F(5);
    REQUIRE_THROWS_WITH(build_cover(bip(f5, {{1}, {3}, {1}}), kSeed),
                        Catch::Matchers::ContainsSubstring("not squarefree in Y"));
    auto f3 = F(3);
    REQUIRE_THROWS_WITH(build_cover(bip(f3, {{}, {}, {}, {1}}), kSeed),
                        Catch::Matchers::ContainsSubstring("not squarefree in Y"));
    REQUIRE_THROWS_AS(build_cover(bip(f5, {{1, 1}}), kSeed), validation_error);
}

TEST_CASE("rational roots refute irreducibility") {
    auto f5 = F(5);
    // Y^2 - T^2 = (Y - T)(Y + T)
    Cover c = build_cover(bip(f5, {{0, 0, 4}, {}, {1}}), kSeed);
    REQUIRE(c.irreducibility == IrreducibilityStatus::refuted);
    // Y^2 - TY = Y (Y - T): zero constant coefficient
    Cover z = build_cover(bip(f5, {{}, {0, 4}, {1}}), kSeed);
    REQUIRE(z.irreducibility == IrreducibilityStatus::refuted);
    // degree 1 is trivially irreducible
    Cover lin = build_cover(bip(f5, {{0, 4}, {1}}), kSeed);
    REQUIRE(lin.irreducibility == IrreducibilityStatus::certified);
    // degree 4 is out of scope for the search
    Cover quart = build_cover(bip(f5, {{0, 4}, {}, {}, {}, {1}}), kSeed);
    REQUIRE(quart.irreducibility == IrreducibilityStatus::assumed);
}

TEST_CASE("specializing the cube root cover at rational points") {
    auto f7 = F(7);
    Cover c = build_cover(bip(f7, {{0, 6}, {}, {}, {1}}), kSeed);

    auto r1 = specialize(c, 1, 1, kSeed);  // t0 = 1: Y^3 - 1 splits
    REQUIRE_FALSE(r1.ramified);
    REQUIRE(r1.degrees == std::vector<uint32_t>{1, 1, 1});
    REQUIRE(r1.local_degree == 1);

    auto r3 = specialize(c, 1, 3, kSeed);  // t0 = 3: Y^3 - 3 inert
    REQUIRE_FALSE(r3.ramified);
    REQUIRE(r3.degrees == std::vector<uint32_t>{3});
    REQUIRE(r3.local_degree == 3);

    auto r0 = specialize(c, 1, 0, kSeed);  // t0 = 0: triple root
    REQUIRE(r0.ramified);
    REQUIRE_FALSE(r0.degenerate);
    REQUIRE(r0.degrees == std::vector<uint32_t>{1, 1, 1});

    auto rinf = specialize(c, 1, std::nullopt, kSeed);
    REQUIRE(rinf.at_infinity);
    REQUIRE(rinf.ramified);
    REQUIRE(rinf.degenerate);
    REQUIRE(rinf.degrees.empty());
    REQUIRE(rinf.local_degree == 0);

    REQUIRE_THROWS_AS(specialize(c, 1, 9, kSeed), validation_error);
    REQUIRE_THROWS_AS(specialize(c, 0, 1, kSeed), validation_error);
}

TEST_CASE("scanning the cube root cover counts split and inert points") {
    auto f7 = F(7);
    Cover c = build_cover(bip(f7, {{0, 6}, {}, {}, {1}}), kSeed);
    ScanResult s = scan(c, 3, kSeed);
    REQUIRE_FALSE(s.truncated);
    REQUIRE(s.completed_ext == 3);
    REQUIRE(s.records.size() == 8 + 50 + 344);

    std::map<std::pair<uint32_t, uint64_t>, uint64_t> unram;  // (m, d) -> count
    std::map<uint32_t, uint64_t> ram;
    for (const auto& r : s.records) {
        if (r.ramified)
            ++ram[r.m];
        else
            ++unram[{r.m, r.local_degree}];
    }
    // level 1: t0 = 0 and infinity ramified; cubes of F_7^* split
    REQUIRE(ram[1] == 2);
    REQUIRE(unram[{1, 1}] == 2);
    REQUIRE(unram[{1, 3}] == 4);
    // level 2: F_49^* has 16 cubes
    REQUIRE(ram[2] == 2);
    REQUIRE(unram[{2, 1}] == 16);
    REQUIRE(unram[{2, 3}] == 32);
    // level 3: F_343^* has 114 cubes
    REQUIRE(ram[3] == 2);
    REQUIRE(unram[{3, 1}] == 114);
    REQUIRE(unram[{3, 3}] == 228);

    for (const auto& r : s.records) {
        if (r.ramified) continue;
        uint32_t total = 0;
        for (uint32_t d : r.degrees) total += d;
        REQUIRE(total == c.y_degree);
    }
}

TEST_CASE("scan results do not depend on the worker count") {
    auto f7 = F(7);
    Cover c = build_cover(bip(f7, {{0, 6}, {}, {}, {1}}), kSeed);
    ScanResult serial = scan(c, 3, kSeed, 1);
    ScanResult parallel = scan(c, 3, kSeed, 4);
    REQUIRE(serial.records == parallel.records);
}

TEST_CASE("scans over the additive cover find only trivial local degrees at level 1") {
    auto f3 = F(3);
    Cover c = build_cover(bip(f3, {{0, 1, 0, 2}, {2}, {1}}), kSeed);
    ScanResult s = scan(c, 1, kSeed);
    REQUIRE(s.records.size() == 4);
    uint32_t unramified = 0;
    for (const auto& r : s.records) {
        if (r.at_infinity) {
            REQUIRE(r.ramified);
            continue;
        }
        REQUIRE_FALSE(r.ramified);
        REQUIRE(r.local_degree == 1);
        ++unramified;
    }
    REQUIRE(unramified == 3);

    // one extension step up, inert points appear
    ScanResult s2 = scan(c, 2, kSeed);
    bool found_quadratic = false;
    for (const auto& r : s2.records)
        if (r.m == 2 && !r.ramified && r.local_degree == 2) found_quadratic = true;
    REQUIRE(found_quadratic);
}

TEST_CASE("scan truncates when a level exceeds the enumeration cap") {
    uint32_t p = 1 << 24;
    while (!is_prime_u64(p)) ++p;
    auto fp = make_field(p, 1, kSeed);
    Cover c = build_cover(bip(fp, {{0, p - 1}, {}, {1}}), kSeed);  // Y^2 - T
    ScanResult s = scan(c, 2, kSeed);
    REQUIRE(s.truncated);
    REQUIRE(s.completed_ext == 0);
    REQUIRE(s.records.empty());
}

TEST_CASE("vanishing of the branch locus tracks fiber degeneracy exactly") {
    auto f7 = F(7);
    auto f3 = F(3);
    auto f5 = F(5);
    std::vector<Cover> covers = {
        build_cover(bip(f7, {{0, 6}, {}, {}, {1}}), kSeed),
        build_cover(bip(f3, {{0, 1, 0, 2}, {2}, {1}}), kSeed),
        build_cover(bip(f5, {{0, 4}, {}, {1}}), kSeed),
        build_cover(bip(f5, {{0, 0, 4}, {}, {1}}), kSeed),
    };
    for (const auto& c : covers) {
        for (uint32_t m = 1; m <= 2; ++m) {
            auto ext = extend_field(c.base, m, kSeed);
            auto emb = find_embedding(c.base, ext);
            UniPoly delta = emb.apply(c.branch_locus);
            std::vector<UniPoly> cy;
            for (int j = 0; j <= c.poly.y_degree(); ++j) cy.push_back(emb.apply(c.poly.ycoeff(size_t(j))));
            for (const auto& t0 : enumerate_elements(ext)) {
                std::vector<FieldElement> fc;
                for (const auto& g : cy) fc.push_back(g.eval(t0));
                UniPoly fiber(ext, std::move(fc));
                bool drop = fiber.degree() < int(c.y_degree);
                bool repeated = !fiber.is_zero() && fiber.degree() > 0 &&
                                !squarefree_part(fiber).second;
                bool degenerate_or_bad = drop || repeated || fiber.degree() < 1;
                REQUIRE(delta.eval(t0).is_zero() == degenerate_or_bad);
            }
        }
    }
}

TEST_CASE("reversing twice returns the original polynomial") {
    auto f7 = F(7);
    auto f3 = F(3);
    std::vector<BiPoly> polys = {
        bip(f7, {{0, 6}, {}, {}, {1}}),
        bip(f3, {{0, 1, 0, 2}, {2}, {1}}),
        bip(f7, {{1, 1}, {0, 3}, {1, 0, 1}}),
    };
    for (const auto& p : polys) {
        BiPoly back = reverse_t(reverse_t(p));
        REQUIRE(back.ycoeffs() == p.ycoeffs());
    }
}

TEST_CASE("bivariate printing parenthesizes exactly the composite coefficients") {
    auto f7 = F(7);
    BiPoly p = bip(f7, {{1, 1}, {0, 3}, {1, 0, 1}});
    REQUIRE(p.to_string("T", "Y") == "(T^2+1)*Y^2+3*T*Y+T+1");
}
