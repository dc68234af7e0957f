#pragma once

// Decision layer tying covers to target groups. A scan of specializations is
// condensed into a witness table (which element orders of the target group
// appear as local degrees of unramified points) and four verdicts:
//
//   existence    every element order is witnessed at some level m <= M
//   strict       every element order is witnessed already at m = 1
//   order_subset observed local degrees all divide into the group's orders
//   exponent_lcm the observed degrees reach the group exponent exactly
//
// Verdicts are three-valued. A missing witness only counts as a failure when
// the scan actually finished and the bound M was at least the default bound,
// which is the least m with q^m >= 4 * exponent^2; below that the data is
// treated as inconclusive. No numeric converse bound is asserted anywhere:
// a pass reports checked facts, nothing stronger.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "tchebff/cover.hpp"
#include "tchebff/group.hpp"
#include "tchebff/util.hpp"

namespace tchebff {

enum class Verdict { pass, fail, unknown };

inline std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::pass: return "pass";
        case Verdict::fail: return "fail";
        default: return "unknown";
    }
}

// Least m with q^m >= 4 * exponent^2.
inline uint32_t default_max_ext(uint64_t q, uint64_t exponent) {
    if (q < 2 || exponent < 1) throw validation_error("bound needs q >= 2 and a positive exponent");
    uint64_t bound = 4 * exponent * exponent;
    uint32_t m = 1;
    uint64_t cur = q;
    while (cur < bound) {
        if (cur > UINT64_MAX / q) break;  // next power already clears any 64-bit bound
        cur *= q;
        ++m;
    }
    return m;
}

struct WitnessEntry {
    uint64_t order = 1;
    std::optional<SpecializationRecord> witness;  // first unramified point with this local degree
};

struct LevelTally {
    uint32_t m = 0;
    uint64_t points = 0;
    uint64_t unramified = 0;
    uint64_t ramified = 0;
};

struct TchebReport {
    uint64_t field_cardinality = 0;
    uint32_t max_ext = 0;
    bool used_default_max_ext = false;
    bool truncated = false;
    uint32_t completed_ext = 0;

    std::optional<GroupSummary> group;

    std::vector<uint64_t> observed_orders;  // distinct local degrees over unramified points
    uint64_t observed_lcm = 1;
    std::vector<WitnessEntry> witnesses;    // one entry per element order of the group
    std::vector<LevelTally> levels;

    Verdict existence = Verdict::unknown;
    Verdict strict = Verdict::unknown;
    Verdict order_subset = Verdict::pass;
    Verdict exponent_lcm = Verdict::unknown;
};

struct CheckOptions {
    std::optional<uint32_t> max_ext;
    uint64_t seed = 0;
    uint32_t threads = 1;
};

inline TchebReport check(const Cover& cover, const std::optional<GroupSummary>& group,
                         const CheckOptions& opt = {}) {
    if (!group && !opt.max_ext)
        throw validation_error("a target group or an explicit extension bound is required");
    if (opt.max_ext && *opt.max_ext < 1)
        throw validation_error("extension bound must be at least 1");

    TchebReport rep;
    rep.field_cardinality = cover.base->cardinality();
    rep.group = group;
    uint32_t default_bound =
        group ? default_max_ext(rep.field_cardinality, group->exponent) : 0;
    rep.max_ext = opt.max_ext ? *opt.max_ext : default_bound;
    rep.used_default_max_ext = !opt.max_ext.has_value();

    auto scan_result = scan(cover, rep.max_ext, opt.seed, opt.threads);
    rep.truncated = scan_result.truncated;
    rep.completed_ext = scan_result.completed_ext;

    std::map<uint32_t, LevelTally> tallies;
    std::set<uint64_t> observed;
    for (const auto& r : scan_result.records) {
        auto& t = tallies[r.m];
        t.m = r.m;
        ++t.points;
        if (r.ramified)
            ++t.ramified;
        else {
            ++t.unramified;
            observed.insert(r.local_degree);
        }
    }
    for (const auto& [m, t] : tallies) rep.levels.push_back(t);
    rep.observed_orders = {observed.begin(), observed.end()};
    rep.observed_lcm = 1;
    for (uint64_t d : rep.observed_orders) rep.observed_lcm = lcm_u64(rep.observed_lcm, d);

    if (group) {
        for (uint64_t target : group->element_orders) {
            WitnessEntry entry;
            entry.order = target;
            for (const auto& r : scan_result.records) {
                if (!r.ramified && r.local_degree == target) {
                    entry.witness = r;
                    break;
                }
            }
            rep.witnesses.push_back(std::move(entry));
        }
        bool all_witnessed = std::all_of(rep.witnesses.begin(), rep.witnesses.end(),
                                         [](const auto& w) { return w.witness.has_value(); });
        bool all_at_one = std::all_of(rep.witnesses.begin(), rep.witnesses.end(), [](const auto& w) {
            return w.witness && w.witness->m == 1;
        });
        if (all_witnessed)
            rep.existence = Verdict::pass;
        else if (!rep.truncated && rep.max_ext >= default_bound)
            rep.existence = Verdict::fail;
        else
            rep.existence = Verdict::unknown;

        if (all_at_one)
            rep.strict = Verdict::pass;
        else if (rep.completed_ext >= 1)
            rep.strict = Verdict::fail;
        else
            rep.strict = Verdict::unknown;

        rep.order_subset = Verdict::pass;
        for (uint64_t d : rep.observed_orders) {
            if (!std::binary_search(group->element_orders.begin(), group->element_orders.end(), d))
                rep.order_subset = Verdict::fail;
        }

        if (rep.existence == Verdict::pass)
            rep.exponent_lcm = rep.observed_lcm == group->exponent ? Verdict::pass : Verdict::fail;
        else
            rep.exponent_lcm = Verdict::unknown;
    }
    return rep;
}

// -- cycle type coverage --

struct CycleTypeCoverage {
    std::vector<std::vector<uint32_t>> group_types;
    std::vector<std::vector<uint32_t>> observed_types;
    std::vector<std::vector<uint32_t>> missing;  // group types never seen as a fiber shape
    std::vector<std::vector<uint32_t>> alien;    // fiber shapes outside the group's list
    double coverage = 0.0;
    bool alarm = false;  // an alien shape means the declared group cannot be the full monodromy
    bool truncated = false;
    uint32_t completed_ext = 0;
};

// Compares unramified fiber shapes (factor degree multisets) against the
// cycle types of a permutation group of matching degree.
inline CycleTypeCoverage cycle_type_coverage(const Cover& cover, const GroupSummary& group,
                                             uint32_t max_ext, uint64_t seed = 0,
                                             uint32_t threads = 1) {
    if (group.perm_degree == 0)
        throw validation_error("cycle type comparison needs a permutation group");
    if (group.perm_degree != uint32_t(cover.y_degree))
        throw validation_error("permutation degree does not match the cover degree");
    CycleTypeCoverage out;
    out.group_types = group.cycle_types;
    auto scan_result = scan(cover, max_ext, seed, threads);
    out.truncated = scan_result.truncated;
    out.completed_ext = scan_result.completed_ext;
    std::set<std::vector<uint32_t>> seen;
    for (const auto& r : scan_result.records)
        if (!r.ramified) seen.insert(r.degrees);
    out.observed_types = {seen.begin(), seen.end()};
    std::set<std::vector<uint32_t>> group_set(group.cycle_types.begin(), group.cycle_types.end());
    uint64_t matched = 0;
    for (const auto& t : out.observed_types) {
        if (group_set.count(t))
            ++matched;
        else
            out.alien.push_back(t);
    }
    for (const auto& t : out.group_types)
        if (!seen.count(t)) out.missing.push_back(t);
    out.coverage = group.cycle_types.empty() ? 0.0 : double(matched) / double(group.cycle_types.size());
    out.alarm = !out.alien.empty();
    return out;
}

// -- density --

struct DensityLevel {
    uint32_t m = 0;
    uint64_t unramified = 0;
    uint64_t hits = 0;
    double frequency = 0.0;
    double expected = 0.0;
    double deviation = 0.0;
    double envelope = 0.0;  // c0 * q^(-m/2)
    bool within = false;
};

struct DensityReport {
    uint64_t target_order = 1;
    double expected = 0.0;  // fraction of group elements with the target order
    std::vector<DensityLevel> levels;
    bool all_within = true;
    bool truncated = false;
};

// Per level, the frequency of unramified points with a given local degree is
// compared to the fraction of group elements of that order; the deviation is
// measured against a square-root envelope c0 * q^(-m/2).
inline DensityReport density_stats(const Cover& cover, const GroupSummary& group,
                                   uint64_t target_order, uint32_t max_ext, double c0 = 1.0,
                                   uint64_t seed = 0, uint32_t threads = 1) {
    if (c0 <= 0) throw validation_error("envelope constant must be positive");
    DensityReport rep;
    rep.target_order = target_order;
    uint64_t count = 0;
    for (const auto& [ord, n] : group.order_counts)
        if (ord == target_order) count = n;
    rep.expected = double(count) / double(group.order);

    auto scan_result = scan(cover, max_ext, seed, threads);
    rep.truncated = scan_result.truncated;
    std::map<uint32_t, DensityLevel> levels;
    for (const auto& r : scan_result.records) {
        if (r.ramified) continue;
        auto& lvl = levels[r.m];
        lvl.m = r.m;
        ++lvl.unramified;
        if (r.local_degree == target_order) ++lvl.hits;
    }
    double q = double(cover.base->cardinality());
    for (auto& [m, lvl] : levels) {
        lvl.frequency = lvl.unramified ? double(lvl.hits) / double(lvl.unramified) : 0.0;
        lvl.expected = rep.expected;
        lvl.deviation = std::abs(lvl.frequency - lvl.expected);
        lvl.envelope = c0 * std::pow(q, -0.5 * double(m));
        lvl.within = lvl.deviation <= lvl.envelope;
        if (!lvl.within) rep.all_within = false;
        rep.levels.push_back(lvl);
    }
    return rep;
}

// -- towers --

struct TowerLayer {
    uint32_t index = 0;
    uint32_t y_degree = 0;
    uint64_t observed_lcm = 1;
    bool grew = false;  // strictly larger lcm than the previous layer
};

struct TowerReport {
    uint32_t max_ext = 1;
    std::vector<TowerLayer> layers;
    bool strictly_growing = true;  // every layer after the first grew
    bool truncated = false;        // some layer's scan hit the enumeration cap
};

// Tower of groups without covers: tracks the exponents alone. A strictly
// increasing sequence documents that no uniform bound on the exponent holds
// along the tower; no converse claim is attached to the observation.
struct GroupTowerReport {
    std::vector<uint64_t> exponents;
    bool strictly_increasing = true;
};

inline GroupTowerReport group_tower_report(const std::vector<GroupSummary>& layers) {
    if (layers.empty()) throw validation_error("a tower needs at least one layer");
    GroupTowerReport rep;
    for (const auto& s : layers) rep.exponents.push_back(s.exponent);
    for (size_t i = 1; i < rep.exponents.size(); ++i)
        if (rep.exponents[i] <= rep.exponents[i - 1]) rep.strictly_increasing = false;
    return rep;
}

// Scans each cover in sequence and tracks how the lcm of observed local
// degrees climbs along the tower.
inline TowerReport tower_report(const std::vector<Cover>& covers, uint32_t max_ext,
                                uint64_t seed = 0, uint32_t threads = 1) {
    if (covers.empty()) throw validation_error("a tower needs at least one cover");
    TowerReport rep;
    rep.max_ext = max_ext;
    uint64_t prev = 0;
    for (uint32_t i = 0; i < covers.size(); ++i) {
        auto scan_result = scan(covers[i], max_ext, seed, threads);
        if (scan_result.truncated) rep.truncated = true;
        TowerLayer layer;
        layer.index = i;
        layer.y_degree = covers[i].y_degree;
        for (const auto& r : scan_result.records)
            if (!r.ramified) layer.observed_lcm = lcm_u64(layer.observed_lcm, r.local_degree);
        layer.grew = i > 0 && layer.observed_lcm > prev;
        if (i > 0 && !layer.grew) rep.strictly_growing = false;
        prev = layer.observed_lcm;
        rep.layers.push_back(layer);
    }
    return rep;
}

}  // namespace tchebff
