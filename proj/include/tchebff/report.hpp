#pragma once

// Report serialization: JSON with stable key order under the schema tag
// "tchebff-report/1", csv rows for specialization records, and a
// tab-separated (m, order, count) histogram for plotting. Every JSON shape
// has a matching reader so reports round-trip losslessly.
//
// Field elements never serialize as opaque indices: points appear as
// little-endian coefficient tuples over the prime field ("4" or "3;5"),
// infinity as the string "inf".

#include <cstdint>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "tchebff/cover.hpp"
#include "tchebff/engine.hpp"
#include "tchebff/group.hpp"
#include "tchebff/parse.hpp"
#include "tchebff/util.hpp"

namespace tchebff::report {

using json = nlohmann::ordered_json;

inline constexpr const char* schema_version = "tchebff-report/1";

struct RunMeta {
    std::string verb;
    std::string field;                 // spec string, "7" or "3^2"
    std::vector<std::string> polys;    // canonical reprints
    std::optional<std::string> group;  // group spec as given
    uint64_t seed = 0;
};

inline json envelope(const RunMeta& meta) {
    json j;
    j["schema"] = schema_version;
    j["verb"] = meta.verb;
    if (!meta.field.empty()) j["field"] = meta.field;
    if (meta.polys.size() == 1)
        j["poly"] = meta.polys[0];
    else if (!meta.polys.empty())
        j["polys"] = meta.polys;
    if (meta.group) j["group_spec"] = *meta.group;
    j["seed"] = meta.seed;
    return j;
}

inline RunMeta meta_from_json(const json& j) {
    RunMeta meta;
    meta.verb = j.at("verb").get<std::string>();
    if (j.contains("field")) meta.field = j.at("field").get<std::string>();
    if (j.contains("poly")) meta.polys = {j.at("poly").get<std::string>()};
    if (j.contains("polys")) meta.polys = j.at("polys").get<std::vector<std::string>>();
    if (j.contains("group_spec")) meta.group = j.at("group_spec").get<std::string>();
    meta.seed = j.at("seed").get<uint64_t>();
    return meta;
}

// -- specialization records --

inline std::string point_string(const SpecializationRecord& r) {
    if (r.at_infinity) return "inf";
    std::string s;
    for (size_t i = 0; i < r.point.size(); ++i) {
        if (i) s += ';';
        s += std::to_string(r.point[i]);
    }
    return s;
}

inline json record_json(const SpecializationRecord& r) {
    json j;
    j["m"] = r.m;
    j["t0"] = point_string(r);
    j["degrees"] = r.degrees;
    j["order"] = r.local_degree;
    j["ramified"] = r.ramified;
    return j;
}

// p is the characteristic (for decoding coordinate tuples), q the base field
// cardinality (for the infinity index convention).
inline SpecializationRecord record_from_json(const json& j, uint64_t p, uint64_t q) {
    SpecializationRecord r;
    r.m = j.at("m").get<uint32_t>();
    std::string t0 = j.at("t0").get<std::string>();
    if (t0 == "inf") {
        r.at_infinity = true;
        auto idx = checked_pow(q, r.m, caps::arithmetic);
        if (!idx) throw validation_error("infinity index exceeds the arithmetic cap");
        r.point_index = *idx;
    } else {
        size_t pos = 0;
        while (pos <= t0.size()) {
            size_t next = t0.find(';', pos);
            std::string part = t0.substr(pos, next == std::string::npos ? t0.size() - pos : next - pos);
            if (part.empty() || part.find_first_not_of("0123456789") != std::string::npos)
                throw validation_error("malformed point tuple '" + t0 + "'");
            uint64_t c = std::stoull(part);
            if (c >= p) throw validation_error("point coordinate not reduced mod p");
            r.point.push_back(uint32_t(c));
            if (next == std::string::npos) break;
            pos = next + 1;
        }
        uint64_t idx = 0;
        for (size_t i = r.point.size(); i-- > 0;) idx = idx * p + r.point[i];
        r.point_index = idx;
    }
    r.degrees = j.at("degrees").get<std::vector<uint32_t>>();
    r.local_degree = j.at("order").get<uint64_t>();
    r.ramified = j.at("ramified").get<bool>();
    r.degenerate = r.degrees.empty();
    return r;
}

inline std::string degrees_string(const std::vector<uint32_t>& degrees) {
    std::string s;
    for (size_t i = 0; i < degrees.size(); ++i) {
        if (i) s += '-';
        s += std::to_string(degrees[i]);
    }
    return s;
}

inline std::string records_csv(const std::vector<SpecializationRecord>& records) {
    std::string out = "m,t0,degrees,order,ramified\n";
    for (const auto& r : records) {
        out += std::to_string(r.m);
        out += ',';
        out += point_string(r);
        out += ',';
        out += degrees_string(r.degrees);
        out += ',';
        out += std::to_string(r.local_degree);
        out += ',';
        out += r.ramified ? '1' : '0';
        out += '\n';
    }
    return out;
}

inline std::vector<SpecializationRecord> records_from_csv(const std::string& text, uint64_t p,
                                                          uint64_t q) {
    std::vector<SpecializationRecord> out;
    std::istringstream in(text);
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (first) {
            first = false;  // header
            continue;
        }
        if (line.empty()) continue;
        std::vector<std::string> cols;
        size_t pos = 0;
        while (true) {
            size_t next = line.find(',', pos);
            cols.push_back(line.substr(pos, next == std::string::npos ? line.size() - pos : next - pos));
            if (next == std::string::npos) break;
            pos = next + 1;
        }
        if (cols.size() != 5) throw validation_error("csv row does not have 5 columns");
        json j;
        j["m"] = uint32_t(std::stoul(cols[0]));
        j["t0"] = cols[1];
        std::vector<uint32_t> degrees;
        if (!cols[2].empty()) {
            size_t dpos = 0;
            while (true) {
                size_t next = cols[2].find('-', dpos);
                degrees.push_back(uint32_t(std::stoul(
                    cols[2].substr(dpos, next == std::string::npos ? cols[2].size() - dpos : next - dpos))));
                if (next == std::string::npos) break;
                dpos = next + 1;
            }
        }
        j["degrees"] = degrees;
        j["order"] = uint64_t(std::stoull(cols[3]));
        j["ramified"] = cols[4] == "1";
        out.push_back(record_from_json(j, p, q));
    }
    return out;
}

// Histogram of unramified local degrees per level, tab separated for direct
// plotting.
inline std::string histogram_tsv(const std::vector<SpecializationRecord>& records) {
    std::map<std::pair<uint32_t, uint64_t>, uint64_t> counts;
    for (const auto& r : records)
        if (!r.ramified) ++counts[{r.m, r.local_degree}];
    std::string out = "m\torder\tcount\n";
    for (const auto& [key, count] : counts) {
        out += std::to_string(key.first);
        out += '\t';
        out += std::to_string(key.second);
        out += '\t';
        out += std::to_string(count);
        out += '\n';
    }
    return out;
}

// -- group summaries --

inline json group_summary_json(const GroupSummary& g) {
    json j;
    j["order"] = g.order;
    j["exponent"] = g.exponent;
    j["element_orders"] = g.element_orders;
    json counts = json::array();
    for (const auto& [ord, n] : g.order_counts) counts.push_back({ord, n});
    j["order_counts"] = counts;
    j["perm_degree"] = g.perm_degree;
    j["cycle_types"] = g.cycle_types;
    return j;
}

inline GroupSummary group_summary_from_json(const json& j) {
    GroupSummary g;
    g.order = j.at("order").get<uint64_t>();
    g.exponent = j.at("exponent").get<uint64_t>();
    g.element_orders = j.at("element_orders").get<std::vector<uint64_t>>();
    for (const auto& pair : j.at("order_counts"))
        g.order_counts.emplace_back(pair.at(0).get<uint64_t>(), pair.at(1).get<uint64_t>());
    g.perm_degree = j.at("perm_degree").get<uint32_t>();
    g.cycle_types = j.at("cycle_types").get<std::vector<std::vector<uint32_t>>>();
    return g;
}

// -- verdicts --

inline Verdict verdict_from_string(const std::string& s) {
    if (s == "pass") return Verdict::pass;
    if (s == "fail") return Verdict::fail;
    if (s == "unknown") return Verdict::unknown;
    throw validation_error("unknown verdict '" + s + "'");
}

// -- check reports --

inline json check_report_json(const TchebReport& r, const RunMeta& meta) {
    json j = envelope(meta);
    j["max_ext"] = r.max_ext;
    j["used_default_max_ext"] = r.used_default_max_ext;
    j["truncated"] = r.truncated;
    j["completed_ext"] = r.completed_ext;
    j["group"] = r.group ? group_summary_json(*r.group) : json(nullptr);
    j["observed_orders"] = r.observed_orders;
    j["observed_lcm"] = r.observed_lcm;
    json levels = json::array();
    for (const auto& t : r.levels) {
        json lvl;
        lvl["m"] = t.m;
        lvl["points"] = t.points;
        lvl["unramified"] = t.unramified;
        lvl["ramified"] = t.ramified;
        levels.push_back(lvl);
    }
    j["levels"] = levels;
    json witnesses = json::array();
    for (const auto& w : r.witnesses) {
        json entry;
        entry["order"] = w.order;
        entry["witness"] = w.witness ? record_json(*w.witness) : json(nullptr);
        witnesses.push_back(entry);
    }
    j["witnesses"] = witnesses;
    json verdicts;
    verdicts["existence"] = to_string(r.existence);
    verdicts["strict"] = to_string(r.strict);
    verdicts["order_subset"] = to_string(r.order_subset);
    verdicts["exponent_lcm"] = to_string(r.exponent_lcm);
    j["verdicts"] = verdicts;
    return j;
}

inline TchebReport check_report_from_json(const json& j) {
    auto spec = parse_field_spec(j.at("field").get<std::string>());
    auto q = checked_pow(spec.p, spec.k, caps::arithmetic);
    if (!q) throw validation_error("field spec exceeds the arithmetic cap");
    TchebReport r;
    r.field_cardinality = *q;
    r.max_ext = j.at("max_ext").get<uint32_t>();
    r.used_default_max_ext = j.at("used_default_max_ext").get<bool>();
    r.truncated = j.at("truncated").get<bool>();
    r.completed_ext = j.at("completed_ext").get<uint32_t>();
    if (!j.at("group").is_null()) r.group = group_summary_from_json(j.at("group"));
    r.observed_orders = j.at("observed_orders").get<std::vector<uint64_t>>();
    r.observed_lcm = j.at("observed_lcm").get<uint64_t>();
    for (const auto& lvl : j.at("levels")) {
        LevelTally t;
        t.m = lvl.at("m").get<uint32_t>();
        t.points = lvl.at("points").get<uint64_t>();
        t.unramified = lvl.at("unramified").get<uint64_t>();
        t.ramified = lvl.at("ramified").get<uint64_t>();
        r.levels.push_back(t);
    }
    for (const auto& entry : j.at("witnesses")) {
        WitnessEntry w;
        w.order = entry.at("order").get<uint64_t>();
        if (!entry.at("witness").is_null())
            w.witness = record_from_json(entry.at("witness"), spec.p, *q);
        r.witnesses.push_back(std::move(w));
    }
    const auto& v = j.at("verdicts");
    r.existence = verdict_from_string(v.at("existence").get<std::string>());
    r.strict = verdict_from_string(v.at("strict").get<std::string>());
    r.order_subset = verdict_from_string(v.at("order_subset").get<std::string>());
    r.exponent_lcm = verdict_from_string(v.at("exponent_lcm").get<std::string>());
    return r;
}

// -- scan reports --

inline json scan_report_json(const ScanResult& s, const RunMeta& meta) {
    json j = envelope(meta);
    j["max_ext"] = s.max_ext;
    j["completed_ext"] = s.completed_ext;
    j["truncated"] = s.truncated;
    json records = json::array();
    for (const auto& r : s.records) records.push_back(record_json(r));
    j["records"] = records;
    return j;
}

inline ScanResult scan_result_from_json(const json& j) {
    auto spec = parse_field_spec(j.at("field").get<std::string>());
    auto q = checked_pow(spec.p, spec.k, caps::arithmetic);
    if (!q) throw validation_error("field spec exceeds the arithmetic cap");
    ScanResult s;
    s.max_ext = j.at("max_ext").get<uint32_t>();
    s.completed_ext = j.at("completed_ext").get<uint32_t>();
    s.truncated = j.at("truncated").get<bool>();
    for (const auto& r : j.at("records")) s.records.push_back(record_from_json(r, spec.p, *q));
    return s;
}

inline json specialize_report_json(const SpecializationRecord& r, const RunMeta& meta) {
    json j = envelope(meta);
    j["record"] = record_json(r);
    return j;
}

inline SpecializationRecord specialize_record_from_json(const json& j) {
    auto spec = parse_field_spec(j.at("field").get<std::string>());
    auto q = checked_pow(spec.p, spec.k, caps::arithmetic);
    if (!q) throw validation_error("field spec exceeds the arithmetic cap");
    return record_from_json(j.at("record"), spec.p, *q);
}

// -- branch reports --

struct BranchFacts {
    uint32_t y_degree = 0;
    std::string branch_locus;
    bool branches_at_infinity = false;
    std::string irreducibility;
};

inline json branch_report_json(const Cover& c, const RunMeta& meta) {
    json j = envelope(meta);
    j["y_degree"] = c.y_degree;
    j["branch_locus"] = c.branch_locus.to_string("T");
    j["branches_at_infinity"] = c.branches_at_infinity;
    j["irreducibility"] = to_string(c.irreducibility);
    return j;
}

inline BranchFacts branch_facts_from_json(const json& j) {
    BranchFacts b;
    b.y_degree = j.at("y_degree").get<uint32_t>();
    b.branch_locus = j.at("branch_locus").get<std::string>();
    b.branches_at_infinity = j.at("branches_at_infinity").get<bool>();
    b.irreducibility = j.at("irreducibility").get<std::string>();
    return b;
}

// -- coverage reports --

inline json coverage_report_json(const CycleTypeCoverage& c, const RunMeta& meta) {
    json j = envelope(meta);
    j["group_types"] = c.group_types;
    j["observed_types"] = c.observed_types;
    j["missing"] = c.missing;
    j["alien"] = c.alien;
    j["coverage"] = c.coverage;
    j["alarm"] = c.alarm;
    j["truncated"] = c.truncated;
    j["completed_ext"] = c.completed_ext;
    return j;
}

inline CycleTypeCoverage coverage_from_json(const json& j) {
    CycleTypeCoverage c;
    c.group_types = j.at("group_types").get<std::vector<std::vector<uint32_t>>>();
    c.observed_types = j.at("observed_types").get<std::vector<std::vector<uint32_t>>>();
    c.missing = j.at("missing").get<std::vector<std::vector<uint32_t>>>();
    c.alien = j.at("alien").get<std::vector<std::vector<uint32_t>>>();
    c.coverage = j.at("coverage").get<double>();
    c.alarm = j.at("alarm").get<bool>();
    c.truncated = j.at("truncated").get<bool>();
    c.completed_ext = j.at("completed_ext").get<uint32_t>();
    return c;
}

// -- density reports --

inline json density_level_json(const DensityLevel& l) {
    json j;
    j["m"] = l.m;
    j["unramified"] = l.unramified;
    j["hits"] = l.hits;
    j["frequency"] = l.frequency;
    j["expected"] = l.expected;
    j["deviation"] = l.deviation;
    j["envelope"] = l.envelope;
    j["within"] = l.within;
    return j;
}

inline DensityLevel density_level_from_json(const json& j) {
    DensityLevel l;
    l.m = j.at("m").get<uint32_t>();
    l.unramified = j.at("unramified").get<uint64_t>();
    l.hits = j.at("hits").get<uint64_t>();
    l.frequency = j.at("frequency").get<double>();
    l.expected = j.at("expected").get<double>();
    l.deviation = j.at("deviation").get<double>();
    l.envelope = j.at("envelope").get<double>();
    l.within = j.at("within").get<bool>();
    return l;
}

inline json density_report_json(const std::vector<DensityReport>& reports, double c0,
                                const RunMeta& meta) {
    json j = envelope(meta);
    j["c0"] = c0;
    json orders = json::array();
    for (const auto& rep : reports) {
        json o;
        o["order"] = rep.target_order;
        o["expected"] = rep.expected;
        json levels = json::array();
        for (const auto& lvl : rep.levels) levels.push_back(density_level_json(lvl));
        o["levels"] = levels;
        o["all_within"] = rep.all_within;
        o["truncated"] = rep.truncated;
        orders.push_back(o);
    }
    j["orders"] = orders;
    return j;
}

inline std::vector<DensityReport> density_reports_from_json(const json& j) {
    std::vector<DensityReport> out;
    for (const auto& o : j.at("orders")) {
        DensityReport rep;
        rep.target_order = o.at("order").get<uint64_t>();
        rep.expected = o.at("expected").get<double>();
        for (const auto& lvl : o.at("levels")) rep.levels.push_back(density_level_from_json(lvl));
        rep.all_within = o.at("all_within").get<bool>();
        rep.truncated = o.at("truncated").get<bool>();
        out.push_back(std::move(rep));
    }
    return out;
}

// -- tower reports --

inline json tower_report_json(const TowerReport& t, const RunMeta& meta) {
    json j = envelope(meta);
    j["max_ext"] = t.max_ext;
    json layers = json::array();
    for (const auto& layer : t.layers) {
        json l;
        l["index"] = layer.index;
        l["y_degree"] = layer.y_degree;
        l["observed_lcm"] = layer.observed_lcm;
        l["grew"] = layer.grew;
        layers.push_back(l);
    }
    j["layers"] = layers;
    j["strictly_growing"] = t.strictly_growing;
    j["truncated"] = t.truncated;
    return j;
}

inline TowerReport tower_report_from_json(const json& j) {
    TowerReport t;
    t.max_ext = j.at("max_ext").get<uint32_t>();
    for (const auto& l : j.at("layers")) {
        TowerLayer layer;
        layer.index = l.at("index").get<uint32_t>();
        layer.y_degree = l.at("y_degree").get<uint32_t>();
        layer.observed_lcm = l.at("observed_lcm").get<uint64_t>();
        layer.grew = l.at("grew").get<bool>();
        t.layers.push_back(layer);
    }
    t.strictly_growing = j.at("strictly_growing").get<bool>();
    t.truncated = j.at("truncated").get<bool>();
    return t;
}

inline json group_tower_report_json(const GroupTowerReport& t, const RunMeta& meta) {
    json j = envelope(meta);
    j["exponents"] = t.exponents;
    j["strictly_increasing"] = t.strictly_increasing;
    return j;
}

inline GroupTowerReport group_tower_report_from_json(const json& j) {
    GroupTowerReport t;
    t.exponents = j.at("exponents").get<std::vector<uint64_t>>();
    t.strictly_increasing = j.at("strictly_increasing").get<bool>();
    return t;
}

// -- standalone group reports --

inline json group_report_json(const GroupSummary& g, const RunMeta& meta) {
    json j = envelope(meta);
    j["group"] = group_summary_json(g);
    return j;
}

}  // namespace tchebff::report
