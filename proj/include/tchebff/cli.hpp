#pragma once

// Command-line driver. Each invocation runs one verb:
//
//   branch      branch locus of a cover
//   specialize  one point of the projective line
//   scan        every point up to an extension bound
//   check       existence / strictness verdicts for Frobenius witnesses
//   coverage    observed fiber shapes vs. a permutation group's cycle types
//   density     frequency of each element order vs. its group fraction
//   tower       growth of observed orders along a tower of covers or groups
//   group       order, exponent and element orders of a finite group
//
// Exit codes: 0 = all verdicts pass or the verb is informational; 1 = any
// FAIL verdict (a coverage alarm counts as one); 2 = usage or parse error;
// 3 = a cap stopped the run before the requested extension bound. A FAIL
// outranks truncation when both occur. Output is written once, at the end,
// to --out or to the standard stream, newline-terminated.

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "tchebff/cover.hpp"
#include "tchebff/engine.hpp"
#include "tchebff/group.hpp"
#include "tchebff/parse.hpp"
#include "tchebff/report.hpp"
#include "tchebff/tower.hpp"
#include "tchebff/util.hpp"

namespace tchebff::cli {

struct Command {
    std::string verb;
    std::string field_spec;
    std::vector<std::string> polys;
    std::vector<std::string> groups;
    std::optional<uint32_t> max_ext;
    uint64_t seed = 0;
    uint32_t threads = 1;
    std::string format = "json";
    std::string out_path;  // empty = standard output
    std::string point;     // specialize only
    uint32_t ext = 1;      // specialize only
    double c0 = 1.0;       // density only
};

struct Output {
    int code = 0;
    std::string body;
};

namespace detail {

inline std::string field_string(const FieldSpec& spec) {
    std::string s = std::to_string(spec.p);
    if (spec.k > 1) s += "^" + std::to_string(spec.k);
    return s;
}

struct PreparedCovers {
    FieldSpec spec;
    FieldHandle field;
    std::vector<Cover> covers;
    std::vector<std::string> reprints;
};

inline PreparedCovers prepare_covers(const Command& cmd) {
    if (cmd.field_spec.empty()) throw validation_error("--field is required for this verb");
    if (cmd.polys.empty()) throw validation_error("--poly is required for this verb");
    PreparedCovers prep;
    prep.spec = parse_field_spec(cmd.field_spec);
    if (prep.spec.p >= (uint64_t(1) << 31))
        throw validation_error("characteristic must be below 2^31");
    prep.field = make_field(uint32_t(prep.spec.p), prep.spec.k, cmd.seed);
    for (const auto& src : cmd.polys) {
        BiPoly poly = parse_poly(src, prep.field);
        prep.covers.push_back(build_cover(poly, cmd.seed));
        prep.reprints.push_back(prep.covers.back().poly.to_string("T", "Y"));
    }
    return prep;
}

inline void require_single_poly(const Command& cmd) {
    if (cmd.polys.size() != 1)
        throw validation_error("exactly one --poly is required for this verb");
}

inline report::RunMeta make_meta(const Command& cmd, const PreparedCovers* prep) {
    report::RunMeta meta;
    meta.verb = cmd.verb;
    if (prep) {
        meta.field = field_string(prep->spec);
        meta.polys = prep->reprints;
    }
    if (!cmd.groups.empty()) {
        std::string joined = cmd.groups[0];
        for (size_t i = 1; i < cmd.groups.size(); ++i) joined += ", " + cmd.groups[i];
        meta.group = joined;
    }
    meta.seed = cmd.seed;
    return meta;
}

inline std::string pretty(const report::json& j) { return j.dump(2); }

}  // namespace detail

inline Output execute(const Command& cmd) {
    using detail::make_meta;
    using detail::prepare_covers;
    using detail::pretty;

    if (cmd.format == "csv" && cmd.verb != "scan" && cmd.verb != "specialize")
        throw validation_error("csv output is only available for scan and specialize");
    if (cmd.format == "tsv-histogram" && cmd.verb != "scan")
        throw validation_error("tsv-histogram output is only available for scan");

    Output out;

    if (cmd.verb == "branch") {
        detail::require_single_poly(cmd);
        auto prep = prepare_covers(cmd);
        out.body = pretty(report::branch_report_json(prep.covers[0], make_meta(cmd, &prep)));
        return out;
    }

    if (cmd.verb == "specialize") {
        detail::require_single_poly(cmd);
        auto prep = prepare_covers(cmd);
        if (cmd.ext < 1) throw validation_error("--ext must be at least 1");
        PointSpec pt = parse_point_spec(cmd.point);
        std::optional<uint64_t> index;
        if (!pt.at_infinity) {
            if (pt.index)
                index = *pt.index;
            else
                index = point_index_from_coords(pt.coords, prep.spec.p, prep.spec.k * cmd.ext);
        }
        auto rec = specialize(prep.covers[0], cmd.ext, index, cmd.seed);
        if (cmd.format == "csv")
            out.body = report::records_csv({rec});
        else
            out.body = pretty(report::specialize_report_json(rec, make_meta(cmd, &prep)));
        return out;
    }

    if (cmd.verb == "scan") {
        detail::require_single_poly(cmd);
        auto prep = prepare_covers(cmd);
        if (!cmd.max_ext) throw validation_error("--max-ext is required for scan");
        auto res = scan(prep.covers[0], *cmd.max_ext, cmd.seed, cmd.threads);
        if (cmd.format == "csv")
            out.body = report::records_csv(res.records);
        else if (cmd.format == "tsv-histogram")
            out.body = report::histogram_tsv(res.records);
        else
            out.body = pretty(report::scan_report_json(res, make_meta(cmd, &prep)));
        out.code = res.truncated ? 3 : 0;
        return out;
    }

    if (cmd.verb == "check") {
        detail::require_single_poly(cmd);
        auto prep = prepare_covers(cmd);
        std::optional<GroupSummary> group;
        if (!cmd.groups.empty()) group = parse_group_spec(cmd.groups[0]);
        CheckOptions opt;
        opt.max_ext = cmd.max_ext;
        opt.seed = cmd.seed;
        opt.threads = cmd.threads;
        auto rep = check(prep.covers[0], group, opt);
        out.body = pretty(report::check_report_json(rep, make_meta(cmd, &prep)));
        bool any_fail = rep.existence == Verdict::fail || rep.strict == Verdict::fail ||
                        rep.order_subset == Verdict::fail || rep.exponent_lcm == Verdict::fail;
        out.code = any_fail ? 1 : (rep.truncated ? 3 : 0);
        return out;
    }

    if (cmd.verb == "coverage") {
        detail::require_single_poly(cmd);
        auto prep = prepare_covers(cmd);
        auto group = parse_group_spec(cmd.groups[0]);
        uint32_t bound = cmd.max_ext
                             ? *cmd.max_ext
                             : default_max_ext(prep.field->cardinality(), group.exponent);
        auto cov = cycle_type_coverage(prep.covers[0], group, bound, cmd.seed, cmd.threads);
        out.body = pretty(report::coverage_report_json(cov, make_meta(cmd, &prep)));
        out.code = cov.alarm ? 1 : (cov.truncated ? 3 : 0);
        return out;
    }

    if (cmd.verb == "density") {
        detail::require_single_poly(cmd);
        auto prep = prepare_covers(cmd);
        auto group = parse_group_spec(cmd.groups[0]);
        uint32_t bound = cmd.max_ext
                             ? *cmd.max_ext
                             : default_max_ext(prep.field->cardinality(), group.exponent);
        std::vector<DensityReport> reports;
        bool truncated = false;
        for (uint64_t order : group.element_orders) {
            reports.push_back(density_stats(prep.covers[0], group, order, bound, cmd.c0,
                                            cmd.seed, cmd.threads));
            truncated = truncated || reports.back().truncated;
        }
        out.body = pretty(report::density_report_json(reports, cmd.c0, make_meta(cmd, &prep)));
        out.code = truncated ? 3 : 0;
        return out;
    }

    if (cmd.verb == "tower") {
        if (!cmd.polys.empty() && !cmd.groups.empty())
            throw validation_error("tower takes --poly layers or --group layers, not both");
        if (!cmd.groups.empty()) {
            std::vector<GroupSummary> layers;
            layers.reserve(cmd.groups.size());
            for (const auto& s : cmd.groups) layers.push_back(parse_group_spec(s));
            auto rep = group_tower_report(layers);
            out.body = pretty(report::group_tower_report_json(rep, make_meta(cmd, nullptr)));
            return out;
        }
        auto prep = prepare_covers(cmd);
        if (!cmd.max_ext) throw validation_error("--max-ext is required for a polynomial tower");
        auto rep = tower_report(prep.covers, *cmd.max_ext, cmd.seed, cmd.threads);
        out.body = pretty(report::tower_report_json(rep, make_meta(cmd, &prep)));
        out.code = rep.truncated ? 3 : 0;
        return out;
    }

    if (cmd.verb == "group") {
        if (cmd.groups.size() != 1)
            throw validation_error("exactly one --group is required for this verb");
        auto summary = parse_group_spec(cmd.groups[0]);
        out.body = pretty(report::group_report_json(summary, make_meta(cmd, nullptr)));
        return out;
    }

    throw validation_error("unknown verb '" + cmd.verb + "'");
}

// Parses the argument list (without the program name), runs the verb, and
// writes the report. Returns the process exit code.
inline int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
    Command cmd;
    CLI::App app{"Frobenius specialization toolkit for covers of the projective line"};
    app.require_subcommand(1);

    uint32_t max_ext_value = 0;
    std::vector<CLI::Option*> max_ext_options;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--seed", cmd.seed,
                        "Seed for field construction and factorization probes");
        sub->add_option("--threads", cmd.threads, "Worker threads for scans")
            ->check(CLI::Range(uint32_t(1), uint32_t(256)));
        sub->add_option("--format", cmd.format, "Output format")
            ->check(CLI::IsMember({"json", "csv", "tsv-histogram"}));
        sub->add_option("--out", cmd.out_path, "Write the report to this path");
    };
    auto add_field = [&](CLI::App* sub, bool required) {
        auto* o = sub->add_option("--field", cmd.field_spec, "Base field, p or p^k");
        if (required) o->required();
    };
    auto add_poly = [&](CLI::App* sub, bool required) {
        auto* o = sub->add_option("--poly", cmd.polys,
                                  "Cover polynomial in T and Y (repeatable for towers)");
        if (required) o->required();
    };
    auto add_group = [&](CLI::App* sub, bool required) {
        auto* o = sub->add_option(
            "--group", cmd.groups,
            "Group spec: cyclic:n, sym:n, dihedral:p^m, extraspecial:l,m, "
            "semidirect:l,m,q, or permutation generators in cycle notation");
        if (required) o->required();
    };
    auto add_max_ext = [&](CLI::App* sub, bool required) {
        auto* o = sub->add_option("--max-ext", max_ext_value,
                                  "Largest extension degree to scan")
                      ->check(CLI::Range(uint32_t(1), uint32_t(64)));
        if (required) o->required();
        max_ext_options.push_back(o);
    };

    auto* branch = app.add_subcommand("branch", "Report the branch locus of a cover");
    add_field(branch, true);
    add_poly(branch, true);
    add_common(branch);

    auto* spec = app.add_subcommand("specialize",
                                    "Specialize the cover at one point of the projective line");
    add_field(spec, true);
    add_poly(spec, true);
    spec->add_option("--point", cmd.point, "Point: an index, [c0;c1;...] coordinates, or inf")
        ->required();
    spec->add_option("--ext", cmd.ext, "Extension degree of the point's field")
        ->check(CLI::Range(uint32_t(1), uint32_t(64)));
    add_common(spec);

    auto* scan_cmd = app.add_subcommand("scan",
                                        "Specialize at every point up to an extension bound");
    add_field(scan_cmd, true);
    add_poly(scan_cmd, true);
    add_max_ext(scan_cmd, true);
    add_common(scan_cmd);

    auto* check_cmd = app.add_subcommand(
        "check", "Existence and strictness verdicts for Frobenius witnesses");
    add_field(check_cmd, true);
    add_poly(check_cmd, true);
    add_group(check_cmd, false);
    add_max_ext(check_cmd, false);
    add_common(check_cmd);

    auto* coverage_cmd = app.add_subcommand(
        "coverage", "Observed fiber shapes against a permutation group's cycle types");
    add_field(coverage_cmd, true);
    add_poly(coverage_cmd, true);
    add_group(coverage_cmd, true);
    add_max_ext(coverage_cmd, false);
    add_common(coverage_cmd);

    auto* density_cmd = app.add_subcommand(
        "density", "Frequency of each element order against its group fraction");
    add_field(density_cmd, true);
    add_poly(density_cmd, true);
    add_group(density_cmd, true);
    add_max_ext(density_cmd, false);
    density_cmd->add_option("--c0", cmd.c0, "Envelope constant c0 in c0 * q^(-m/2)");
    add_common(density_cmd);

    auto* tower_cmd = app.add_subcommand(
        "tower", "Growth of observed orders along a tower of covers or groups");
    add_field(tower_cmd, false);
    add_poly(tower_cmd, false);
    add_group(tower_cmd, false);
    add_max_ext(tower_cmd, false);
    add_common(tower_cmd);

    auto* group_cmd = app.add_subcommand(
        "group", "Order, exponent and element orders of a finite group");
    add_group(group_cmd, true);
    add_common(group_cmd);

    std::reverse(args.begin(), args.end());
    try {
        app.parse(args);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e, out, err);
        return rc == 0 ? 0 : 2;
    }

    for (const CLI::App* sub : app.get_subcommands()) cmd.verb = sub->get_name();
    for (const CLI::Option* o : max_ext_options)
        if (o->count() > 0) cmd.max_ext = max_ext_value;

    try {
        Output result = execute(cmd);
        if (result.body.empty() || result.body.back() != '\n') result.body += '\n';
        if (!cmd.out_path.empty()) {
            std::ofstream file(cmd.out_path, std::ios::binary);
            if (!file) throw validation_error("cannot open output path '" + cmd.out_path + "'");
            file << result.body;
            if (!file.good()) throw validation_error("write to '" + cmd.out_path + "' failed");
        } else {
            out << result.body;
        }
        return result.code;
    } catch (const cap_error& e) {
        err << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
}

}  // namespace tchebff::cli
