#pragma once

// Text input layer: polynomial expressions in T and Y, field specs, group
// specs, and specialization points. Every syntax error carries the byte
// offset where parsing stopped.
//
// Polynomial grammar (whitespace insignificant, no unary minus):
//   expr   := term (('+' | '-') term)*
//   term   := factor ('*' factor)*
//   factor := atom ('^' uint)?
//   atom   := 'T' | 'Y' | integer | '(' expr ')'
// Integer literals map through the ring homomorphism Z -> F_q, so they are
// reduced mod p and land in the prime subfield.

#include <cctype>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "tchebff/cover.hpp"
#include "tchebff/field.hpp"
#include "tchebff/group.hpp"
#include "tchebff/poly.hpp"
#include "tchebff/util.hpp"

namespace tchebff {

namespace detail {

constexpr uint32_t max_parsed_exponent = 10000;

// Bivariate working value during parsing: rows[j] holds the T-coefficient of
// Y^j, trailing zero rows trimmed.
struct BivariateValue {
    std::shared_ptr<const Field> field;
    std::vector<UniPoly> rows;

    void trim() {
        while (!rows.empty() && rows.back().is_zero()) rows.pop_back();
    }
};

inline BivariateValue bival_const(std::shared_ptr<const Field> f, UniPoly c) {
    BivariateValue v{std::move(f), {std::move(c)}};
    v.trim();
    return v;
}

inline BivariateValue bival_add(const BivariateValue& a, const BivariateValue& b, bool subtract) {
    BivariateValue out{a.field, {}};
    size_t n = std::max(a.rows.size(), b.rows.size());
    UniPoly zero = UniPoly::zero(a.field);
    for (size_t j = 0; j < n; ++j) {
        const UniPoly& x = j < a.rows.size() ? a.rows[j] : zero;
        const UniPoly& y = j < b.rows.size() ? b.rows[j] : zero;
        out.rows.push_back(subtract ? x - y : x + y);
    }
    out.trim();
    return out;
}

inline BivariateValue bival_mul(const BivariateValue& a, const BivariateValue& b) {
    BivariateValue out{a.field, {}};
    if (a.rows.empty() || b.rows.empty()) return out;
    out.rows.assign(a.rows.size() + b.rows.size() - 1, UniPoly::zero(a.field));
    for (size_t i = 0; i < a.rows.size(); ++i) {
        if (a.rows[i].is_zero()) continue;
        for (size_t j = 0; j < b.rows.size(); ++j) out.rows[i + j] = out.rows[i + j] + a.rows[i] * b.rows[j];
    }
    out.trim();
    return out;
}

class PolyParser {
  public:
    PolyParser(const std::string& src, std::shared_ptr<const Field> field)
        : src_(src), field_(std::move(field)) {}

    BivariateValue parse() {
        auto v = parse_expr();
        skip_ws();
        if (pos_ != src_.size()) throw parse_error("unexpected trailing input", pos_);
        return v;
    }

  private:
    void skip_ws() {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    }
    bool peek_is(char c) {
        skip_ws();
        return pos_ < src_.size() && src_[pos_] == c;
    }
    bool consume(char c) {
        if (peek_is(c)) {
            ++pos_;
            return true;
        }
        return false;
    }

    uint64_t parse_uint(const char* what) {
        skip_ws();
        if (pos_ >= src_.size() || !std::isdigit(static_cast<unsigned char>(src_[pos_])))
            throw parse_error(std::string("expected ") + what, pos_);
        uint64_t value = 0;
        bool overflow = false;
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
            uint32_t digit = uint32_t(src_[pos_] - '0');
            if (value > (UINT64_MAX - digit) / 10)
                overflow = true;  // keep consuming digits for a clean position
            else
                value = value * 10 + digit;
            ++pos_;
        }
        if (overflow) throw parse_error("integer literal overflows", pos_);
        return value;
    }

    BivariateValue parse_expr() {
        auto acc = parse_term();
        while (true) {
            if (consume('+'))
                acc = bival_add(acc, parse_term(), false);
            else if (consume('-'))
                acc = bival_add(acc, parse_term(), true);
            else
                return acc;
        }
    }

    BivariateValue parse_term() {
        auto acc = parse_factor();
        while (consume('*')) acc = bival_mul(acc, parse_factor());
        return acc;
    }

    BivariateValue parse_factor() {
        auto base = parse_atom();
        if (consume('^')) {
            size_t at = pos_;
            uint64_t e = parse_uint("an exponent");
            if (e > max_parsed_exponent) throw parse_error("exponent too large", at);
            BivariateValue acc = bival_const(field_, UniPoly::one(field_));
            for (uint64_t i = 0; i < e; ++i) acc = bival_mul(acc, base);
            return acc;
        }
        return base;
    }

    BivariateValue parse_atom() {
        skip_ws();
        if (pos_ >= src_.size()) throw parse_error("unexpected end of expression", pos_);
        char c = src_[pos_];
        if (c == 'T') {
            ++pos_;
            return bival_const(field_, UniPoly::variable(field_));
        }
        if (c == 'Y') {
            ++pos_;
            BivariateValue v{field_, {UniPoly::zero(field_), UniPoly::one(field_)}};
            return v;
        }
        if (c == '(') {
            ++pos_;
            auto v = parse_expr();
            if (!consume(')')) throw parse_error("expected ')'", pos_);
            return v;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            // reduce digit by digit so arbitrarily long literals stay exact
            uint64_t p = field_->characteristic();
            uint64_t r = 0;
            while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
                r = (r * 10 + uint64_t(src_[pos_] - '0')) % p;
                ++pos_;
            }
            return bival_const(field_, UniPoly::constant(field_->from_integer(r)));
        }
        throw parse_error("unexpected character", pos_);
    }

    const std::string& src_;
    std::shared_ptr<const Field> field_;
    size_t pos_ = 0;
};

}  // namespace detail

inline BiPoly parse_poly(const std::string& src, std::shared_ptr<const Field> field) {
    detail::PolyParser parser(src, field);
    auto value = parser.parse();
    if (value.rows.size() < 2) throw parse_error("expression has Y-degree 0", src.size());
    return BiPoly(field, std::move(value.rows));
}

// Field specs: "p" or "p^k".
struct FieldSpec {
    uint64_t p = 2;
    uint32_t k = 1;
};

inline FieldSpec parse_field_spec(const std::string& src) {
    size_t pos = 0;
    auto read_uint = [&](const char* what) {
        if (pos >= src.size() || !std::isdigit(static_cast<unsigned char>(src[pos])))
            throw parse_error(std::string("expected ") + what, pos);
        uint64_t value = 0;
        while (pos < src.size() && std::isdigit(static_cast<unsigned char>(src[pos]))) {
            uint32_t digit = uint32_t(src[pos] - '0');
            if (value > (UINT64_MAX - digit) / 10) throw parse_error("number overflows", pos);
            value = value * 10 + digit;
            ++pos;
        }
        return value;
    };
    FieldSpec spec;
    spec.p = read_uint("a prime");
    if (pos < src.size() && src[pos] == '^') {
        ++pos;
        uint64_t k = read_uint("an extension degree");
        if (k == 0 || k > UINT32_MAX) throw parse_error("extension degree out of range", pos);
        spec.k = uint32_t(k);
    }
    if (pos != src.size()) throw parse_error("unexpected trailing input in field spec", pos);
    return spec;
}

// Group specs: named constructions "cyclic:n", "sym:n", "dihedral:p^m",
// "extraspecial:l,m", "semidirect:l,m,q", or explicit generators in cycle
// notation like "(1 2 3)(4 5), (1 2)" (points are 1-based).
inline GroupSummary parse_group_spec(const std::string& src) {
    size_t pos = 0;
    auto skip_ws = [&] {
        while (pos < src.size() && std::isspace(static_cast<unsigned char>(src[pos]))) ++pos;
    };
    auto read_uint = [&](const char* what) {
        skip_ws();
        if (pos >= src.size() || !std::isdigit(static_cast<unsigned char>(src[pos])))
            throw parse_error(std::string("expected ") + what, pos);
        uint64_t value = 0;
        while (pos < src.size() && std::isdigit(static_cast<unsigned char>(src[pos]))) {
            uint32_t digit = uint32_t(src[pos] - '0');
            if (value > (UINT64_MAX - digit) / 10) throw parse_error("number overflows", pos);
            value = value * 10 + digit;
            ++pos;
        }
        return value;
    };

    skip_ws();
    if (pos < src.size() && src[pos] == '(') {
        // permutation generators in cycle notation
        std::vector<std::vector<std::vector<uint32_t>>> gens_cycles;
        while (true) {
            skip_ws();
            std::vector<std::vector<uint32_t>> cycles;
            while (pos < src.size() && src[pos] == '(') {
                ++pos;
                std::vector<uint32_t> cycle;
                while (true) {
                    skip_ws();
                    if (pos < src.size() && src[pos] == ')') {
                        ++pos;
                        break;
                    }
                    uint64_t n = read_uint("a point");
                    if (n == 0) throw parse_error("points are numbered from 1", pos);
                    if (n > caps::enumeration) throw parse_error("point out of range", pos);
                    cycle.push_back(uint32_t(n));
                }
                if (cycle.empty()) throw parse_error("empty cycle", pos);
                cycles.push_back(std::move(cycle));
                skip_ws();
            }
            if (cycles.empty()) throw parse_error("expected a cycle", pos);
            gens_cycles.push_back(std::move(cycles));
            skip_ws();
            if (pos < src.size() && src[pos] == ',') {
                ++pos;
                continue;
            }
            break;
        }
        if (pos != src.size()) throw parse_error("unexpected trailing input in group spec", pos);
        uint32_t degree = 0;
        for (const auto& cycles : gens_cycles)
            for (const auto& cycle : cycles)
                for (uint32_t pt : cycle) degree = std::max(degree, pt);
        groups::PermUniverse u{degree};
        std::vector<groups::Element> gens;
        for (const auto& cycles : gens_cycles) {
            groups::Element g = u.identity();
            for (const auto& cycle : cycles) {
                // apply the cycle on top of what is already there
                groups::Element c = u.identity();
                for (size_t i = 0; i < cycle.size(); ++i)
                    c[cycle[i] - 1] = cycle[(i + 1) % cycle.size()] - 1;
                g = u.multiply(g, c);
            }
            gens.push_back(std::move(g));
        }
        return FiniteGroup<groups::PermUniverse>::close(u, std::move(gens)).summary();
    }

    size_t name_start = pos;
    while (pos < src.size() && std::isalpha(static_cast<unsigned char>(src[pos]))) ++pos;
    std::string name = src.substr(name_start, pos - name_start);
    skip_ws();
    if (pos >= src.size() || src[pos] != ':')
        throw parse_error("expected ':' after the construction name", pos);
    ++pos;

    auto finish = [&] {
        skip_ws();
        if (pos != src.size()) throw parse_error("unexpected trailing input in group spec", pos);
    };
    auto expect = [&](char c, const char* what) {
        skip_ws();
        if (pos >= src.size() || src[pos] != c)
            throw parse_error(std::string("expected ") + what, pos);
        ++pos;
    };
    auto small_uint = [&](const char* what) {
        uint64_t v = read_uint(what);
        if (v > UINT32_MAX) throw parse_error("parameter out of range", pos);
        return uint32_t(v);
    };

    if (name == "cyclic") {
        uint32_t n = small_uint("the order");
        finish();
        return cyclic_group(n).summary();
    }
    if (name == "sym") {
        uint32_t n = small_uint("the degree");
        finish();
        return symmetric_group(n).summary();
    }
    if (name == "dihedral") {
        uint32_t p = small_uint("a prime");
        expect('^', "'^'");
        uint32_t m = small_uint("the tower height");
        finish();
        return dihedral_group(p, m).summary();
    }
    if (name == "extraspecial") {
        uint32_t ell = small_uint("a prime");
        expect(',', "','");
        uint32_t m = small_uint("the rank");
        finish();
        return extra_special_group(ell, m).summary();
    }
    if (name == "semidirect") {
        uint32_t ell = small_uint("a prime");
        expect(',', "','");
        uint32_t m = small_uint("the rank");
        expect(',', "','");
        uint32_t q = small_uint("the module characteristic");
        finish();
        return semidirect_group(ell, m, q).summary();
    }
    throw parse_error("unknown group construction '" + name + "'", name_start);
}

// Specialization points: "inf", a bare index, or little-endian coordinates
// "[c0;c1;...]" over the prime field.
struct PointSpec {
    bool at_infinity = false;
    std::optional<uint64_t> index;            // set for bare indices
    std::vector<uint32_t> coords;             // set for bracketed coordinates
};

inline PointSpec parse_point_spec(const std::string& src) {
    PointSpec spec;
    if (src == "inf") {
        spec.at_infinity = true;
        return spec;
    }
    size_t pos = 0;
    auto read_uint = [&](const char* what) {
        if (pos >= src.size() || !std::isdigit(static_cast<unsigned char>(src[pos])))
            throw parse_error(std::string("expected ") + what, pos);
        uint64_t value = 0;
        while (pos < src.size() && std::isdigit(static_cast<unsigned char>(src[pos]))) {
            uint32_t digit = uint32_t(src[pos] - '0');
            if (value > (UINT64_MAX - digit) / 10) throw parse_error("number overflows", pos);
            value = value * 10 + digit;
            ++pos;
        }
        return value;
    };
    if (pos < src.size() && src[pos] == '[') {
        ++pos;
        while (true) {
            uint64_t c = read_uint("a coordinate");
            if (c > UINT32_MAX) throw parse_error("coordinate out of range", pos);
            spec.coords.push_back(uint32_t(c));
            if (pos < src.size() && src[pos] == ';') {
                ++pos;
                continue;
            }
            break;
        }
        if (pos >= src.size() || src[pos] != ']') throw parse_error("expected ']'", pos);
        ++pos;
        if (pos != src.size()) throw parse_error("unexpected trailing input in point spec", pos);
        return spec;
    }
    spec.index = read_uint("a point index or 'inf'");
    if (pos != src.size()) throw parse_error("unexpected trailing input in point spec", pos);
    return spec;
}

// Resolves coordinates to the enumeration index of the point in an extension
// of cardinality p^n: little-endian base-p digits.
inline uint64_t point_index_from_coords(const std::vector<uint32_t>& coords, uint64_t p,
                                        uint32_t total_degree) {
    if (coords.size() > total_degree)
        throw validation_error("too many coordinates for the extension degree");
    uint64_t idx = 0;
    for (size_t i = coords.size(); i-- > 0;) {
        if (coords[i] >= p) throw validation_error("coordinate not reduced mod p");
        idx = idx * p + coords[i];
    }
    return idx;
}

}  // namespace tchebff
