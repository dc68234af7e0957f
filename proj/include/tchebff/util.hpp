#pragma once

// Shared plumbing: error types, a portable seeded RNG, and checked integer
// helpers. Everything downstream assumes these semantics, in particular that
// the RNG stream for a fixed seed is identical across platforms (std::mt19937
// is portable but std::uniform_int_distribution is not, so we roll our own
// draw).

#include <algorithm>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace tchebff {

struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Violated precondition or failed validation (bad input, not a bug).
struct validation_error : error {
    using error::error;
};

// Configured cardinality/enumeration budget exceeded.
struct cap_error : error {
    using error::error;
};

// Text input rejected; position is a 0-based byte offset into the source.
struct parse_error : error {
    size_t position;
    parse_error(const std::string& what, size_t pos)
        : error(what + " (at offset " + std::to_string(pos) + ")"), position(pos) {}
};

struct caps {
    static constexpr uint64_t enumeration = uint64_t(1) << 24;
    static constexpr uint64_t arithmetic = uint64_t(1) << 48;
    static constexpr uint64_t group_enumeration = uint64_t(1) << 24;
    static constexpr uint64_t class_computation = 10000;
    static constexpr uint64_t subgroup_search = 10000;
};

// SplitMix64: tiny, fast, and bit-identical everywhere. Used for every
// seeded draw in the library (field construction, factorization probes,
// property-test trials).
class rng {
  public:
    explicit rng(uint64_t seed) : state_(seed) {}

    uint64_t next() {
        uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    // Uniform-enough draw in [0, n); the modulo bias is irrelevant here
    // (draws only steer searches whose results are canonicalized).
    uint64_t below(uint64_t n) { return n <= 1 ? 0 : next() % n; }

  private:
    uint64_t state_;
};

// Domain separation so one user-facing seed can feed many independent
// streams without correlating them.
inline uint64_t derive_seed(uint64_t seed, uint64_t tag) {
    rng r(seed ^ (0x517cc1b727220a95ull * (tag + 1)));
    return r.next();
}

inline uint64_t derive_seed(uint64_t seed, const std::string& tag) {
    uint64_t h = 1469598103934665603ull;  // FNV-1a over the tag bytes
    for (unsigned char ch : tag) {
        h ^= ch;
        h *= 1099511628211ull;
    }
    return derive_seed(seed, h);
}

// base^exp if it stays <= cap, otherwise nothing.
inline std::optional<uint64_t> checked_pow(uint64_t base, uint32_t exp, uint64_t cap) {
    uint64_t r = 1;
    for (uint32_t i = 0; i < exp; ++i) {
        if (base != 0 && r > cap / base) return std::nullopt;
        r *= base;
        if (r > cap) return std::nullopt;
    }
    return r;
}

inline bool is_prime_u64(uint64_t n) {
    if (n < 2) return false;
    for (uint64_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

// lcm with an overflow guard; orders in this library stay tiny, so hitting
// the guard means a logic error upstream.
inline uint64_t lcm_u64(uint64_t a, uint64_t b) {
    if (a == 0 || b == 0) return a | b;
    uint64_t g = std::gcd(a, b);
    uint64_t q = a / g;
    if (q > std::numeric_limits<uint64_t>::max() / b)
        throw error("lcm overflow");
    return q * b;
}

inline std::vector<uint64_t> prime_factors(uint64_t n) {
    std::vector<uint64_t> ps;
    for (uint64_t d = 2; d * d <= n; ++d) {
        if (n % d == 0) {
            ps.push_back(d);
            while (n % d == 0) n /= d;
        }
    }
    if (n > 1) ps.push_back(n);
    return ps;
}

inline std::vector<uint64_t> divisors_sorted(uint64_t n) {
    std::vector<uint64_t> ds;
    for (uint64_t d = 1; d * d <= n; ++d) {
        if (n % d == 0) {
            ds.push_back(d);
            if (d != n / d) ds.push_back(n / d);
        }
    }
    std::sort(ds.begin(), ds.end());
    return ds;
}

}  // namespace tchebff
