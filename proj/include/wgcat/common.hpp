#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace wgcat {

// Error taxonomy shared by the library and the CLI exit codes.
enum class ErrorCode {
    Precondition,  // caller violated an operation's preconditions
    Structural,    // malformed data (dangling ids, bad indices)
    SizeCap,       // a size guardrail refused the input
    Io,            // file / parse problems
    Theorem,       // a verified statement failed on a valid input; must never happen
};

class WgError : public std::runtime_error {
public:
    WgError(ErrorCode code, const std::string& msg) : std::runtime_error(msg), code_(code) {}
    ErrorCode code() const { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] inline void fail_precondition(const std::string& msg) {
    throw WgError(ErrorCode::Precondition, msg);
}
[[noreturn]] inline void fail_structural(const std::string& msg) {
    throw WgError(ErrorCode::Structural, msg);
}
[[noreturn]] inline void fail_size_cap(const std::string& msg) {
    throw WgError(ErrorCode::SizeCap, msg);
}
[[noreturn]] inline void fail_theorem(const std::string& msg) {
    throw WgError(ErrorCode::Theorem, msg);
}

// Outcome of a check. `where` localizes the first failure.
struct Report {
    bool ok = true;
    std::string where;
    std::string detail;

    explicit operator bool() const { return ok; }
    static Report pass() { return Report{}; }
    static Report fail(std::string where, std::string detail) {
        return Report{false, std::move(where), std::move(detail)};
    }
    std::string to_string() const {
        if (ok) return "ok";
        return "FAIL at " + where + ": " + detail;
    }
};

// Size guardrails. Exhaustive checks are quadratic or worse in arrows,
// so operations refuse oversized inputs instead of stalling.
struct Limits {
    std::uint64_t max_arrows = 10000;       // per finite category
    std::uint64_t max_free_arrows = 20000;  // per level of a free grid
};

inline const Limits& default_limits() {
    static Limits lim;
    return lim;
}

// Deterministic splitmix64; used everywhere randomness is needed so that
// generated corpora are byte-identical across platforms.
struct Rng {
    std::uint64_t state;

    explicit Rng(std::uint64_t seed) : state(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
    // uniform in [0, n)
    std::uint64_t below(std::uint64_t n) { return n == 0 ? 0 : next() % n; }
    int below_int(int n) { return n <= 0 ? 0 : static_cast<int>(next() % static_cast<std::uint64_t>(n)); }
    bool chance(int num, int den) { return below(static_cast<std::uint64_t>(den)) < static_cast<std::uint64_t>(num); }

    template <class T>
    const T& pick(const std::vector<T>& v) {
        return v[below(v.size())];
    }
};

inline std::uint64_t pair_key(int a, int b) {
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 32) |
           static_cast<std::uint64_t>(static_cast<std::uint32_t>(b));
}

}  // namespace wgcat
