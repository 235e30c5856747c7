#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>

namespace hatg {

using u32 = std::uint32_t;
using u64 = std::uint64_t;
using u128 = unsigned __int128;

/// Base class of all errors thrown by this library.
class error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input file or inconsistent shapes between arguments.
class format_error : public error {
public:
    using error::error;
};

/// A configured budget (colorings, search nodes, subsets, ...) would be exceeded.
class budget_error : public error {
public:
    using error::error;
};

/// An exact integer computation left the representable range.
class overflow_error : public error {
public:
    using error::error;
};

/// A caller-visible precondition does not hold.
class precondition_error : public error {
public:
    using error::error;
};

/// A violated internal invariant; indicates a bug or a broken construction.
class internal_error : public error {
public:
    using error::error;
};

inline std::string to_string(u128 v) {
    if (v == 0) return "0";
    std::string s;
    while (v > 0) {
        s.push_back(char('0' + int(v % 10)));
        v /= 10;
    }
    return std::string(s.rbegin(), s.rend());
}

inline std::optional<u64> checked_add(u64 a, u64 b) {
    u64 r;
    if (__builtin_add_overflow(a, b, &r)) return std::nullopt;
    return r;
}

inline std::optional<u64> checked_mul(u64 a, u64 b) {
    u64 r;
    if (__builtin_mul_overflow(a, b, &r)) return std::nullopt;
    return r;
}

inline std::optional<u64> checked_pow(u64 base, u64 exp) {
    u64 r = 1;
    for (u64 i = 0; i < exp; ++i) {
        auto m = checked_mul(r, base);
        if (!m) return std::nullopt;
        r = *m;
    }
    return r;
}

inline std::optional<u128> checked_add128(u128 a, u128 b) {
    u128 r = a + b;
    if (r < a) return std::nullopt;
    return r;
}

inline std::optional<u128> checked_mul128(u128 a, u128 b) {
    if (a == 0 || b == 0) return u128{0};
    u128 r = a * b;
    if (r / a != b) return std::nullopt;
    return r;
}

inline std::optional<u128> checked_pow128(u128 base, u64 exp) {
    u128 r = 1;
    for (u64 i = 0; i < exp; ++i) {
        auto m = checked_mul128(r, base);
        if (!m) return std::nullopt;
        r = *m;
    }
    return r;
}

/// Exact binomial coefficient; nullopt when the result does not fit in 64 bits.
inline std::optional<u64> binomial(u64 n, u64 k) {
    if (k > n) return u64{0};
    if (k > n - k) k = n - k;
    u128 r = 1;
    for (u64 i = 1; i <= k; ++i) {
        auto m = checked_mul128(r, n - k + i);
        if (!m) return std::nullopt;
        r = *m / i;  // divides exactly: r is C(n-k+i, i) after this step
    }
    if (r > std::numeric_limits<u64>::max()) return std::nullopt;
    return u64(r);
}

inline std::optional<u64> factorial(u64 n) {
    u64 r = 1;
    for (u64 i = 2; i <= n; ++i) {
        auto m = checked_mul(r, i);
        if (!m) return std::nullopt;
        r = *m;
    }
    return r;
}

}  // namespace hatg
