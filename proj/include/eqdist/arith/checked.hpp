#pragma once

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

namespace eqdist {

using i64 = std::int64_t;
using u64 = std::uint64_t;
using i128 = __int128;
using u128 = unsigned __int128;

/// Thrown when an operation would leave the 64-bit integer range.
class RangeError : public std::range_error {
public:
    explicit RangeError(const std::string& what) : std::range_error(what) {}
};

/// Thrown when a residue has no inverse modulo the requested modulus.
class NotInvertible : public std::domain_error {
public:
    explicit NotInvertible(const std::string& what) : std::domain_error(what) {}
};

namespace checked {

inline i64 add(i64 a, i64 b) {
    i64 r;
    if (__builtin_add_overflow(a, b, &r)) throw RangeError("checked add overflow");
    return r;
}

inline i64 sub(i64 a, i64 b) {
    i64 r;
    if (__builtin_sub_overflow(a, b, &r)) throw RangeError("checked sub overflow");
    return r;
}

inline i64 mul(i64 a, i64 b) {
    i64 r;
    if (__builtin_mul_overflow(a, b, &r)) throw RangeError("checked mul overflow");
    return r;
}

inline u64 mul(u64 a, u64 b) {
    u64 r;
    if (__builtin_mul_overflow(a, b, &r)) throw RangeError("checked mul overflow");
    return r;
}

inline i64 narrow(i128 v) {
    if (v > std::numeric_limits<i64>::max() || v < std::numeric_limits<i64>::min())
        throw RangeError("value does not fit in 64 bits");
    return static_cast<i64>(v);
}

}  // namespace checked

}  // namespace eqdist
