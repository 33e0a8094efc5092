#pragma once

#include <cstdint>
#include <string>

#include "hofa/common.hpp"
#include "hofa/function.hpp"

namespace hofa {

/// p^e with an overflow guard; torsion levels live comfortably below 2^62.
inline std::uint64_t checked_pow(std::uint32_t p, std::uint32_t e)
{
    std::uint64_t acc = 1;
    for (std::uint32_t i = 0; i < e; ++i) {
        if (acc > (1ull << 62) / p)
            throw value_error("torsion level p^" + std::to_string(e) + " does not fit 64 bits");
        acc *= p;
    }
    return acc;
}

/// An element of the p-torsion tower inside R/Z: num / p^level mod 1 with
/// 0 <= num < p^level. Level-m values form the subgroup U_m; addition lifts
/// both operands to the larger level.
struct TValue {
    std::uint32_t p;
    std::uint32_t level;
    std::uint64_t num;

    TValue(std::uint32_t p_, std::uint32_t level_, std::uint64_t num_) : p(p_), level(level_)
    {
        num = num_ % checked_pow(p, level);
    }

    static TValue zero(std::uint32_t p) { return TValue(p, 0, 0); }

    /// iota(v) = v/p: the canonical copy of F_p inside R/Z.
    static TValue iota(std::uint32_t p, std::uint32_t v) { return TValue(p, 1, v % p); }

    bool is_zero() const { return num == 0; }

    std::uint64_t lifted(std::uint32_t to_level) const
    {
        if (to_level < level)
            throw value_error("cannot lift a torsion value to a smaller level");
        return num * checked_pow(p, to_level - level);
    }

    TValue lift(std::uint32_t to_level) const { return TValue(p, to_level, lifted(to_level)); }

    friend TValue operator+(const TValue& a, const TValue& b)
    {
        if (a.p != b.p)
            throw dimension_error("adding torsion values over different primes");
        const std::uint32_t lv = a.level > b.level ? a.level : b.level;
        const std::uint64_t mod = checked_pow(a.p, lv);
        return TValue(a.p, lv, (a.lifted(lv) + b.lifted(lv)) % mod);
    }

    friend TValue operator-(const TValue& a, const TValue& b)
    {
        if (a.p != b.p)
            throw dimension_error("subtracting torsion values over different primes");
        const std::uint32_t lv = a.level > b.level ? a.level : b.level;
        const std::uint64_t mod = checked_pow(a.p, lv);
        return TValue(a.p, lv, (a.lifted(lv) + mod - b.lifted(lv)) % mod);
    }

    TValue operator-() const
    {
        const std::uint64_t mod = checked_pow(p, level);
        return TValue(p, level, (mod - num) % mod);
    }

    TValue times(std::uint64_t lambda) const
    {
        const std::uint64_t mod = checked_pow(p, level);
        const std::uint64_t prod =
            static_cast<std::uint64_t>((static_cast<unsigned __int128>(num) * lambda) % mod);
        return TValue(p, level, prod);
    }

    /// Equality as elements of R/Z (levels may differ).
    friend bool operator==(const TValue& a, const TValue& b)
    {
        if (a.p != b.p)
            return false;
        const std::uint32_t lv = a.level > b.level ? a.level : b.level;
        return a.lifted(lv) == b.lifted(lv);
    }
    friend bool operator!=(const TValue& a, const TValue& b) { return !(a == b); }

    double to_double() const
    {
        return static_cast<double>(num) / static_cast<double>(checked_pow(p, level));
    }

    /// e(t) = exp(2 pi i t).
    cplx phase() const { return unit_phase(to_double()); }

    std::string str() const { return std::to_string(num) + "/" + std::to_string(p) + "^" + std::to_string(level); }
};

} // namespace hofa
