#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hofa/common.hpp"

namespace hofa {

using Point = std::vector<std::uint8_t>; // coordinates x_1..x_n, one digit each

/// A prime field F_p with p in [2, 17]. Construction validates primality, so
/// holding a FieldSpec is proof the modulus is usable.
struct FieldSpec {
    std::uint32_t p;

    explicit FieldSpec(std::uint32_t prime) : p(prime)
    {
        if (p < 2 || p > 17)
            throw value_error("field modulus " + std::to_string(p) + " outside supported range [2, 17]");
        for (std::uint32_t d = 2; d * d <= p; ++d)
            if (p % d == 0)
                throw value_error("field modulus " + std::to_string(p) + " is not prime");
    }

    std::uint32_t add(std::uint32_t a, std::uint32_t b) const { return (a + b) % p; }
    std::uint32_t sub(std::uint32_t a, std::uint32_t b) const { return (a + p - b) % p; }
    std::uint32_t mul(std::uint32_t a, std::uint32_t b) const { return (a * b) % p; }
    std::uint32_t neg(std::uint32_t a) const { return (p - a) % p; }

    std::uint32_t inv(std::uint32_t a) const
    {
        if (a % p == 0)
            throw value_error("division by zero in F_" + std::to_string(p));
        // Fermat: a^(p-2). p <= 17, so a plain loop is fine.
        std::uint32_t acc = 1;
        for (std::uint32_t i = 0; i + 2 < p; ++i)
            acc = mul(acc, a);
        return acc;
    }
};

// Points of F_p^n are addressed by their index in [0, p^n): x_1 is the least
// significant base-p digit. The encoding is part of every file format, so it
// must never change.
class Domain {
public:
    Domain(FieldSpec field, std::uint32_t dim, std::uint64_t max_points = default_max_points)
        : field_(field), n_(dim)
    {
        pow_.resize(n_ + 1);
        pow_[0] = 1;
        for (std::uint32_t i = 0; i < n_; ++i) {
            if (pow_[i] > max_points / field_.p)
                throw budget_error("domain F_" + std::to_string(field_.p) + "^" + std::to_string(n_) +
                                   " exceeds the dense-table cap of " + std::to_string(max_points) +
                                   " points");
            pow_[i + 1] = pow_[i] * field_.p;
        }
    }

    Domain(std::uint32_t p, std::uint32_t dim) : Domain(FieldSpec(p), dim) {}

    static constexpr std::uint64_t default_max_points = 1ull << 24;

    std::uint32_t p() const { return field_.p; }
    std::uint32_t n() const { return n_; }
    std::uint64_t size() const { return pow_[n_]; }
    const FieldSpec& field() const { return field_; }
    std::uint64_t pow(std::uint32_t i) const { return pow_[i]; }

    bool operator==(const Domain& o) const { return field_.p == o.field_.p && n_ == o.n_; }
    bool operator!=(const Domain& o) const { return !(*this == o); }

    std::uint32_t digit(std::uint64_t x, std::uint32_t i) const
    {
        return static_cast<std::uint32_t>((x / pow_[i]) % field_.p);
    }

    Point point(std::uint64_t x) const
    {
        Point out(n_);
        for (std::uint32_t i = 0; i < n_; ++i) {
            out[i] = static_cast<std::uint8_t>(x % field_.p);
            x /= field_.p;
        }
        return out;
    }

    std::uint64_t index(const Point& pt) const
    {
        if (pt.size() != n_)
            throw dimension_error("point has " + std::to_string(pt.size()) + " coordinates, domain expects " +
                                  std::to_string(n_));
        std::uint64_t x = 0;
        for (std::uint32_t i = n_; i-- > 0;) {
            if (pt[i] >= field_.p)
                throw value_error("point coordinate " + std::to_string(pt[i]) + " not reduced mod " +
                                  std::to_string(field_.p));
            x = x * field_.p + pt[i];
        }
        return x;
    }

    // Coordinate-wise sums on indices. Base-p digit addition has no carries
    // between positions, so for p = 2 this degenerates to XOR.
    std::uint64_t add(std::uint64_t a, std::uint64_t b) const
    {
        if (field_.p == 2)
            return a ^ b;
        std::uint64_t out = 0;
        for (std::uint32_t i = 0; i < n_; ++i)
            out += static_cast<std::uint64_t>((digit(a, i) + digit(b, i)) % field_.p) * pow_[i];
        return out;
    }

    std::uint64_t sub(std::uint64_t a, std::uint64_t b) const
    {
        if (field_.p == 2)
            return a ^ b;
        std::uint64_t out = 0;
        for (std::uint32_t i = 0; i < n_; ++i)
            out += static_cast<std::uint64_t>((digit(a, i) + field_.p - digit(b, i)) % field_.p) * pow_[i];
        return out;
    }

    std::uint64_t scale(std::uint32_t lambda, std::uint64_t a) const
    {
        lambda %= field_.p;
        if (lambda == 0)
            return 0;
        if (lambda == 1)
            return a;
        std::uint64_t out = 0;
        for (std::uint32_t i = 0; i < n_; ++i)
            out += static_cast<std::uint64_t>((digit(a, i) * lambda) % field_.p) * pow_[i];
        return out;
    }

private:
    FieldSpec field_;
    std::uint32_t n_;
    std::vector<std::uint64_t> pow_;
};

// Digit alphabet for serialized coordinates; covers values 0..16 for p <= 17.
inline char digit_char(std::uint32_t v)
{
    static const char* alphabet = "0123456789abcdefg";
    return alphabet[v];
}

inline std::uint32_t digit_value(char c, std::uint32_t p)
{
    std::uint32_t v;
    if (c >= '0' && c <= '9')
        v = static_cast<std::uint32_t>(c - '0');
    else if (c >= 'a' && c <= 'g')
        v = static_cast<std::uint32_t>(c - 'a') + 10;
    else
        throw parse_error(std::string("invalid digit character '") + c + "'");
    if (v >= p)
        throw parse_error(std::string("digit '") + c + "' is not reduced mod " + std::to_string(p));
    return v;
}

inline std::string digits_to_string(const std::vector<std::uint8_t>& digits)
{
    std::string out;
    out.reserve(digits.size());
    for (auto d : digits)
        out.push_back(digit_char(d));
    return out;
}

inline std::vector<std::uint8_t> string_to_digits(const std::string& s, std::uint32_t p)
{
    std::vector<std::uint8_t> out;
    out.reserve(s.size());
    for (char c : s)
        out.push_back(static_cast<std::uint8_t>(digit_value(c, p)));
    return out;
}

} // namespace hofa
