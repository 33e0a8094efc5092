#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdio>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "hofa/affine.hpp"
#include "hofa/common.hpp"
#include "hofa/field.hpp"
#include "hofa/rng.hpp"

namespace hofa {

using cplx = std::complex<double>;

/// e_p(t) = exp(2*pi*i*t/p): the standard additive character of F_p.
inline cplx unit_phase(double turns)
{
    return std::polar(1.0, 2.0 * 3.14159265358979323846 * turns);
}

/// A function F_p^n -> C stored as a dense table indexed by point index.
/// `boolean` marks {0,1}-valued tables; those additionally keep a packed
/// bit image (for p = 2) that accelerates counting-style inner loops. The
/// dense table is always the authoritative representation.
class DenseFunction {
public:
    DenseFunction(Domain dom, std::vector<cplx> values, bool boolean = false)
        : dom_(std::move(dom)), values_(std::move(values)), boolean_(boolean)
    {
        if (values_.size() != dom_.size())
            throw dimension_error("function table has " + std::to_string(values_.size()) +
                                  " entries, domain has " + std::to_string(dom_.size()));
        if (boolean_) {
            for (const auto& v : values_)
                if (v.imag() != 0.0 || (v.real() != 0.0 && v.real() != 1.0))
                    throw value_error("boolean function table contains a value other than 0 or 1");
            if (dom_.p() == 2)
                pack_bits();
        }
    }

    static DenseFunction constant(Domain dom, cplx value)
    {
        const bool boolean = value.imag() == 0.0 && (value.real() == 0.0 || value.real() == 1.0);
        std::vector<cplx> v(dom.size(), value);
        return DenseFunction(std::move(dom), std::move(v), boolean);
    }

    static DenseFunction from_bits(Domain dom, const std::vector<std::uint8_t>& bits)
    {
        std::vector<cplx> v(bits.size());
        for (std::size_t i = 0; i < bits.size(); ++i)
            v[i] = bits[i] ? 1.0 : 0.0;
        return DenseFunction(std::move(dom), std::move(v), true);
    }

    const Domain& domain() const { return dom_; }
    std::uint32_t p() const { return dom_.p(); }
    std::uint32_t n() const { return dom_.n(); }
    std::uint64_t size() const { return dom_.size(); }
    bool boolean() const { return boolean_; }
    const std::vector<cplx>& values() const { return values_; }
    cplx value(std::uint64_t x) const { return values_[x]; }
    bool has_bits() const { return !bits_.empty(); }
    const std::vector<std::uint64_t>& bits() const { return bits_; }

    bool bit(std::uint64_t x) const { return (bits_[x >> 6] >> (x & 63)) & 1; }

private:
    void pack_bits()
    {
        bits_.assign((values_.size() + 63) / 64, 0);
        for (std::uint64_t i = 0; i < values_.size(); ++i)
            if (values_[i].real() != 0.0)
                bits_[i >> 6] |= 1ull << (i & 63);
    }

    Domain dom_;
    std::vector<cplx> values_;
    bool boolean_;
    std::vector<std::uint64_t> bits_; // packed image, boolean p=2 only
};

inline void require_same_domain(const DenseFunction& f, const DenseFunction& g)
{
    if (f.domain() != g.domain())
        throw dimension_error("functions live on different domains: F_" + std::to_string(f.p()) + "^" +
                              std::to_string(f.n()) + " vs F_" + std::to_string(g.p()) + "^" +
                              std::to_string(g.n()));
}

/// (f o A)(x) = f(A x); the result lives on the input domain of A.
inline DenseFunction compose_affine(const DenseFunction& f, const AffineMap& a)
{
    if (a.p() != f.p() || a.out_dim() != f.n())
        throw dimension_error("compose_affine: map lands in F_" + std::to_string(a.p()) + "^" +
                              std::to_string(a.out_dim()) + " but the function lives on F_" +
                              std::to_string(f.p()) + "^" + std::to_string(f.n()));
    const auto table = a.index_table();
    std::vector<cplx> out(table.size());
    for (std::uint64_t x = 0; x < table.size(); ++x)
        out[x] = f.value(table[x]);
    return DenseFunction(Domain(f.domain().field(), a.in_dim()), std::move(out), f.boolean());
}

/// Multiplicative derivative (Delta_h f)(x) = f(x+h) * conj(f(x)).
inline DenseFunction multiplicative_derivative(const DenseFunction& f, std::uint64_t h)
{
    const Domain& d = f.domain();
    std::vector<cplx> out(d.size());
    for (std::uint64_t x = 0; x < d.size(); ++x)
        out[x] = f.value(d.add(x, h)) * std::conj(f.value(x));
    // A product of a {0,1} table with its own shift stays {0,1}-valued.
    return DenseFunction(d, std::move(out), f.boolean());
}

inline DenseFunction pointwise_sub(const DenseFunction& f, const DenseFunction& g)
{
    require_same_domain(f, g);
    std::vector<cplx> out(f.size());
    for (std::uint64_t x = 0; x < f.size(); ++x)
        out[x] = f.value(x) - g.value(x);
    return DenseFunction(f.domain(), std::move(out), false);
}

inline DenseFunction pointwise_add(const DenseFunction& f, const DenseFunction& g)
{
    require_same_domain(f, g);
    std::vector<cplx> out(f.size());
    for (std::uint64_t x = 0; x < f.size(); ++x)
        out[x] = f.value(x) + g.value(x);
    return DenseFunction(f.domain(), std::move(out), false);
}

inline cplx mean_value(const DenseFunction& f, unsigned threads = 1)
{
    const cplx s = pairwise_sum<cplx>(f.size(), [&](std::uint64_t i) { return f.value(i); }, threads);
    return s / static_cast<double>(f.size());
}

/// E_x |f(x)|.
inline double l1_norm(const DenseFunction& f, unsigned threads = 1)
{
    if (f.has_bits()) {
        std::uint64_t ones = 0;
        for (auto w : f.bits())
            ones += static_cast<std::uint64_t>(__builtin_popcountll(w));
        return static_cast<double>(ones) / static_cast<double>(f.size());
    }
    const double s =
        pairwise_sum<double>(f.size(), [&](std::uint64_t i) { return std::abs(f.value(i)); }, threads);
    return s / static_cast<double>(f.size());
}

/// (E_x |f(x)|^2)^(1/2).
inline double l2_norm(const DenseFunction& f, unsigned threads = 1)
{
    if (f.has_bits())
        return std::sqrt(l1_norm(f)); // |f|^2 = |f| for {0,1} values
    const double s =
        pairwise_sum<double>(f.size(), [&](std::uint64_t i) { return std::norm(f.value(i)); }, threads);
    return std::sqrt(s / static_cast<double>(f.size()));
}

/// Fraction of points where f and g disagree (exact comparison). For
/// {0,1}-valued tables this equals the l1 distance.
inline double hamming_distance(const DenseFunction& f, const DenseFunction& g)
{
    require_same_domain(f, g);
    if (f.has_bits() && g.has_bits()) {
        std::uint64_t diff = 0;
        for (std::size_t w = 0; w < f.bits().size(); ++w)
            diff += static_cast<std::uint64_t>(__builtin_popcountll(f.bits()[w] ^ g.bits()[w]));
        return static_cast<double>(diff) / static_cast<double>(f.size());
    }
    std::uint64_t diff = 0;
    for (std::uint64_t x = 0; x < f.size(); ++x)
        diff += f.value(x) != g.value(x) ? 1 : 0;
    return static_cast<double>(diff) / static_cast<double>(f.size());
}

inline DenseFunction random_boolean_function(Domain dom, Rng& rng)
{
    std::vector<cplx> v(dom.size());
    for (auto& x : v)
        x = rng.below(2) ? 1.0 : 0.0;
    return DenseFunction(std::move(dom), std::move(v), true);
}

/// Values drawn uniformly from [lo, hi] (real-valued table).
inline DenseFunction random_real_function(Domain dom, Rng& rng, double lo = -1.0, double hi = 1.0)
{
    std::vector<cplx> v(dom.size());
    for (auto& x : v)
        x = rng.real(lo, hi);
    return DenseFunction(std::move(dom), std::move(v), false);
}

// --- file format ------------------------------------------------------------
//
//   line 1:  p n flags        (flags bit 0: boolean table)
//   boolean tables over F_2:  one line with ceil(p^n / 4) hex digits; hex
//                             digit j encodes points 4j..4j+3, least point in
//                             the least significant bit.
//   all other tables:         one "re im" line per point, %.17g round-trip.

inline std::string serialize_function(const DenseFunction& f)
{
    std::ostringstream out;
    out << f.p() << ' ' << f.n() << ' ' << (f.boolean() ? 1 : 0) << '\n';
    if (f.boolean() && f.p() == 2) {
        static const char* hex = "0123456789abcdef";
        std::vector<std::uint8_t> nibbles((f.size() + 3) / 4, 0);
        for (std::uint64_t i = 0; i < f.size(); ++i)
            if (f.value(i).real() != 0.0)
                nibbles[i / 4] |= static_cast<std::uint8_t>(1u << (i % 4));
        std::string line;
        line.reserve(nibbles.size());
        for (auto v : nibbles)
            line.push_back(hex[v]);
        out << line << '\n';
        return out.str();
    }
    char buf[64];
    for (std::uint64_t i = 0; i < f.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g %.17g\n", f.value(i).real(), f.value(i).imag());
        out << buf;
    }
    return out.str();
}

inline DenseFunction parse_function(const std::string& text)
{
    std::istringstream in(text);
    std::uint32_t p = 0, n = 0;
    int flags = -1;
    if (!(in >> p >> n >> flags) || flags < 0)
        throw parse_error("function header must be 'p n flags'");
    Domain dom(FieldSpec(p), n);
    const bool boolean = (flags & 1) != 0;
    if (boolean && p == 2) {
        std::string line;
        if (!(in >> line))
            throw parse_error("function file: missing hex table line");
        if (line.size() != (dom.size() + 3) / 4)
            throw parse_error("function file: hex table has " + std::to_string(line.size()) +
                              " digits, expected " + std::to_string((dom.size() + 3) / 4));
        std::vector<std::uint8_t> bits(dom.size());
        for (std::uint64_t i = 0; i < dom.size(); ++i) {
            const char c = line[i / 4];
            std::uint32_t v;
            if (c >= '0' && c <= '9')
                v = static_cast<std::uint32_t>(c - '0');
            else if (c >= 'a' && c <= 'f')
                v = static_cast<std::uint32_t>(c - 'a') + 10;
            else
                throw parse_error("function file: invalid hex digit");
            bits[i] = (v >> (i % 4)) & 1;
        }
        return DenseFunction::from_bits(std::move(dom), bits);
    }
    std::vector<cplx> values(dom.size());
    for (std::uint64_t i = 0; i < dom.size(); ++i) {
        double re, im;
        if (!(in >> re >> im))
            throw parse_error("function file: missing value line " + std::to_string(i));
        values[i] = cplx(re, im);
    }
    return DenseFunction(std::move(dom), std::move(values), boolean);
}

} // namespace hofa
