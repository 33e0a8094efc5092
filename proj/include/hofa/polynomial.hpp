#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "hofa/common.hpp"
#include "hofa/field.hpp"
#include "hofa/function.hpp"
#include "hofa/rng.hpp"
#include "hofa/tvalue.hpp"

namespace hofa {

using ExponentVec = std::vector<std::uint8_t>; // one exponent per variable, each < p

/// A polynomial F_p^n -> R/Z with zero shift, stored per monomial:
///
///   P(x) = sum_{d} c_d * |x_1|^{d_1} ... |x_n|^{d_n} / p^{level(d)}  (mod 1)
///
/// where |.| lifts F_p to {0..p-1} in Z, every exponent is < p, d is never
/// all-zero (constants are shifts, fixed to 0 by convention), and each
/// coefficient c_d is kept with p-free numerator so level(d) is minimal.
/// A monomial then contributes depth level(d)-1 and degree
/// sum(d) + (level(d)-1)(p-1); the polynomial's depth/degree are the maxima.
/// Depth-0 polynomials are the classical F_p-valued ones.
class NonClassicalPoly {
public:
    NonClassicalPoly(FieldSpec field, std::uint32_t n) : field_(field), n_(n) {}

    NonClassicalPoly(FieldSpec field, std::uint32_t n, std::map<ExponentVec, TValue> coeffs)
        : field_(field), n_(n)
    {
        for (auto& [mono, c] : coeffs)
            add_term(mono, c);
    }

    /// Add c * |x|^mono / p^(h+1), i.e. one serialized "c : d_1..d_n : h" term.
    void add_digit_term(const ExponentVec& mono, std::uint32_t h, std::uint32_t c)
    {
        if (c == 0 || c >= field_.p)
            throw value_error("term coefficient " + std::to_string(c) + " outside [1, p-1]");
        add_term(mono, TValue(field_.p, h + 1, c));
    }

    std::uint32_t p() const { return field_.p; }
    const FieldSpec& field() const { return field_; }
    std::uint32_t vars() const { return n_; }
    bool is_zero() const { return terms_.empty(); }
    const std::map<ExponentVec, TValue>& terms() const { return terms_; }

    bool operator==(const NonClassicalPoly& o) const
    {
        if (field_.p != o.field_.p || n_ != o.n_ || terms_.size() != o.terms_.size())
            return false;
        auto it = o.terms_.begin();
        for (const auto& [mono, c] : terms_) {
            if (mono != it->first || c != it->second)
                return false;
            ++it;
        }
        return true;
    }
    bool operator<(const NonClassicalPoly& o) const { return key() < o.key(); }

    std::uint32_t depth() const
    {
        std::uint32_t d = 0;
        for (const auto& [mono, c] : terms_)
            d = std::max(d, c.level - 1);
        return d;
    }

    std::uint32_t degree() const
    {
        std::uint32_t deg = 0;
        for (const auto& [mono, c] : terms_) {
            std::uint32_t total = 0;
            for (auto e : mono)
                total += e;
            deg = std::max(deg, total + (c.level - 1) * (field_.p - 1));
        }
        return deg;
    }

    bool is_classical() const { return depth() == 0; }

    /// Value at a point, expressed at the uniform level depth()+1.
    TValue evaluate(const Point& x) const
    {
        if (x.size() != n_)
            throw dimension_error("evaluating a polynomial in " + std::to_string(n_) +
                                  " variables at a point with " + std::to_string(x.size()) +
                                  " coordinates");
        const std::uint32_t out_level = depth() + 1;
        const std::uint64_t mod = checked_pow(field_.p, out_level);
        std::uint64_t acc = 0;
        for (const auto& [mono, c] : terms_) {
            const std::uint64_t term_mod = checked_pow(field_.p, c.level);
            std::uint64_t v = c.num % term_mod;
            for (std::uint32_t i = 0; i < n_ && v != 0; ++i) {
                for (std::uint32_t e = 0; e < mono[i]; ++e)
                    v = static_cast<std::uint64_t>(
                        (static_cast<unsigned __int128>(v) * x[i]) % term_mod);
            }
            acc = (acc + v * checked_pow(field_.p, out_level - c.level)) % mod;
        }
        return TValue(field_.p, out_level, acc);
    }

    std::vector<TValue> value_table() const
    {
        Domain dom(field_, n_);
        std::vector<TValue> out;
        out.reserve(dom.size());
        for (std::uint64_t x = 0; x < dom.size(); ++x)
            out.push_back(evaluate(dom.point(x)));
        return out;
    }

    /// For classical polynomials: the F_p value at every point.
    std::vector<std::uint8_t> classical_table() const
    {
        if (!is_classical())
            throw value_error("classical_table on a polynomial of positive depth");
        Domain dom(field_, n_);
        std::vector<std::uint8_t> out(dom.size());
        for (std::uint64_t x = 0; x < dom.size(); ++x)
            out[x] = static_cast<std::uint8_t>(evaluate(dom.point(x)).num);
        return out;
    }

    friend NonClassicalPoly operator+(const NonClassicalPoly& a, const NonClassicalPoly& b)
    {
        if (a.field_.p != b.field_.p || a.n_ != b.n_)
            throw dimension_error("adding polynomials over different domains");
        NonClassicalPoly out(a.field_, a.n_);
        out.terms_ = a.terms_;
        for (const auto& [mono, c] : b.terms_)
            out.add_term(mono, c);
        return out;
    }

    /// lambda * P for an integer lambda (the group action of Z on R/Z-valued
    /// polynomials). Coefficients may lose p-adic height: 2 * (1/4) = 1/2.
    NonClassicalPoly times(std::uint64_t lambda) const
    {
        NonClassicalPoly out(field_, n_);
        for (const auto& [mono, c] : terms_)
            out.add_term(mono, c.times(lambda));
        return out;
    }

    NonClassicalPoly negated() const
    {
        NonClassicalPoly out(field_, n_);
        for (const auto& [mono, c] : terms_)
            out.add_term(mono, -c);
        return out;
    }

    std::string serialize() const
    {
        std::ostringstream out;
        out << field_.p << ' ' << n_ << '\n';
        for (const auto& [mono, c] : terms_) {
            // Emit the base-p digits of the numerator, deepest level first.
            for (std::uint32_t j = c.level; j-- > 0;) {
                const std::uint32_t digit =
                    static_cast<std::uint32_t>((c.num / checked_pow(field_.p, c.level - 1 - j)) % field_.p);
                if (digit == 0)
                    continue;
                out << digit << " :";
                for (auto e : mono)
                    out << ' ' << static_cast<std::uint32_t>(e);
                out << " : " << j << '\n';
            }
        }
        return out.str();
    }

private:
    // Fold one monomial contribution in, keeping the stored coefficient
    // p-free and dropping cancelled monomials.
    void add_term(const ExponentVec& mono, const TValue& c)
    {
        if (mono.size() != n_)
            throw dimension_error("monomial has " + std::to_string(mono.size()) +
                                  " exponents, polynomial has " + std::to_string(n_) + " variables");
        bool all_zero = true;
        for (auto e : mono) {
            if (e >= field_.p)
                throw value_error("monomial exponent " + std::to_string(e) + " not reduced below p");
            if (e != 0)
                all_zero = false;
        }
        if (all_zero)
            throw value_error("constant terms are shifts and are fixed to zero by convention");
        if (c.p != field_.p)
            throw dimension_error("coefficient lives over a different prime");
        auto it = terms_.find(mono);
        TValue sum = it == terms_.end() ? c : it->second + c;
        // Normalize: remove powers of p shared by numerator and level.
        while (sum.num != 0 && sum.num % field_.p == 0)
            sum = TValue(field_.p, sum.level - 1, sum.num / field_.p);
        if (sum.num == 0) {
            if (it != terms_.end())
                terms_.erase(it);
            return;
        }
        if (it == terms_.end())
            terms_.emplace(mono, sum);
        else
            it->second = sum;
    }

    std::string key() const
    {
        std::ostringstream out;
        out << field_.p << '|' << n_;
        for (const auto& [mono, c] : terms_) {
            out << '|';
            for (auto e : mono)
                out << static_cast<int>(e) << ',';
            out << c.num << '/' << c.level;
        }
        return out.str();
    }

    FieldSpec field_;
    std::uint32_t n_;
    std::map<ExponentVec, TValue> terms_;
};

inline NonClassicalPoly parse_polynomial(const std::string& text)
{
    std::istringstream in(text);
    std::string header;
    if (!std::getline(in, header))
        throw parse_error("polynomial file is empty");
    std::istringstream head(header);
    std::uint32_t p, n;
    if (!(head >> p >> n))
        throw parse_error("polynomial header must be 'p n'");
    NonClassicalPoly poly(FieldSpec(p), n);
    std::string line;
    while (std::getline(in, line)) {
        if (line.find_first_not_of(" \t\r") == std::string::npos)
            continue;
        for (auto& ch : line)
            if (ch == ':')
                ch = ' ';
        std::istringstream row(line);
        std::uint32_t c, h;
        ExponentVec mono(n);
        if (!(row >> c))
            throw parse_error("polynomial term '" + line + "': missing coefficient");
        for (std::uint32_t i = 0; i < n; ++i) {
            std::uint32_t e;
            if (!(row >> e))
                throw parse_error("polynomial term '" + line + "': missing exponent");
            mono[i] = static_cast<std::uint8_t>(e);
        }
        if (!(row >> h))
            throw parse_error("polynomial term '" + line + "': missing depth");
        try {
            poly.add_digit_term(mono, h, c);
        } catch (const error& e) {
            throw parse_error("polynomial term '" + line + "': " + e.what());
        }
    }
    return poly;
}

/// e(P): the complex phase function x |-> exp(2 pi i P(x)).
inline DenseFunction exponential(const NonClassicalPoly& poly)
{
    Domain dom(poly.field(), poly.vars());
    std::vector<cplx> v(dom.size());
    for (std::uint64_t x = 0; x < dom.size(); ++x)
        v[x] = poly.evaluate(dom.point(x)).phase();
    return DenseFunction(std::move(dom), std::move(v), false);
}

/// |E e(P)|: the bias of the phase polynomial.
inline double bias(const NonClassicalPoly& poly)
{
    return std::abs(mean_value(exponential(poly)));
}

/// Additive derivative (D_h P)(x) = P(x+h) - P(x), as a value table.
inline std::vector<TValue> additive_derivative(const NonClassicalPoly& poly, std::uint64_t h)
{
    Domain dom(poly.field(), poly.vars());
    std::vector<TValue> table = poly.value_table();
    std::vector<TValue> out;
    out.reserve(dom.size());
    for (std::uint64_t x = 0; x < dom.size(); ++x)
        out.push_back(table[dom.add(x, h)] - table[x]);
    return out;
}

namespace detail {

inline std::vector<TValue> table_derivative(const Domain& dom, const std::vector<TValue>& table,
                                            std::uint64_t h)
{
    std::vector<TValue> out;
    out.reserve(dom.size());
    for (std::uint64_t x = 0; x < dom.size(); ++x)
        out.push_back(table[dom.add(x, h)] - table[x]);
    return out;
}

inline bool derivatives_vanish(const Domain& dom, const std::vector<TValue>& table,
                               std::uint32_t order)
{
    if (order == 0) {
        for (const auto& v : table)
            if (!v.is_zero())
                return false;
        return true;
    }
    for (std::uint64_t h = 0; h < dom.size(); ++h)
        if (!derivatives_vanish(dom, table_derivative(dom, table, h), order - 1))
            return false;
    return true;
}

} // namespace detail

/// Check deg(P) <= d by the derivative criterion: every (d+1)-fold additive
/// derivative vanishes identically. Exhaustive over all p^(n(d+1)) direction
/// tuples (times p^n points), so the budget gates p^(n(d+2)).
inline bool verify_degree_exhaustive(const NonClassicalPoly& poly, std::uint32_t d,
                                     std::uint64_t budget = default_budget)
{
    Domain dom(poly.field(), poly.vars());
    require_budget(dom.size(), d + 2, budget, "degree verification");
    return detail::derivatives_vanish(dom, poly.value_table(), d + 1);
}

/// Randomized version: evaluates the alternating (d+1)-fold difference
///   sum_{S subset of [d+1]} (-1)^(d+1-|S|) P(x + sum_{i in S} y_i)
/// at `samples` random (x, y) draws. One-sided: may accept an overly high
/// degree, never rejects a correct one.
inline bool verify_degree_sampled(const NonClassicalPoly& poly, std::uint32_t d,
                                  std::uint64_t samples, std::uint64_t seed)
{
    if (d + 1 >= 30)
        throw budget_error("sampled degree check of order " + std::to_string(d) + " is too deep");
    Domain dom(poly.field(), poly.vars());
    const std::vector<TValue> table = poly.value_table();
    const std::uint32_t r = d + 1;
    std::vector<std::uint64_t> ys(r);
    for (std::uint64_t s = 0; s < samples; ++s) {
        Rng rng = Rng::stream(seed, s);
        const std::uint64_t x = rng.below(dom.size());
        for (auto& y : ys)
            y = rng.below(dom.size());
        TValue acc = TValue::zero(poly.p());
        for (std::uint32_t mask = 0; mask < (1u << r); ++mask) {
            std::uint64_t pt = x;
            for (std::uint32_t i = 0; i < r; ++i)
                if (mask & (1u << i))
                    pt = dom.add(pt, ys[i]);
            const bool negate = ((r - __builtin_popcount(mask)) % 2) == 1;
            acc = negate ? acc - table[pt] : acc + table[pt];
        }
        if (!acc.is_zero())
            return false;
    }
    return true;
}

/// All classical polynomials (depth 0, zero shift) of degree <= max_deg in n
/// variables: every assignment of F_p coefficients to the non-constant
/// monomials with exponents < p and total degree <= max_deg. The zero
/// polynomial is included iff `include_zero`.
inline std::vector<NonClassicalPoly> enumerate_classical_polys(FieldSpec field, std::uint32_t n,
                                                               std::uint32_t max_deg,
                                                               std::uint64_t budget = default_budget,
                                                               bool include_zero = false)
{
    std::vector<ExponentVec> monomials;
    ExponentVec current(n, 0);
    auto gen = [&](auto&& self, std::uint32_t i, std::uint32_t left) -> void {
        if (i == n) {
            bool all_zero = true;
            for (auto e : current)
                if (e)
                    all_zero = false;
            if (!all_zero)
                monomials.push_back(current);
            return;
        }
        for (std::uint32_t e = 0; e <= std::min<std::uint32_t>(left, field.p - 1); ++e) {
            current[i] = static_cast<std::uint8_t>(e);
            self(self, i + 1, left - e);
        }
        current[i] = 0;
    };
    gen(gen, 0, max_deg);
    std::sort(monomials.begin(), monomials.end());
    require_budget(field.p, monomials.size(), budget, "classical polynomial enumeration");

    std::vector<NonClassicalPoly> out;
    std::vector<std::uint32_t> coeff(monomials.size(), 0);
    for (;;) {
        NonClassicalPoly poly(field, n);
        for (std::size_t i = 0; i < monomials.size(); ++i)
            if (coeff[i])
                poly.add_digit_term(monomials[i], 0, coeff[i]);
        if (include_zero || !poly.is_zero())
            out.push_back(std::move(poly));
        std::size_t i = monomials.size();
        bool done = true;
        while (i > 0) {
            --i;
            if (++coeff[i] < field.p) {
                done = false;
                break;
            }
            coeff[i] = 0;
        }
        if (done)
            break;
    }
    return out;
}

} // namespace hofa
