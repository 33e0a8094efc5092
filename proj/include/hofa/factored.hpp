#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "hofa/affine.hpp"
#include "hofa/common.hpp"
#include "hofa/field.hpp"
#include "hofa/polynomial.hpp"
#include "hofa/tvalue.hpp"

namespace hofa {

/// A single monomial c * |y_1|^(e_1) ... |y_n|^(e_n) / p^level, mod 1.
struct Monomial {
    TValue coeff;
    ExponentVec exponents;

    Monomial(TValue c, ExponentVec e) : coeff(c), exponents(std::move(e))
    {
        if (coeff.num == 0 || coeff.num % coeff.p == 0)
            throw value_error("monomial coefficient must be nonzero with p-free numerator");
        bool all_zero = true;
        for (auto d : exponents) {
            if (d >= coeff.p)
                throw value_error("monomial exponent not reduced below p");
            if (d != 0)
                all_zero = false;
        }
        if (all_zero)
            throw value_error("monomial must use at least one variable");
    }

    std::uint32_t vars() const { return static_cast<std::uint32_t>(exponents.size()); }
    std::uint32_t depth() const { return coeff.level - 1; }

    std::uint32_t degree() const
    {
        std::uint32_t total = 0;
        for (auto d : exponents)
            total += d;
        return total + depth() * (coeff.p - 1);
    }

    std::uint32_t support_size() const
    {
        std::uint32_t s = 0;
        for (auto d : exponents)
            if (d != 0)
                ++s;
        return s;
    }

    NonClassicalPoly as_polynomial(const FieldSpec& field) const
    {
        NonClassicalPoly poly(field, vars());
        std::map<ExponentVec, TValue> one{{exponents, coeff}};
        return NonClassicalPoly(field, vars(), std::move(one));
    }

    TValue evaluate(const Point& y) const
    {
        if (y.size() != exponents.size())
            throw dimension_error("monomial evaluated at a point of the wrong dimension");
        const std::uint64_t mod = checked_pow(coeff.p, coeff.level);
        std::uint64_t v = coeff.num;
        for (std::size_t i = 0; i < y.size() && v != 0; ++i)
            for (std::uint32_t e = 0; e < exponents[i]; ++e)
                v = static_cast<std::uint64_t>(
                    (static_cast<unsigned __int128>(v) * y[i]) % mod);
        return TValue(coeff.p, coeff.level, v);
    }
};

/// Probability, over uniform x, that the monomial is nonzero after a change
/// of variables by any bijection: each supporting coordinate must avoid 0.
inline double monomial_nonzero_prob(const Monomial& m)
{
    return std::pow(static_cast<double>(m.coeff.p - 1) / m.coeff.p, m.support_size());
}

/// A polynomial given in factored form: a monomial composed with an affine
/// bijection, Q(x) = M(A x). Kept unexpanded — the coordinate lift |.| does
/// not distribute over addition, so expanding M(A x) into monomials in x is
/// neither possible in general nor needed for evaluation.
struct FactoredPolynomial {
    Monomial monomial;
    AffineMap map;

    FactoredPolynomial(Monomial m, AffineMap a) : monomial(std::move(m)), map(std::move(a))
    {
        if (map.field().p != monomial.coeff.p)
            throw dimension_error("factored polynomial mixes primes");
        if (!map.is_bijection() || map.out_dim() != monomial.vars())
            throw value_error("factored polynomial needs an affine bijection of the "
                              "monomial's variable space");
    }

    std::uint32_t vars() const { return map.in_dim(); }
    std::uint32_t degree() const { return monomial.degree(); }
    std::uint32_t depth() const { return monomial.depth(); }

    TValue evaluate(const Point& x) const { return monomial.evaluate(map.apply(x)); }

    /// Value at the origin, used when the polynomial is frozen out of a
    /// truncated collection.
    TValue value_at_zero() const { return monomial.evaluate(map.shift()); }

    std::vector<TValue> value_table() const
    {
        Domain dom(map.field(), vars());
        std::vector<TValue> out;
        out.reserve(dom.size());
        for (std::uint64_t x = 0; x < dom.size(); ++x)
            out.push_back(evaluate(dom.point(x)));
        return out;
    }
};

} // namespace hofa
