#pragma once

#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "hofa/common.hpp"
#include "hofa/field.hpp"
#include "hofa/function.hpp"
#include "hofa/polynomial.hpp"
#include "hofa/rank.hpp"
#include "hofa/tvalue.hpp"

namespace hofa {

/// The sigma-algebra generated by a sequence of polynomials: two points sit
/// in the same atom iff every P_i agrees on them. Atoms are addressed by the
/// mixed-radix index of the value tuple (P_1(x), ..., P_c(x)), with P_1 the
/// least significant digit and each P_i contributing a digit modulo
/// p^(depth_i + 1). `order()` counts addressable atoms; occupied atoms can
/// be fewer when the sequence has low rank.
class PolyFactor {
public:
    PolyFactor(FieldSpec field, std::uint32_t n) : field_(field), n_(n) {}

    PolyFactor(FieldSpec field, std::uint32_t n, std::vector<NonClassicalPoly> polys)
        : field_(field), n_(n)
    {
        for (auto& poly : polys)
            add(std::move(poly));
    }

    void add(NonClassicalPoly poly)
    {
        if (poly.p() != field_.p || poly.vars() != n_)
            throw dimension_error("factor polynomial lives on a different domain");
        mods_.push_back(checked_pow(field_.p, poly.depth() + 1));
        polys_.push_back(std::move(poly));
        tables_.clear(); // rebuilt lazily against the extended sequence
    }

    const FieldSpec& field() const { return field_; }
    std::uint32_t vars() const { return n_; }
    std::size_t complexity() const { return polys_.size(); }
    const std::vector<NonClassicalPoly>& polys() const { return polys_; }

    /// Number of addressable atoms, prod_i p^(depth_i + 1).
    std::uint64_t order() const
    {
        std::uint64_t o = 1;
        for (auto m : mods_)
            o = require_product_budget(o, m, std::uint64_t(1) << 62, "factor order");
        return o;
    }

    /// Atom index of a domain point.
    std::uint64_t atom_of(std::uint64_t x) const
    {
        ensure_tables();
        std::uint64_t atom = 0, radix = 1;
        for (std::size_t i = 0; i < polys_.size(); ++i) {
            atom += tables_[i][x] * radix;
            radix *= mods_[i];
        }
        return atom;
    }

    /// Atom index of every domain point, in point order.
    std::vector<std::uint64_t> atom_table() const
    {
        Domain dom(field_, n_);
        std::vector<std::uint64_t> out(dom.size());
        for (std::uint64_t x = 0; x < dom.size(); ++x)
            out[x] = atom_of(x);
        return out;
    }

    FactorRank rank(std::uint32_t max_r = 8, std::uint64_t budget = default_budget) const
    {
        return sequence_rank(polys_, max_r, budget);
    }

private:
    void ensure_tables() const
    {
        if (tables_.size() == polys_.size())
            return;
        tables_.clear();
        for (const auto& poly : polys_) {
            const std::vector<TValue> vals = poly.value_table();
            std::vector<std::uint64_t> digits(vals.size());
            for (std::size_t x = 0; x < vals.size(); ++x)
                digits[x] = vals[x].num; // already reduced mod p^(depth+1)
            tables_.push_back(std::move(digits));
        }
    }

    FieldSpec field_;
    std::uint32_t n_;
    std::vector<NonClassicalPoly> polys_;
    std::vector<std::uint64_t> mods_;
    mutable std::vector<std::vector<std::uint64_t>> tables_;
};

/// E[f | B]: replace f on each atom by its average over that atom.
inline DenseFunction conditional_expectation(const DenseFunction& f, const PolyFactor& factor)
{
    if (f.p() != factor.field().p || f.n() != factor.vars())
        throw dimension_error("conditioning a function on a factor over a different domain");
    const std::vector<std::uint64_t> atom = factor.atom_table();
    std::map<std::uint64_t, std::pair<cplx, std::uint64_t>> sums;
    for (std::uint64_t x = 0; x < f.size(); ++x) {
        auto& slot = sums[atom[x]];
        slot.first += f.value(x);
        slot.second += 1;
    }
    std::vector<cplx> out(f.size());
    for (std::uint64_t x = 0; x < f.size(); ++x) {
        const auto& slot = sums[atom[x]];
        out[x] = slot.first / static_cast<double>(slot.second);
    }
    return DenseFunction(f.domain(), std::move(out), false);
}

} // namespace hofa
