#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "hofa/common.hpp"
#include "hofa/field.hpp"
#include "hofa/polynomial.hpp"
#include "hofa/tvalue.hpp"

namespace hofa {

/// Result of a rank search. `finite` carries the rank and a certifying tuple
/// of lower-degree polynomials; `exceeds` means the search was capped at
/// `value` and every smaller tuple failed; `infinite` is provable (a
/// non-constant polynomial cannot be a function of degree-0 polynomials).
struct RankOutcome {
    enum class Kind { finite, exceeds, infinite };

    Kind kind = Kind::infinite;
    std::uint32_t value = 0;
    std::vector<NonClassicalPoly> witness;

    bool is_finite() const { return kind == Kind::finite; }

    /// True when the outcome certifies rank >= r.
    bool at_least(std::uint32_t r) const { return kind != Kind::finite || value >= r; }

    std::string str() const
    {
        switch (kind) {
        case Kind::finite: return std::to_string(value);
        case Kind::exceeds: return ">" + std::to_string(value);
        default: return "inf";
        }
    }
};

namespace detail {

// Is `table` constant on every joint fiber of the selected Q-tables?
inline bool constant_on_fibers(const std::vector<TValue>& table,
                               const std::vector<const std::vector<std::uint8_t>*>& qs)
{
    std::map<std::vector<std::uint8_t>, TValue> seen;
    std::vector<std::uint8_t> key(qs.size());
    for (std::size_t x = 0; x < table.size(); ++x) {
        for (std::size_t i = 0; i < qs.size(); ++i)
            key[i] = (*qs[i])[x];
        auto [it, fresh] = seen.try_emplace(key, table[x]);
        if (!fresh && it->second != table[x])
            return false;
    }
    return true;
}

} // namespace detail

/// Degree-d rank by exhaustive search: the smallest r such that P is constant
/// on the joint fibers of r classical polynomials of degree <= d-1 (zero
/// shift; shifting a polynomial relabels its fibers without changing them).
/// Searches r = 0, 1, ..., max_r; candidate tuples are scanned in
/// lexicographic order of the enumeration, so the witness is deterministic.
inline RankOutcome brute_force_rank_d(const NonClassicalPoly& poly, std::uint32_t d,
                                      std::uint32_t max_r = 8,
                                      std::uint64_t budget = default_budget)
{
    Domain dom(poly.field(), poly.vars());
    const std::vector<TValue> table = poly.value_table();

    bool constant = true;
    for (const auto& v : table)
        if (v != table[0])
            constant = false;
    if (constant)
        return {RankOutcome::Kind::finite, 0, {}};
    if (d <= 1)
        return {RankOutcome::Kind::infinite, 0, {}};

    const std::vector<NonClassicalPoly> pool =
        enumerate_classical_polys(poly.field(), poly.vars(), d - 1, budget);
    std::vector<std::vector<std::uint8_t>> qtables;
    qtables.reserve(pool.size());
    for (const auto& q : pool)
        qtables.push_back(q.classical_table());

    std::uint64_t work = 0;
    for (std::uint32_t r = 1; r <= max_r && r <= pool.size(); ++r) {
        std::vector<std::size_t> idx(r);
        for (std::uint32_t i = 0; i < r; ++i)
            idx[i] = i;
        for (;;) {
            work += table.size();
            if (work > budget)
                throw budget_error("rank search exceeded budget of " + std::to_string(budget) +
                                   " table lookups");
            std::vector<const std::vector<std::uint8_t>*> qs(r);
            for (std::uint32_t i = 0; i < r; ++i)
                qs[i] = &qtables[idx[i]];
            if (detail::constant_on_fibers(table, qs)) {
                RankOutcome out{RankOutcome::Kind::finite, r, {}};
                for (auto i : idx)
                    out.witness.push_back(pool[i]);
                return out;
            }
            // Next strictly increasing index tuple.
            std::uint32_t i = r;
            while (i > 0) {
                --i;
                if (idx[i] + (r - i) < pool.size()) {
                    ++idx[i];
                    for (std::uint32_t j = i + 1; j < r; ++j)
                        idx[j] = idx[j - 1] + 1;
                    break;
                }
                if (i == 0)
                    goto next_r;
            }
        }
    next_r:;
    }
    return {RankOutcome::Kind::exceeds, max_r, {}};
}

/// Rank of a polynomial sequence: the minimum, over integer combinations
/// (lambda_1, ..., lambda_c) that are non-trivial modulo the respective
/// p^(depth_i + 1), of the degree-d rank of sum_i lambda_i P_i, where d is
/// the largest degree among the nonzero summands. Low values witness
/// degeneracy; the empty sequence has nothing to degenerate.
struct FactorRank {
    RankOutcome outcome;
    std::vector<std::uint64_t> lambda; // minimizing combination, when finite
    std::uint32_t degree = 0;          // the d used for that combination
};

inline FactorRank sequence_rank(const std::vector<NonClassicalPoly>& polys,
                                std::uint32_t max_r = 8,
                                std::uint64_t budget = default_budget)
{
    FactorRank best;
    best.outcome = {RankOutcome::Kind::infinite, 0, {}};
    if (polys.empty())
        return best;

    const FieldSpec field = polys.front().field();
    const std::uint32_t n = polys.front().vars();
    std::vector<std::uint64_t> mods;
    std::uint64_t grid = 1;
    for (const auto& poly : polys) {
        if (poly.p() != field.p || poly.vars() != n)
            throw dimension_error("sequence_rank over mixed domains");
        mods.push_back(checked_pow(field.p, poly.depth() + 1));
        grid = require_product_budget(grid, mods.back(), budget, "rank combination grid");
    }

    best.outcome = {RankOutcome::Kind::exceeds, max_r, {}};
    bool all_infinite = true;
    std::vector<std::uint64_t> lambda(polys.size(), 0);
    for (;;) {
        // Advance the odometer first so lambda = (0, ..., 0) is skipped.
        std::size_t i = polys.size();
        bool done = true;
        while (i > 0) {
            --i;
            if (++lambda[i] < mods[i]) {
                done = false;
                break;
            }
            lambda[i] = 0;
        }
        if (done)
            break;

        NonClassicalPoly sum(field, n);
        std::uint32_t d = 0;
        for (std::size_t j = 0; j < polys.size(); ++j) {
            if (lambda[j] == 0)
                continue;
            NonClassicalPoly scaled = polys[j].times(lambda[j]);
            if (!scaled.is_zero())
                d = std::max(d, scaled.degree());
            sum = sum + scaled;
        }

        if (best.outcome.is_finite() && best.outcome.value == 0)
            break; // nothing below rank 0
        const std::uint32_t cap =
            best.outcome.is_finite() ? best.outcome.value - 1 : max_r;
        RankOutcome outcome = brute_force_rank_d(sum, d, cap, budget);
        if (outcome.kind != RankOutcome::Kind::infinite)
            all_infinite = false;
        if (outcome.is_finite() &&
            (!best.outcome.is_finite() || outcome.value < best.outcome.value)) {
            best.outcome = outcome;
            best.lambda = lambda;
            best.degree = d;
        }
    }
    if (!best.outcome.is_finite() && all_infinite)
        best.outcome = {RankOutcome::Kind::infinite, 0, {}};
    return best;
}

/// Does the sequence have rank >= r? Decided exactly by capping the search
/// at r - 1: every combination must fail to be a function of fewer than r
/// lower-degree polynomials.
inline bool sequence_rank_at_least(const std::vector<NonClassicalPoly>& polys, std::uint32_t r,
                                   std::uint64_t budget = default_budget)
{
    if (r == 0)
        return true;
    return sequence_rank(polys, r - 1, budget).outcome.at_least(r);
}

} // namespace hofa
