#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "hofa/common.hpp"
#include "hofa/field.hpp"

namespace hofa {

using LinearForm = std::vector<std::uint8_t>; // coefficients lambda_1..lambda_k

/// A finite system of distinct linear forms in k variables over F_p. Form
/// L = (l_1..l_k) sends (x_1..x_k) in (F_p^n)^k to sum_j l_j x_j. A system
/// is affine when every form has first coefficient 1.
class LinearFormSystem {
public:
    LinearFormSystem(FieldSpec field, std::uint32_t k, std::vector<LinearForm> forms)
        : field_(field), k_(k), forms_(std::move(forms))
    {
        if (forms_.empty())
            throw value_error("linear-form system needs at least one form");
        for (const auto& f : forms_) {
            if (f.size() != k_)
                throw dimension_error("linear form has " + std::to_string(f.size()) +
                                      " coefficients, system has " + std::to_string(k_) + " variables");
            for (auto v : f)
                if (v >= field_.p)
                    throw value_error("linear-form coefficient " + std::to_string(v) +
                                      " not reduced mod " + std::to_string(field_.p));
        }
        for (std::size_t i = 0; i < forms_.size(); ++i)
            for (std::size_t j = i + 1; j < forms_.size(); ++j)
                if (forms_[i] == forms_[j])
                    throw value_error("linear-form system contains a repeated form");
    }

    std::uint32_t p() const { return field_.p; }
    const FieldSpec& field() const { return field_; }
    std::uint32_t variables() const { return k_; }
    std::uint32_t form_count() const { return static_cast<std::uint32_t>(forms_.size()); }
    const std::vector<LinearForm>& forms() const { return forms_; }

    bool is_affine() const
    {
        for (const auto& f : forms_)
            if (f[0] != 1)
                return false;
        return true;
    }

    bool operator==(const LinearFormSystem& o) const
    {
        return field_.p == o.field_.p && k_ == o.k_ && forms_ == o.forms_;
    }
    bool operator<(const LinearFormSystem& o) const
    {
        if (k_ != o.k_)
            return k_ < o.k_;
        return forms_ < o.forms_;
    }

    std::string serialize() const
    {
        std::ostringstream out;
        out << k_ << '\n';
        for (const auto& f : forms_)
            out << digits_to_string(f) << '\n';
        return out.str();
    }

private:
    FieldSpec field_;
    std::uint32_t k_;
    std::vector<LinearForm> forms_;
};

inline LinearFormSystem parse_linear_form_system(const std::string& text, FieldSpec field)
{
    std::istringstream in(text);
    std::uint32_t k;
    if (!(in >> k))
        throw parse_error("linear-form system must start with the variable count k");
    std::vector<LinearForm> forms;
    std::string row;
    while (in >> row) {
        if (row.size() != k)
            throw parse_error("linear form '" + row + "' has " + std::to_string(row.size()) +
                              " digits, expected " + std::to_string(k));
        forms.push_back(string_to_digits(row, field.p));
    }
    return LinearFormSystem(field, k, std::move(forms));
}

/// The parallelepiped system in d+1 variables: one form x_0 + sum_{i in I} x_i
/// per subset I of {1..d}, 2^d forms total. Its averages are the 2^d-th powers
/// of the Gowers uniformity norms.
inline LinearFormSystem cube_system(FieldSpec field, std::uint32_t d)
{
    if (d == 0)
        throw value_error("cube system needs order d >= 1");
    if (d >= 20)
        throw budget_error("cube system of order " + std::to_string(d) + " has 2^" + std::to_string(d) +
                           " forms; refusing");
    std::vector<LinearForm> forms;
    forms.reserve(1u << d);
    for (std::uint32_t mask = 0; mask < (1u << d); ++mask) {
        LinearForm f(d + 1, 0);
        f[0] = 1;
        for (std::uint32_t i = 0; i < d; ++i)
            if (mask & (1u << i))
                f[i + 1] = 1;
        forms.push_back(std::move(f));
    }
    return LinearFormSystem(field, d + 1, std::move(forms));
}

/// Canonical representative of a system under (a) reordering of the forms and
/// (b) permutations of variables 2..k. Variable 1 is pinned because it plays
/// the affine role (coefficient 1 in every affine form).
inline LinearFormSystem canonicalize_system(const LinearFormSystem& sys)
{
    const std::uint32_t k = sys.variables();
    std::vector<std::uint32_t> perm(k);
    std::iota(perm.begin(), perm.end(), 0);
    std::vector<LinearForm> best;
    do {
        std::vector<LinearForm> candidate;
        candidate.reserve(sys.forms().size());
        for (const auto& f : sys.forms()) {
            LinearForm g(k);
            for (std::uint32_t j = 0; j < k; ++j)
                g[perm[j]] = f[j];
            candidate.push_back(std::move(g));
        }
        std::sort(candidate.begin(), candidate.end());
        if (best.empty() || candidate < best)
            best = std::move(candidate);
    } while (std::next_permutation(perm.begin() + 1, perm.end()));
    return LinearFormSystem(sys.field(), k, std::move(best));
}

/// All canonical affine systems with at most `max_forms` forms in at most
/// `max_vars` variables. Systems where some variable beyond the first goes
/// unused are skipped (they are equivalent to a system in fewer variables).
inline std::vector<LinearFormSystem> canonical_affine_systems(FieldSpec field, std::uint32_t max_vars,
                                                              std::uint32_t max_forms,
                                                              std::uint64_t budget = default_budget)
{
    std::set<LinearFormSystem> seen;
    for (std::uint32_t k = 1; k <= max_vars; ++k) {
        // Affine forms in k variables: first coefficient 1, the rest free.
        require_budget(field.p, k - 1, budget, "affine form pool");
        std::uint64_t pool_size = 1;
        for (std::uint32_t i = 0; i + 1 < k; ++i)
            pool_size *= field.p;
        std::vector<LinearForm> pool;
        pool.reserve(pool_size);
        for (std::uint64_t idx = 0; idx < pool_size; ++idx) {
            LinearForm f(k);
            f[0] = 1;
            std::uint64_t rest = idx;
            for (std::uint32_t j = 1; j < k; ++j) {
                f[j] = static_cast<std::uint8_t>(rest % field.p);
                rest /= field.p;
            }
            pool.push_back(std::move(f));
        }
        const std::uint32_t take_max =
            std::min<std::uint32_t>(max_forms, static_cast<std::uint32_t>(pool.size()));
        // Walk all subsets of the pool of size 1..take_max via an index odometer.
        std::vector<std::uint32_t> pick;
        std::uint64_t visited = 0;
        auto visit = [&](const std::vector<std::uint32_t>& idxs) {
            if (++visited > budget)
                throw budget_error("canonical system enumeration exceeded budget " +
                                   std::to_string(budget));
            std::vector<LinearForm> forms;
            forms.reserve(idxs.size());
            for (auto i : idxs)
                forms.push_back(pool[i]);
            // Skip systems that ignore one of the variables 2..k.
            for (std::uint32_t var = 1; var < k; ++var) {
                bool used = false;
                for (const auto& f : forms)
                    if (f[var] != 0)
                        used = true;
                if (!used)
                    return;
            }
            seen.insert(canonicalize_system(LinearFormSystem(field, k, std::move(forms))));
        };
        auto recurse = [&](auto&& self, std::uint32_t next) -> void {
            if (!pick.empty())
                visit(pick);
            if (pick.size() == take_max)
                return;
            for (std::uint32_t i = next; i < pool.size(); ++i) {
                pick.push_back(i);
                self(self, i + 1);
                pick.pop_back();
            }
        };
        recurse(recurse, 0);
    }
    return std::vector<LinearFormSystem>(seen.begin(), seen.end());
}

} // namespace hofa
