#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hofa/affine.hpp"
#include "hofa/common.hpp"
#include "hofa/field.hpp"
#include "hofa/fourier.hpp"
#include "hofa/function.hpp"
#include "hofa/polynomial.hpp"
#include "hofa/rank.hpp"
#include "hofa/rng.hpp"

namespace hofa {

/// An affine-invariant property of boolean functions. `membership` may
/// answer "unknown" (nullopt) where deciding would need more than the budget
/// allows; `members` enumerates every member at a given dimension and is the
/// ground truth for distances. `blow_up_closed` is a declared flag — the
/// harness below spot-checks it rather than trusting it.
struct Property {
    std::string name;
    FieldSpec field;
    bool blow_up_closed = false;
    std::function<std::optional<bool>(const DenseFunction&)> membership;
    std::function<std::vector<DenseFunction>(std::uint32_t)> members;

    explicit Property(FieldSpec f) : field(f) {}

    bool has_enumerator() const { return static_cast<bool>(members); }
};

/// Distance from f to the property together with the nearest member.
struct PropertyDistance {
    double distance = 0.0;
    DenseFunction witness;
};

/// Exact distance min_{g in P} E|f - g| by scanning the enumerator. For
/// boolean f this is the normalized Hamming distance to the nearest member.
inline PropertyDistance distance_to_property_bruteforce(const DenseFunction& f,
                                                        const Property& prop)
{
    if (!prop.has_enumerator())
        throw value_error("property '" + prop.name + "' has no member enumerator");
    if (f.p() != prop.field.p)
        throw dimension_error("function and property live over different primes");
    const std::vector<DenseFunction> members = prop.members(f.n());
    if (members.empty())
        throw value_error("property '" + prop.name + "' has no members at n = " +
                          std::to_string(f.n()));
    PropertyDistance best{2.0, members.front()};
    for (const auto& g : members) {
        const double dist = f.boolean() && g.boolean() ? hamming_distance(f, g)
                                                       : l1_norm(pointwise_sub(f, g));
        if (dist < best.distance) {
            best.distance = dist;
            best.witness = g;
        }
    }
    return best;
}

namespace detail {

// Dedupe key: the exact bit pattern of a boolean table.
inline std::vector<std::uint8_t> table_key(const DenseFunction& f)
{
    std::vector<std::uint8_t> key(f.size());
    for (std::uint64_t x = 0; x < f.size(); ++x)
        key[x] = f.value(x).real() != 0.0 ? 1 : 0;
    return key;
}

} // namespace detail

/// Membership slack for float-valued thresholds: spectral norms are computed
/// by DFT, so exact rationals arrive with rounding of this order.
inline constexpr double spectral_membership_slack = 1e-9;

/// Boolean functions of spectral norm (sum of |Fourier coefficients|) at
/// most s. Membership is decidable at any size by one transform; the member
/// enumerator walks all 2^(2^n) boolean tables and is gated accordingly.
inline Property spectral_norm_property(double s, std::uint64_t budget = default_budget)
{
    Property prop(FieldSpec(2));
    prop.name = "spectral_norm<=" + std::to_string(s);
    prop.blow_up_closed = true;
    prop.membership = [s](const DenseFunction& f) -> std::optional<bool> {
        if (!f.boolean())
            throw value_error("spectral-norm property is about boolean functions");
        return spectral_norm(f) <= s + spectral_membership_slack;
    };
    prop.members = [s, budget](std::uint32_t n) {
        Domain dom(FieldSpec(2), n);
        require_budget(2, dom.size(), budget, "boolean function enumeration");
        std::vector<DenseFunction> out;
        std::vector<std::uint8_t> bits(dom.size(), 0);
        for (;;) {
            DenseFunction f = DenseFunction::from_bits(dom, bits);
            if (spectral_norm(f) <= s + spectral_membership_slack)
                out.push_back(std::move(f));
            std::size_t i = bits.size();
            bool done = true;
            while (i > 0) {
                --i;
                if (++bits[i] < 2) {
                    done = false;
                    break;
                }
                bits[i] = 0;
            }
            if (done)
                break;
        }
        return out;
    };
    return prop;
}

/// The two constant boolean functions. Mostly a reference point for oracles:
/// distance to it is |E f| against 0 and |E(1-f)| against 1.
inline Property constant_functions_property(FieldSpec field)
{
    Property prop(field);
    prop.name = "constants";
    prop.blow_up_closed = true;
    prop.membership = [](const DenseFunction& f) -> std::optional<bool> {
        for (std::uint64_t x = 0; x < f.size(); ++x)
            if (f.value(x) != f.value(0))
                return false;
        return true;
    };
    prop.members = [field](std::uint32_t n) {
        Domain dom(field, n);
        std::vector<DenseFunction> out;
        out.push_back(DenseFunction::constant(dom, 0.0));
        out.push_back(DenseFunction::constant(dom, 1.0));
        return out;
    };
    return prop;
}

/// Functions Γ(P_1 + γ_1, ..., P_c + γ_c) where P_i is a classical
/// polynomial of degree <= degrees[i] with zero shift, γ_i ranges over F_p
/// (restoring closure under affine composition, which zero-shift cores alone
/// lack), and the core sequence has rank >= min_rank. Γ is a {0,1} table
/// over F_p^c value tuples, first polynomial least significant. Rank and
/// fibers ignore the γ's, so the filter acts on cores only.
inline Property degree_structural_property(FieldSpec field, std::vector<std::uint32_t> degrees,
                                           std::uint32_t min_rank,
                                           std::vector<std::uint8_t> gamma_table,
                                           std::uint64_t budget = default_budget)
{
    const std::size_t c = degrees.size();
    if (c == 0)
        throw value_error("degree-structural property needs at least one polynomial slot");
    if (gamma_table.size() != checked_pow(field.p, static_cast<std::uint32_t>(c)))
        throw dimension_error("gamma table must have p^c entries");
    for (auto v : gamma_table)
        if (v > 1)
            throw value_error("gamma table entries must be 0 or 1");

    Property prop(field);
    prop.name = "degree_structural(c=" + std::to_string(c) + ",r=" + std::to_string(min_rank) + ")";
    prop.blow_up_closed = min_rank == 0;

    auto enumerate = [field, degrees, min_rank, gamma_table, budget, c](std::uint32_t n) {
        std::vector<std::vector<NonClassicalPoly>> pools;
        std::uint64_t tuples = 1;
        for (auto d : degrees) {
            pools.push_back(enumerate_classical_polys(field, n, d, budget, /*include_zero=*/true));
            tuples = require_product_budget(tuples, pools.back().size(), budget,
                                            "degree-structural tuple enumeration");
        }
        std::map<std::vector<std::uint8_t>, DenseFunction> seen;
        Domain dom(field, n);
        std::vector<std::size_t> pick(c, 0);
        for (;;) {
            std::vector<NonClassicalPoly> cores;
            cores.reserve(c);
            for (std::size_t i = 0; i < c; ++i)
                cores.push_back(pools[i][pick[i]]);
            if (min_rank == 0 || sequence_rank_at_least(cores, min_rank, budget)) {
                std::vector<std::vector<std::uint8_t>> tables;
                for (const auto& core : cores)
                    tables.push_back(core.classical_table());
                // Every shift vector gamma in F_p^c, last slot fastest.
                std::vector<std::uint8_t> gamma(c, 0);
                for (;;) {
                    std::vector<std::uint8_t> bits(dom.size());
                    for (std::uint64_t x = 0; x < dom.size(); ++x) {
                        std::uint64_t ix = 0, radix = 1;
                        for (std::size_t i = 0; i < c; ++i) {
                            ix += ((tables[i][x] + gamma[i]) % field.p) * radix;
                            radix *= field.p;
                        }
                        bits[x] = gamma_table[ix];
                    }
                    DenseFunction f = DenseFunction::from_bits(dom, bits);
                    seen.try_emplace(detail::table_key(f), std::move(f));
                    std::size_t gi = c;
                    bool gdone = true;
                    while (gi > 0) {
                        --gi;
                        if (++gamma[gi] < field.p) {
                            gdone = false;
                            break;
                        }
                        gamma[gi] = 0;
                    }
                    if (gdone)
                        break;
                }
            }
            std::size_t i = c;
            bool done = true;
            while (i > 0) {
                --i;
                if (++pick[i] < pools[i].size()) {
                    done = false;
                    break;
                }
                pick[i] = 0;
            }
            if (done)
                break;
        }
        std::vector<DenseFunction> out;
        out.reserve(seen.size());
        for (auto& [key, f] : seen)
            out.push_back(std::move(f));
        return out;
    };

    prop.members = enumerate;
    prop.membership = [enumerate, budget](const DenseFunction& f) -> std::optional<bool> {
        if (!f.boolean())
            throw value_error("degree-structural property is about boolean functions");
        std::vector<DenseFunction> all;
        try {
            all = enumerate(f.n());
        } catch (const budget_error&) {
            return std::nullopt; // not enumerable at this size: unknown, not a guess
        }
        for (const auto& g : all)
            if (hamming_distance(f, g) == 0.0)
                return true;
        return false;
    };
    return prop;
}

/// One harness violation: a member, the map applied to it, and the result
/// that failed the expected closure.
struct PropertyViolation {
    DenseFunction member;
    AffineMap map;
    DenseFunction image;
};

/// Spot-check affine invariance of membership at dimension n: members must
/// stay members under random affine bijections. Returns the first violation
/// found, or nullopt if all checks pass.
inline std::optional<PropertyViolation> check_affine_invariance(const Property& prop,
                                                                std::uint32_t n,
                                                                std::uint64_t samples,
                                                                std::uint64_t seed)
{
    if (!prop.has_enumerator())
        throw value_error("affine-invariance check needs the member enumerator");
    const std::vector<DenseFunction> members = prop.members(n);
    if (members.empty())
        return std::nullopt;
    for (std::uint64_t s = 0; s < samples; ++s) {
        Rng rng = Rng::stream(seed, s);
        const DenseFunction& f = members[rng.below(members.size())];
        const AffineMap a = random_affine_bijection(prop.field, n, rng);
        DenseFunction g = compose_affine(f, a);
        const std::optional<bool> verdict = prop.membership(g);
        if (verdict.has_value() && !*verdict)
            return PropertyViolation{f, a, std::move(g)};
    }
    return std::nullopt;
}

/// Spot-check the declared blow_up_closed flag: members at n, blown up to
/// big_n through random full-row-rank maps, must stay members.
inline std::optional<PropertyViolation> check_blow_up_closed(const Property& prop, std::uint32_t n,
                                                             std::uint32_t big_n,
                                                             std::uint64_t samples,
                                                             std::uint64_t seed)
{
    if (!prop.has_enumerator())
        throw value_error("blow-up closure check needs the member enumerator");
    const std::vector<DenseFunction> members = prop.members(n);
    if (members.empty())
        return std::nullopt;
    for (std::uint64_t s = 0; s < samples; ++s) {
        Rng rng = Rng::stream(seed, s);
        const DenseFunction& f = members[rng.below(members.size())];
        const AffineMap a = random_affine_surjection(prop.field, big_n, n, rng);
        DenseFunction g = compose_affine(f, a);
        const std::optional<bool> verdict = prop.membership(g);
        if (verdict.has_value() && !*verdict)
            return PropertyViolation{f, a, std::move(g)};
    }
    return std::nullopt;
}

/// Look for a member at n_hi whose restriction through some sampled affine
/// embedding F_p^{n_lo} -> F_p^{n_hi} leaves the property. Hereditary
/// properties return nullopt; ranked degree-structural ones are expected to
/// produce a counterexample.
inline std::optional<PropertyViolation> restriction_hereditary_counterexample(
    const Property& prop, std::uint32_t n_hi, std::uint32_t n_lo, std::uint64_t samples,
    std::uint64_t seed)
{
    if (!prop.has_enumerator())
        throw value_error("hereditarity check needs the member enumerator");
    const std::vector<DenseFunction> members = prop.members(n_hi);
    if (members.empty())
        return std::nullopt;
    for (std::uint64_t s = 0; s < samples; ++s) {
        Rng rng = Rng::stream(seed, s);
        const DenseFunction& f = members[rng.below(members.size())];
        const AffineMap a = random_affine_embedding(prop.field, n_lo, n_hi, rng);
        DenseFunction g = compose_affine(f, a);
        const std::optional<bool> verdict = prop.membership(g);
        if (verdict.has_value() && !*verdict)
            return PropertyViolation{f, a, std::move(g)};
    }
    return std::nullopt;
}

} // namespace hofa
