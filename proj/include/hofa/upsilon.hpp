#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "hofa/affine.hpp"
#include "hofa/common.hpp"
#include "hofa/function.hpp"
#include "hofa/gowers.hpp"
#include "hofa/rng.hpp"

namespace hofa {

/// Result of minimizing ||f - g∘A||_{U^d} over affine bijections A.
struct UpsilonResult {
    double value = std::numeric_limits<double>::infinity();
    AffineMap witness;
    std::uint64_t evaluated = 0; // objective evaluations spent

    explicit UpsilonResult(AffineMap start) : witness(std::move(start)) {}
};

namespace detail {

inline double alignment_objective(const DenseFunction& f, const DenseFunction& g,
                                  const AffineMap& a, std::uint32_t d, std::uint64_t budget)
{
    return gowers_norm_exact(pointwise_sub(f, compose_affine(g, a)), d, budget);
}

// All single-step neighbors of an invertible map: row transvections, row
// swaps, row scalings (p > 2), and shift increments. These generate the
// affine group, so repeated local moves can in principle reach any bijection.
template <class F>
void for_each_elementary_move(const AffineMap& a, F&& visit)
{
    const FieldSpec field = a.field();
    const std::uint32_t n = a.in_dim();
    const std::uint32_t p = field.p;
    for (std::uint32_t i = 0; i < n; ++i)
        for (std::uint32_t j = 0; j < n; ++j) {
            if (i == j)
                continue;
            for (std::uint32_t u = 1; u < p; ++u) {
                std::vector<std::uint8_t> m = a.matrix();
                for (std::uint32_t c = 0; c < n; ++c)
                    m[i * n + c] = static_cast<std::uint8_t>(
                        field.add(m[i * n + c], field.mul(u, m[j * n + c])));
                visit(AffineMap(field, n, n, std::move(m), a.shift()));
            }
        }
    for (std::uint32_t i = 0; i < n; ++i)
        for (std::uint32_t j = i + 1; j < n; ++j) {
            std::vector<std::uint8_t> m = a.matrix();
            for (std::uint32_t c = 0; c < n; ++c)
                std::swap(m[i * n + c], m[j * n + c]);
            visit(AffineMap(field, n, n, std::move(m), a.shift()));
        }
    for (std::uint32_t i = 0; i < n; ++i)
        for (std::uint32_t u = 2; u < p; ++u) {
            std::vector<std::uint8_t> m = a.matrix();
            for (std::uint32_t c = 0; c < n; ++c)
                m[i * n + c] = static_cast<std::uint8_t>(field.mul(u, m[i * n + c]));
            visit(AffineMap(field, n, n, std::move(m), a.shift()));
        }
    for (std::uint32_t i = 0; i < n; ++i)
        for (std::uint32_t u = 1; u < p; ++u) {
            std::vector<std::uint8_t> c = a.shift();
            c[i] = static_cast<std::uint8_t>(field.add(c[i], u));
            visit(AffineMap(field, n, n, a.matrix(), std::move(c)));
        }
}

inline void require_comparable(const DenseFunction& f, const DenseFunction& g)
{
    if (f.p() != g.p() || f.n() != g.n())
        throw dimension_error("upsilon compares functions on a common domain; blow the "
                              "smaller one up first");
}

} // namespace detail

/// Exact upsilon distance: full scan of the affine group. The witness is the
/// lexicographically first minimizer. Cost is |Aff(F_p^n)| Gowers-power
/// evaluations of p^(n(d+1)) terms each.
inline UpsilonResult upsilon_exact(const DenseFunction& f, const DenseFunction& g, std::uint32_t d,
                                   std::uint64_t budget = default_budget)
{
    detail::require_comparable(f, g);
    const FieldSpec field = f.domain().field();
    require_budget(field.p, static_cast<std::uint64_t>(f.n()) * (d + 1), budget,
                   "upsilon objective");
    UpsilonResult best(AffineMap::identity(field, f.n()));
    for_each_affine_bijection(field, f.n(), budget, [&](const AffineMap& a) {
        const double v = detail::alignment_objective(f, g, a, d, budget);
        ++best.evaluated;
        if (v < best.value) {
            best.value = v;
            best.witness = a;
        }
    });
    return best;
}

/// Heuristic upsilon distance: the identity and any caller-supplied probe
/// maps are scored first, then each restart r < restarts draws a random
/// bijection from its own derived stream and walks downhill through
/// elementary moves until no neighbor improves. The result never beats the
/// exact minimum and is non-increasing in `restarts` for a fixed seed.
inline UpsilonResult upsilon_heuristic(const DenseFunction& f, const DenseFunction& g,
                                       std::uint32_t d, std::uint32_t restarts,
                                       std::uint64_t seed,
                                       const std::vector<AffineMap>& probes = {},
                                       std::uint64_t budget = default_budget)
{
    detail::require_comparable(f, g);
    const FieldSpec field = f.domain().field();
    const std::uint64_t eval_cost = checked_pow(field.p, f.n() * (d + 1));
    std::uint64_t spent = 0;
    auto score = [&](const AffineMap& a, UpsilonResult& out) {
        spent += eval_cost;
        if (spent > budget)
            throw budget_error("upsilon search exceeded budget of " + std::to_string(budget) +
                               " cube evaluations");
        ++out.evaluated;
        return detail::alignment_objective(f, g, a, d, budget);
    };

    UpsilonResult best(AffineMap::identity(field, f.n()));
    best.value = score(best.witness, best);
    for (const auto& probe : probes) {
        if (!probe.is_bijection() || probe.in_dim() != f.n() || probe.p() != field.p)
            throw value_error("upsilon probe map must be a bijection of the common domain");
        const double v = score(probe, best);
        if (v < best.value) {
            best.value = v;
            best.witness = probe;
        }
    }

    for (std::uint32_t r = 0; r < restarts; ++r) {
        Rng rng = Rng::stream(seed, r);
        AffineMap current = random_affine_bijection(field, f.n(), rng);
        double current_value = score(current, best);
        for (;;) {
            AffineMap next = current;
            double next_value = current_value;
            detail::for_each_elementary_move(current, [&](AffineMap neighbor) {
                const double v = score(neighbor, best);
                if (v < next_value) {
                    next_value = v;
                    next = std::move(neighbor);
                }
            });
            if (next_value >= current_value)
                break;
            current = std::move(next);
            current_value = next_value;
        }
        if (current_value < best.value) {
            best.value = current_value;
            best.witness = current;
        }
    }
    return best;
}

/// Cylinder extension of f to an ambient F_p^N through the canonical
/// projection onto the first n coordinates.
inline DenseFunction cylinder_extend(const DenseFunction& f, std::uint32_t big_n)
{
    return compose_affine(f, canonical_projection(f.domain().field(), big_n, f.n()));
}

/// Upsilon across dimensions: both functions are extended to a common
/// ambient F_p^N as cylinders, where alignment happens. Exact variant.
inline UpsilonResult upsilon_cross_exact(const DenseFunction& f, const DenseFunction& g,
                                         std::uint32_t d, std::uint32_t big_n,
                                         std::uint64_t budget = default_budget)
{
    if (f.p() != g.p())
        throw dimension_error("upsilon across different primes");
    if (big_n < f.n() || big_n < g.n())
        throw dimension_error("ambient dimension too small for both functions");
    return upsilon_exact(cylinder_extend(f, big_n), cylinder_extend(g, big_n), d, budget);
}

/// Heuristic variant of the cross-dimension upsilon.
inline UpsilonResult upsilon_cross_heuristic(const DenseFunction& f, const DenseFunction& g,
                                             std::uint32_t d, std::uint32_t big_n,
                                             std::uint32_t restarts, std::uint64_t seed,
                                             const std::vector<AffineMap>& probes = {},
                                             std::uint64_t budget = default_budget)
{
    if (f.p() != g.p())
        throw dimension_error("upsilon across different primes");
    if (big_n < f.n() || big_n < g.n())
        throw dimension_error("ambient dimension too small for both functions");
    return upsilon_heuristic(cylinder_extend(f, big_n), cylinder_extend(g, big_n), d, restarts,
                             seed, probes, budget);
}

} // namespace hofa
