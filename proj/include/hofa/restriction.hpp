#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <vector>

#include "hofa/affine.hpp"
#include "hofa/common.hpp"
#include "hofa/field.hpp"
#include "hofa/function.hpp"
#include "hofa/rng.hpp"

namespace hofa {

/// Distribution of the pattern f∘A over affine embeddings A of F_p^k into
/// f's domain. Supported for functions with finitely many distinct values in
/// practice — here, boolean ones — keyed by the full value table of the
/// restriction in point order.
struct RestrictionDistribution {
    std::uint32_t p = 2;
    std::uint32_t k = 0;
    std::uint64_t weight = 0; // embeddings counted (all of them, or samples)
    std::map<std::vector<std::uint8_t>, std::uint64_t> counts;

    double probability(const std::vector<std::uint8_t>& key) const
    {
        auto it = counts.find(key);
        return it == counts.end() ? 0.0 : static_cast<double>(it->second) / weight;
    }

    std::size_t support_size() const { return counts.size(); }
};

namespace detail {

inline std::vector<std::uint8_t> restriction_key(const DenseFunction& f, const AffineMap& a)
{
    const std::vector<std::uint64_t> ix = a.index_table();
    std::vector<std::uint8_t> key(ix.size());
    for (std::size_t i = 0; i < ix.size(); ++i)
        key[i] = f.value(ix[i]).real() != 0.0 ? 1 : 0;
    return key;
}

inline void require_restrictable(const DenseFunction& f, std::uint32_t k)
{
    if (!f.boolean())
        throw value_error("restriction distributions are tabulated for boolean functions");
    if (k > f.n())
        throw dimension_error("cannot embed " + std::to_string(k) + " dimensions into " +
                              std::to_string(f.n()));
}

} // namespace detail

/// Exact distribution: every affine embedding F_p^k -> F_p^n once.
inline RestrictionDistribution exact_restriction_distribution(const DenseFunction& f,
                                                              std::uint32_t k,
                                                              std::uint64_t budget = default_budget)
{
    detail::require_restrictable(f, k);
    RestrictionDistribution dist;
    dist.p = f.p();
    dist.k = k;
    for_each_affine_embedding(f.domain().field(), k, f.n(), budget, [&](const AffineMap& a) {
        ++dist.counts[detail::restriction_key(f, a)];
        ++dist.weight;
    });
    return dist;
}

/// Monte Carlo distribution: `samples` embeddings drawn uniformly.
inline RestrictionDistribution empirical_restriction_distribution(const DenseFunction& f,
                                                                  std::uint32_t k,
                                                                  std::uint64_t samples,
                                                                  std::uint64_t seed)
{
    detail::require_restrictable(f, k);
    RestrictionDistribution dist;
    dist.p = f.p();
    dist.k = k;
    for (std::uint64_t s = 0; s < samples; ++s) {
        Rng rng = Rng::stream(seed, s);
        const AffineMap a = random_affine_embedding(f.domain().field(), k, f.n(), rng);
        ++dist.counts[detail::restriction_key(f, a)];
        ++dist.weight;
    }
    return dist;
}

/// Total variation distance (1/2) sum |p_1 - p_2| over the union of supports.
inline double statistical_distance(const RestrictionDistribution& a,
                                   const RestrictionDistribution& b)
{
    if (a.p != b.p || a.k != b.k)
        throw dimension_error("statistical distance between distributions over different "
                              "pattern spaces");
    if (a.weight == 0 || b.weight == 0)
        throw value_error("statistical distance of an empty distribution");
    double total = 0.0;
    auto ia = a.counts.begin();
    auto ib = b.counts.begin();
    while (ia != a.counts.end() || ib != b.counts.end()) {
        double pa = 0.0, pb = 0.0;
        if (ib == b.counts.end() || (ia != a.counts.end() && ia->first < ib->first)) {
            pa = static_cast<double>(ia->second) / a.weight;
            ++ia;
        } else if (ia == a.counts.end() || ib->first < ia->first) {
            pb = static_cast<double>(ib->second) / b.weight;
            ++ib;
        } else {
            pa = static_cast<double>(ia->second) / a.weight;
            pb = static_cast<double>(ib->second) / b.weight;
            ++ia;
            ++ib;
        }
        total += std::abs(pa - pb);
    }
    return 0.5 * total;
}

} // namespace hofa
