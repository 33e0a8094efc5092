#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "hofa/common.hpp"
#include "hofa/function.hpp"
#include "hofa/gowers.hpp"
#include "hofa/linear_forms.hpp"

namespace hofa {

/// The vector of averages t_L(f) over a fixed list of affine linear-form
/// systems. Two functions at possibly different dimensions can be compared
/// through their profiles: these averages are exactly what restriction-based
/// observation can see, and they are invariant under blowing f up.
struct TProfile {
    std::vector<LinearFormSystem> systems;
    std::vector<cplx> values;
};

inline TProfile compute_t_profile(const DenseFunction& f,
                                  const std::vector<LinearFormSystem>& systems,
                                  std::uint64_t budget = default_budget, unsigned threads = 1)
{
    TProfile out;
    out.systems = systems;
    out.values.reserve(systems.size());
    for (const auto& sys : systems)
        out.values.push_back(t_exact(f, sys, budget, threads));
    return out;
}

/// Profile over the canonical affine systems with at most `max_vars`
/// variables and `max_forms` forms.
inline TProfile compute_canonical_profile(const DenseFunction& f, std::uint32_t max_vars,
                                          std::uint32_t max_forms,
                                          std::uint64_t budget = default_budget,
                                          unsigned threads = 1)
{
    return compute_t_profile(
        f, canonical_affine_systems(f.domain().field(), max_vars, max_forms, budget), budget,
        threads);
}

/// Sup distance between two profiles over the same system list.
inline double profile_distance(const TProfile& a, const TProfile& b)
{
    if (a.systems.size() != b.systems.size())
        throw dimension_error("profiles cover different system lists");
    double worst = 0.0;
    for (std::size_t i = 0; i < a.systems.size(); ++i) {
        if (!(a.systems[i] == b.systems[i]))
            throw dimension_error("profiles cover different system lists");
        worst = std::max(worst, std::abs(a.values[i] - b.values[i]));
    }
    return worst;
}

} // namespace hofa
