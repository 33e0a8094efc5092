#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <vector>

#include "hofa/common.hpp"
#include "hofa/factor.hpp"
#include "hofa/function.hpp"
#include "hofa/gowers.hpp"
#include "hofa/polynomial.hpp"

namespace hofa {

/// f = f1 + f2 + f3 with f1 = E[f | B] structured along a polynomial factor,
/// f2 = 0 (this decomposition routine trades no L2 slack for simplicity),
/// and f3 = f - f1 the residual. `energies` logs ||E[f|B]||_2^2 after each
/// refinement; `residual_correlation` is the best remaining phase
/// correlation, and `partial` is set when the complexity cap stopped the
/// loop before the correlation dropped below eta.
struct Decomposition {
    DenseFunction f1;
    DenseFunction f2;
    DenseFunction f3;
    PolyFactor factor;
    std::vector<double> energies;
    double residual_correlation = 0.0;
    double measured_u_power = 0.0;
    bool partial = false;
};

namespace detail {

inline double correlation(const DenseFunction& g, const DenseFunction& phase)
{
    cplx s = 0.0;
    for (std::uint64_t x = 0; x < g.size(); ++x)
        s += g.value(x) * std::conj(phase.value(x));
    return std::abs(s) / static_cast<double>(g.size());
}

} // namespace detail

/// Energy-increment decomposition against degree-<= d phase polynomials.
/// While some phase e(P) has |<f - E[f|B], e(P)>| > eta, the maximizing P
/// (earliest in enumeration order on ties) joins the factor; each step grows
/// the structured energy by more than eta^2, so at most ceil(1/eta^2) steps
/// run. `max_complexity` is a hard cap; hitting it flags a partial result.
inline Decomposition energy_increment_decompose(const DenseFunction& f, std::uint32_t d,
                                                double eta, std::size_t max_complexity = 16,
                                                std::uint64_t budget = default_budget)
{
    if (eta <= 0.0)
        throw value_error("energy increment needs eta > 0");
    const FieldSpec field = f.domain().field();
    const std::vector<NonClassicalPoly> candidates =
        enumerate_classical_polys(field, f.n(), d, budget, /*include_zero=*/true);
    std::vector<DenseFunction> phases;
    phases.reserve(candidates.size());
    for (const auto& poly : candidates)
        phases.push_back(exponential(poly));

    PolyFactor factor(field, f.n());
    DenseFunction f1 = conditional_expectation(f, factor);
    std::vector<double> energies{l2_norm(f1) * l2_norm(f1)};
    double best_corr = 0.0;
    bool partial = false;

    for (;;) {
        DenseFunction residual = pointwise_sub(f, f1);
        best_corr = 0.0;
        std::size_t best_ix = 0;
        for (std::size_t i = 0; i < candidates.size(); ++i) {
            const double c = detail::correlation(residual, phases[i]);
            if (c > best_corr) {
                best_corr = c;
                best_ix = i;
            }
        }
        if (best_corr <= eta)
            break;
        if (factor.complexity() >= max_complexity) {
            partial = true;
            break;
        }
        factor.add(candidates[best_ix]);
        f1 = conditional_expectation(f, factor);
        energies.push_back(l2_norm(f1) * l2_norm(f1));
    }

    DenseFunction f3 = pointwise_sub(f, f1);
    Decomposition out{std::move(f1),
                      DenseFunction::constant(f.domain(), 0.0),
                      std::move(f3),
                      std::move(factor),
                      std::move(energies),
                      best_corr,
                      0.0,
                      partial};
    out.measured_u_power = gowers_u_power(out.f3, d + 1, budget);
    return out;
}

} // namespace hofa
