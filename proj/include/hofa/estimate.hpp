#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "hofa/affine.hpp"
#include "hofa/common.hpp"
#include "hofa/factored.hpp"
#include "hofa/field.hpp"
#include "hofa/function.hpp"
#include "hofa/polynomial.hpp"
#include "hofa/property.hpp"
#include "hofa/rng.hpp"
#include "hofa/tprofile.hpp"
#include "hofa/upsilon.hpp"

namespace hofa {

/// A parameter observed through restrictions: evaluate sees only the pattern
/// f∘A on F_p^k and must land in [0, 1].
struct ParameterOracle {
    std::string name;
    std::uint32_t k = 1;
    std::function<double(const DenseFunction&)> evaluate;
};

struct EstimateResult {
    double value = 0.0;
    double standard_error = 0.0;
    std::uint64_t samples = 0;
};

/// Obliviously estimate a parameter: average the oracle over iid uniform
/// affine embeddings F_p^k -> F_p^n. The estimator never looks at f through
/// anything but its random restrictions.
inline EstimateResult oblivious_estimate(const DenseFunction& f, const ParameterOracle& oracle,
                                         std::uint64_t samples, std::uint64_t seed)
{
    if (oracle.k > f.n())
        throw dimension_error("oracle restriction dimension " + std::to_string(oracle.k) +
                              " exceeds the function's " + std::to_string(f.n()));
    if (samples == 0)
        throw value_error("oblivious estimation needs at least one sample");
    double sum = 0.0, sumsq = 0.0;
    for (std::uint64_t s = 0; s < samples; ++s) {
        Rng rng = Rng::stream(seed, s);
        const AffineMap a = random_affine_embedding(f.domain().field(), oracle.k, f.n(), rng);
        const double v = oracle.evaluate(compose_affine(f, a));
        if (!(v >= 0.0 && v <= 1.0))
            throw value_error("oracle '" + oracle.name + "' returned " + std::to_string(v) +
                              " outside [0, 1]");
        sum += v;
        sumsq += v * v;
    }
    EstimateResult out;
    out.samples = samples;
    out.value = sum / static_cast<double>(samples);
    const double var = std::max(0.0, sumsq / static_cast<double>(samples) - out.value * out.value);
    out.standard_error = samples > 1 ? std::sqrt(var / static_cast<double>(samples - 1)) : 0.0;
    return out;
}

/// Blow f up to target_n coordinates through a uniformly random full-row-rank
/// affine map, returning the blown-up function and the witness map.
inline std::pair<DenseFunction, AffineMap> blow_up(const DenseFunction& f, std::uint32_t target_n,
                                                   std::uint64_t seed)
{
    if (target_n < f.n())
        throw dimension_error("blow-up target dimension " + std::to_string(target_n) +
                              " below the function's " + std::to_string(f.n()));
    Rng rng = Rng::stream(seed, 0);
    AffineMap a = random_affine_surjection(f.domain().field(), target_n, f.n(), rng);
    DenseFunction g = compose_affine(f, a);
    return {std::move(g), std::move(a)};
}

/// Degree cutoff d̄(ε, d, p) = max(d, ⌈log(1/ε) / log(p/(p-1))⌉): beyond it a
/// monomial is nonzero with probability at most ε. The ceiling is snapped
/// against exact power comparisons so boundary cases don't ride on log
/// rounding.
inline std::uint32_t d_bar(double eps, std::uint32_t d, std::uint32_t p)
{
    if (!(eps > 0.0 && eps < 1.0))
        throw value_error("d_bar needs 0 < eps < 1");
    FieldSpec field(p); // validates the prime
    const double q = static_cast<double>(p - 1) / p;
    std::uint32_t m =
        static_cast<std::uint32_t>(std::ceil(std::log(1.0 / eps) / std::log(1.0 / q)));
    while (m > 0 && std::pow(q, m - 1) <= eps)
        --m;
    while (std::pow(q, m) > eps)
        ++m;
    return std::max(d, m);
}

/// Γ composed over explicit polynomials and factored polynomials:
///   g(x) = gamma[ index(P_1(x), ..., P_a(x), Q_1(x), ..., Q_b(x)) ]
/// with mixed-radix index, P_1 least significant, each slot contributing its
/// value's numerator modulo p^(depth+1).
inline DenseFunction compose_gamma(FieldSpec field, std::uint32_t n,
                                   const std::vector<double>& gamma,
                                   const std::vector<NonClassicalPoly>& polys,
                                   const std::vector<FactoredPolynomial>& factored)
{
    Domain dom(field, n);
    std::vector<std::vector<std::uint64_t>> digits;
    std::vector<std::uint64_t> radix;
    for (const auto& poly : polys) {
        if (poly.p() != field.p || poly.vars() != n)
            throw dimension_error("composite polynomial lives on a different domain");
        const auto table = poly.value_table();
        std::vector<std::uint64_t> col(dom.size());
        for (std::uint64_t x = 0; x < dom.size(); ++x)
            col[x] = table[x].num;
        digits.push_back(std::move(col));
        radix.push_back(checked_pow(field.p, poly.depth() + 1));
    }
    for (const auto& q : factored) {
        if (q.map.p() != field.p || q.vars() != n)
            throw dimension_error("factored polynomial lives on a different domain");
        std::vector<std::uint64_t> col(dom.size());
        for (std::uint64_t x = 0; x < dom.size(); ++x)
            col[x] = q.evaluate(dom.point(x)).num;
        digits.push_back(std::move(col));
        radix.push_back(checked_pow(field.p, q.monomial.coeff.level));
    }
    std::uint64_t expect = 1;
    for (auto r : radix)
        expect = require_product_budget(expect, r, std::uint64_t(1) << 32, "gamma table size");
    if (gamma.size() != expect)
        throw dimension_error("gamma table has " + std::to_string(gamma.size()) +
                              " entries, composite needs " + std::to_string(expect));

    std::vector<cplx> values(dom.size());
    bool boolean = true;
    for (std::uint64_t x = 0; x < dom.size(); ++x) {
        std::uint64_t ix = 0, scale = 1;
        for (std::size_t i = 0; i < digits.size(); ++i) {
            ix += digits[i][x] * scale;
            scale *= radix[i];
        }
        const double v = gamma[ix];
        if (v != 0.0 && v != 1.0)
            boolean = false;
        values[x] = v;
    }
    return DenseFunction(std::move(dom), std::move(values), boolean);
}

/// Result of freezing high-degree factored polynomials at their value at 0.
struct TruncationResult {
    DenseFunction h;
    std::vector<std::size_t> replaced; // indices into the factored list
    double l1_bound = 0.0;             // (#replaced) * max nonzero probability
};

/// Replace every factored polynomial of degree > cutoff by its constant
/// value at 0, then recompose. The reported bound on ||g - h||_1 counts how
/// often any replaced monomial can deviate from its frozen value; it is the
/// meaningful certificate when the frozen values are 0 (the monomial
/// vanishes at the map's shift) — tests compare against the enumerated
/// distance in exactly that regime.
inline TruncationResult truncate_factored(FieldSpec field, std::uint32_t n,
                                          const std::vector<double>& gamma,
                                          const std::vector<NonClassicalPoly>& polys,
                                          const std::vector<FactoredPolynomial>& factored,
                                          std::uint32_t cutoff)
{
    Domain dom(field, n);
    std::vector<std::size_t> replaced;
    double worst_prob = 0.0;
    // Rebuild the gamma composite with frozen columns standing in for the
    // high-degree factored polynomials.
    std::vector<std::vector<std::uint64_t>> digits;
    std::vector<std::uint64_t> radix;
    for (const auto& poly : polys) {
        const auto table = poly.value_table();
        std::vector<std::uint64_t> col(dom.size());
        for (std::uint64_t x = 0; x < dom.size(); ++x)
            col[x] = table[x].num;
        digits.push_back(std::move(col));
        radix.push_back(checked_pow(field.p, poly.depth() + 1));
    }
    for (std::size_t j = 0; j < factored.size(); ++j) {
        const auto& q = factored[j];
        std::vector<std::uint64_t> col(dom.size());
        if (q.degree() > cutoff) {
            replaced.push_back(j);
            worst_prob = std::max(worst_prob, monomial_nonzero_prob(q.monomial));
            const std::uint64_t frozen = q.value_at_zero().num;
            for (auto& v : col)
                v = frozen;
        } else {
            for (std::uint64_t x = 0; x < dom.size(); ++x)
                col[x] = q.evaluate(dom.point(x)).num;
        }
        digits.push_back(std::move(col));
        radix.push_back(checked_pow(field.p, q.monomial.coeff.level));
    }
    std::uint64_t expect = 1;
    for (auto r : radix)
        expect = require_product_budget(expect, r, std::uint64_t(1) << 32, "gamma table size");
    if (gamma.size() != expect)
        throw dimension_error("gamma table has " + std::to_string(gamma.size()) +
                              " entries, composite needs " + std::to_string(expect));

    std::vector<cplx> values(dom.size());
    bool boolean = true;
    for (std::uint64_t x = 0; x < dom.size(); ++x) {
        std::uint64_t ix = 0, scale = 1;
        for (std::size_t i = 0; i < digits.size(); ++i) {
            ix += digits[i][x] * scale;
            scale *= radix[i];
        }
        const double v = gamma[ix];
        if (v != 0.0 && v != 1.0)
            boolean = false;
        values[x] = v;
    }
    TruncationResult out{DenseFunction(std::move(dom), std::move(values), boolean),
                         std::move(replaced), 0.0};
    out.l1_bound = static_cast<double>(out.replaced.size()) * worst_prob;
    return out;
}

/// A chain of successively blown-up copies of f (so every t-profile along it
/// is exactly the profile of f), with the witness maps.
struct BlowUpSequence {
    std::vector<DenseFunction> funcs;
    std::vector<AffineMap> maps; // maps[i] carries funcs[i-1] (or f) to funcs[i]
};

inline BlowUpSequence blow_up_sequence(const DenseFunction& f,
                                       const std::vector<std::uint32_t>& dims, std::uint64_t seed)
{
    if (dims.empty())
        throw value_error("blow-up sequence needs at least one dimension");
    BlowUpSequence out;
    const DenseFunction* current = &f;
    for (std::size_t i = 0; i < dims.size(); ++i) {
        if (dims[i] < current->n() || (i > 0 && dims[i] <= dims[i - 1]))
            throw dimension_error("blow-up dimensions must increase and start at or above the "
                                  "function's dimension");
        auto [g, a] = blow_up(*current, dims[i], derive_seed(seed, i));
        out.funcs.push_back(std::move(g));
        out.maps.push_back(std::move(a));
        current = &out.funcs.back();
    }
    return out;
}

struct ConvergenceConfig {
    std::uint32_t profile_vars = 3;
    std::uint32_t profile_forms = 3;
    std::vector<std::uint32_t> upsilon_degrees = {2};
    std::uint32_t upsilon_restarts = 1;
    std::uint64_t samples = 2000; // for oblivious fallback when brute force is gated
    std::uint32_t oracle_k = 2;
    std::uint64_t seed = 0;
    std::uint64_t budget = default_budget;
    unsigned threads = 1;
};

/// Everything observable about a candidate convergent sequence: per-element
/// t-profiles, successive cross-dimension upsilon estimates, and per-element
/// parameter values with the largest successive gap flagged.
struct ConvergenceReport {
    std::vector<TProfile> profiles;
    double max_profile_gap = 0.0;
    std::map<std::uint32_t, std::vector<double>> upsilon_values; // degree -> successive values
    std::vector<double> pi_values;
    std::vector<bool> pi_estimated; // true where oblivious estimation stood in
    double max_pi_gap = 0.0;
};

inline ConvergenceReport convergence_report(const std::vector<DenseFunction>& seq,
                                            const ConvergenceConfig& cfg,
                                            const Property* property = nullptr)
{
    if (seq.size() < 2)
        throw value_error("convergence report needs at least two sequence elements");
    ConvergenceReport out;
    for (const auto& f : seq)
        out.profiles.push_back(compute_canonical_profile(f, cfg.profile_vars, cfg.profile_forms,
                                                         cfg.budget, cfg.threads));
    for (std::size_t i = 0; i + 1 < seq.size(); ++i)
        out.max_profile_gap =
            std::max(out.max_profile_gap, profile_distance(out.profiles[i], out.profiles[i + 1]));

    std::uint64_t call = 0;
    for (auto d : cfg.upsilon_degrees) {
        auto& column = out.upsilon_values[d];
        for (std::size_t i = 0; i + 1 < seq.size(); ++i) {
            const std::uint32_t ambient = std::max(seq[i].n(), seq[i + 1].n());
            column.push_back(upsilon_cross_heuristic(seq[i], seq[i + 1], d, ambient,
                                                     cfg.upsilon_restarts,
                                                     derive_seed(cfg.seed, ++call), {},
                                                     cfg.budget)
                                 .value);
        }
    }

    if (property != nullptr) {
        for (const auto& f : seq) {
            try {
                out.pi_values.push_back(distance_to_property_bruteforce(f, *property).distance);
                out.pi_estimated.push_back(false);
            } catch (const budget_error&) {
                // Too big to enumerate members at this size: estimate the
                // same parameter through random k-dimensional restrictions.
                ParameterOracle oracle;
                oracle.name = "distance:" + property->name;
                oracle.k = cfg.oracle_k;
                oracle.evaluate = [property](const DenseFunction& g) {
                    return distance_to_property_bruteforce(g, *property).distance;
                };
                out.pi_values.push_back(
                    oblivious_estimate(f, oracle, cfg.samples, derive_seed(cfg.seed, ++call))
                        .value);
                out.pi_estimated.push_back(true);
            }
        }
        for (std::size_t i = 0; i + 1 < out.pi_values.size(); ++i)
            out.max_pi_gap =
                std::max(out.max_pi_gap, std::abs(out.pi_values[i] - out.pi_values[i + 1]));
    }
    return out;
}

/// Accept/reject plumbing on top of the estimator: accept when the estimated
/// parameter is below (near + far)/2. The sample count comes from Hoeffding:
/// with t = (far - near)/2,  P(wrong side) <= 2 exp(-2 N t^2) <= 1 - confidence.
struct TesterResult {
    bool accept = false;
    double estimate = 0.0;
    double threshold = 0.0;
    std::uint64_t samples = 0;
};

inline std::uint64_t hoeffding_samples(double gap, double confidence = 2.0 / 3.0)
{
    if (!(gap > 0.0 && gap < 1.0))
        throw value_error("tester needs a separation gap in (0, 1)");
    if (!(confidence > 0.0 && confidence < 1.0))
        throw value_error("tester confidence must sit in (0, 1)");
    const double t = gap / 2.0;
    const double n = std::log(2.0 / (1.0 - confidence)) / (2.0 * t * t);
    return static_cast<std::uint64_t>(std::ceil(n));
}

inline TesterResult tester_from_estimator(const DenseFunction& f, const ParameterOracle& oracle,
                                          double near, double far, std::uint64_t seed,
                                          double confidence = 2.0 / 3.0)
{
    if (!(near < far))
        throw value_error("tester thresholds must satisfy near < far");
    const std::uint64_t samples = hoeffding_samples(far - near, confidence);
    const EstimateResult est = oblivious_estimate(f, oracle, samples, seed);
    TesterResult out;
    out.samples = samples;
    out.estimate = est.value;
    out.threshold = 0.5 * (near + far);
    out.accept = est.value < out.threshold;
    return out;
}

} // namespace hofa
