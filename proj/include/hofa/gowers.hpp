#pragma once

#include <cmath>
#include <cstdint>
#include <future>
#include <vector>

#include "hofa/common.hpp"
#include "hofa/function.hpp"
#include "hofa/linear_forms.hpp"
#include "hofa/rng.hpp"

namespace hofa {

struct McEstimate {
    cplx value;
    double std_error; // sqrt of (component-wise sample variance)/samples
    std::uint64_t samples;
};

namespace detail {

// Evaluate every form of `sys` on the current variable assignment, calling
// leaf() with the vector of form points. Points are built incrementally: one
// index addition per form per level, so the total work is
// ~ form_count * size^variables index operations.
template <class Leaf>
void t_recurse(const Domain& dom, const LinearFormSystem& sys, std::uint32_t var,
               std::vector<std::uint64_t>& partial, Leaf&& leaf)
{
    const std::uint32_t k = sys.variables();
    const std::uint32_t m = sys.form_count();
    if (var == k) {
        leaf(partial);
        return;
    }
    // Save this level's slice of the partial sums.
    std::vector<std::uint64_t> saved(partial.begin(), partial.begin() + m);
    for (std::uint64_t x = 0; x < dom.size(); ++x) {
        for (std::uint32_t i = 0; i < m; ++i) {
            const std::uint32_t lambda = sys.forms()[i][var];
            partial[i] = lambda == 0 ? saved[i] : dom.add(saved[i], dom.scale(lambda, x));
        }
        t_recurse(dom, sys, var + 1, partial, leaf);
    }
    for (std::uint32_t i = 0; i < m; ++i)
        partial[i] = saved[i];
}

} // namespace detail

/// Exact average t_L(f) = E_{x_1..x_k} prod_L f(L(x)). Work is p^(nk) tuples
/// and must fit the budget. The outer variable is split into fixed per-value
/// slots combined by pairwise summation, so thread count never changes bits.
inline cplx t_exact(const DenseFunction& f, const LinearFormSystem& sys,
                    std::uint64_t budget = default_budget, unsigned threads = 1)
{
    if (sys.p() != f.p())
        throw dimension_error("linear-form system over F_" + std::to_string(sys.p()) +
                              " applied to a function over F_" + std::to_string(f.p()));
    const Domain& dom = f.domain();
    require_budget(dom.size(), sys.variables(), budget, "t_exact tuple enumeration");

    const std::uint32_t m = sys.form_count();
    std::vector<cplx> slot(dom.size());
    auto run_range = [&](std::uint64_t lo, std::uint64_t hi) {
        std::vector<std::uint64_t> partial(m);
        for (std::uint64_t x1 = lo; x1 < hi; ++x1) {
            for (std::uint32_t i = 0; i < m; ++i) {
                const std::uint32_t lambda = sys.forms()[i][0];
                partial[i] = dom.scale(lambda, x1);
            }
            cplx acc = 0;
            detail::t_recurse(dom, sys, 1, partial, [&](const std::vector<std::uint64_t>& pts) {
                cplx prod = f.value(pts[0]);
                for (std::uint32_t i = 1; i < m; ++i)
                    prod *= f.value(pts[i]);
                acc += prod;
            });
            slot[x1] = acc;
        }
    };
    if (threads <= 1 || dom.size() < 2 * threads) {
        run_range(0, dom.size());
    } else {
        std::vector<std::future<void>> tasks;
        const std::uint64_t chunk = (dom.size() + threads - 1) / threads;
        for (unsigned t = 0; t < threads; ++t) {
            const std::uint64_t lo = t * chunk, hi = std::min<std::uint64_t>(lo + chunk, dom.size());
            if (lo < hi)
                tasks.push_back(std::async(std::launch::async, run_range, lo, hi));
        }
        for (auto& task : tasks)
            task.get();
    }
    const cplx total = pairwise_sum<cplx>(dom.size(), [&](std::uint64_t i) { return slot[i]; });
    double denom = 1.0;
    for (std::uint32_t j = 0; j < sys.variables(); ++j)
        denom *= static_cast<double>(dom.size());
    return total / denom;
}

/// Monte Carlo estimate of t_L(f): unbiased sample mean over uniform variable
/// tuples, with empirical standard error. Sample s draws from stream(seed, s),
/// so the result depends only on (seed, samples), not on work partitioning.
inline McEstimate t_mc(const DenseFunction& f, const LinearFormSystem& sys, std::uint64_t samples,
                       std::uint64_t seed)
{
    if (sys.p() != f.p())
        throw dimension_error("linear-form system over F_" + std::to_string(sys.p()) +
                              " applied to a function over F_" + std::to_string(f.p()));
    if (samples == 0)
        throw value_error("t_mc needs at least one sample");
    const Domain& dom = f.domain();
    const std::uint32_t k = sys.variables(), m = sys.form_count();
    cplx sum = 0;
    double sum_re2 = 0, sum_im2 = 0;
    std::vector<std::uint64_t> xs(k);
    for (std::uint64_t s = 0; s < samples; ++s) {
        Rng rng = Rng::stream(seed, s);
        for (auto& x : xs)
            x = rng.below(dom.size());
        cplx prod = 1.0;
        for (std::uint32_t i = 0; i < m; ++i) {
            std::uint64_t pt = 0;
            for (std::uint32_t j = 0; j < k; ++j) {
                const std::uint32_t lambda = sys.forms()[i][j];
                if (lambda)
                    pt = dom.add(pt, dom.scale(lambda, xs[j]));
            }
            prod *= f.value(pt);
        }
        sum += prod;
        sum_re2 += prod.real() * prod.real();
        sum_im2 += prod.imag() * prod.imag();
    }
    const cplx mean = sum / static_cast<double>(samples);
    double stderr_val = 0;
    if (samples > 1) {
        const double ns = static_cast<double>(samples);
        const double var_re = std::max(0.0, (sum_re2 - ns * mean.real() * mean.real()) / (ns - 1));
        const double var_im = std::max(0.0, (sum_im2 - ns * mean.imag() * mean.imag()) / (ns - 1));
        stderr_val = std::sqrt((var_re + var_im) / ns);
    }
    return McEstimate{mean, stderr_val, samples};
}

namespace detail {

// 64-bit word whose bit x moves to position x ^ h for h < 64. Bit b of h
// swaps the two halves of every 2^(b+1)-aligned group, which is a masked
// shift pair per level.
inline std::uint64_t xor_permute_word(std::uint64_t w, std::uint32_t h)
{
    static constexpr std::uint64_t mask[6] = {
        0x5555555555555555ull, 0x3333333333333333ull, 0x0f0f0f0f0f0f0f0full,
        0x00ff00ff00ff00ffull, 0x0000ffff0000ffffull, 0x00000000ffffffffull,
    };
    for (std::uint32_t b = 0; b < 6; ++b)
        if (h & (1u << b)) {
            const std::uint32_t s = 1u << b;
            w = ((w & mask[b]) << s) | ((w >> s) & mask[b]);
        }
    return w;
}

// Packed {0,1} table on F_2^n. Bits beyond the table size stay zero.
struct PackedBits {
    std::vector<std::uint64_t> words;
    std::uint64_t size;

    double density() const
    {
        std::uint64_t ones = 0;
        for (auto w : words)
            ones += static_cast<std::uint64_t>(__builtin_popcountll(w));
        return static_cast<double>(ones) / static_cast<double>(size);
    }
};

// (Delta_h f)(x) = f(x^h) & f(x) on packed tables.
inline PackedBits packed_derivative(const PackedBits& g, std::uint64_t h)
{
    PackedBits out{std::vector<std::uint64_t>(g.words.size()), g.size};
    const std::uint64_t h_word = h >> 6;
    const std::uint32_t h_low = static_cast<std::uint32_t>(h & 63);
    for (std::uint64_t w = 0; w < g.words.size(); ++w)
        out.words[w] = xor_permute_word(g.words[w ^ h_word], h_low) & g.words[w];
    return out;
}

inline double packed_u_power(const PackedBits& g, std::uint32_t d)
{
    if (d == 1) {
        const double m = g.density();
        return m * m;
    }
    std::vector<double> per_h(g.size);
    for (std::uint64_t h = 0; h < g.size; ++h)
        per_h[h] = packed_u_power(packed_derivative(g, h), d - 1);
    const double s = pairwise_sum<double>(g.size, [&](std::uint64_t i) { return per_h[i]; });
    return s / static_cast<double>(g.size);
}

inline double complex_u_power(const Domain& dom, const std::vector<cplx>& g, std::uint32_t d,
                              unsigned threads)
{
    if (d == 1) {
        const cplx mean = pairwise_sum<cplx>(g.size(), [&](std::uint64_t i) { return g[i]; }) /
                          static_cast<double>(g.size());
        return std::norm(mean);
    }
    std::vector<double> per_h(dom.size());
    auto run_range = [&](std::uint64_t lo, std::uint64_t hi) {
        std::vector<cplx> deriv(dom.size());
        for (std::uint64_t h = lo; h < hi; ++h) {
            for (std::uint64_t x = 0; x < dom.size(); ++x)
                deriv[x] = g[dom.add(x, h)] * std::conj(g[x]);
            per_h[h] = complex_u_power(dom, deriv, d - 1, 1);
        }
    };
    if (threads <= 1 || dom.size() < 2 * threads) {
        run_range(0, dom.size());
    } else {
        std::vector<std::future<void>> tasks;
        const std::uint64_t chunk = (dom.size() + threads - 1) / threads;
        for (unsigned t = 0; t < threads; ++t) {
            const std::uint64_t lo = t * chunk, hi = std::min<std::uint64_t>(lo + chunk, dom.size());
            if (lo < hi)
                tasks.push_back(std::async(std::launch::async, run_range, lo, hi));
        }
        for (auto& task : tasks)
            task.get();
    }
    const double s = pairwise_sum<double>(dom.size(), [&](std::uint64_t i) { return per_h[i]; });
    return s / static_cast<double>(dom.size());
}

} // namespace detail

/// The 2^d-th power of the uniformity norm: the average of the d-fold
/// multiplicative-derivative cube of f. Computed by the recursion
/// S_d(f) = E_h S_{d-1}(Delta_h f) with S_1(g) = |E g|^2; always real and
/// nonnegative up to rounding. Work is ~ p^(nd), gated as p^(n(d+1)).
inline double gowers_u_power(const DenseFunction& f, std::uint32_t d,
                             std::uint64_t budget = default_budget, unsigned threads = 1)
{
    if (d == 0)
        throw value_error("uniformity norms start at order d = 1");
    require_budget(f.size(), d + 1, budget, "uniformity norm recursion");
    if (f.has_bits()) {
        detail::PackedBits bits{f.bits(), f.size()};
        return detail::packed_u_power(bits, d);
    }
    return detail::complex_u_power(f.domain(), f.values(), d, threads);
}

/// ||f||_{U^d} = S_d(f)^(1/2^d). For real-valued f this equals
/// |t_{cube}(f)|^(1/2^d) for the order-d cube system.
inline double gowers_norm_exact(const DenseFunction& f, std::uint32_t d,
                                std::uint64_t budget = default_budget, unsigned threads = 1)
{
    const double s = std::max(0.0, gowers_u_power(f, d, budget, threads));
    return std::pow(s, 1.0 / static_cast<double>(1ull << d));
}

struct GowersMcEstimate {
    double norm;          // |mean|^(1/2^d) of the sampled cube products
    double norm_stderr;   // delta-method propagation; approximate by design
    double power;         // sample mean of the cube products (real part)
    double power_stderr;  // empirical standard error of `power`
    std::uint64_t samples;
};

/// Monte Carlo uniformity norm: samples the d-fold derivative cube at uniform
/// (x, y_1..y_d). The standard error of the norm is pushed through the
/// 1/2^d-th power by the delta method, so it is approximate (and unusable
/// when the mean sits at 0); the raw power estimate is reported alongside.
inline GowersMcEstimate gowers_norm_mc(const DenseFunction& f, std::uint32_t d,
                                       std::uint64_t samples, std::uint64_t seed)
{
    if (d == 0)
        throw value_error("uniformity norms start at order d = 1");
    if (d >= 20)
        throw budget_error("cube of order " + std::to_string(d) + " has 2^" + std::to_string(d) +
                           " corners; refusing");
    if (samples == 0)
        throw value_error("gowers_norm_mc needs at least one sample");
    const Domain& dom = f.domain();
    double sum = 0, sum2 = 0;
    std::vector<std::uint64_t> ys(d);
    for (std::uint64_t s = 0; s < samples; ++s) {
        Rng rng = Rng::stream(seed, s);
        const std::uint64_t x = rng.below(dom.size());
        for (auto& y : ys)
            y = rng.below(dom.size());
        cplx prod = 1.0;
        for (std::uint32_t mask = 0; mask < (1u << d); ++mask) {
            std::uint64_t pt = x;
            for (std::uint32_t i = 0; i < d; ++i)
                if (mask & (1u << i))
                    pt = dom.add(pt, ys[i]);
            const cplx v = f.value(pt);
            prod *= (__builtin_popcount(mask) % 2 == 1) ? std::conj(v) : v;
        }
        sum += prod.real(); // expectation is real; imaginary parts cancel
        sum2 += prod.real() * prod.real();
    }
    const double ns = static_cast<double>(samples);
    const double mean = sum / ns;
    double power_stderr = 0;
    if (samples > 1)
        power_stderr = std::sqrt(std::max(0.0, (sum2 - ns * mean * mean) / (ns - 1)) / ns);
    const double inv_pow = 1.0 / static_cast<double>(1ull << d);
    const double clamped = std::max(mean, 0.0);
    const double norm = std::pow(clamped, inv_pow);
    double norm_stderr;
    if (clamped > 0)
        norm_stderr = power_stderr * inv_pow * std::pow(clamped, inv_pow - 1.0);
    else
        norm_stderr = std::pow(power_stderr, inv_pow); // scale guess at the origin
    return GowersMcEstimate{norm, norm_stderr, mean, power_stderr, samples};
}

/// Residual of the telescoping identity
///   t_L(f) - t_L(g) = sum_i E prod_{j<i} f(L_j x) (f - g)(L_i x) prod_{j>i} g(L_j x);
/// the return value is the left side minus the right side in magnitude and
/// should sit at rounding level for any f, g, L.
inline double telescoping_residual(const DenseFunction& f, const DenseFunction& g,
                                   const LinearFormSystem& sys, std::uint64_t budget = default_budget)
{
    require_same_domain(f, g);
    if (sys.p() != f.p())
        throw dimension_error("linear-form system over F_" + std::to_string(sys.p()) +
                              " applied to functions over F_" + std::to_string(f.p()));
    const Domain& dom = f.domain();
    require_budget(dom.size(), sys.variables(), budget, "telescoping tuple enumeration");
    const std::uint32_t m = sys.form_count();

    cplx t_f = 0, t_g = 0;
    std::vector<cplx> terms(m, 0);
    std::vector<cplx> fv(m), gv(m), pref(m + 1), suff(m + 1);
    std::vector<std::uint64_t> partial(m, 0);
    detail::t_recurse(dom, sys, 0, partial, [&](const std::vector<std::uint64_t>& pts) {
        for (std::uint32_t i = 0; i < m; ++i) {
            fv[i] = f.value(pts[i]);
            gv[i] = g.value(pts[i]);
        }
        pref[0] = 1.0;
        for (std::uint32_t i = 0; i < m; ++i)
            pref[i + 1] = pref[i] * fv[i];
        suff[m] = 1.0;
        for (std::uint32_t i = m; i-- > 0;)
            suff[i] = suff[i + 1] * gv[i];
        t_f += pref[m];
        t_g += suff[0];
        for (std::uint32_t i = 0; i < m; ++i)
            terms[i] += pref[i] * (fv[i] - gv[i]) * suff[i + 1];
    });
    cplx rhs = 0;
    for (const auto& t : terms)
        rhs += t;
    double denom = 1.0;
    for (std::uint32_t j = 0; j < sys.variables(); ++j)
        denom *= static_cast<double>(dom.size());
    return std::abs((t_f - t_g - rhs) / denom);
}

} // namespace hofa
