#pragma once

#include <cstdint>
#include <future>
#include <stdexcept>
#include <string>

namespace hofa {

// Error taxonomy. Each class maps to one CLI exit code, so they are coarse:
// they say how the caller can fix the call, not where it failed.
struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
// Input text (a file or a flag value) that does not parse.
struct parse_error : error {
    using error::error;
};
// Operands whose domains or dimensions do not line up.
struct dimension_error : error {
    using error::error;
};
// An enumeration or table that would exceed the allowed work budget.
struct budget_error : error {
    using error::error;
};
// A parameter outside its documented range (non-prime p, bad coefficient, ...).
struct value_error : error {
    using error::error;
};

// Default work budget for exhaustive enumerations, counted in "elementary
// steps" of the operation at hand (tuples visited, candidate maps tried, ...).
inline constexpr std::uint64_t default_budget = 1ull << 28;

// True iff base^exp <= budget, computed without overflow.
inline bool within_budget(std::uint64_t base, std::uint64_t exp, std::uint64_t budget)
{
    std::uint64_t acc = 1;
    for (std::uint64_t i = 0; i < exp; ++i) {
        if (acc > budget / base)
            return false;
        acc *= base;
    }
    return acc <= budget;
}

inline void require_budget(std::uint64_t base, std::uint64_t exp, std::uint64_t budget,
                           const std::string& what)
{
    if (!within_budget(base, exp, budget))
        throw budget_error(what + ": required work " + std::to_string(base) + "^" +
                           std::to_string(exp) + " exceeds budget " + std::to_string(budget));
}

// Returns the count unchanged, so running totals can be gated in place.
inline std::uint64_t require_count_budget(std::uint64_t count, std::uint64_t budget,
                                          const std::string& what)
{
    if (count > budget)
        throw budget_error(what + ": required work " + std::to_string(count) +
                           " exceeds budget " + std::to_string(budget));
    return count;
}

// a*b gated against the budget, with the overflow check before the multiply.
inline std::uint64_t require_product_budget(std::uint64_t a, std::uint64_t b, std::uint64_t budget,
                                            const std::string& what)
{
    if (b != 0 && a > budget / b)
        throw budget_error(what + ": required work " + std::to_string(a) + "*" +
                           std::to_string(b) + " exceeds budget " + std::to_string(budget));
    return a * b;
}

namespace detail {

// Fixed-shape pairwise summation. The recursion splits at count/2 down to a
// left-to-right base block, so the floating-point result depends only on the
// index range, never on how many threads execute the subtrees.
inline constexpr std::uint64_t sum_block = 1024;

template <class T, class F>
T pairwise_sum_serial(std::uint64_t lo, std::uint64_t hi, const F& term)
{
    if (hi - lo <= sum_block) {
        T acc{};
        for (std::uint64_t i = lo; i < hi; ++i)
            acc += term(i);
        return acc;
    }
    const std::uint64_t mid = lo + (hi - lo) / 2;
    return pairwise_sum_serial<T>(lo, mid, term) + pairwise_sum_serial<T>(mid, hi, term);
}

template <class T, class F>
T pairwise_sum_par(std::uint64_t lo, std::uint64_t hi, const F& term, int spawn_depth)
{
    if (spawn_depth <= 0 || hi - lo <= sum_block)
        return pairwise_sum_serial<T>(lo, hi, term);
    const std::uint64_t mid = lo + (hi - lo) / 2;
    auto right = std::async(std::launch::async, [&] {
        return pairwise_sum_par<T>(mid, hi, term, spawn_depth - 1);
    });
    T left = pairwise_sum_par<T>(lo, mid, term, spawn_depth - 1);
    return left + right.get();
}

} // namespace detail

// Sum term(i) for i in [0, count). `threads` only adds workers; the summation
// tree, and therefore the result bits, stay the same.
template <class T, class F>
T pairwise_sum(std::uint64_t count, const F& term, unsigned threads = 1)
{
    if (count == 0)
        return T{};
    if (threads <= 1)
        return detail::pairwise_sum_serial<T>(0, count, term);
    int depth = 0;
    while ((1u << depth) < threads && depth < 10)
        ++depth;
    return detail::pairwise_sum_par<T>(0, count, term, depth);
}

} // namespace hofa
