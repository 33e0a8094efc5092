#pragma once

#include <hofa/hofa.hpp>

#include <utility>
#include <vector>

namespace hofa_test {

/// Classical polynomial: sum of x_i*x_j over `pairs` (i != j) plus the
/// degree-one terms selected by `linear_mask`.
inline hofa::NonClassicalPoly quadratic(
    hofa::FieldSpec field, std::uint32_t n,
    const std::vector<std::pair<std::uint32_t, std::uint32_t>>& pairs,
    std::uint32_t linear_mask = 0)
{
    hofa::NonClassicalPoly poly(field, n);
    for (auto [i, j] : pairs) {
        hofa::ExponentVec mono(n, 0);
        mono[i] += 1;
        mono[j] += 1;
        poly.add_digit_term(mono, 0, 1);
    }
    for (std::uint32_t i = 0; i < n; ++i) {
        if ((linear_mask >> i) & 1u) {
            hofa::ExponentVec mono(n, 0);
            mono[i] = 1;
            poly.add_digit_term(mono, 0, 1);
        }
    }
    return poly;
}

/// (-1)^bits as a complex table: the +-1 phase of a boolean function, p = 2.
inline hofa::DenseFunction sign_phase(const hofa::DenseFunction& bits)
{
    std::vector<hofa::cplx> v(bits.size());
    for (std::uint64_t x = 0; x < bits.size(); ++x)
        v[x] = bits.value(x).real() != 0.0 ? -1.0 : 1.0;
    return hofa::DenseFunction(bits.domain(), std::move(v));
}

/// The same table with the boolean flag stripped, to drive generic code
/// paths next to the packed-bit ones.
inline hofa::DenseFunction as_complex(const hofa::DenseFunction& f)
{
    return hofa::DenseFunction(f.domain(), f.values(), false);
}

} // namespace hofa_test
