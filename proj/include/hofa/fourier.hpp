#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "hofa/common.hpp"
#include "hofa/function.hpp"

namespace hofa {

namespace detail {

// In-place DFT along every coordinate of F_p^n. `sign` -1 gives the forward
// character sum sum_x f(x) e_p(-<a,x>), +1 the inverse direction. Cost is
// n * p^(n+1) complex operations.
inline void axis_dft(std::vector<cplx>& v, const Domain& dom, int sign)
{
    const std::uint32_t p = dom.p();
    std::vector<cplx> root(p);
    for (std::uint32_t j = 0; j < p; ++j)
        root[j] = unit_phase(sign * static_cast<double>(j) / p);
    std::vector<cplx> tmp(p);
    for (std::uint32_t axis = 0; axis < dom.n(); ++axis) {
        const std::uint64_t stride = dom.pow(axis);
        const std::uint64_t block = stride * p;
        for (std::uint64_t base = 0; base < dom.size(); base += block) {
            for (std::uint64_t off = base; off < base + stride; ++off) {
                for (std::uint32_t a = 0; a < p; ++a) {
                    cplx acc = 0;
                    for (std::uint32_t x = 0; x < p; ++x)
                        acc += v[off + stride * x] * root[(a * x) % p];
                    tmp[a] = acc;
                }
                for (std::uint32_t a = 0; a < p; ++a)
                    v[off + stride * a] = tmp[a];
            }
        }
    }
}

} // namespace detail

/// The table of Fourier coefficients fhat(a) = E_x f(x) e_p(-<a,x>), indexed
/// by the frequency a through the same point codec as the source function.
struct FourierTable {
    Domain dom;
    std::vector<cplx> coeff;

    cplx operator[](std::uint64_t alpha) const { return coeff[alpha]; }
};

inline FourierTable character_transform(const DenseFunction& f)
{
    std::vector<cplx> v(f.values());
    detail::axis_dft(v, f.domain(), -1);
    const double scale = 1.0 / static_cast<double>(f.size());
    for (auto& c : v)
        c *= scale;
    return FourierTable{f.domain(), std::move(v)};
}

/// Inverse of character_transform: f(x) = sum_a fhat(a) e_p(+<a,x>).
inline DenseFunction inverse_character_transform(const FourierTable& t)
{
    std::vector<cplx> v(t.coeff);
    detail::axis_dft(v, t.dom, +1);
    return DenseFunction(t.dom, std::move(v), false);
}

/// sum_a |fhat(a)| — the spectral norm of f.
inline double spectral_norm(const DenseFunction& f)
{
    const FourierTable t = character_transform(f);
    return pairwise_sum<double>(t.coeff.size(), [&](std::uint64_t i) { return std::abs(t.coeff[i]); });
}

/// Parseval residual |sum_a |fhat(a)|^2 - E_x |f(x)|^2|; an internal
/// consistency measure that should sit at rounding level.
inline double parseval_residual(const DenseFunction& f)
{
    const FourierTable t = character_transform(f);
    const double lhs =
        pairwise_sum<double>(t.coeff.size(), [&](std::uint64_t i) { return std::norm(t.coeff[i]); });
    const double rhs =
        pairwise_sum<double>(f.size(), [&](std::uint64_t i) { return std::norm(f.value(i)); }) /
        static_cast<double>(f.size());
    return std::abs(lhs - rhs);
}

} // namespace hofa
