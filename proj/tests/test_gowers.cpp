#include <catch2/catch_amalgamated.hpp>

#include <hofa/hofa.hpp>

#include "helpers.hpp"

#include <cmath>
#include <complex>

using namespace hofa;
using hofa_test::as_complex;
using hofa_test::quadratic;

namespace
{

DenseFunction indicator_of_zero(std::uint32_t p, std::uint32_t n)
{
    Domain dom(p, n);
    std::vector<std::uint8_t> bits(dom.size(), 0);
    bits[0] = 1;
    return DenseFunction::from_bits(dom, bits);
}

} // namespace

TEST_CASE("second-order norm of the point indicator is known in closed form")
{
    const DenseFunction f = indicator_of_zero(2, 2);
    const double expected = std::pow(1.0 / 64.0, 0.25);
    REQUIRE(std::abs(gowers_norm_exact(f, 2) - expected) <= 1e-12);
    REQUIRE(std::abs(gowers_norm_exact(as_complex(f), 2) - expected) <= 1e-12);
}

TEST_CASE("uniformity norms equal the cube-system average")
{
    for (std::uint32_t p : {2u, 3u}) {
        FieldSpec field(p);
        for (std::uint32_t n = 1; n <= (p == 2 ? 3u : 2u); ++n) {
            Domain dom(p, n);
            Rng rng(1000 * p + n);
            for (int trial = 0; trial < 3; ++trial) {
                const DenseFunction f = random_real_function(dom, rng);
                for (std::uint32_t d = 1; d <= 3; ++d) {
                    const cplx t = t_exact(f, cube_system(field, d));
                    const double via_t = std::pow(std::abs(t), 1.0 / std::pow(2.0, d));
                    REQUIRE(std::abs(gowers_norm_exact(f, d) - via_t) <= 1e-9);
                }
            }
        }
    }
}

TEST_CASE("packed-bit and generic tables give the same norms")
{
    Domain dom(2, 3);
    Rng rng(55);
    for (int trial = 0; trial < 5; ++trial) {
        const DenseFunction f = random_boolean_function(dom, rng);
        for (std::uint32_t d = 1; d <= 3; ++d)
            REQUIRE(std::abs(gowers_norm_exact(f, d) - gowers_norm_exact(as_complex(f), d)) <=
                    1e-12);
    }
}

TEST_CASE("frozen norm values of sign phases")
{
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);

    const DenseFunction linear = exponential(quadratic(FieldSpec(2), 2, {}, 0b01));
    REQUIRE(std::abs(gowers_norm_exact(linear, 2) - 1.0) <= 1e-12);

    const DenseFunction prod2 = exponential(quadratic(FieldSpec(2), 2, {{0, 1}}));
    REQUIRE(std::abs(gowers_norm_exact(prod2, 2) - inv_sqrt2) <= 1e-12);
    REQUIRE(std::abs(gowers_norm_exact(prod2, 3) - 1.0) <= 1e-12);

    const DenseFunction prod3 = exponential(quadratic(FieldSpec(2), 3, {{0, 1}}));
    REQUIRE(std::abs(gowers_norm_exact(prod3, 2) - inv_sqrt2) <= 1e-12);

    const DenseFunction sigma2 =
        exponential(quadratic(FieldSpec(2), 3, {{0, 1}, {0, 2}, {1, 2}}));
    REQUIRE(std::abs(gowers_norm_exact(sigma2, 2) - inv_sqrt2) <= 1e-12);
    REQUIRE(std::abs(gowers_norm_exact(sigma2, 3) - 1.0) <= 1e-12);
}

TEST_CASE("characters of classical polynomials have norm one at the matching order")
{
    std::uint64_t checked = 0;
    for (const auto& poly : enumerate_classical_polys(FieldSpec(2), 3, 2)) {
        const DenseFunction f = exponential(poly);
        REQUIRE(std::abs(gowers_norm_exact(f, poly.degree() + 1) - 1.0) <= 1e-9);
        ++checked;
    }
    REQUIRE(checked == 63);

    checked = 0;
    for (const auto& poly : enumerate_classical_polys(FieldSpec(3), 2, 1)) {
        const DenseFunction f = exponential(poly);
        REQUIRE(std::abs(gowers_norm_exact(f, 2) - 1.0) <= 1e-9);
        ++checked;
    }
    REQUIRE(checked == 8);
}

TEST_CASE("uniformity norms are dominated by the mean absolute value")
{
    Rng rng(321);
    for (int trial = 0; trial < 200; ++trial) {
        const std::uint32_t p = (trial % 2 == 0) ? 2 : 3;
        const std::uint32_t n = 1 + trial % 2;
        Domain dom(p, n);
        const DenseFunction f = random_real_function(dom, rng);
        const double l1 = l1_norm(f);
        for (std::uint32_t d = 1; d <= 3; ++d)
            REQUIRE(gowers_norm_exact(f, d) <=
                    std::pow(l1, 1.0 / std::pow(2.0, d)) + 1e-9);
    }
}

TEST_CASE("uniformity norms are monotone in the order")
{
    Rng rng(654);
    for (std::uint32_t p : {2u, 3u}) {
        Domain dom(p, 2);
        for (int trial = 0; trial < 10; ++trial) {
            const DenseFunction f = random_real_function(dom, rng);
            double prev = gowers_norm_exact(f, 1);
            for (std::uint32_t d = 2; d <= 3; ++d) {
                const double cur = gowers_norm_exact(f, d);
                REQUIRE(prev <= cur + 1e-9);
                prev = cur;
            }
        }
    }
}

TEST_CASE("affine-system averages are invariant under affine bijections")
{
    FieldSpec field(2);
    Domain dom(2, 3);
    Rng rng(77);
    const auto systems = canonical_affine_systems(field, 3, 3);
    REQUIRE_FALSE(systems.empty());
    for (int trial = 0; trial < 3; ++trial) {
        const DenseFunction f = random_real_function(dom, rng);
        const AffineMap a = random_affine_bijection(field, 3, rng);
        const DenseFunction g = compose_affine(f, a);
        for (const auto& sys : systems) {
            REQUIRE(sys.is_affine());
            REQUIRE(std::abs(t_exact(f, sys) - t_exact(g, sys)) <= 1e-9);
        }
    }
}

TEST_CASE("sampled averages are calibrated against the exact ones")
{
    Domain dom(2, 3);
    Rng rng(88);
    const DenseFunction f = random_boolean_function(dom, rng);
    const LinearFormSystem sys = cube_system(FieldSpec(2), 2);
    const cplx exact = t_exact(f, sys);
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const McEstimate est = t_mc(f, sys, 20000, seed);
        REQUIRE(est.samples == 20000);
        REQUIRE(std::abs(est.value - exact) <= 4.0 * est.std_error + 1e-12);
    }
    const McEstimate a = t_mc(f, sys, 5000, 9);
    const McEstimate b = t_mc(f, sys, 5000, 9);
    REQUIRE(a.value == b.value);
    REQUIRE(a.std_error == b.std_error);
}

TEST_CASE("sampled uniformity norms are calibrated as well")
{
    Domain dom(2, 3);
    Rng rng(99);
    const DenseFunction f = random_boolean_function(dom, rng);
    const double exact_power = gowers_u_power(f, 2);
    for (std::uint64_t seed = 1; seed <= 3; ++seed) {
        const GowersMcEstimate est = gowers_norm_mc(f, 2, 20000, seed);
        REQUIRE(std::abs(est.power - exact_power) <= 4.0 * est.power_stderr + 1e-12);
    }
    const GowersMcEstimate a = gowers_norm_mc(f, 2, 4000, 5);
    const GowersMcEstimate b = gowers_norm_mc(f, 2, 4000, 5);
    REQUIRE(a.norm == b.norm);
    REQUIRE(a.power == b.power);
}

TEST_CASE("the telescoping identity closes to rounding error")
{
    Rng rng(111);
    for (std::uint32_t p : {2u, 3u}) {
        FieldSpec field(p);
        Domain dom(p, 2);
        for (int trial = 0; trial < 4; ++trial) {
            const DenseFunction f = random_real_function(dom, rng);
            const DenseFunction g = random_real_function(dom, rng);
            for (std::uint32_t d = 1; d <= 3; ++d)
                REQUIRE(telescoping_residual(f, g, cube_system(field, d)) <= 1e-9);
        }
    }

    const auto systems = canonical_affine_systems(FieldSpec(2), 3, 3);
    Domain dom(2, 2);
    const DenseFunction f = random_real_function(dom, rng);
    const DenseFunction g = random_real_function(dom, rng);
    REQUIRE(telescoping_residual(f, g, systems.back()) <= 1e-9);
}

TEST_CASE("thread count never changes exact results")
{
    Domain dom(2, 3);
    Rng rng(222);
    const DenseFunction f = random_real_function(dom, rng);
    const LinearFormSystem sys = cube_system(FieldSpec(2), 2);
    REQUIRE(t_exact(f, sys, default_budget, 1) == t_exact(f, sys, default_budget, 4));
    REQUIRE(gowers_u_power(f, 2, default_budget, 1) ==
            gowers_u_power(f, 2, default_budget, 4));
}

TEST_CASE("order and budget limits are enforced")
{
    Domain dom(2, 3);
    Rng rng(333);
    const DenseFunction f = random_real_function(dom, rng);
    REQUIRE_THROWS_AS(gowers_norm_exact(f, 0), value_error);
    REQUIRE_THROWS_AS(gowers_norm_exact(f, 3, 64), budget_error);
    REQUIRE_THROWS_AS(t_exact(f, cube_system(FieldSpec(2), 3), 64), budget_error);
    REQUIRE_THROWS_AS(gowers_norm_mc(f, 0, 100, 1), value_error);
    REQUIRE_THROWS_AS(gowers_norm_mc(f, 25, 100, 1), budget_error);
    REQUIRE_THROWS_AS(gowers_norm_mc(f, 2, 0, 1), value_error);
}

TEST_CASE("cube systems have the parallelepiped shape")
{
    for (std::uint32_t p : {2u, 3u}) {
        for (std::uint32_t d = 1; d <= 3; ++d) {
            const LinearFormSystem sys = cube_system(FieldSpec(p), d);
            REQUIRE(sys.form_count() == (1u << d));
            REQUIRE(sys.variables() == d + 1);
            REQUIRE(sys.is_affine());
        }
    }
}
