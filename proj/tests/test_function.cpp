#include <catch2/catch_amalgamated.hpp>

#include <hofa/hofa.hpp>

#include "helpers.hpp"

#include <cmath>
#include <complex>

using namespace hofa;
using hofa_test::as_complex;

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

TEST_CASE("boolean tables must be genuinely 0/1 valued")
{
    Domain dom(2, 1);
    REQUIRE_THROWS_AS(DenseFunction(dom, {cplx(0.5, 0.0), cplx(1.0, 0.0)}, true),
                      value_error);
    REQUIRE_THROWS_AS(DenseFunction(dom, {cplx(0.0, 0.1), cplx(1.0, 0.0)}, true),
                      value_error);
    REQUIRE_THROWS_AS(DenseFunction(dom, {cplx(1.0, 0.0)}), dimension_error);
    REQUIRE_NOTHROW(DenseFunction(dom, {cplx(0.0, 0.0), cplx(1.0, 0.0)}, true));
}

TEST_CASE("means and norms of the point indicator")
{
    const DenseFunction f = indicator_of_zero(2, 2);
    REQUIRE(f.boolean());
    REQUIRE(f.has_bits());
    REQUIRE(std::abs(mean_value(f) - cplx(0.25, 0.0)) <= 1e-15);
    REQUIRE(l1_norm(f) == 0.25);
    REQUIRE(std::abs(l2_norm(f) - 0.5) <= 1e-15);

    const DenseFunction g = as_complex(f);
    REQUIRE_FALSE(g.has_bits());
    REQUIRE(std::abs(l1_norm(g) - 0.25) <= 1e-15);
    REQUIRE(std::abs(l2_norm(g) - 0.5) <= 1e-15);
}

TEST_CASE("hamming distance agrees between packed and generic tables")
{
    Domain dom(2, 4);
    Rng rng(17);
    const DenseFunction f = random_boolean_function(dom, rng);
    const DenseFunction g = random_boolean_function(dom, rng);
    REQUIRE(f.has_bits());
    REQUIRE(hamming_distance(f, g) == hamming_distance(as_complex(f), as_complex(g)));
    REQUIRE(hamming_distance(f, f) == 0.0);
}

TEST_CASE("composition with affine maps is contravariant")
{
    Domain dom(2, 3);
    Rng rng(23);
    const DenseFunction f = random_real_function(dom, rng);
    const AffineMap a = random_affine_bijection(FieldSpec(2), 3, rng);
    const AffineMap b = random_affine_bijection(FieldSpec(2), 3, rng);

    const DenseFunction lhs = compose_affine(compose_affine(f, a), b);
    const DenseFunction rhs = compose_affine(f, compose(a, b));
    for (std::uint64_t x = 0; x < dom.size(); ++x)
        REQUIRE(lhs.value(x) == rhs.value(x));

    const DenseFunction same = compose_affine(f, AffineMap::identity(FieldSpec(2), 3));
    for (std::uint64_t x = 0; x < dom.size(); ++x)
        REQUIRE(same.value(x) == f.value(x));
}

TEST_CASE("multiplicative derivatives compare shifted against conjugated values")
{
    Domain dom(3, 1);
    const cplx w = unit_phase(1.0 / 3.0);
    const DenseFunction f(dom, {cplx(1.0, 0.0), w, w * w});
    const DenseFunction d = multiplicative_derivative(f, 1);
    for (std::uint64_t x = 0; x < dom.size(); ++x) {
        const std::uint64_t shifted = dom.add(x, 1);
        REQUIRE(std::abs(d.value(x) - f.value(shifted) * std::conj(f.value(x))) <= 1e-15);
        REQUIRE(std::abs(d.value(x) - w) <= 1e-15); // derivative of a character is constant
    }
}

TEST_CASE("function serialization round-trips every storage form")
{
    Rng rng(31);

    SECTION("packed boolean tables over the two-element field")
    {
        const DenseFunction f = random_boolean_function(Domain(2, 5), rng);
        const std::string text = serialize_function(f);
        const DenseFunction back = parse_function(text);
        REQUIRE(back.boolean());
        REQUIRE(back.p() == 2);
        REQUIRE(back.n() == 5);
        for (std::uint64_t x = 0; x < f.size(); ++x)
            REQUIRE(back.value(x) == f.value(x));
        REQUIRE(serialize_function(back) == text);
    }

    SECTION("boolean tables over odd primes keep their flag")
    {
        const DenseFunction f = random_boolean_function(Domain(3, 2), rng);
        const DenseFunction back = parse_function(serialize_function(f));
        REQUIRE(back.boolean());
        for (std::uint64_t x = 0; x < f.size(); ++x)
            REQUIRE(back.value(x) == f.value(x));
    }

    SECTION("complex tables survive bit-exactly")
    {
        Domain dom(3, 2);
        std::vector<cplx> values;
        for (std::uint64_t x = 0; x < dom.size(); ++x)
            values.push_back(cplx(rng.real(-1.0, 1.0), rng.real(-1.0, 1.0)));
        const DenseFunction f(dom, values);
        const std::string text = serialize_function(f);
        const DenseFunction back = parse_function(text);
        for (std::uint64_t x = 0; x < f.size(); ++x)
            REQUIRE(back.value(x) == f.value(x));
        REQUIRE(serialize_function(back) == text);
    }
}

TEST_CASE("malformed function text is rejected with parse errors")
{
    REQUIRE_THROWS_AS(parse_function(""), parse_error);
    REQUIRE_THROWS_AS(parse_function("4 2 1\nff\n"), value_error); // non-prime field
    REQUIRE_THROWS_AS(parse_function("2 3 1\nf\n"), parse_error); // truncated hex table
    REQUIRE_THROWS_AS(parse_function("2 1 0\n0 0\n"), parse_error); // missing point
}

TEST_CASE("random function generators are seed-deterministic and in range")
{
    Domain dom(2, 4);
    Rng a(77), b(77);
    const DenseFunction f = random_boolean_function(dom, a);
    const DenseFunction g = random_boolean_function(dom, b);
    for (std::uint64_t x = 0; x < dom.size(); ++x)
        REQUIRE(f.value(x) == g.value(x));

    const DenseFunction r = random_real_function(dom, a, -0.5, 0.75);
    for (std::uint64_t x = 0; x < dom.size(); ++x) {
        REQUIRE(r.value(x).imag() == 0.0);
        REQUIRE(r.value(x).real() >= -0.5);
        REQUIRE(r.value(x).real() <= 0.75);
    }
}

TEST_CASE("pointwise combination drops the boolean flag when values leave {0,1}")
{
    Domain dom(2, 2);
    const DenseFunction one = DenseFunction::constant(dom, cplx(1.0, 0.0));
    REQUIRE(one.boolean());
    const DenseFunction zero = pointwise_sub(one, one);
    for (std::uint64_t x = 0; x < dom.size(); ++x)
        REQUIRE(zero.value(x) == cplx(0.0, 0.0));
    const DenseFunction two = pointwise_add(one, one);
    REQUIRE_FALSE(two.boolean());
    for (std::uint64_t x = 0; x < dom.size(); ++x)
        REQUIRE(two.value(x) == cplx(2.0, 0.0));
}

TEST_CASE("character transform inverts and preserves energy")
{
    for (std::uint32_t p : {2u, 3u}) {
        Domain dom(p, 2);
        Rng rng(p * 101);
        const DenseFunction f = random_real_function(dom, rng);
        const FourierTable t = character_transform(f);
        const DenseFunction back = inverse_character_transform(t);
        for (std::uint64_t x = 0; x < dom.size(); ++x)
            REQUIRE(std::abs(back.value(x) - f.value(x)) <= 1e-12);
        REQUIRE(parseval_residual(f) <= 1e-12);
    }
}

TEST_CASE("spectral norms of conjunction and of a quadratic phase")
{
    Domain dom(2, 2);
    // AND: indicator of the all-ones point.
    std::vector<std::uint8_t> bits(dom.size(), 0);
    bits[dom.size() - 1] = 1;
    const DenseFunction f_and = DenseFunction::from_bits(dom, bits);
    REQUIRE(std::abs(spectral_norm(f_and) - 1.0) <= 1e-12);

    const DenseFunction phase =
        hofa_test::sign_phase(DenseFunction::from_bits(dom, {0, 0, 0, 1}));
    REQUIRE(std::abs(spectral_norm(phase) - 2.0) <= 1e-12);
}
