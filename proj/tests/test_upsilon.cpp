#include <catch2/catch_amalgamated.hpp>

#include <hofa/hofa.hpp>

#include "helpers.hpp"

#include <cmath>

using namespace hofa;

TEST_CASE("alignment distance of a function to itself is zero")
{
    Domain dom(2, 2);
    Rng rng(1);
    const DenseFunction f = random_real_function(dom, rng);
    const UpsilonResult res = upsilon_exact(f, f, 2);
    REQUIRE(res.value == 0.0);
    REQUIRE(res.evaluated == 24); // one objective per affine bijection of F_2^2
}

TEST_CASE("alignment distance vanishes on affine-equivalent pairs")
{
    Domain dom(2, 2);
    Rng rng(2);
    for (int trial = 0; trial < 20; ++trial) {
        const DenseFunction f = random_real_function(dom, rng);
        const AffineMap a = random_affine_bijection(FieldSpec(2), 2, rng);
        const DenseFunction g = compose_affine(f, a);
        const UpsilonResult res = upsilon_exact(f, g, 2);
        REQUIRE(res.value == 0.0);

        const double check = gowers_norm_exact(
            pointwise_sub(f, compose_affine(g, res.witness)), 2);
        REQUIRE(check == 0.0);
    }
}

TEST_CASE("alignment distance is symmetric and satisfies the triangle inequality")
{
    Domain dom(2, 2);
    Rng rng(3);
    for (int trial = 0; trial < 10; ++trial) {
        const DenseFunction f = random_real_function(dom, rng);
        const DenseFunction g = random_real_function(dom, rng);
        const DenseFunction h = random_real_function(dom, rng);
        const double fg = upsilon_exact(f, g, 2).value;
        const double gf = upsilon_exact(g, f, 2).value;
        const double gh = upsilon_exact(g, h, 2).value;
        const double fh = upsilon_exact(f, h, 2).value;
        REQUIRE(std::abs(fg - gf) <= 1e-9);
        REQUIRE(fh <= fg + gh + 1e-9);
    }
}

TEST_CASE("the heuristic never beats the exact minimum and improves with restarts")
{
    Domain dom(2, 2);
    Rng rng(4);
    const DenseFunction f = random_real_function(dom, rng);
    const DenseFunction g = random_real_function(dom, rng);
    const UpsilonResult exact = upsilon_exact(f, g, 2);

    const UpsilonResult h0 = upsilon_heuristic(f, g, 2, 0, 7);
    const UpsilonResult h1 = upsilon_heuristic(f, g, 2, 1, 7);
    const UpsilonResult h3 = upsilon_heuristic(f, g, 2, 3, 7);
    REQUIRE(h0.value >= exact.value - 1e-12);
    REQUIRE(h1.value >= exact.value - 1e-12);
    REQUIRE(h3.value >= exact.value - 1e-12);
    REQUIRE(h1.value <= h0.value + 1e-12);
    REQUIRE(h3.value <= h1.value + 1e-12);

    const UpsilonResult again = upsilon_heuristic(f, g, 2, 3, 7);
    REQUIRE(again.value == h3.value);
    REQUIRE(again.witness == h3.witness);

    // Seeding the search with the exact witness pins it to the optimum.
    const UpsilonResult seeded = upsilon_heuristic(f, g, 2, 0, 7, {exact.witness});
    REQUIRE(seeded.value <= exact.value + 1e-12);

    const AffineMap proj = canonical_projection(FieldSpec(2), 3, 2);
    REQUIRE_THROWS_AS(upsilon_heuristic(f, g, 2, 0, 7, {proj}), value_error);
}

TEST_CASE("cylinder extension preserves uniformity norms")
{
    Domain dom(2, 2);
    Rng rng(5);
    const DenseFunction f = random_real_function(dom, rng);
    const DenseFunction big = cylinder_extend(f, 4);
    REQUIRE(big.n() == 4);
    for (std::uint32_t d = 1; d <= 3; ++d)
        REQUIRE(std::abs(gowers_norm_exact(big, d) - gowers_norm_exact(f, d)) <= 1e-9);
}

TEST_CASE("cross-dimension alignment of a function with itself is zero")
{
    Domain dom(2, 2);
    Rng rng(6);
    const DenseFunction f = random_real_function(dom, rng);
    const UpsilonResult res = upsilon_cross_exact(f, f, 2, 3);
    REQUIRE(res.value == 0.0);
}

TEST_CASE("a pulled-back function aligns exactly through the completed surjection")
{
    FieldSpec f2(2);
    Domain dom(2, 2);
    Rng rng(8);
    const DenseFunction f = random_real_function(dom, rng);
    const AffineMap s = random_affine_surjection(f2, 4, 2, rng);
    const DenseFunction g = compose_affine(f, s);

    // Complete s's rows to a bijection x of F_2^4; then proj∘x = s, so
    // b = x^{-1} aligns the cylinders: f∘proj = g∘b.
    std::vector<std::uint8_t> mat = s.matrix();
    std::vector<std::uint8_t> shift = s.shift();
    std::uint32_t rows = 2;
    for (std::uint32_t k = 0; k < 4 && rows < 4; ++k) {
        std::vector<std::uint8_t> trial = mat;
        trial.insert(trial.end(), 4, 0);
        trial[rows * 4 + k] = 1;
        if (AffineMap::matrix_rank(f2, rows + 1, 4, trial) == rows + 1) {
            mat = std::move(trial);
            shift.push_back(0);
            ++rows;
        }
    }
    REQUIRE(rows == 4);
    const AffineMap x(f2, 4, 4, mat, shift);
    REQUIRE(x.is_bijection());
    const AffineMap b = left_inverse(x);

    const UpsilonResult res = upsilon_cross_heuristic(f, g, 2, 4, 0, 11, {b});
    REQUIRE(res.value == 0.0);
}

TEST_CASE("alignment rejects mismatched shapes and tiny budgets")
{
    Rng rng(9);
    const DenseFunction f = random_real_function(Domain(2, 2), rng);
    const DenseFunction g = random_real_function(Domain(2, 3), rng);
    REQUIRE_THROWS_AS(upsilon_exact(f, g, 2), dimension_error);
    REQUIRE_THROWS_AS(upsilon_cross_exact(g, f, 2, 2), dimension_error);
    REQUIRE_THROWS_AS(upsilon_exact(f, f, 2, 2), budget_error);
    REQUIRE_THROWS_AS(upsilon_heuristic(f, f, 2, 1, 1, {}, 2), budget_error);
}
