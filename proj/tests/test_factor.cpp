#include <catch2/catch_amalgamated.hpp>

#include <hofa/hofa.hpp>

#include "helpers.hpp"

#include <cmath>
#include <complex>
#include <map>

using namespace hofa;
using hofa_test::quadratic;

namespace
{

// Is `poly` constant on every joint fiber of its witness polynomials?
bool witness_certifies(const NonClassicalPoly& poly, const RankOutcome& outcome)
{
    Domain dom(poly.field(), poly.vars());
    const auto table = poly.value_table();
    std::map<std::vector<std::uint8_t>, TValue> seen;
    std::vector<std::vector<std::uint8_t>> qtables;
    for (const auto& q : outcome.witness)
        qtables.push_back(q.classical_table());
    for (std::uint64_t x = 0; x < dom.size(); ++x) {
        std::vector<std::uint8_t> key;
        for (const auto& qt : qtables)
            key.push_back(qt[x]);
        auto [it, fresh] = seen.try_emplace(key, table[x]);
        if (!fresh && it->second != table[x])
            return false;
    }
    return true;
}

} // namespace

TEST_CASE("degree-2 rank of benchmark quadratics")
{
    FieldSpec f2(2);

    const NonClassicalPoly zero(f2, 3);
    const RankOutcome rz = brute_force_rank_d(zero, 2);
    REQUIRE(rz.is_finite());
    REQUIRE(rz.value == 0);
    REQUIRE(rz.witness.empty());

    const NonClassicalPoly x1 = quadratic(f2, 3, {}, 0b001);
    const RankOutcome r1 = brute_force_rank_d(x1, 2);
    REQUIRE(r1.is_finite());
    REQUIRE(r1.value == 1);
    REQUIRE(brute_force_rank_d(x1, 1).kind == RankOutcome::Kind::infinite);

    const NonClassicalPoly prod2 = quadratic(f2, 2, {{0, 1}});
    REQUIRE(brute_force_rank_d(prod2, 2).value == 2);
    const NonClassicalPoly prod3 = quadratic(f2, 3, {{0, 1}});
    const RankOutcome rp = brute_force_rank_d(prod3, 2);
    REQUIRE(rp.value == 2);
    REQUIRE(witness_certifies(prod3, rp));

    const NonClassicalPoly sigma2 = quadratic(f2, 3, {{0, 1}, {0, 2}, {1, 2}});
    const RankOutcome rs = brute_force_rank_d(sigma2, 2);
    REQUIRE(rs.is_finite());
    REQUIRE(rs.value == 3);
    REQUIRE(rs.witness.size() == 3);
    REQUIRE(witness_certifies(sigma2, rs));

    const NonClassicalPoly mixed = quadratic(f2, 3, {{0, 1}}, 0b100);
    REQUIRE(brute_force_rank_d(mixed, 2).value == 3);

    const RankOutcome capped = brute_force_rank_d(sigma2, 2, 2);
    REQUIRE(capped.kind == RankOutcome::Kind::exceeds);
    REQUIRE(capped.value == 2);
    REQUIRE(capped.str() == ">2");
    REQUIRE(capped.at_least(3));
    REQUIRE(rs.str() == "3");
}

TEST_CASE("rank census of all zero-shift quadratics in three variables")
{
    std::map<std::uint32_t, std::uint32_t> census;
    for (const auto& poly :
         enumerate_classical_polys(FieldSpec(2), 3, 2, default_budget, true)) {
        const RankOutcome out = brute_force_rank_d(poly, 2);
        REQUIRE(out.is_finite());
        census[out.value] += 1;
    }
    REQUIRE(census == std::map<std::uint32_t, std::uint32_t>{
                          {0, 1}, {1, 7}, {2, 28}, {3, 28}});
}

TEST_CASE("rank caps the norm of the sign phase")
{
    std::map<std::uint32_t, double> max_norm;
    for (const auto& poly :
         enumerate_classical_polys(FieldSpec(2), 3, 2, default_budget, true)) {
        const std::uint32_t r = brute_force_rank_d(poly, 2).value;
        const double u2 = gowers_norm_exact(exponential(poly), 2);
        auto [it, fresh] = max_norm.try_emplace(r, u2);
        if (!fresh)
            it->second = std::max(it->second, u2);
    }
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    REQUIRE(std::abs(max_norm[0] - 1.0) <= 1e-9);
    REQUIRE(std::abs(max_norm[1] - 1.0) <= 1e-9);
    REQUIRE(std::abs(max_norm[2] - inv_sqrt2) <= 1e-9);
    REQUIRE(std::abs(max_norm[3] - inv_sqrt2) <= 1e-9);
}

TEST_CASE("pairs of high-rank phases sit farther apart in the second-order metric")
{
    const auto polys = enumerate_classical_polys(FieldSpec(2), 3, 2, default_budget, true);
    REQUIRE(polys.size() == 64);

    std::vector<DenseFunction> phases;
    std::vector<std::uint32_t> ranks;
    for (const auto& poly : polys) {
        phases.push_back(exponential(poly));
        ranks.push_back(brute_force_rank_d(poly, 2).value);
    }

    std::map<std::uint32_t, std::vector<double>> groups;
    for (std::size_t i = 0; i < polys.size(); ++i) {
        for (std::size_t j = i + 1; j < polys.size(); ++j) {
            const double gap = gowers_norm_exact(pointwise_sub(phases[i], phases[j]), 2);
            groups[std::min(ranks[i], ranks[j])].push_back(gap);
        }
    }

    REQUIRE(groups[0].size() == 63);
    REQUIRE(groups[1].size() == 413);
    REQUIRE(groups[2].size() == 1162);
    REQUIRE(groups[3].size() == 378);

    auto mean = [](const std::vector<double>& v) {
        double s = 0.0;
        for (double x : v)
            s += x;
        return s / static_cast<double>(v.size());
    };
    REQUIRE(std::abs(mean(groups[0]) - 1.005968) <= 1e-6);
    REQUIRE(std::abs(mean(groups[1]) - 0.993545) <= 1e-6);
    REQUIRE(std::abs(mean(groups[2]) - 0.945479) <= 1e-6);
    REQUIRE(std::abs(mean(groups[3]) - 0.973862) <= 1e-6);

    std::vector<double> low = groups[0];
    low.insert(low.end(), groups[1].begin(), groups[1].end());
    std::vector<double> high = groups[2];
    high.insert(high.end(), groups[3].begin(), groups[3].end());
    const double lo = mean(low), hi = mean(high);
    REQUIRE(std::abs(lo - 0.995189) <= 1e-6);
    REQUIRE(std::abs(hi - 0.952446) <= 1e-6);
    REQUIRE(hi + 0.02 < lo);

    double worst = 0.0;
    for (double g : high)
        worst = std::max(worst, g);
    REQUIRE(worst <= std::sqrt(2.0) + 1e-9);
}

TEST_CASE("rank is invariant under nonzero scalar multiples")
{
    FieldSpec f3(3);
    std::vector<NonClassicalPoly> samples;
    samples.push_back(quadratic(f3, 2, {{0, 1}}));
    samples.push_back(quadratic(f3, 2, {{0, 1}}, 0b01));
    {
        NonClassicalPoly sq(f3, 2);
        sq.add_digit_term({2, 0}, 0, 1); // x1^2
        samples.push_back(sq);
    }
    for (const auto& poly : samples) {
        const RankOutcome base = brute_force_rank_d(poly, 2);
        for (std::uint64_t lambda = 2; lambda < 3; ++lambda) {
            const RankOutcome scaled = brute_force_rank_d(poly.times(lambda), 2);
            REQUIRE(scaled.kind == base.kind);
            REQUIRE(scaled.value == base.value);
        }
    }
}

TEST_CASE("sequence rank minimizes over nonzero combinations")
{
    FieldSpec f2(2);
    const NonClassicalPoly sigma2 = quadratic(f2, 3, {{0, 1}, {0, 2}, {1, 2}});
    const NonClassicalPoly prod = quadratic(f2, 3, {{0, 1}});

    const FactorRank fr = sequence_rank({sigma2, prod});
    REQUIRE(fr.outcome.is_finite());
    REQUIRE(fr.outcome.value == 2);
    REQUIRE(fr.lambda.size() == 2);

    // Recompute the minimizing combination from the reported coefficients.
    NonClassicalPoly combo(f2, 3);
    if (fr.lambda[0] != 0)
        combo = combo + sigma2.times(fr.lambda[0]);
    if (fr.lambda[1] != 0)
        combo = combo + prod.times(fr.lambda[1]);
    const RankOutcome direct = brute_force_rank_d(combo, fr.degree);
    REQUIRE(direct.value == fr.outcome.value);

    NonClassicalPoly stair(FieldSpec(3), 2);
    stair.add_digit_term({1, 0}, 1, 1); // |x1| / 9
    const FactorRank fs = sequence_rank({stair});
    REQUIRE(fs.outcome.is_finite());
    REQUIRE(fs.outcome.value == 1);

    REQUIRE(sequence_rank_at_least({sigma2}, 3));
    REQUIRE_FALSE(sequence_rank_at_least({sigma2}, 4));
    REQUIRE_FALSE(sequence_rank_at_least({prod}, 3));
    REQUIRE(sequence_rank_at_least({}, 0));
}

TEST_CASE("polynomial factors index atoms in mixed radix")
{
    FieldSpec f2(2);
    const NonClassicalPoly x1 = quadratic(f2, 2, {}, 0b01);
    const NonClassicalPoly x2 = quadratic(f2, 2, {}, 0b10);
    const PolyFactor factor(f2, 2, {x1, x2});
    REQUIRE(factor.complexity() == 2);
    REQUIRE(factor.order() == 4);

    Domain dom(2, 2);
    const auto t1 = x1.classical_table();
    const auto t2 = x2.classical_table();
    const auto atoms = factor.atom_table();
    for (std::uint64_t x = 0; x < dom.size(); ++x) {
        REQUIRE(factor.atom_of(x) == t1[x] + 2ull * t2[x]);
        REQUIRE(atoms[x] == factor.atom_of(x));
    }

    NonClassicalPoly stair(f2, 2);
    stair.add_digit_term({1, 0}, 1, 1); // |x1| / 4: one poly, four addressable atoms
    const PolyFactor deep(f2, 2, {stair});
    REQUIRE(deep.order() == 4);
    std::map<std::uint64_t, std::uint64_t> occupied;
    for (std::uint64_t x = 0; x < dom.size(); ++x)
        occupied[deep.atom_of(x)] += 1;
    REQUIRE(occupied.size() == 2); // values 0 and 1/4 only

    const FactorRank through = factor.rank();
    const FactorRank direct = sequence_rank({x1, x2});
    REQUIRE(through.outcome.kind == direct.outcome.kind);
    REQUIRE(through.outcome.value == direct.outcome.value);

    PolyFactor wrong(f2, 3);
    REQUIRE_THROWS_AS(wrong.add(x1), dimension_error);
}

TEST_CASE("conditional expectation averages over atoms")
{
    FieldSpec f2(2);
    Domain dom(2, 3);
    Rng rng(404);
    const DenseFunction f = random_real_function(dom, rng);
    const PolyFactor factor(f2, 3, {quadratic(f2, 3, {}, 0b001), quadratic(f2, 3, {{1, 2}})});
    const DenseFunction g = conditional_expectation(f, factor);

    // Direct atom means.
    const auto atoms = factor.atom_table();
    std::map<std::uint64_t, std::pair<cplx, int>> sums;
    for (std::uint64_t x = 0; x < dom.size(); ++x) {
        sums[atoms[x]].first += f.value(x);
        sums[atoms[x]].second += 1;
    }
    for (std::uint64_t x = 0; x < dom.size(); ++x) {
        const auto& slot = sums[atoms[x]];
        REQUIRE(std::abs(g.value(x) - slot.first / double(slot.second)) <= 1e-12);
    }

    const DenseFunction gg = conditional_expectation(g, factor);
    for (std::uint64_t x = 0; x < dom.size(); ++x)
        REQUIRE(std::abs(gg.value(x) - g.value(x)) <= 1e-12);

    REQUIRE(std::abs(mean_value(g) - mean_value(f)) <= 1e-12);

    // The residual averages to zero on every atom.
    const DenseFunction res = pointwise_sub(f, g);
    std::map<std::uint64_t, cplx> rsum;
    for (std::uint64_t x = 0; x < dom.size(); ++x)
        rsum[atoms[x]] += res.value(x);
    for (const auto& [atom, s] : rsum)
        REQUIRE(std::abs(s) <= 1e-12);
}

TEST_CASE("energy increment decomposition on random boolean functions")
{
    Domain dom(2, 3);
    const double eta = 0.1;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        Rng rng(seed);
        const DenseFunction f = random_boolean_function(dom, rng);
        const Decomposition dec = energy_increment_decompose(f, 1, eta);

        REQUIRE_FALSE(dec.partial);
        REQUIRE(dec.residual_correlation <= eta);
        REQUIRE(dec.energies.size() == dec.factor.complexity() + 1);
        REQUIRE(dec.factor.complexity() <= 7); // distinct nonzero linear phases only

        for (std::uint64_t x = 0; x < dom.size(); ++x) {
            const cplx sum = dec.f1.value(x) + dec.f2.value(x) + dec.f3.value(x);
            REQUIRE(std::abs(sum - f.value(x)) <= 1e-9);
            REQUIRE(dec.f2.value(x) == cplx(0.0, 0.0));
            REQUIRE(dec.f1.value(x).real() >= -1e-12);
            REQUIRE(dec.f1.value(x).real() <= 1.0 + 1e-12);
            REQUIRE(std::abs(dec.f1.value(x).imag()) <= 1e-15);
        }

        // Structured energy starts at the squared mean and climbs by more
        // than eta^2 per accepted polynomial.
        const double m = std::abs(mean_value(f));
        REQUIRE(std::abs(dec.energies[0] - m * m) <= 1e-12);
        for (std::size_t i = 1; i < dec.energies.size(); ++i)
            REQUIRE(dec.energies[i] - dec.energies[i - 1] > eta * eta - 1e-9);

        const DenseFunction proj = conditional_expectation(dec.f3, dec.factor);
        for (std::uint64_t x = 0; x < dom.size(); ++x)
            REQUIRE(std::abs(proj.value(x)) <= 1e-9);

        cplx inner = 0.0;
        for (std::uint64_t x = 0; x < dom.size(); ++x)
            inner += dec.f1.value(x) * std::conj(dec.f3.value(x));
        REQUIRE(std::abs(inner) / double(dom.size()) <= 1e-9);

        REQUIRE(std::abs(dec.measured_u_power - gowers_u_power(dec.f3, 2)) <= 1e-12);
    }
}

TEST_CASE("energy increment finds the planted quadratic")
{
    Domain dom(2, 2);
    std::vector<std::uint8_t> bits{0, 0, 0, 1}; // f(x) = x1 x2
    const DenseFunction f = DenseFunction::from_bits(dom, bits);
    const Decomposition dec = energy_increment_decompose(f, 2, 0.05);

    REQUIRE(dec.factor.complexity() == 1);
    REQUIRE(dec.factor.polys().front() == quadratic(FieldSpec(2), 2, {{0, 1}}));
    REQUIRE_FALSE(dec.partial);
    for (std::uint64_t x = 0; x < dom.size(); ++x)
        REQUIRE(std::abs(dec.f3.value(x)) <= 1e-12);

    REQUIRE_THROWS_AS(energy_increment_decompose(f, 1, 0.0), value_error);
}
