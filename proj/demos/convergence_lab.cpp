// Blow-up sequences as convergent objects: the average over every canonical
// linear form system is exactly constant along the sequence, and so is the
// distance to a blow-up-closed property — the observable signature that the
// parameter extends continuously to the limit.
#include <hofa/hofa.hpp>

#include <cstdio>

using namespace hofa;

int main()
{
    const FieldSpec field(2);
    Domain dom(field, 3);
    Rng rng(2026);
    const DenseFunction f = random_boolean_function(dom, rng);

    ConvergenceConfig cfg;
    cfg.profile_vars = 3;
    cfg.profile_forms = 3;
    cfg.upsilon_degrees = {2};
    cfg.upsilon_restarts = 8;
    cfg.seed = 7;

    const auto seq = blow_up_sequence(f, {4, 5, 6}, cfg.seed);
    std::vector<DenseFunction> full;
    full.push_back(f);
    for (const auto& g : seq.funcs)
        full.push_back(g);

    const Property constants = constant_functions_property(field);
    const auto report = convergence_report(full, cfg, &constants);

    std::printf("blow-up sequence of a random boolean function on F_2^3:\n\n");
    for (std::size_t i = 0; i < full.size(); ++i)
        std::printf("  element %zu: n=%u  distance-to-constant pi=%.6f%s\n", i, full[i].n(),
                    report.pi_values[i], report.pi_estimated[i] ? " (estimated)" : "");

    std::printf("\nmax successive profile gap: %.3g (profiles over %zu canonical systems)\n",
                report.max_profile_gap, report.profiles.front().systems.size());
    std::printf("max successive pi gap:      %.3g\n", report.max_pi_gap);
    for (const auto& [degree, values] : report.upsilon_values) {
        std::printf("successive upsilon (d=%u):  ", degree);
        for (double v : values)
            std::printf("%.6f ", v);
        std::printf("\n");
    }
    std::printf("\nconstant profiles + constant pi along every blow-up sequence is exactly the\n"
                "convergence behaviour that makes the parameter estimable from restrictions.\n");
    return 0;
}
