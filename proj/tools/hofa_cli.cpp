// Command-line front end: file ingestion, one subcommand per operation
// family, line-delimited JSON machine output plus a terse human summary on
// stderr. Identical config + seed produces byte-identical machine output.
#include <CLI11.hpp>
#include <json.hpp>

#include <hofa/hofa.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

namespace {

using nlohmann::json;

std::string read_text_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw hofa::parse_error("cannot open input file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_text_file(const std::string& path, const std::string& text)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw hofa::parse_error("cannot open output file: " + path);
    out << text;
}

hofa::DenseFunction load_function(const std::string& path)
{
    return hofa::parse_function(read_text_file(path));
}

// Machine records go to --out when given, stdout otherwise; the human
// summary always goes to stderr so the machine stream stays clean.
class MachineOut {
public:
    explicit MachineOut(const std::string& path)
    {
        if (!path.empty()) {
            file_.open(path, std::ios::binary);
            if (!file_)
                throw hofa::parse_error("cannot open output file: " + path);
            to_file_ = true;
        }
    }

    void record(const json& rec)
    {
        std::ostream& os = to_file_ ? static_cast<std::ostream&>(file_) : std::cout;
        os << rec.dump() << '\n';
    }

private:
    std::ofstream file_;
    bool to_file_ = false;
};

json complex_json(hofa::cplx z)
{
    return json{{"re", z.real()}, {"im", z.imag()}};
}

hofa::Property named_property(const std::string& name, hofa::FieldSpec field,
                              std::uint64_t budget)
{
    if (name == "constant")
        return hofa::constant_functions_property(field);
    if (name == "spectral1")
        return hofa::spectral_norm_property(1.0, budget);
    throw hofa::value_error("unknown property '" + name + "': expected constant or spectral1");
}

hofa::ParameterOracle make_oracle(const std::string& name, hofa::FieldSpec field, std::uint32_t k,
                                  std::uint64_t budget)
{
    hofa::ParameterOracle oracle;
    oracle.name = name;
    oracle.k = k;
    if (name == "density") {
        oracle.evaluate = [](const hofa::DenseFunction& g) {
            return hofa::mean_value(g).real();
        };
        return oracle;
    }
    if (name == "distance-constant" || name == "distance-spectral1") {
        auto prop = std::make_shared<hofa::Property>(
            name == "distance-constant" ? hofa::constant_functions_property(field)
                                        : hofa::spectral_norm_property(1.0, budget));
        oracle.evaluate = [prop](const hofa::DenseFunction& g) {
            return hofa::distance_to_property_bruteforce(g, *prop).distance;
        };
        return oracle;
    }
    throw hofa::value_error("unknown oracle '" + name +
                            "': expected density, distance-constant or distance-spectral1");
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"computational laboratory for uniformity norms over F_p^n"};
    app.require_subcommand(1);

    std::string out_path;
    std::uint64_t budget = hofa::default_budget;
    unsigned threads = 1;
    app.add_option("--out", out_path, "machine-readable JSONL output file (default: stdout)");
    app.add_option("--budget", budget, "operation budget in elementary steps");
    app.add_option("--threads", threads, "worker threads (never changes results)");

    // gowers
    auto* sc_gowers = app.add_subcommand("gowers", "uniformity norm of a function");
    std::string gowers_fn;
    std::uint32_t gowers_d = 2;
    bool gowers_mc = false;
    std::uint64_t gowers_samples = 10000;
    std::optional<std::uint64_t> gowers_seed;
    sc_gowers->add_option("--fn", gowers_fn, "function file")->required();
    sc_gowers->add_option("--d", gowers_d, "norm order")->required();
    sc_gowers->add_flag("--mc", gowers_mc, "Monte Carlo instead of exact");
    sc_gowers->add_option("--samples", gowers_samples, "Monte Carlo sample count");
    sc_gowers->add_option("--seed", gowers_seed, "random seed (required with --mc)");

    // tnorm
    auto* sc_tnorm = app.add_subcommand("tnorm", "average over a linear form system");
    std::string tnorm_fn, tnorm_system;
    bool tnorm_mc = false;
    std::uint64_t tnorm_samples = 10000;
    std::optional<std::uint64_t> tnorm_seed;
    sc_tnorm->add_option("--fn", tnorm_fn, "function file")->required();
    sc_tnorm->add_option("--system", tnorm_system, "linear form system file")->required();
    sc_tnorm->add_flag("--mc", tnorm_mc, "Monte Carlo instead of exact");
    sc_tnorm->add_option("--samples", tnorm_samples, "Monte Carlo sample count");
    sc_tnorm->add_option("--seed", tnorm_seed, "random seed (required with --mc)");

    // upsilon
    auto* sc_upsilon = app.add_subcommand("upsilon", "alignment pseudo-distance of two functions");
    std::string upsilon_fn, upsilon_g, upsilon_witness_out;
    std::uint32_t upsilon_d = 2;
    std::optional<std::uint32_t> upsilon_ambient;
    bool upsilon_heuristic = false;
    std::uint64_t upsilon_restarts = 8;
    std::optional<std::uint64_t> upsilon_seed;
    sc_upsilon->add_option("--fn", upsilon_fn, "first function file")->required();
    sc_upsilon->add_option("--g", upsilon_g, "second function file")->required();
    sc_upsilon->add_option("--d", upsilon_d, "norm order")->required();
    sc_upsilon->add_option("--ambient", upsilon_ambient,
                           "compare inside F_p^N after cylinder extension");
    sc_upsilon->add_flag("--heuristic", upsilon_heuristic, "local search instead of exact scan");
    sc_upsilon->add_option("--restarts", upsilon_restarts, "heuristic restart count");
    sc_upsilon->add_option("--seed", upsilon_seed, "random seed (required with --heuristic)");
    sc_upsilon->add_option("--witness-out", upsilon_witness_out, "write the witness map here");

    // restrict
    auto* sc_restrict = app.add_subcommand("restrict", "distribution of k-dimensional restrictions");
    std::string restrict_fn;
    std::uint32_t restrict_k = 1;
    bool restrict_empirical = false;
    std::uint64_t restrict_samples = 10000;
    std::optional<std::uint64_t> restrict_seed;
    sc_restrict->add_option("--fn", restrict_fn, "function file")->required();
    sc_restrict->add_option("--k", restrict_k, "restriction dimension")->required();
    sc_restrict->add_flag("--empirical", restrict_empirical, "sample instead of enumerating");
    sc_restrict->add_option("--samples", restrict_samples, "sample count for --empirical");
    sc_restrict->add_option("--seed", restrict_seed, "random seed (required with --empirical)");

    // decompose
    auto* sc_decompose = app.add_subcommand("decompose", "energy-increment decomposition");
    std::string decompose_fn;
    std::uint32_t decompose_d = 1;
    double decompose_eta = 0.1;
    std::size_t decompose_max_complexity = 16;
    sc_decompose->add_option("--fn", decompose_fn, "function file")->required();
    sc_decompose->add_option("--d", decompose_d, "degree of the polynomial factor")->required();
    sc_decompose->add_option("--eta", decompose_eta, "correlation threshold")->required();
    sc_decompose->add_option("--max-complexity", decompose_max_complexity,
                             "cap on the number of polynomials in the factor");

    // rank
    auto* sc_rank = app.add_subcommand("rank", "degree-d rank of a polynomial");
    std::string rank_poly;
    std::uint32_t rank_d = 2;
    std::uint32_t rank_max_r = 8;
    sc_rank->add_option("--poly", rank_poly, "polynomial file")->required();
    sc_rank->add_option("--d", rank_d, "rank order")->required();
    sc_rank->add_option("--max-r", rank_max_r, "search cap");

    // estimate
    auto* sc_estimate = app.add_subcommand("estimate", "oblivious parameter estimation");
    std::string estimate_fn, estimate_oracle = "density";
    std::uint32_t estimate_k = 1;
    std::uint64_t estimate_samples = 10000, estimate_seed = 0;
    sc_estimate->add_option("--fn", estimate_fn, "function file")->required();
    sc_estimate->add_option("--oracle", estimate_oracle,
                            "parameter: density, distance-constant or distance-spectral1");
    sc_estimate->add_option("--k", estimate_k, "restriction dimension")->required();
    sc_estimate->add_option("--samples", estimate_samples, "sample count");
    sc_estimate->add_option("--seed", estimate_seed, "random seed")->required();

    // test-property
    auto* sc_test = app.add_subcommand("test-property", "distance-threshold property tester");
    std::string test_fn, test_property = "constant";
    double test_eps = 0.1, test_confidence = 2.0 / 3.0;
    std::uint32_t test_k = 2;
    std::uint64_t test_seed = 0;
    sc_test->add_option("--fn", test_fn, "function file")->required();
    sc_test->add_option("--property", test_property, "property: constant or spectral1");
    sc_test->add_option("--eps", test_eps, "distance threshold")->required();
    sc_test->add_option("--k", test_k, "restriction dimension of the oracle");
    sc_test->add_option("--confidence", test_confidence, "success probability target");
    sc_test->add_option("--seed", test_seed, "random seed")->required();

    // converge
    auto* sc_converge = app.add_subcommand("converge", "blow-up sequence convergence report");
    std::string converge_fn, converge_property;
    std::vector<std::uint32_t> converge_dims, converge_upsilon_d = {2};
    std::uint32_t converge_v = 3, converge_m = 3, converge_k = 2, converge_restarts = 1;
    std::uint64_t converge_samples = 2000, converge_seed = 0;
    sc_converge->add_option("--fn", converge_fn, "function file")->required();
    sc_converge->add_option("--dims", converge_dims, "increasing ambient dimensions")
        ->required()
        ->delimiter(',');
    sc_converge->add_option("--property", converge_property,
                            "track distance to this property (constant or spectral1)");
    sc_converge->add_option("--v", converge_v, "profile: max variables");
    sc_converge->add_option("--m", converge_m, "profile: max forms");
    sc_converge->add_option("--upsilon-d", converge_upsilon_d, "norm orders for successive upsilon")
        ->delimiter(',');
    sc_converge->add_option("--restarts", converge_restarts, "upsilon heuristic restarts");
    sc_converge->add_option("--samples", converge_samples, "oblivious fallback sample count");
    sc_converge->add_option("--k", converge_k, "oblivious fallback restriction dimension");
    sc_converge->add_option("--seed", converge_seed, "random seed")->required();

    // Let --out/--budget/--threads appear after the subcommand name too.
    for (auto* sc : app.get_subcommands([](const CLI::App*) { return true; }))
        sc->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        MachineOut out(out_path);

        if (*sc_gowers) {
            const auto f = load_function(gowers_fn);
            json config{{"fn", gowers_fn}, {"d", gowers_d},      {"mc", gowers_mc},
                        {"budget", budget}, {"threads", threads}};
            json result;
            if (gowers_mc) {
                if (!gowers_seed)
                    throw hofa::parse_error("--mc runs are randomized: --seed is required");
                config["samples"] = gowers_samples;
                config["seed"] = *gowers_seed;
                const auto est = hofa::gowers_norm_mc(f, gowers_d, gowers_samples, *gowers_seed);
                result = {{"norm", est.norm},
                          {"norm_stderr", est.norm_stderr},
                          {"power", est.power},
                          {"power_stderr", est.power_stderr},
                          {"samples", est.samples}};
                std::cerr << "gowers: U^" << gowers_d << " ~ " << est.norm << " (mc, "
                          << est.samples << " samples)\n";
            } else {
                const double norm = hofa::gowers_norm_exact(f, gowers_d, budget, threads);
                const double power = hofa::gowers_u_power(f, gowers_d, budget, threads);
                result = {{"norm", norm}, {"power", power}};
                std::cerr << "gowers: U^" << gowers_d << " = " << norm << " (exact)\n";
            }
            out.record(json{{"cmd", "gowers"}, {"config", config}, {"result", result}});
        } else if (*sc_tnorm) {
            const auto f = load_function(tnorm_fn);
            const auto sys =
                hofa::parse_linear_form_system(read_text_file(tnorm_system), f.domain().field());
            json config{{"fn", tnorm_fn},     {"system", tnorm_system}, {"mc", tnorm_mc},
                        {"budget", budget},   {"threads", threads}};
            json result;
            if (tnorm_mc) {
                if (!tnorm_seed)
                    throw hofa::parse_error("--mc runs are randomized: --seed is required");
                config["samples"] = tnorm_samples;
                config["seed"] = *tnorm_seed;
                const auto est = hofa::t_mc(f, sys, tnorm_samples, *tnorm_seed);
                result = complex_json(est.value);
                result["stderr"] = est.std_error;
                result["samples"] = est.samples;
                std::cerr << "tnorm: t ~ " << est.value.real() << (est.value.imag() < 0 ? " - " : " + ")
                          << std::abs(est.value.imag()) << "i (mc)\n";
            } else {
                const hofa::cplx value = hofa::t_exact(f, sys, budget, threads);
                result = complex_json(value);
                std::cerr << "tnorm: t = " << value.real() << (value.imag() < 0 ? " - " : " + ")
                          << std::abs(value.imag()) << "i (exact)\n";
            }
            out.record(json{{"cmd", "tnorm"}, {"config", config}, {"result", result}});
        } else if (*sc_upsilon) {
            const auto f = load_function(upsilon_fn);
            const auto g = load_function(upsilon_g);
            json config{{"fn", upsilon_fn},   {"g", upsilon_g},   {"d", upsilon_d},
                        {"heuristic", upsilon_heuristic}, {"budget", budget}};
            if (upsilon_ambient)
                config["ambient"] = *upsilon_ambient;
            std::optional<hofa::UpsilonResult> res;
            if (upsilon_heuristic) {
                if (!upsilon_seed)
                    throw hofa::parse_error("--heuristic runs are randomized: --seed is required");
                config["restarts"] = upsilon_restarts;
                config["seed"] = *upsilon_seed;
                res = upsilon_ambient
                          ? hofa::upsilon_cross_heuristic(f, g, upsilon_d, *upsilon_ambient,
                                                          upsilon_restarts, *upsilon_seed, {},
                                                          budget)
                          : hofa::upsilon_heuristic(f, g, upsilon_d, upsilon_restarts,
                                                    *upsilon_seed, {}, budget);
            } else {
                res = upsilon_ambient
                          ? hofa::upsilon_cross_exact(f, g, upsilon_d, *upsilon_ambient, budget)
                          : hofa::upsilon_exact(f, g, upsilon_d, budget);
            }
            json result{{"value", res->value},
                        {"evaluated", res->evaluated},
                        {"witness", res->witness.serialize()}};
            if (!upsilon_witness_out.empty())
                write_text_file(upsilon_witness_out, res->witness.serialize());
            std::cerr << "upsilon: " << res->value << " after " << res->evaluated
                      << " objective evaluations\n";
            out.record(json{{"cmd", "upsilon"}, {"config", config}, {"result", result}});
        } else if (*sc_restrict) {
            const auto f = load_function(restrict_fn);
            json config{{"fn", restrict_fn}, {"k", restrict_k},
                        {"empirical", restrict_empirical}, {"budget", budget}};
            hofa::RestrictionDistribution dist{};
            if (restrict_empirical) {
                if (!restrict_seed)
                    throw hofa::parse_error("--empirical runs are randomized: --seed is required");
                config["samples"] = restrict_samples;
                config["seed"] = *restrict_seed;
                dist = hofa::empirical_restriction_distribution(f, restrict_k, restrict_samples,
                                                                *restrict_seed);
            } else {
                dist = hofa::exact_restriction_distribution(f, restrict_k, budget);
            }
            json entries = json::array();
            for (const auto& [key, count] : dist.counts)
                entries.push_back(json{{"key", key}, {"count", count},
                                       {"prob", dist.probability(key)}});
            json result{{"weight", dist.weight},
                        {"support", dist.support_size()},
                        {"entries", entries}};
            std::cerr << "restrict: " << dist.support_size() << " distinct restriction tables\n";
            out.record(json{{"cmd", "restrict"}, {"config", config}, {"result", result}});
        } else if (*sc_decompose) {
            const auto f = load_function(decompose_fn);
            json config{{"fn", decompose_fn},
                        {"d", decompose_d},
                        {"eta", decompose_eta},
                        {"max_complexity", decompose_max_complexity},
                        {"budget", budget}};
            const auto dec =
                hofa::energy_increment_decompose(f, decompose_d, decompose_eta,
                                                 decompose_max_complexity, budget);
            json polys = json::array();
            for (const auto& poly : dec.factor.polys())
                polys.push_back(poly.serialize());
            json result{{"complexity", dec.factor.complexity()},
                        {"energies", dec.energies},
                        {"residual_correlation", dec.residual_correlation},
                        {"measured_u_power", dec.measured_u_power},
                        {"partial", dec.partial},
                        {"polys", polys}};
            std::cerr << "decompose: " << dec.factor.complexity()
                      << " polynomials, residual correlation " << dec.residual_correlation << '\n';
            out.record(json{{"cmd", "decompose"}, {"config", config}, {"result", result}});
        } else if (*sc_rank) {
            const auto poly = hofa::parse_polynomial(read_text_file(rank_poly));
            json config{{"poly", rank_poly}, {"d", rank_d}, {"max_r", rank_max_r},
                        {"budget", budget}};
            const auto outcome = hofa::brute_force_rank_d(poly, rank_d, rank_max_r, budget);
            const char* kind = outcome.kind == hofa::RankOutcome::Kind::finite ? "finite"
                               : outcome.kind == hofa::RankOutcome::Kind::exceeds ? "exceeds"
                                                                                  : "infinite";
            json result{{"rank", outcome.str()},
                        {"kind", kind},
                        {"value", outcome.value},
                        {"witness_size", outcome.witness.size()}};
            std::cerr << "rank: rank_" << rank_d << " = " << outcome.str() << '\n';
            out.record(json{{"cmd", "rank"}, {"config", config}, {"result", result}});
        } else if (*sc_estimate) {
            const auto f = load_function(estimate_fn);
            json config{{"fn", estimate_fn},          {"oracle", estimate_oracle},
                        {"k", estimate_k},            {"samples", estimate_samples},
                        {"seed", estimate_seed},      {"budget", budget}};
            const auto oracle =
                make_oracle(estimate_oracle, f.domain().field(), estimate_k, budget);
            const auto est = hofa::oblivious_estimate(f, oracle, estimate_samples, estimate_seed);
            json result{{"value", est.value},
                        {"standard_error", est.standard_error},
                        {"samples", est.samples}};
            std::cerr << "estimate: " << estimate_oracle << " ~ " << est.value << " +- "
                      << est.standard_error << '\n';
            out.record(json{{"cmd", "estimate"}, {"config", config}, {"result", result}});
        } else if (*sc_test) {
            const auto f = load_function(test_fn);
            json config{{"fn", test_fn},   {"property", test_property},
                        {"eps", test_eps}, {"k", test_k},
                        {"confidence", test_confidence}, {"seed", test_seed},
                        {"budget", budget}};
            const auto oracle = make_oracle("distance-" + test_property, f.domain().field(),
                                            test_k, budget);
            const auto res =
                hofa::tester_from_estimator(f, oracle, 0.0, test_eps, test_seed, test_confidence);
            json result{{"accept", res.accept},
                        {"estimate", res.estimate},
                        {"threshold", res.threshold},
                        {"samples", res.samples}};
            std::cerr << "test-property: " << (res.accept ? "ACCEPT" : "REJECT") << " (estimate "
                      << res.estimate << " vs threshold " << res.threshold << ")\n";
            out.record(json{{"cmd", "test-property"}, {"config", config}, {"result", result}});
        } else if (*sc_converge) {
            const auto f = load_function(converge_fn);
            json config{{"fn", converge_fn},
                        {"dims", converge_dims},
                        {"v", converge_v},
                        {"m", converge_m},
                        {"upsilon_d", converge_upsilon_d},
                        {"restarts", converge_restarts},
                        {"samples", converge_samples},
                        {"k", converge_k},
                        {"seed", converge_seed},
                        {"budget", budget},
                        {"threads", threads}};
            if (!converge_property.empty())
                config["property"] = converge_property;
            out.record(json{{"cmd", "converge"}, {"config", config}});

            const auto seq = hofa::blow_up_sequence(f, converge_dims, converge_seed);
            std::vector<hofa::DenseFunction> full;
            full.push_back(f);
            for (const auto& g : seq.funcs)
                full.push_back(g);

            hofa::ConvergenceConfig cfg;
            cfg.profile_vars = converge_v;
            cfg.profile_forms = converge_m;
            cfg.upsilon_degrees = converge_upsilon_d;
            cfg.upsilon_restarts = converge_restarts;
            cfg.samples = converge_samples;
            cfg.oracle_k = converge_k;
            cfg.seed = converge_seed;
            cfg.budget = budget;
            cfg.threads = threads;
            std::optional<hofa::Property> prop;
            if (!converge_property.empty())
                prop = named_property(converge_property, f.domain().field(), budget);
            const auto report =
                hofa::convergence_report(full, cfg, prop ? &*prop : nullptr);

            for (std::size_t i = 0; i < full.size(); ++i) {
                json values = json::array();
                for (const auto& v : report.profiles[i].values)
                    values.push_back(complex_json(v));
                json rec{{"cmd", "converge"}, {"element", i}, {"n", full[i].n()},
                         {"profile", values}};
                if (!report.pi_values.empty()) {
                    rec["pi"] = report.pi_values[i];
                    rec["pi_estimated"] = static_cast<bool>(report.pi_estimated[i]);
                }
                out.record(rec);
            }
            json upsilon = json::object();
            for (const auto& [degree, values] : report.upsilon_values)
                upsilon[std::to_string(degree)] = values;
            out.record(json{{"cmd", "converge"},
                            {"summary", json{{"max_profile_gap", report.max_profile_gap},
                                             {"max_pi_gap", report.max_pi_gap},
                                             {"upsilon", upsilon}}}});
            std::cerr << "converge: max profile gap " << report.max_profile_gap
                      << ", max pi gap " << report.max_pi_gap << '\n';
        }
    } catch (const hofa::parse_error& e) {
        std::cerr << "parse error: " << e.what() << '\n';
        return 2;
    } catch (const hofa::dimension_error& e) {
        std::cerr << "dimension error: " << e.what() << '\n';
        return 3;
    } catch (const hofa::budget_error& e) {
        std::cerr << "budget error: " << e.what() << '\n';
        return 4;
    } catch (const hofa::value_error& e) {
        std::cerr << "value error: " << e.what() << '\n';
        return 5;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
