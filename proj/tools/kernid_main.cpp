// kernid: identifiability analysis for mixed-kernel GP regression models.
//
// Subcommands: check, gram, witness, reproduce, verify-lemmas, fit, sample.
// Exit codes: 0 success / condition holds, 2 usage or parse error,
// 3 negative verdict, 4 dimension mismatch, 5 verification failure.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "kernid/counterexamples.hpp"
#include "kernid/design.hpp"
#include "kernid/errors.hpp"
#include "kernid/gpfit.hpp"
#include "kernid/io.hpp"
#include "kernid/kernels.hpp"
#include "kernid/lemmas.hpp"
#include "kernid/witness.hpp"

namespace {

using nlohmann::json;
using namespace kernid;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitNegative = 3;
constexpr int kExitDimension = 4;
constexpr int kExitVerification = 5;

const char* kConditionFailsNote =
    "sufficient condition not met - identifiability undetermined; "
    "run `witness` to search for a counterexample";

struct GlobalOptions {
    std::string format = "text";
    std::uint64_t seed = 0;
    double tol_div = 1e-9;
    double tol_dedup = 1e-9;

    bool json_output() const { return format == "json"; }
};

std::string fmt(double v) { return format_double(v); }

json params_to_json(const MixedKernelSpec& spec) {
    json doc;
    if (spec.family() == KernelFamily::RbfPeriodic) {
        doc["variant"] = "rbf_periodic";
        doc["sigma"] = spec.rbf().sigma;
        doc["ell"] = spec.rbf().ell;
        doc["tau"] = spec.periodic().tau;
        doc["s"] = spec.periodic().s;
        doc["p"] = spec.periodic().p;
    } else {
        doc["variant"] = "two_rbf";
        doc["sigma1"] = spec.short_rbf().sigma;
        doc["ell1"] = spec.short_rbf().ell;
        doc["sigma2"] = spec.long_rbf().sigma;
        doc["ell2"] = spec.long_rbf().ell;
    }
    doc["noise_var"] = spec.noise_var();
    return doc;
}

std::string params_to_text(const MixedKernelSpec& spec) {
    if (spec.family() == KernelFamily::RbfPeriodic) {
        return "rbf_periodic sigma=" + fmt(spec.rbf().sigma) + " ell=" + fmt(spec.rbf().ell) +
               " tau=" + fmt(spec.periodic().tau) + " s=" + fmt(spec.periodic().s) +
               " p=" + fmt(spec.periodic().p);
    }
    return "two_rbf sigma1=" + fmt(spec.short_rbf().sigma) + " ell1=" + fmt(spec.short_rbf().ell) +
           " sigma2=" + fmt(spec.long_rbf().sigma) + " ell2=" + fmt(spec.long_rbf().ell);
}

const char* shape_name(WitnessShape shape) {
    return shape == WitnessShape::ZeroMpQMpq ? "{0, mp, q, mp+q}" : "{0, q, mp-q, mp}";
}

// ---- check ---------------------------------------------------------------

struct CheckArgs {
    std::string design_path;
    double p = 0.0;
    bool p_given = false;
};

int run_check(const GlobalOptions& global, const CheckArgs& args) {
    const Design design = load_design_file(args.design_path);
    if (args.p_given && design.dim() != 1) {
        throw DimensionMismatchError("--p applies to 1-d designs only");
    }
    const DistanceSet X = distance_set(design, global.tol_dedup);
    const CheckReport t2 = check_theorem2(X);

    std::optional<CheckReport> t1;
    std::optional<Lemma31Witness> quad;
    if (args.p_given) {
        if (!(args.p > 0.0)) throw ParseError("--p must be positive");
        t1 = check_theorem1(X, args.p, global.tol_div);
        if (t1->holds()) quad = find_lemma31_witness(X, args.p, global.tol_div);
    }

    const bool verdict = args.p_given ? t1->holds() : t2.holds();

    if (global.json_output()) {
        json doc;
        doc["distance_set"] = X.values();
        doc["dedup_tol"] = X.dedup_tol();
        doc["two_rbf"] = {{"verdict", t2.holds() ? "condition_holds" : "condition_fails"},
                          {"cardinality", t2.cardinality}};
        if (t1) {
            json jt1 = {{"verdict", t1->holds() ? "condition_holds" : "condition_fails"},
                        {"p", args.p},
                        {"alpha", t1->alpha ? json(*t1->alpha) : json(nullptr)},
                        {"beta", t1->beta ? json(*t1->beta) : json(nullptr)}};
            if (quad) {
                jt1["certificate_quadruple"] = {
                    {"shape", quad->shape == WitnessShape::ZeroMpQMpq ? "zero_mp_q_mpq"
                                                                      : "zero_q_mpq_mp"},
                    {"m", quad->m},
                    {"q", quad->q},
                    {"members", quad->members}};
            } else {
                jt1["certificate_quadruple"] = nullptr;
            }
            doc["rbf_periodic"] = jt1;
        }
        doc["verdict"] = verdict ? "condition_holds" : "condition_fails";
        std::cout << doc.dump(2) << '\n';
        return verdict ? kExitOk : kExitNegative;
    }

    std::cout << "design: " << design.size() << " points, dim " << design.dim() << '\n';
    std::cout << "distance set (" << X.size() << " values):";
    for (double v : X.values()) std::cout << ' ' << fmt(v);
    std::cout << '\n';
    std::cout << "two-rbf condition (|X| >= 4): "
              << (t2.holds() ? "holds" : "fails") << " (|X| = " << t2.cardinality << ")\n";
    if (!t2.holds()) std::cout << "  " << kConditionFailsNote << '\n';
    if (t1) {
        std::cout << "rbf-periodic condition (p = " << fmt(args.p)
                  << "): " << (t1->holds() ? "holds" : "fails") << '\n';
        if (t1->alpha) {
            std::cout << "  alpha = " << fmt(*t1->alpha) << " (period multiple)\n";
        } else {
            std::cout << "  no positive distance is a multiple of the period\n";
        }
        if (t1->beta) {
            std::cout << "  beta = " << fmt(*t1->beta) << " (non-multiple)\n";
        } else {
            std::cout << "  no non-multiple distance\n";
        }
        if (!t1->holds()) std::cout << "  " << kConditionFailsNote << '\n';
        if (quad) {
            std::cout << "  certificate quadruple " << shape_name(quad->shape)
                      << ": m = " << quad->m << ", q = " << fmt(quad->q) << ", members {";
            for (int i = 0; i < 4; ++i) {
                std::cout << (i ? ", " : "") << fmt(quad->members[static_cast<std::size_t>(i)]);
            }
            std::cout << "}\n";
        }
    }
    return verdict ? kExitOk : kExitNegative;
}

// ---- gram ------------------------------------------------------------------

struct GramArgs {
    std::string design_path;
    std::string params_path;
    bool include_noise = false;
    std::string out_path;
};

int run_gram(const GlobalOptions&, const GramArgs& args) {
    const Design design = load_design_file(args.design_path);
    const LoadedParams loaded = load_params_file(args.params_path);
    if (loaded.reordered) {
        std::cerr << "warning: two_rbf components reordered to canonical order\n";
    }
    const GramMatrix gram = build_gram(loaded.spec, design, args.include_noise);
    if (args.out_path.empty()) {
        write_csv_matrix(std::cout, gram.matrix());
    } else {
        std::ofstream out(args.out_path, std::ios::binary);
        if (!out) throw ParseError("cannot open output file: " + args.out_path);
        write_csv_matrix(out, gram.matrix());
    }
    return kExitOk;
}

// ---- witness ---------------------------------------------------------------

struct WitnessArgs {
    std::string design_path;
    std::string params_path;
    WitnessSearchConfig config;
    double log_low = -5.0;
    double log_high = 5.0;
};

int run_witness(const GlobalOptions& global, WitnessArgs args) {
    const Design design = load_design_file(args.design_path);
    const LoadedParams loaded = load_params_file(args.params_path);
    if (loaded.reordered) {
        std::cerr << "warning: two_rbf components reordered to canonical order\n";
    }
    args.config.rng_seed = global.seed;
    args.config.param_bounds.assign(4, {args.log_low, args.log_high});
    const WitnessReport report = find_witness(loaded.spec, design, args.config);
    const bool found = report.outcome == WitnessOutcome::WitnessFound;

    if (global.json_output()) {
        json doc;
        doc["target"] = params_to_json(report.target_params);
        doc["outcome"] = found ? "witness_found" : "no_witness";
        doc["witness"] = report.witness ? params_to_json(*report.witness) : json(nullptr);
        doc["best_distinct"] =
            report.best_distinct ? params_to_json(*report.best_distinct) : json(nullptr);
        doc["residual"] = std::isfinite(report.residual) ? json(report.residual) : json(nullptr);
        doc["starts"] = report.config.starts;
        doc["starts_converged"] = report.starts_converged;
        doc["seed"] = report.config.rng_seed;
        std::cout << doc.dump(2) << '\n';
        return found ? kExitOk : kExitNegative;
    }

    std::cout << "target:  " << params_to_text(report.target_params) << '\n';
    if (found) {
        std::cout << "outcome: witness found (distinct parameters, matching Gram)\n";
        std::cout << "witness: " << params_to_text(*report.witness) << '\n';
        std::cout << "residual: " << fmt(report.residual) << '\n';
    } else {
        std::cout << "outcome: no witness found under this configuration\n";
        if (report.best_distinct) {
            std::cout << "best distinct candidate: " << params_to_text(*report.best_distinct)
                      << '\n';
            std::cout << "best distinct residual: " << fmt(report.residual) << '\n';
        }
    }
    std::cout << "starts converged: " << report.starts_converged << "/" << report.config.starts
              << '\n';
    return found ? kExitOk : kExitNegative;
}

// ---- reproduce ---------------------------------------------------------------

int run_reproduce(const GlobalOptions& global) {
    const auto results = counterexamples::reproduce_all();
    bool all_pass = true;
    json jout = json::array();
    for (const auto& r : results) {
        all_pass = all_pass && r.pass();
        if (global.json_output()) {
            jout.push_back({{"id", r.id},
                            {"max_dev_vs_golden", r.max_dev_vs_golden},
                            {"max_dev_between_sets", r.max_dev_between_sets},
                            {"tol_golden", r.tol_golden},
                            {"tol_between", r.tol_between},
                            {"pass", r.pass()}});
        } else {
            std::cout << (r.pass() ? "PASS" : "FAIL") << "  " << r.id
                      << "  dev_vs_golden=" << fmt(r.max_dev_vs_golden)
                      << " (tol " << fmt(r.tol_golden) << ")"
                      << "  dev_between_sets=" << fmt(r.max_dev_between_sets)
                      << " (tol " << fmt(r.tol_between) << ")\n";
        }
    }
    if (global.json_output()) std::cout << jout.dump(2) << '\n';
    return all_pass ? kExitOk : kExitVerification;
}

// ---- verify-lemmas -------------------------------------------------------------

const char* lemma_label(LemmaId id) {
    switch (id) {
        case LemmaId::L2: return "L2 exp-pair-independence";
        case LemmaId::L3: return "L3 ratio-I-decreasing";
        case LemmaId::L4: return "L4 ratio-h-injective";
        case LemmaId::L5: return "L5 column-family-rank4";
        case LemmaId::L6: return "L6 power-matrix-det";
        case LemmaId::L8: return "L8 gaussian-columns-det";
        case LemmaId::L9: return "L9 power-ratio-increasing";
    }
    return "unknown";
}

int run_verify_lemmas(const GlobalOptions& global, int samples) {
    GridSpec grid;
    grid.samples_per_axis = samples;
    grid.rng_seed = global.seed;
    const auto results = run_all_lemma_checks(grid);

    bool all_pass = true;
    json jout = json::array();
    for (const auto& r : results) {
        all_pass = all_pass && r.passed();
        if (global.json_output()) {
            json violations = json::array();
            for (const auto& v : r.violations) {
                violations.push_back({{"inputs", v.inputs}, {"observed", v.observed}});
            }
            jout.push_back({{"lemma", lemma_label(r.lemma_id)},
                            {"cases_run", r.cases_run},
                            {"violations", violations},
                            {"tolerance", r.tolerance},
                            {"pass", r.passed()}});
        } else {
            std::cout << (r.passed() ? "PASS" : "FAIL") << "  " << lemma_label(r.lemma_id)
                      << "  cases=" << r.cases_run << "  violations=" << r.violations.size()
                      << '\n';
        }
    }
    if (global.json_output()) std::cout << jout.dump(2) << '\n';
    return all_pass ? kExitOk : kExitVerification;
}

// ---- fit / sample ------------------------------------------------------------

struct FitArgs {
    std::string data_path;
    std::string variant;
    double p = 0.0;
    bool p_given = false;
    double noise_var = 0.0;
    bool fit_noise = false;
    WitnessSearchConfig config;
};

int run_fit(const GlobalOptions& global, FitArgs args) {
    const Dataset data = load_dataset_file(args.data_path);
    const KernelFamily family =
        args.variant == "rbf_periodic" ? KernelFamily::RbfPeriodic : KernelFamily::TwoRbf;
    args.config.rng_seed = global.seed;
    const std::optional<double> p =
        args.p_given ? std::optional<double>(args.p) : std::nullopt;
    const auto results = fit_mle(data, family, p, args.config, args.noise_var, args.fit_noise);

    if (global.json_output()) {
        json jout = json::array();
        for (const auto& r : results) {
            jout.push_back({{"params", params_to_json(r.params)},
                            {"neg_log_marginal", r.neg_log_marginal},
                            {"iterations", r.iterations},
                            {"start_index", r.start_index},
                            {"jitter", r.jitter}});
        }
        std::cout << jout.dump(2) << '\n';
        return kExitOk;
    }

    std::cout << results.size() << " distinct converged optima\n";
    for (std::size_t i = 0; i < results.size(); ++i) {
        const auto& r = results[i];
        std::cout << "#" << i << "  nlm=" << fmt(r.neg_log_marginal) << "  "
                  << params_to_text(r.params) << "  (start " << r.start_index << ", "
                  << r.iterations << " iters)\n";
    }
    return kExitOk;
}

struct SampleArgs {
    std::string design_path;
    std::string params_path;
    std::string out_path;
};

int run_sample(const GlobalOptions& global, const SampleArgs& args) {
    const Design design = load_design_file(args.design_path);
    const LoadedParams loaded = load_params_file(args.params_path);
    const Dataset data = sample_prior(loaded.spec, design, global.seed);

    json doc;
    doc["dim"] = design.dim();
    json points = json::array();
    for (int i = 0; i < design.size(); ++i) {
        json row = json::array();
        for (int j = 0; j < design.dim(); ++j) row.push_back(design.points()(i, j));
        points.push_back(row);
    }
    doc["points"] = points;
    json responses = json::array();
    for (int i = 0; i < data.responses.size(); ++i) responses.push_back(data.responses[i]);
    doc["responses"] = responses;

    if (args.out_path.empty()) {
        std::cout << doc.dump(2) << '\n';
    } else {
        std::ofstream out(args.out_path, std::ios::binary);
        if (!out) throw ParseError("cannot open output file: " + args.out_path);
        out << doc.dump(2) << '\n';
    }
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Identifiability analysis for mixed-kernel GP regression"};
    app.require_subcommand(1);
    app.fallthrough(); // global options may follow the subcommand

    GlobalOptions global;
    app.add_option("--format", global.format, "Output format")
        ->check(CLI::IsMember({"text", "json"}))
        ->capture_default_str();
    app.add_option("--seed", global.seed, "RNG seed for search and sampling")
        ->capture_default_str();
    app.add_option("--tol-div", global.tol_div, "Divisibility tolerance for period multiples")
        ->capture_default_str();
    app.add_option("--tol-dedup", global.tol_dedup, "Distance deduplication tolerance")
        ->capture_default_str();

    CheckArgs check_args;
    auto* check = app.add_subcommand("check", "Decide the identifiability sufficient conditions");
    check->add_option("design", check_args.design_path, "design JSON file")->required();
    auto* p_opt = check->add_option("--p", check_args.p, "period of the periodic component");

    GramArgs gram_args;
    auto* gram = app.add_subcommand("gram", "Write the Gram matrix of a design as CSV");
    gram->add_option("design", gram_args.design_path, "design JSON file")->required();
    gram->add_option("params", gram_args.params_path, "params JSON file")->required();
    gram->add_flag("--noise", gram_args.include_noise, "add noise_var to the diagonal");
    gram->add_option("--out", gram_args.out_path, "output CSV path (default stdout)");

    WitnessArgs witness_args;
    auto* witness =
        app.add_subcommand("witness", "Search for a distinct parameter set with equal Gram");
    witness->add_option("design", witness_args.design_path, "design JSON file")->required();
    witness->add_option("params", witness_args.params_path, "target params JSON file")->required();
    witness->add_option("--starts", witness_args.config.starts, "multi-start count")
        ->capture_default_str();
    witness->add_option("--max-iters", witness_args.config.max_iters, "iterations per start")
        ->capture_default_str();
    witness->add_option("--residual-tol", witness_args.config.residual_tol, "match threshold")
        ->capture_default_str();
    witness->add_option("--distinct-tol", witness_args.config.distinct_tol,
                        "minimum relative parameter distance")
        ->capture_default_str();
    witness->add_option("--log-low", witness_args.log_low, "log-space lower bound")
        ->capture_default_str();
    witness->add_option("--log-high", witness_args.log_high, "log-space upper bound")
        ->capture_default_str();

    auto* reproduce =
        app.add_subcommand("reproduce", "Rebuild the bundled counterexample matrices");

    int samples = 10000;
    auto* verify = app.add_subcommand("verify-lemmas", "Run the numeric lemma fuzz suites");
    verify->add_option("--samples", samples, "samples per check")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();

    FitArgs fit_args;
    auto* fit = app.add_subcommand("fit", "Multi-start maximum-likelihood parameter recovery");
    fit->add_option("data", fit_args.data_path, "dataset JSON file")->required();
    fit->add_option("--variant", fit_args.variant, "kernel family")
        ->check(CLI::IsMember({"rbf_periodic", "two_rbf"}))
        ->required();
    auto* fit_p = fit->add_option("--p", fit_args.p, "period (rbf_periodic only)");
    fit->add_option("--noise-var", fit_args.noise_var, "fixed observational variance")
        ->capture_default_str();
    fit->add_flag("--fit-noise", fit_args.fit_noise, "treat noise_var as a free parameter");
    fit->add_option("--starts", fit_args.config.starts, "multi-start count")
        ->capture_default_str();
    fit->add_option("--max-iters", fit_args.config.max_iters, "iterations per start")
        ->capture_default_str();

    SampleArgs sample_args;
    auto* sample = app.add_subcommand("sample", "Draw a dataset from the model prior");
    sample->add_option("design", sample_args.design_path, "design JSON file")->required();
    sample->add_option("params", sample_args.params_path, "params JSON file")->required();
    sample->add_option("--out", sample_args.out_path, "output dataset path (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        check_args.p_given = p_opt->count() > 0;
        fit_args.p_given = fit_p->count() > 0;
        if (check->parsed()) return run_check(global, check_args);
        if (gram->parsed()) return run_gram(global, gram_args);
        if (witness->parsed()) return run_witness(global, witness_args);
        if (reproduce->parsed()) return run_reproduce(global);
        if (verify->parsed()) return run_verify_lemmas(global, samples);
        if (fit->parsed()) return run_fit(global, fit_args);
        if (sample->parsed()) return run_sample(global, sample_args);
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const DimensionMismatchError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitDimension;
    } catch (const InvalidBoundsError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return kExitUsage;
}
