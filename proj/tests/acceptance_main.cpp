// Acceptance suite: every criterion below runs at its stated tolerance and
// prints one PASS/FAIL line. The process exits nonzero if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "kernid/counterexamples.hpp"
#include "kernid/design.hpp"
#include "kernid/gpfit.hpp"
#include "kernid/kernels.hpp"
#include "kernid/lemmas.hpp"
#include "kernid/witness.hpp"

using namespace kernid;
namespace cx = kernid::counterexamples;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

double max_abs_dev(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
    return (a - b).cwiseAbs().maxCoeff();
}

std::string num(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.3g", v);
    return buf;
}

// --- 1: aligned-design reproduction ------------------------------------------

Outcome criterion1() {
    const Design d = cx::periodic_multiples_design();
    const Eigen::MatrixXd golden = cx::periodic_multiples_golden();
    const Eigen::MatrixXd g1 = build_gram(cx::periodic_multiples_spec(1.0), d).matrix();
    const Eigen::MatrixXd g2 = build_gram(cx::periodic_multiples_spec(2.0), d).matrix();
    const double dev_golden = std::max(max_abs_dev(g1, golden), max_abs_dev(g2, golden));
    const double dev_between = max_abs_dev(g1, g2);
    return {dev_golden <= 1e-12 && dev_between <= 1e-12,
            "dev_golden=" + num(dev_golden) + " dev_between=" + num(dev_between)};
}

// --- 2: off-grid pair reproduction --------------------------------------------

Outcome criterion2() {
    const Design d = cx::periodic_nonmultiples_design();
    const Eigen::MatrixXd golden = cx::periodic_nonmultiples_golden();
    const auto [s1, s2] = cx::periodic_nonmultiples_pair();
    const Eigen::MatrixXd g1 = build_gram(s1, d).matrix();
    const Eigen::MatrixXd g2 = build_gram(s2, d).matrix();
    const double dev_golden = std::max(max_abs_dev(g1, golden), max_abs_dev(g2, golden));
    const double dev_between = max_abs_dev(g1, g2);
    return {dev_golden <= 5e-7 && dev_between <= 1e-6,
            "dev_golden=" + num(dev_golden) + " dev_between=" + num(dev_between)};
}

// --- 3: octahedron reproduction ------------------------------------------------

Outcome criterion3() {
    const Design d = cx::two_rbf_octahedron_design();
    const Eigen::MatrixXd golden = cx::two_rbf_octahedron_golden();
    const auto [t1, t2] = cx::two_rbf_octahedron_pair();
    const Eigen::MatrixXd g1 = build_gram(t1, d).matrix();
    const Eigen::MatrixXd g2 = build_gram(t2, d).matrix();
    const double dev_golden = std::max(max_abs_dev(g1, golden), max_abs_dev(g2, golden));
    const double dev_between = max_abs_dev(g1, g2);
    const std::size_t cardinality = distance_set(d).size();
    return {dev_golden <= 1e-9 && dev_between <= 1e-9 && cardinality == 3,
            "dev_golden=" + num(dev_golden) + " dev_between=" + num(dev_between) +
                " |X|=" + std::to_string(cardinality)};
}

// --- 4: theorem-condition checks ------------------------------------------------

Outcome criterion4() {
    bool ok = true;
    std::string detail;

    const auto aligned = check_theorem1(distance_set(cx::periodic_multiples_design()), 7.0);
    ok = ok && !aligned.holds() && aligned.alpha.has_value() && !aligned.beta.has_value();

    const auto offgrid = check_theorem1(distance_set(cx::periodic_nonmultiples_design()), 4.0);
    ok = ok && !offgrid.holds() && !offgrid.alpha.has_value() && offgrid.beta.has_value();

    const auto ident = check_theorem1(distance_set(Design::grid1d({0, 3, 7, 10})), 7.0);
    ok = ok && ident.holds();

    const auto oct = check_theorem2(distance_set(cx::two_rbf_octahedron_design()));
    ok = ok && !oct.holds() && oct.cardinality == 3;

    // Any 1-d design with at least three distinct positive gaps satisfies the
    // cardinality condition (0 always joins the distance set).
    std::mt19937_64 gen(404);
    std::uniform_real_distribution<double> u(0.0, 20.0);
    int fuzz_checked = 0;
    for (int rep = 0; rep < 400 && fuzz_checked < 200; ++rep) {
        std::vector<double> xs;
        for (int i = 0; i < 5; ++i) xs.push_back(u(gen));
        const auto X = distance_set(Design::grid1d(xs));
        int positive = 0;
        for (double v : X.values()) positive += v > 0.0 ? 1 : 0;
        if (positive < 3) continue;
        ++fuzz_checked;
        ok = ok && check_theorem2(X).holds();
    }
    ok = ok && fuzz_checked >= 200;
    return {ok, "listed cases plus " + std::to_string(fuzz_checked) + " fuzzed cardinality cases"};
}

// --- 5: witness search recovers the published off-grid pair ----------------------

Outcome criterion5() {
    const auto [s1, s2] = cx::periodic_nonmultiples_pair();
    const Design d = cx::periodic_nonmultiples_design();
    int hits = 0;
    double worst_seconds = 0.0;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        WitnessSearchConfig config;
        config.rng_seed = seed;
        const auto t0 = std::chrono::steady_clock::now();
        const auto report = find_witness(s1, d, config);
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        worst_seconds = std::max(worst_seconds, secs);
        if (secs >= 30.0) return {false, "run exceeded 30 s"};
        if (report.outcome == WitnessOutcome::WitnessFound &&
            relative_param_distance(*report.witness, s2) < 1e-3) {
            ++hits;
        }
    }
    return {hits >= 4, std::to_string(hits) + "/5 seeds recovered the pair, worst run " +
                           num(worst_seconds) + " s"};
}

// --- 6: falsification resistance on identifiable designs -------------------------

struct FuzzCase {
    MixedKernelSpec target;
    Design design;
};

std::vector<FuzzCase> fuzz_periodic_cases(int count, std::mt19937_64& gen) {
    std::uniform_int_distribution<int> coord(0, 24);
    std::uniform_int_distribution<int> period(2, 6);
    std::uniform_int_distribution<int> size(4, 7);
    std::uniform_real_distribution<double> amp(0.6, 1.8);
    std::uniform_real_distribution<double> len(0.6, 2.5);
    std::uniform_real_distribution<double> smooth(0.6, 1.8);

    std::vector<FuzzCase> cases;
    while (static_cast<int>(cases.size()) < count) {
        std::set<int> pts;
        const int n = size(gen);
        while (static_cast<int>(pts.size()) < n) pts.insert(coord(gen));
        const double p = period(gen);
        const Design d = Design::grid1d(std::vector<double>(pts.begin(), pts.end()));
        const auto X = distance_set(d);
        if (!check_theorem1(X, p).holds()) continue;
        // Require a non-degenerate certificate quadruple, i.e. the setting the
        // rank argument actually covers.
        const auto w = find_lemma31_witness(X, p);
        if (!w) continue;
        std::array<double, 4> sorted = w->members;
        std::sort(sorted.begin(), sorted.end());
        if (sorted[1] == sorted[2]) continue;
        cases.push_back({MixedKernelSpec::rbf_periodic(RbfParams(amp(gen), len(gen)),
                                                       PeriodicParams(amp(gen), smooth(gen), p)),
                         d});
    }
    return cases;
}

std::vector<FuzzCase> fuzz_two_rbf_cases(int count, std::mt19937_64& gen) {
    std::uniform_int_distribution<int> dim(1, 3);
    std::uniform_int_distribution<int> coord(0, 6);
    std::uniform_int_distribution<int> size(4, 7);
    std::uniform_real_distribution<double> amp(0.6, 1.8);
    std::uniform_real_distribution<double> len(0.5, 1.5);
    std::uniform_real_distribution<double> ratio(1.6, 3.0);

    std::vector<FuzzCase> cases;
    while (static_cast<int>(cases.size()) < count) {
        const int d = dim(gen);
        const int n = size(gen);
        std::set<std::vector<double>> pts;
        while (static_cast<int>(pts.size()) < n) {
            std::vector<double> pt;
            for (int k = 0; k < d; ++k) pt.push_back(coord(gen));
            pts.insert(pt);
        }
        const Design design(d, std::vector<std::vector<double>>(pts.begin(), pts.end()));
        const auto X = distance_set(design);
        if (X.size() < 4) continue;
        bool separated = true;
        for (std::size_t i = 1; i < X.size(); ++i) {
            separated = separated && X.values()[i] - X.values()[i - 1] >= 0.05;
        }
        if (!separated) continue;
        const double l1 = len(gen);
        const double l2 = l1 * ratio(gen);
        cases.push_back(
            {MixedKernelSpec::two_rbf(RbfParams(amp(gen), l1), RbfParams(amp(gen), l2)), design});
    }
    return cases;
}

Outcome criterion6() {
    std::mt19937_64 gen(9001);
    std::vector<FuzzCase> cases = fuzz_periodic_cases(100, gen);
    const std::vector<FuzzCase> two_rbf = fuzz_two_rbf_cases(100, gen);
    cases.insert(cases.end(), two_rbf.begin(), two_rbf.end());

    int found = 0;
    double min_distinct_residual = 1.0;
    for (std::size_t i = 0; i < cases.size(); ++i) {
        WitnessSearchConfig config;
        config.rng_seed = i;
        const auto report = find_witness(cases[i].target, cases[i].design, config);
        if (report.outcome == WitnessOutcome::WitnessFound) ++found;
        if (report.best_distinct && std::isfinite(report.residual)) {
            min_distinct_residual = std::min(min_distinct_residual, report.residual);
        }
    }
    return {found == 0, std::to_string(cases.size()) + " cases, " + std::to_string(found) +
                            " spurious witnesses, closest distinct residual " +
                            num(min_distinct_residual)};
}

// --- 7: lemma fuzz suites ----------------------------------------------------------

Outcome criterion7() {
    GridSpec grid;
    grid.samples_per_axis = 10000;
    grid.rng_seed = 1;
    const auto results = run_all_lemma_checks(grid);
    bool ok = results.size() == 7;
    long total_violations = 0;
    for (const auto& r : results) {
        ok = ok && r.cases_run >= 10000 && r.passed();
        total_violations += static_cast<long>(r.violations.size());
    }
    return {ok, std::to_string(results.size()) + " suites, " +
                    std::to_string(total_violations) + " violations"};
}

// --- 8: the certificate property as an executable statement -------------------------

Outcome criterion8() {
    std::mt19937_64 gen(512);
    std::uniform_int_distribution<int> coord(0, 30);
    std::uniform_int_distribution<int> period(1, 6);
    std::uniform_int_distribution<int> size(3, 8);

    int holding = 0;
    int failures = 0;
    for (int rep = 0; rep < 40000 && holding < 1000; ++rep) {
        std::set<int> pts;
        const int n = size(gen);
        while (static_cast<int>(pts.size()) < n) pts.insert(coord(gen));
        const double p = period(gen);
        const auto X = distance_set(Design::grid1d(std::vector<double>(pts.begin(), pts.end())));
        if (!check_theorem1(X, p).holds()) continue;
        ++holding;
        const auto w = find_lemma31_witness(X, p);
        if (!w || !lemma31_witness_valid(*w, X, p)) ++failures;
    }
    return {holding >= 1000 && failures == 0,
            std::to_string(holding) + " holding designs, " + std::to_string(failures) +
                " certificate failures"};
}

// --- 9: likelihood flatness and recovery --------------------------------------------

Outcome criterion9() {
    const auto [s1, s2] = cx::periodic_nonmultiples_pair();
    const Design d = cx::periodic_nonmultiples_design();
    std::mt19937_64 gen(606);
    std::normal_distribution<double> noise(0.0, 1.2);
    double worst_gap = 0.0;
    for (int rep = 0; rep < 20; ++rep) {
        Eigen::VectorXd y(d.size());
        for (int i = 0; i < d.size(); ++i) y[i] = noise(gen);
        const Dataset data(d, y);
        worst_gap = std::max(worst_gap,
                             std::abs(log_marginal(s1, data) - log_marginal(s2, data)));
    }
    if (worst_gap > 1e-5) return {false, "likelihood gap " + num(worst_gap)};

    // Recovery on an identifiable 6-point base design, replicated to 60
    // jittered points. Statistical criterion: majority of seeds put the top
    // optimum within 15% of the truth.
    const std::vector<double> base = {0, 3, 7, 10, 14, 20};
    const double noise_var = 0.01;
    const auto truth = MixedKernelSpec::rbf_periodic(RbfParams(1.0, 2.0),
                                                     PeriodicParams(1.2, 0.8, 7.0), noise_var);
    int recovered = 0;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        std::mt19937_64 dgen(seed * 131);
        std::uniform_real_distribution<double> jitter(-0.15, 0.15);
        std::vector<double> xs;
        for (int rep = 0; rep < 10; ++rep) {
            for (double b : base) xs.push_back(b + jitter(dgen));
        }
        const Design design = Design::grid1d(xs);
        const Dataset data = sample_prior(truth, design, seed);

        WitnessSearchConfig config;
        config.starts = 40;
        config.rng_seed = seed;
        const auto optima = fit_mle(data, KernelFamily::RbfPeriodic, 7.0, config, noise_var);
        if (optima.empty()) continue;
        if (relative_param_distance(optima.front().params, truth) <= 0.15) ++recovered;
    }
    return {recovered >= 3, "likelihood gap " + num(worst_gap) + ", recovery " +
                                std::to_string(recovered) + "/5 seeds"};
}

struct Criterion {
    int id;
    const char* label;
    double budget_seconds;
    Outcome (*run)();
};

} // namespace

int main() {
    const std::vector<Criterion> criteria = {
        {1, "aligned-design reproduction", 1.0, criterion1},
        {2, "off-grid pair reproduction", 1.0, criterion2},
        {3, "octahedron reproduction", 1.0, criterion3},
        {4, "theorem-condition checks", 60.0, criterion4},
        {5, "witness recovery of the off-grid pair", 150.0, criterion5},
        {6, "falsification resistance on identifiable designs", 1800.0, criterion6},
        {7, "lemma fuzz suites", 120.0, criterion7},
        {8, "certificate property on random integer designs", 60.0, criterion8},
        {9, "likelihood flatness and MLE recovery", 300.0, criterion9},
    };

    bool all_pass = true;
    for (const auto& c : criteria) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome outcome;
        try {
            outcome = c.run();
        } catch (const std::exception& e) {
            outcome = {false, std::string("exception: ") + e.what()};
        }
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        const bool ok = outcome.pass && secs <= c.budget_seconds;
        all_pass = all_pass && ok;
        std::printf("[%s] criterion %d: %s (%.2f s) %s\n", ok ? "PASS" : "FAIL", c.id, c.label,
                    secs, outcome.detail.c_str());
    }
    return all_pass ? 0 : 1;
}
