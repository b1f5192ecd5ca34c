#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "kernid/design.hpp"

namespace kernid {

// Scalar functions from the identifiability proofs. All are numerically
// stable near the origin (expm1-based denominators).

/// I(t, s) = t e^{-ts} / (1 - e^{-ts}); strictly decreasing in t, limit 1/s as t -> 0+.
double fn_I(double t, double s);

/// s(x, y; p) = (e^{-(x+p)^2 y^2} - 1) / (e^{-p^2 y^2} - 1); > 1 and strictly
/// decreasing in y for x, y, p > 0.
double fn_s(double x, double y, double p);

/// h(x; p, l) = (e^{-(x+p)^2/l^2} - 1) / (e^{-p^2/l^2} - 1).
///
/// Equals fn_s(x, 1/l, p); strictly increasing in l and satisfies
/// 1 / h(-x; p, l) = h(x; p - x, l) exactly for 0 < x < p.
double fn_h(double x, double p, double ell);

/// Shifted variant used by the rank argument:
/// (e^{-(x+p)^2/l^2} - e^{-x^2/l^2}) / (e^{-p^2/l^2} - 1).
/// Agrees with fn_h at x = 0 and is likewise strictly increasing in l, but
/// does not obey the reciprocal identity above.
double fn_h_shifted(double x, double p, double ell);

enum class LemmaId { L2, L3, L4, L5, L6, L8, L9 };

enum class SampleMode { Grid, RandomUniform };

/// Sampling plan for a numeric lemma check.
///
/// In RandomUniform mode samples_per_axis is the total number of admissible
/// tuples drawn; in Grid mode it is the number of points per axis and the
/// check visits the admissible subset of the full cartesian product. Empty
/// ranges select per-check defaults; non-empty ranges must match the check's
/// tuple arity.
struct GridSpec {
    int samples_per_axis = 10000;
    std::vector<std::pair<double, double>> ranges;
    std::uint64_t rng_seed = 0;
    SampleMode mode = SampleMode::RandomUniform;
};

struct LemmaViolation {
    std::vector<double> inputs;
    std::vector<double> observed;
};

struct LemmaCheckResult {
    LemmaId lemma_id = LemmaId::L2;
    long cases_run = 0;
    std::vector<LemmaViolation> violations;
    double tolerance = 0.0;

    bool passed() const { return violations.empty(); }
};

/// Pairs (e^{ka}, e^{kb}), (e^{la}, e^{lb}) with k != l, a != b stay linearly
/// independent: |det| must exceed tolerance times the row-norm product.
LemmaCheckResult check_lemma2(const GridSpec& grid = {});

/// fn_I strictly decreasing in t.
LemmaCheckResult check_lemma3(const GridSpec& grid = {});

/// fn_s strictly decreasing in y, fn_h / fn_h_shifted strictly increasing in
/// ell, and the reciprocal identity fn_h(-x;p,l) * fn_h(x;p-x,l) = 1.
LemmaCheckResult check_lemma4(const GridSpec& grid = {});

/// 3x3 matrices of zeta^e - 1 entries keep nonzero determinant for distinct
/// zeta_i > 1 and exponents 1 < a < b.
LemmaCheckResult check_lemma6(const GridSpec& grid = {});

/// First: 3x3 Gaussian column matrices stay nonsingular (L8).
/// Second: f(x) = (x^B - x^A)/(x^A - 1) strictly increasing on (0, 1) (L9).
std::pair<LemmaCheckResult, LemmaCheckResult> check_lemma8_9(const GridSpec& grid = {});

/// Numerical rank-4 check of the v(x) column families over each design's
/// certificate distances. 1-d designs passing the period condition are
/// checked with the RBF+periodic family; designs with at least four distinct
/// distances with the 2-RBF family. Throws ConditionNotMetError when a design
/// supports neither check (or only a degenerate certificate quadruple).
LemmaCheckResult check_rank_lemmas(const std::vector<Design>& designs, double p,
                                   const GridSpec& grid = {});

/// All scalar-lemma fuzz suites plus the rank checks on built-in designs.
std::vector<LemmaCheckResult> run_all_lemma_checks(const GridSpec& grid = {});

} // namespace kernid
