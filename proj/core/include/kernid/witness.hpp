#pragma once

#include <Eigen/Core>

#include <array>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "kernid/design.hpp"
#include "kernid/kernels.hpp"

namespace kernid {

/// Multi-start search configuration. param_bounds are per-parameter (low,
/// high) boxes in log-space; empty selects (-5, 5) for every parameter.
struct WitnessSearchConfig {
    int starts = 64;
    int max_iters = 2000;
    double residual_tol = 1e-8;
    double distinct_tol = 1e-3;
    std::vector<std::pair<double, double>> param_bounds;
    std::uint64_t rng_seed = 0;
};

enum class WitnessOutcome { WitnessFound, NoWitness };

/// Outcome of a non-identifiability search.
///
/// WitnessFound carries a parameter set whose Gram matrix matches the target
/// within residual_tol while differing from the target parameters by at least
/// distinct_tol. NoWitness reports the best residual reached by any distinct
/// candidate under this configuration; it is evidence of absence, not proof.
struct WitnessReport {
    WitnessOutcome outcome;
    std::optional<MixedKernelSpec> witness;
    std::optional<MixedKernelSpec> best_distinct;
    double residual; // witness residual, or best distinct residual (NaN if none)
    MixedKernelSpec target_params;
    Design design;
    WitnessSearchConfig config;
    int starts_converged;
};

/// Normalized Frobenius residual ||G(candidate) - target||_F / ||target||_F.
/// Zero iff the Gram matrices are equal. Noise is never added.
double gram_residual(const MixedKernelSpec& candidate, const GramMatrix& target,
                     const Design& design);

/// Builds the target Gram (no noise) and runs `starts` independent
/// derivative-free minimizations of gram_residual over log-parameters from
/// seeded random points. The period of an RbfPeriodic target stays fixed.
/// Qualifying minima are converged, below residual_tol and distinct beyond
/// distinct_tol; the winner is the lexicographically smallest
/// (residual, start index). Deterministic given config.rng_seed.
WitnessReport find_witness(const MixedKernelSpec& target_spec, const Design& design,
                           const WitnessSearchConfig& config = {});

/// A constructed pair of distinct parameter sets with equal Gram matrices on
/// designs whose distance set is X4, plus the coefficient vector that
/// certifies the shared rank deficiency.
struct PeriodicCounterexample {
    MixedKernelSpec set1;
    MixedKernelSpec set2;
    Eigen::Vector4d coefficients;
};

/// Solves sum_i c_i v(x_i) = 0 for the RBF+periodic column family over the
/// four distances X4, with the coefficient pattern fixed up to its overall
/// scale (c[0] stays as given). Each component equation is a scalar
/// root-finding problem; two distinct roots per family are required, and the
/// induced amplitudes must come out positive. Returns nullopt (infeasible)
/// otherwise, e.g. when all distances are period multiples and the columns
/// collapse.
std::optional<PeriodicCounterexample> solve_periodic_counterexample(
    const std::array<double, 4>& X4, double p,
    const Eigen::Vector4d& pattern = Eigen::Vector4d(1.0, -3.0, 6.0, -2.0));

} // namespace kernid
