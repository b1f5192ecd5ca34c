#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <optional>
#include <vector>

#include "kernid/design.hpp"
#include "kernid/kernels.hpp"
#include "kernid/witness.hpp"

namespace kernid {

/// Observations over a design: responses[i] belongs to design point i.
struct Dataset {
    Design design;
    Eigen::VectorXd responses;

    Dataset(Design design, Eigen::VectorXd responses);
};

/// One converged local optimum of the marginal likelihood.
struct FitResult {
    MixedKernelSpec params;
    double neg_log_marginal = 0.0;
    bool converged = false;
    int iterations = 0;
    int start_index = 0;
    double jitter = 0.0; // diagonal jitter needed at the optimum (0 when clean)
};

/// Draws f ~ N(0, G) via Cholesky (jitter escalation 1e-10, 1e-8, 1e-6 times
/// the mean diagonal) and adds N(0, noise_var) observation noise per point.
/// Deterministic under rng_seed. Throws NotPsdError when the escalation runs out.
Dataset sample_prior(const MixedKernelSpec& spec, const Design& design, std::uint64_t rng_seed);

/// Gaussian log marginal likelihood
///   -1/2 y^T (G + noise I)^{-1} y - 1/2 log det(G + noise I) - n/2 log(2 pi)
/// computed through the Cholesky factor; no explicit inverse.
double log_marginal(const MixedKernelSpec& spec, const Dataset& data);

/// Multi-start maximization of log_marginal over log-parameters, sharing the
/// optimizer contract of find_witness. noise_var stays fixed unless fit_noise
/// is set (which appends a fifth log-parameter). Returns the converged local
/// optima sorted by neg_log_marginal ascending, deduplicated at
/// config.distinct_tol. RbfPeriodic requires p.
std::vector<FitResult> fit_mle(const Dataset& data, KernelFamily family, std::optional<double> p,
                               const WitnessSearchConfig& config, double noise_var = 0.0,
                               bool fit_noise = false);

} // namespace kernid
