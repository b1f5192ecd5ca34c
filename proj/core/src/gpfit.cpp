#include "kernid/gpfit.hpp"

#include <Eigen/Cholesky>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "kernid/errors.hpp"
#include "kernid/optimize.hpp"

namespace kernid {

Dataset::Dataset(Design design_, Eigen::VectorXd responses_)
    : design(std::move(design_)), responses(std::move(responses_)) {
    if (responses.size() != design.size()) {
        throw std::invalid_argument("dataset: responses length must match design size");
    }
    if (!responses.allFinite()) {
        throw std::invalid_argument("dataset: responses must be finite");
    }
}

namespace {

struct JitteredLlt {
    Eigen::LLT<Eigen::MatrixXd> llt;
    double jitter = 0.0;
};

// Plain factorization first, then the three escalations.
JitteredLlt jittered_llt(const Eigen::MatrixXd& m) {
    const double mean_diag = m.diagonal().mean();
    const double levels[4] = {0.0, 1e-10, 1e-8, 1e-6};
    for (double level : levels) {
        Eigen::MatrixXd jittered = m;
        const double jitter = level * mean_diag;
        jittered.diagonal().array() += jitter;
        Eigen::LLT<Eigen::MatrixXd> llt(jittered);
        if (llt.info() == Eigen::Success) return {std::move(llt), jitter};
    }
    throw NotPsdError("covariance not positive definite after jitter escalation");
}

double gaussian(std::mt19937_64& gen, std::normal_distribution<double>& normal) {
    return normal(gen);
}

double log_marginal_from_llt(const Eigen::LLT<Eigen::MatrixXd>& llt,
                             const Eigen::VectorXd& y) {
    const Eigen::VectorXd alpha = llt.solve(y);
    double log_det = 0.0;
    const auto& L = llt.matrixLLT();
    for (Eigen::Index i = 0; i < L.rows(); ++i) log_det += 2.0 * std::log(L(i, i));
    const double n = static_cast<double>(y.size());
    return -0.5 * y.dot(alpha) - 0.5 * log_det - 0.5 * n * std::log(2.0 * std::numbers::pi);
}

} // namespace

Dataset sample_prior(const MixedKernelSpec& spec, const Design& design, std::uint64_t rng_seed) {
    const GramMatrix gram = build_gram(spec, design, /*include_noise=*/false);
    const JitteredLlt chol = jittered_llt(gram.matrix());

    std::mt19937_64 gen(rng_seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    const int n = design.size();
    Eigen::VectorXd z(n);
    for (int i = 0; i < n; ++i) z[i] = gaussian(gen, normal);
    Eigen::VectorXd y = chol.llt.matrixL() * z;
    const double noise_sd = std::sqrt(spec.noise_var());
    for (int i = 0; i < n; ++i) y[i] += noise_sd * gaussian(gen, normal);
    return Dataset(design, std::move(y));
}

double log_marginal(const MixedKernelSpec& spec, const Dataset& data) {
    Eigen::MatrixXd cov = build_gram(spec, data.design, /*include_noise=*/false).matrix();
    cov.diagonal().array() += spec.noise_var();
    const JitteredLlt chol = jittered_llt(cov);
    return log_marginal_from_llt(chol.llt, data.responses);
}

namespace {

// Negative log marginal of raw kernel parameters; lag terms precomputed.
class NegLogMarginal {
public:
    NegLogMarginal(KernelFamily family, double p, const Dataset& data, double noise_var,
                   bool fit_noise)
        : family_(family), y_(data.responses), noise_var_(noise_var), fit_noise_(fit_noise) {
        const Design& design = data.design;
        const int n = design.size();
        dist_sq_.resize(n, n);
        if (family_ == KernelFamily::RbfPeriodic) sin_sq_.resize(n, n);
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                const double r = design.distance(i, j);
                dist_sq_(i, j) = r * r;
                if (family_ == KernelFamily::RbfPeriodic) {
                    const double lag = design.points()(i, 0) - design.points()(j, 0);
                    const double sine = std::sin(std::numbers::pi * std::fmod(lag, p) / p);
                    sin_sq_(i, j) = sine * sine;
                }
            }
        }
    }

    int param_count() const { return fit_noise_ ? 5 : 4; }

    // Returns +1e100 when the candidate covariance defeats the jitter ladder.
    double operator()(const Eigen::VectorXd& params) const {
        const int n = static_cast<int>(y_.size());
        Eigen::MatrixXd cov(n, n);
        const double a0 = params[0] * params[0];
        const double a1 = params[1] * params[1];
        const double b0 = params[2] * params[2];
        const double b1 = params[3] * params[3];
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                if (family_ == KernelFamily::RbfPeriodic) {
                    cov(i, j) = a0 * std::exp(-dist_sq_(i, j) / a1) +
                                b0 * std::exp(-2.0 * sin_sq_(i, j) / b1);
                } else {
                    cov(i, j) = a0 * std::exp(-dist_sq_(i, j) / a1) +
                                b0 * std::exp(-dist_sq_(i, j) / b1);
                }
            }
        }
        const double noise = fit_noise_ ? params[4] : noise_var_;
        cov.diagonal().array() += noise;
        try {
            const JitteredLlt chol = jittered_llt(cov);
            return -log_marginal_from_llt(chol.llt, y_);
        } catch (const NotPsdError&) {
            return 1e100;
        }
    }

private:
    KernelFamily family_;
    Eigen::MatrixXd dist_sq_;
    Eigen::MatrixXd sin_sq_;
    Eigen::VectorXd y_;
    double noise_var_;
    bool fit_noise_;
};

} // namespace

std::vector<FitResult> fit_mle(const Dataset& data, KernelFamily family, std::optional<double> p,
                               const WitnessSearchConfig& config, double noise_var,
                               bool fit_noise) {
    if (family == KernelFamily::RbfPeriodic && (!p || !(*p > 0.0))) {
        throw std::invalid_argument("fit_mle: RbfPeriodic requires a positive period");
    }
    if (!(noise_var >= 0.0)) throw std::invalid_argument("noise_var must be nonnegative");
    if (family == KernelFamily::RbfPeriodic && data.design.dim() != 1) {
        throw DimensionMismatchError("fit_mle: RbfPeriodic requires a 1-d design");
    }

    const NegLogMarginal objective_impl(family, p.value_or(0.0), data, noise_var, fit_noise);
    const int k = objective_impl.param_count();

    Box box;
    if (config.param_bounds.empty()) {
        box = Box(static_cast<std::size_t>(k), {-5.0, 5.0});
    } else {
        if (static_cast<int>(config.param_bounds.size()) != k) {
            throw InvalidBoundsError("param_bounds must give one (low, high) pair per parameter");
        }
        box = config.param_bounds;
    }

    const Objective objective = [&](const Eigen::VectorXd& z) {
        return objective_impl(z.array().exp());
    };
    NelderMeadOptions nm;
    nm.max_iters = config.max_iters;
    nm.f_tol = 1e-10; // likelihood scale, not residual scale
    const std::vector<NelderMeadResult> runs =
        multi_start_minimize(objective, box, config.starts, config.rng_seed, nm);

    std::vector<FitResult> optima;
    for (int i = 0; i < config.starts; ++i) {
        const NelderMeadResult& run = runs[static_cast<std::size_t>(i)];
        if (!run.converged) continue;
        Eigen::VectorXd z = run.x;
        for (int j = 0; j < k; ++j) {
            z[j] = std::clamp(z[j], box[static_cast<std::size_t>(j)].first,
                              box[static_cast<std::size_t>(j)].second);
        }
        const Eigen::VectorXd params = z.array().exp();
        const double fitted_noise = fit_noise ? params[4] : noise_var;

        std::optional<MixedKernelSpec> spec;
        if (family == KernelFamily::RbfPeriodic) {
            spec = MixedKernelSpec::rbf_periodic(RbfParams(params[0], params[1]),
                                                 PeriodicParams(params[2], params[3], *p),
                                                 fitted_noise);
        } else if (params[1] != params[3]) {
            spec = MixedKernelSpec::two_rbf_canonical(RbfParams(params[0], params[1]),
                                                      RbfParams(params[2], params[3]),
                                                      fitted_noise);
        }
        if (!spec) continue;

        FitResult result{*spec, objective_impl(params), true, run.iterations, i, 0.0};
        // Jitter diagnostic at the optimum.
        Eigen::MatrixXd cov = build_gram(*spec, data.design).matrix();
        cov.diagonal().array() += fitted_noise;
        result.jitter = jittered_llt(cov).jitter;
        optima.push_back(std::move(result));
    }

    std::sort(optima.begin(), optima.end(), [](const FitResult& a, const FitResult& b) {
        if (a.neg_log_marginal != b.neg_log_marginal) {
            return a.neg_log_marginal < b.neg_log_marginal;
        }
        return a.start_index < b.start_index;
    });

    std::vector<FitResult> deduped;
    for (FitResult& candidate : optima) {
        const bool duplicate =
            std::any_of(deduped.begin(), deduped.end(), [&](const FitResult& kept) {
                return relative_param_distance(candidate.params, kept.params) <
                       config.distinct_tol;
            });
        if (!duplicate) deduped.push_back(std::move(candidate));
    }
    return deduped;
}

} // namespace kernid
