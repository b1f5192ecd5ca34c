#include "kernid/witness.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "kernid/errors.hpp"
#include "kernid/optimize.hpp"

namespace kernid {

double gram_residual(const MixedKernelSpec& candidate, const GramMatrix& target,
                     const Design& design) {
    if (target.size() != design.size()) {
        throw DimensionMismatchError("gram_residual: target size does not match design");
    }
    const GramMatrix cand = build_gram(candidate, design, /*include_noise=*/false);
    return (cand.matrix() - target.matrix()).norm() / target.matrix().norm();
}

namespace {

// Residual of a raw parameter vector against a fixed target, with the lag
// terms precomputed once. Reproduces build_gram's rounding bit for bit, so a
// reported residual re-verifies exactly against the public path.
class ResidualEvaluator {
public:
    ResidualEvaluator(KernelFamily family, double p, const Design& design,
                      const Eigen::MatrixXd& target)
        : family_(family), target_(target), target_norm_(target.norm()) {
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

    // params: (sigma, ell, tau, s) or (sigma_a, ell_a, sigma_b, ell_b).
    double operator()(const Eigen::Vector4d& params) const {
        const int n = static_cast<int>(target_.rows());
        double sum_sq = 0.0;
        if (family_ == KernelFamily::RbfPeriodic) {
            const double s2 = params[0] * params[0];
            const double l2 = params[1] * params[1];
            const double t2 = params[2] * params[2];
            const double ss2 = params[3] * params[3];
            for (int i = 0; i < n; ++i) {
                for (int j = 0; j < n; ++j) {
                    const double v = s2 * std::exp(-dist_sq_(i, j) / l2) +
                                     t2 * std::exp(-2.0 * sin_sq_(i, j) / ss2);
                    const double d = v - target_(i, j);
                    sum_sq += d * d;
                }
            }
        } else {
            const double sa2 = params[0] * params[0];
            const double la2 = params[1] * params[1];
            const double sb2 = params[2] * params[2];
            const double lb2 = params[3] * params[3];
            for (int i = 0; i < n; ++i) {
                for (int j = 0; j < n; ++j) {
                    const double v = sa2 * std::exp(-dist_sq_(i, j) / la2) +
                                     sb2 * std::exp(-dist_sq_(i, j) / lb2);
                    const double d = v - target_(i, j);
                    sum_sq += d * d;
                }
            }
        }
        return std::sqrt(sum_sq) / target_norm_;
    }

private:
    KernelFamily family_;
    Eigen::MatrixXd dist_sq_;
    Eigen::MatrixXd sin_sq_;
    Eigen::MatrixXd target_;
    double target_norm_;
};

Box resolve_bounds(const WitnessSearchConfig& config) {
    if (config.param_bounds.empty()) {
        return Box(4, {-5.0, 5.0});
    }
    if (config.param_bounds.size() != 4) {
        throw InvalidBoundsError("param_bounds must give one (low, high) pair per parameter");
    }
    for (const auto& [lo, hi] : config.param_bounds) {
        if (!(lo < hi)) throw InvalidBoundsError("param bound with low >= high");
    }
    return config.param_bounds;
}

std::optional<MixedKernelSpec> spec_from_params(KernelFamily family, double p,
                                                const Eigen::Vector4d& params) {
    if (family == KernelFamily::RbfPeriodic) {
        return MixedKernelSpec::rbf_periodic(RbfParams(params[0], params[1]),
                                             PeriodicParams(params[2], params[3], p));
    }
    if (params[1] == params[3]) return std::nullopt; // equal length-scales, not representable
    return MixedKernelSpec::two_rbf_canonical(RbfParams(params[0], params[1]),
                                              RbfParams(params[2], params[3]));
}

} // namespace

WitnessReport find_witness(const MixedKernelSpec& target_spec, const Design& design,
                           const WitnessSearchConfig& config) {
    if (config.starts < 1 || config.max_iters < 1) {
        throw std::invalid_argument("starts and max_iters must be positive");
    }
    if (!(config.residual_tol > 0.0) || !(config.distinct_tol > 0.0)) {
        throw std::invalid_argument("residual_tol and distinct_tol must be positive");
    }
    const Box box = resolve_bounds(config);
    const KernelFamily family = target_spec.family();
    const double p = family == KernelFamily::RbfPeriodic ? target_spec.periodic().p : 0.0;

    const GramMatrix target = build_gram(target_spec, design, /*include_noise=*/false);
    const ResidualEvaluator residual(family, p, design, target.matrix());

    const Objective objective = [&](const Eigen::VectorXd& z) {
        return residual(Eigen::Vector4d(z.array().exp()));
    };
    NelderMeadOptions nm;
    nm.max_iters = config.max_iters;
    const std::vector<NelderMeadResult> runs =
        multi_start_minimize(objective, box, config.starts, config.rng_seed, nm);

    struct Candidate {
        int start;
        double residual;
        MixedKernelSpec spec;
        bool converged;
        bool distinct;
    };
    std::vector<Candidate> candidates;
    int starts_converged = 0;
    for (int i = 0; i < config.starts; ++i) {
        const NelderMeadResult& run = runs[static_cast<std::size_t>(i)];
        if (run.converged) ++starts_converged;
        Eigen::Vector4d z = run.x;
        for (int j = 0; j < 4; ++j) {
            z[j] = std::clamp(z[j], box[static_cast<std::size_t>(j)].first,
                              box[static_cast<std::size_t>(j)].second);
        }
        const Eigen::Vector4d params = z.array().exp();
        const auto spec = spec_from_params(family, p, params);
        if (!spec) continue;
        const double res = residual(params);
        const bool distinct = relative_param_distance(*spec, target_spec) >= config.distinct_tol;
        candidates.push_back({i, res, *spec, run.converged, distinct});
    }

    const Candidate* winner = nullptr;
    for (const Candidate& c : candidates) {
        if (!c.converged || !c.distinct || c.residual > config.residual_tol) continue;
        if (winner == nullptr || c.residual < winner->residual ||
            (c.residual == winner->residual && c.start < winner->start)) {
            winner = &c;
        }
    }
    if (winner != nullptr) {
        return WitnessReport{WitnessOutcome::WitnessFound, winner->spec,       std::nullopt,
                             winner->residual,             target_spec,        design,
                             config,                       starts_converged};
    }

    const Candidate* best = nullptr;
    for (const Candidate& c : candidates) {
        if (!c.distinct) continue;
        if (best == nullptr || c.residual < best->residual ||
            (c.residual == best->residual && c.start < best->start)) {
            best = &c;
        }
    }
    return WitnessReport{WitnessOutcome::NoWitness,
                         std::nullopt,
                         best ? std::optional<MixedKernelSpec>(best->spec) : std::nullopt,
                         best ? best->residual : std::numeric_limits<double>::quiet_NaN(),
                         target_spec,
                         design,
                         config,
                         starts_converged};
}

namespace {

// Distinct roots of a smooth scalar function over [lo, hi], located by a
// uniform scan for sign changes followed by bisection.
template <typename F>
std::vector<double> scan_roots(F&& f, double lo, double hi, int cells) {
    std::vector<double> roots;
    double prev_x = lo;
    double prev_f = f(lo);
    for (int i = 1; i <= cells; ++i) {
        const double x = lo + (hi - lo) * static_cast<double>(i) / cells;
        const double fx = f(x);
        if (prev_f == 0.0) {
            roots.push_back(prev_x);
        } else if (std::isfinite(prev_f) && std::isfinite(fx) && prev_f * fx < 0.0) {
            double a = prev_x, b = x, fa = prev_f;
            for (int iter = 0; iter < 200 && b - a > 1e-15 * std::max(1.0, std::abs(b)); ++iter) {
                const double mid = 0.5 * (a + b);
                const double fm = f(mid);
                if (fm == 0.0) {
                    a = b = mid;
                    break;
                }
                if (fa * fm < 0.0) {
                    b = mid;
                } else {
                    a = mid;
                    fa = fm;
                }
            }
            roots.push_back(0.5 * (a + b));
        }
        prev_x = x;
        prev_f = fx;
    }
    return roots;
}

std::optional<PeriodicCounterexample> assemble_pair(const std::array<double, 4>& X4, double p,
                                                    const Eigen::Vector4d& c, double l1, double l2,
                                                    double s1, double s2) {
    Eigen::Matrix4d m;
    for (int j = 0; j < 4; ++j) {
        const double x = X4[static_cast<std::size_t>(j)];
        const double cosv = std::cos(2.0 * std::numbers::pi * x / p);
        m(0, j) = std::exp(-x * x / (l1 * l1));
        m(1, j) = std::exp(-x * x / (l2 * l2));
        m(2, j) = std::exp(cosv / (s1 * s1));
        m(3, j) = std::exp(cosv / (s2 * s2));
    }
    Eigen::JacobiSVD<Eigen::Matrix4d> svd(m, Eigen::ComputeFullU);
    const auto& sv = svd.singularValues();
    if (!(sv(3) <= 1e-8 * sv(0))) return std::nullopt; // roots did not produce rank deficiency
    Eigen::Vector4d u = svd.matrixU().col(3);
    if (u[3] == 0.0) return std::nullopt;
    u /= -u[3]; // scale so the second reduced periodic amplitude is 1
    if (!(u[0] > 0.0 && u[1] < 0.0 && u[2] > 0.0)) return std::nullopt;

    const double sigma1 = std::sqrt(u[0]);
    const double sigma2 = std::sqrt(-u[1]);
    const double tau1 = std::sqrt(u[2] * std::exp(1.0 / (s1 * s1)));
    const double tau2 = std::sqrt(std::exp(1.0 / (s2 * s2)));
    return PeriodicCounterexample{
        MixedKernelSpec::rbf_periodic(RbfParams(sigma1, l1), PeriodicParams(tau1, s1, p)),
        MixedKernelSpec::rbf_periodic(RbfParams(sigma2, l2), PeriodicParams(tau2, s2, p)), c};
}

} // namespace

std::optional<PeriodicCounterexample> solve_periodic_counterexample(
    const std::array<double, 4>& X4, double p, const Eigen::Vector4d& pattern) {
    if (!(p > 0.0)) throw std::invalid_argument("period must be positive");
    for (double x : X4) {
        if (!(x >= 0.0) || !std::isfinite(x)) {
            throw std::invalid_argument("distances must be nonnegative and finite");
        }
    }
    for (int i = 0; i < 4; ++i) {
        for (int j = i + 1; j < 4; ++j) {
            if (X4[static_cast<std::size_t>(i)] == X4[static_cast<std::size_t>(j)]) {
                throw std::invalid_argument("the four distances must be distinct");
            }
        }
    }
    if (pattern.isZero()) throw std::invalid_argument("coefficient pattern must be nonzero");

    // Length-scale equation: sum_i c_i w^{x_i^2} = 0 with w = e^{-1/l^2} in (0,1).
    auto f_l = [&](double w) {
        double acc = 0.0;
        for (int i = 0; i < 4; ++i) {
            const double x = X4[static_cast<std::size_t>(i)];
            acc += pattern[i] * std::pow(w, x * x);
        }
        return acc;
    };
    // Smoothness equation: sum_i c_i z^{cos(2 pi x_i / p)} = 0 with z = e^{1/s^2} > 1.
    auto f_s = [&](double t) { // t = log z
        double acc = 0.0;
        for (int i = 0; i < 4; ++i) {
            const double cosv = std::cos(2.0 * std::numbers::pi * X4[static_cast<std::size_t>(i)] / p);
            acc += pattern[i] * std::exp(cosv * t);
        }
        return acc;
    };

    const std::vector<double> w_roots = scan_roots(f_l, 1e-9, 1.0 - 1e-9, 20000);
    const std::vector<double> t_roots = scan_roots(f_s, 1e-8, 40.0, 20000);
    if (w_roots.size() < 2 || t_roots.size() < 2) return std::nullopt;

    const double w1 = w_roots[0], w2 = w_roots[1];
    const double t1 = t_roots[0], t2 = t_roots[1];
    if (w2 - w1 < 1e-8 || t2 - t1 < 1e-8) return std::nullopt;

    const double l1 = 1.0 / std::sqrt(-std::log(w1));
    const double l2 = 1.0 / std::sqrt(-std::log(w2));
    const double s1 = 1.0 / std::sqrt(t1);
    const double s2 = 1.0 / std::sqrt(t2);

    // The root pairing is not forced by the equations; try the swapped
    // smoothness assignment before giving up on the sign constraints.
    if (auto pair = assemble_pair(X4, p, pattern, l1, l2, s1, s2)) return pair;
    return assemble_pair(X4, p, pattern, l1, l2, s2, s1);
}

} // namespace kernid
