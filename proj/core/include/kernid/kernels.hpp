#pragma once

#include <Eigen/Core>

#include <variant>

#include "kernid/design.hpp"

namespace kernid {

/// Squared-exponential kernel hyperparameters: amplitude sigma, length-scale ell.
/// K(r) = sigma^2 * exp(-r^2 / ell^2).
struct RbfParams {
    double sigma;
    double ell;

    RbfParams(double sigma, double ell);
};

/// Periodic kernel hyperparameters: amplitude tau, smoothness s, period p.
/// K(delta) = tau^2 * exp(-2 sin^2(pi * delta / p) / s^2), defined on 1-d inputs.
struct PeriodicParams {
    double tau;
    double s;
    double p;

    PeriodicParams(double tau, double s, double p);
};

enum class KernelFamily { RbfPeriodic, TwoRbf };

/// Sum of two stationary kernels plus an observational variance.
///
/// The TwoRbf variant is stored canonically with the shorter length-scale
/// first; equal length-scales are rejected so every parameter set has exactly
/// one representation. noise_var is carried for the GP fitting utilities only;
/// identifiability logic compares kernel sums and ignores it.
class MixedKernelSpec {
public:
    static MixedKernelSpec rbf_periodic(RbfParams rbf, PeriodicParams periodic,
                                        double noise_var = 0.0);

    /// Requires short_range.ell < long_range.ell.
    static MixedKernelSpec two_rbf(RbfParams short_range, RbfParams long_range,
                                   double noise_var = 0.0);

    /// Reorders the pair if needed; still rejects equal length-scales.
    /// Sets *reordered when a swap happened.
    static MixedKernelSpec two_rbf_canonical(RbfParams a, RbfParams b, double noise_var = 0.0,
                                             bool* reordered = nullptr);

    KernelFamily family() const {
        return std::holds_alternative<PeriodicParams>(second_) ? KernelFamily::RbfPeriodic
                                                               : KernelFamily::TwoRbf;
    }
    double noise_var() const { return noise_var_; }

    const RbfParams& rbf() const;      // RbfPeriodic
    const PeriodicParams& periodic() const;

    const RbfParams& short_rbf() const; // TwoRbf, smaller ell
    const RbfParams& long_rbf() const;

    /// Kernel value at zero lag: sigma^2 + tau^2, or the two amplitudes squared.
    double zero_lag() const;

    /// (sigma, ell, tau, s) or (sigma_short, ell_short, sigma_long, ell_long).
    Eigen::Vector4d free_parameters() const;

private:
    MixedKernelSpec(RbfParams first, std::variant<PeriodicParams, RbfParams> second,
                    double noise_var);

    RbfParams first_;
    std::variant<PeriodicParams, RbfParams> second_;
    double noise_var_;
};

/// Largest relative component-wise difference between the free parameters of
/// two specs of the same family, measured against `reference`. The period of
/// the RbfPeriodic variant is included; noise_var is not.
double relative_param_distance(const MixedKernelSpec& candidate, const MixedKernelSpec& reference);

double eval_rbf(const RbfParams& params, double r);
double eval_periodic(const PeriodicParams& params, double delta);

/// Kernel-sum value at a pair of points (noise_var not added).
/// Throws DimensionMismatchError when dimensions differ or the RbfPeriodic
/// variant receives points with d > 1.
double eval_mixed(const MixedKernelSpec& spec, const Eigen::RowVectorXd& x,
                  const Eigen::RowVectorXd& y);
double eval_mixed(const MixedKernelSpec& spec, double x, double y); // 1-d convenience

/// Symmetric PSD matrix of kernel evaluations over a design.
class GramMatrix {
public:
    explicit GramMatrix(Eigen::MatrixXd entries);

    int size() const { return static_cast<int>(entries_.rows()); }
    const Eigen::MatrixXd& matrix() const { return entries_; }
    double operator()(int i, int j) const { return entries_(i, j); }

private:
    Eigen::MatrixXd entries_;
};

/// entries[i][j] = eval_mixed(spec, x_i, x_j), plus noise_var on the diagonal
/// iff include_noise. Only the upper triangle is computed; the lower is
/// mirrored, so symmetry is exact.
GramMatrix build_gram(const MixedKernelSpec& spec, const Design& design,
                      bool include_noise = false);

/// Single-kernel Gram builders (no noise), mainly for additivity checks.
GramMatrix build_gram_rbf(const RbfParams& params, const Design& design);
GramMatrix build_gram_periodic(const PeriodicParams& params, const Design& design);

} // namespace kernid
