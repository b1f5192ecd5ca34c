#include "kernid/kernels.hpp"

#include <cassert>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <utility>

#include "kernid/errors.hpp"

namespace kernid {

namespace {

void require_positive(double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) {
        throw std::invalid_argument(std::string(name) + " must be positive and finite");
    }
}

} // namespace

RbfParams::RbfParams(double sigma_, double ell_) : sigma(sigma_), ell(ell_) {
    require_positive(sigma, "sigma");
    require_positive(ell, "ell");
}

PeriodicParams::PeriodicParams(double tau_, double s_, double p_) : tau(tau_), s(s_), p(p_) {
    require_positive(tau, "tau");
    require_positive(s, "s");
    require_positive(p, "p");
}

MixedKernelSpec::MixedKernelSpec(RbfParams first, std::variant<PeriodicParams, RbfParams> second,
                                 double noise_var)
    : first_(first), second_(std::move(second)), noise_var_(noise_var) {
    if (!(noise_var_ >= 0.0) || !std::isfinite(noise_var_)) {
        throw std::invalid_argument("noise_var must be nonnegative and finite");
    }
}

MixedKernelSpec MixedKernelSpec::rbf_periodic(RbfParams rbf, PeriodicParams periodic,
                                              double noise_var) {
    return MixedKernelSpec(rbf, periodic, noise_var);
}

MixedKernelSpec MixedKernelSpec::two_rbf(RbfParams short_range, RbfParams long_range,
                                         double noise_var) {
    if (!(short_range.ell < long_range.ell)) {
        throw std::invalid_argument("two_rbf requires strictly increasing length-scales");
    }
    return MixedKernelSpec(short_range, std::variant<PeriodicParams, RbfParams>(long_range),
                           noise_var);
}

MixedKernelSpec MixedKernelSpec::two_rbf_canonical(RbfParams a, RbfParams b, double noise_var,
                                                   bool* reordered) {
    if (reordered) *reordered = false;
    if (a.ell == b.ell) {
        throw std::invalid_argument("two_rbf components must have distinct length-scales");
    }
    if (a.ell > b.ell) {
        std::swap(a, b);
        if (reordered) *reordered = true;
    }
    return two_rbf(a, b, noise_var);
}

const RbfParams& MixedKernelSpec::rbf() const {
    if (family() != KernelFamily::RbfPeriodic) {
        throw std::logic_error("rbf(): not an RbfPeriodic spec");
    }
    return first_;
}

const PeriodicParams& MixedKernelSpec::periodic() const {
    return std::get<PeriodicParams>(second_);
}

const RbfParams& MixedKernelSpec::short_rbf() const {
    if (family() != KernelFamily::TwoRbf) {
        throw std::logic_error("short_rbf(): not a TwoRbf spec");
    }
    return first_;
}

const RbfParams& MixedKernelSpec::long_rbf() const {
    return std::get<RbfParams>(second_);
}

double MixedKernelSpec::zero_lag() const {
    if (family() == KernelFamily::RbfPeriodic) {
        return first_.sigma * first_.sigma + periodic().tau * periodic().tau;
    }
    return first_.sigma * first_.sigma + long_rbf().sigma * long_rbf().sigma;
}

Eigen::Vector4d MixedKernelSpec::free_parameters() const {
    if (family() == KernelFamily::RbfPeriodic) {
        return {first_.sigma, first_.ell, periodic().tau, periodic().s};
    }
    return {first_.sigma, first_.ell, long_rbf().sigma, long_rbf().ell};
}

double relative_param_distance(const MixedKernelSpec& candidate,
                               const MixedKernelSpec& reference) {
    if (candidate.family() != reference.family()) {
        throw std::invalid_argument("relative_param_distance: kernel families differ");
    }
    const Eigen::Vector4d a = candidate.free_parameters();
    const Eigen::Vector4d b = reference.free_parameters();
    double dist = 0.0;
    for (int i = 0; i < 4; ++i) dist = std::max(dist, std::abs(a[i] - b[i]) / std::abs(b[i]));
    if (candidate.family() == KernelFamily::RbfPeriodic) {
        dist = std::max(dist, std::abs(candidate.periodic().p - reference.periodic().p) /
                                  reference.periodic().p);
    }
    return dist;
}

double eval_rbf(const RbfParams& params, double r) {
    assert(r >= 0.0);
    return params.sigma * params.sigma * std::exp(-(r * r) / (params.ell * params.ell));
}

double eval_periodic(const PeriodicParams& params, double delta) {
    // Reduce the lag modulo the period first; exact multiples then hit
    // sin(0) = 0 exactly and the value is exactly tau^2.
    const double reduced = std::fmod(delta, params.p);
    const double sine = std::sin(std::numbers::pi * reduced / params.p);
    return params.tau * params.tau * std::exp(-2.0 * sine * sine / (params.s * params.s));
}

double eval_mixed(const MixedKernelSpec& spec, const Eigen::RowVectorXd& x,
                  const Eigen::RowVectorXd& y) {
    if (x.size() != y.size()) {
        throw DimensionMismatchError("eval_mixed: point dimensions differ");
    }
    if (spec.family() == KernelFamily::RbfPeriodic) {
        if (x.size() != 1) {
            throw DimensionMismatchError("RbfPeriodic kernels are defined on 1-d inputs only");
        }
        const double lag = x[0] - y[0];
        return eval_rbf(spec.rbf(), std::abs(lag)) + eval_periodic(spec.periodic(), lag);
    }
    const double r = (x - y).norm();
    return eval_rbf(spec.short_rbf(), r) + eval_rbf(spec.long_rbf(), r);
}

double eval_mixed(const MixedKernelSpec& spec, double x, double y) {
    Eigen::RowVectorXd a(1), b(1);
    a[0] = x;
    b[0] = y;
    return eval_mixed(spec, a, b);
}

GramMatrix::GramMatrix(Eigen::MatrixXd entries) : entries_(std::move(entries)) {
    if (entries_.rows() != entries_.cols() || entries_.rows() < 1) {
        throw std::invalid_argument("Gram matrix must be square and nonempty");
    }
}

namespace {

template <typename Eval>
GramMatrix build_symmetric(const Design& design, Eval&& entry) {
    const int n = design.size();
    Eigen::MatrixXd m(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = i; j < n; ++j) {
            const double v = entry(i, j);
            m(i, j) = v;
            m(j, i) = v;
        }
    }
    return GramMatrix(std::move(m));
}

} // namespace

GramMatrix build_gram(const MixedKernelSpec& spec, const Design& design, bool include_noise) {
    if (spec.family() == KernelFamily::RbfPeriodic && design.dim() != 1) {
        throw DimensionMismatchError("RbfPeriodic Gram requires a 1-d design");
    }
    const int n = design.size();
    Eigen::MatrixXd m(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = i; j < n; ++j) {
            const double v = eval_mixed(spec, design.point(i), design.point(j));
            m(i, j) = v;
            m(j, i) = v;
        }
    }
    if (include_noise) m.diagonal().array() += spec.noise_var();
    return GramMatrix(std::move(m));
}

GramMatrix build_gram_rbf(const RbfParams& params, const Design& design) {
    return build_symmetric(design,
                           [&](int i, int j) { return eval_rbf(params, design.distance(i, j)); });
}

GramMatrix build_gram_periodic(const PeriodicParams& params, const Design& design) {
    if (design.dim() != 1) {
        throw DimensionMismatchError("periodic Gram requires a 1-d design");
    }
    return build_symmetric(design, [&](int i, int j) {
        return eval_periodic(params, design.points()(i, 0) - design.points()(j, 0));
    });
}

} // namespace kernid
