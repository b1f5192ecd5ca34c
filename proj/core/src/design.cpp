#include "kernid/design.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace kernid {

namespace {

void validate_points(const Eigen::MatrixXd& pts) {
    if (pts.rows() < 1 || pts.cols() < 1) {
        throw std::invalid_argument("design needs at least one point with at least one coordinate");
    }
    if (!pts.allFinite()) {
        throw std::invalid_argument("design coordinates must be finite");
    }
}

} // namespace

Design::Design(int dim, std::vector<std::vector<double>> points) {
    if (dim < 1) throw std::invalid_argument("design dimension must be positive");
    if (points.empty()) throw std::invalid_argument("design needs at least one point");
    Eigen::MatrixXd m(static_cast<Eigen::Index>(points.size()), dim);
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (static_cast<int>(points[i].size()) != dim) {
            throw std::invalid_argument("ragged design: point " + std::to_string(i) +
                                        " has " + std::to_string(points[i].size()) +
                                        " coordinates, expected " + std::to_string(dim));
        }
        for (int j = 0; j < dim; ++j) m(static_cast<Eigen::Index>(i), j) = points[i][j];
    }
    validate_points(m);
    points_ = std::move(m);
}

Design::Design(Eigen::MatrixXd points) {
    validate_points(points);
    points_ = std::move(points);
}

Design Design::grid1d(std::vector<double> xs) {
    Eigen::MatrixXd m(static_cast<Eigen::Index>(xs.size()), 1);
    for (std::size_t i = 0; i < xs.size(); ++i) m(static_cast<Eigen::Index>(i), 0) = xs[i];
    return Design(std::move(m));
}

DistanceSet::DistanceSet(std::vector<double> sorted_values, double dedup_tol)
    : values_(std::move(sorted_values)), dedup_tol_(dedup_tol) {
    if (dedup_tol_ < 0.0) throw std::invalid_argument("dedup_tol must be nonnegative");
    for (std::size_t i = 1; i < values_.size(); ++i) {
        if (!(values_[i] - values_[i - 1] > dedup_tol_)) {
            throw std::invalid_argument("distance set values must be strictly increasing beyond dedup_tol");
        }
    }
}

std::optional<double> DistanceSet::find(double v) const {
    auto it = std::lower_bound(values_.begin(), values_.end(), v);
    if (it != values_.end() && std::abs(*it - v) <= dedup_tol_) return *it;
    if (it != values_.begin() && std::abs(*(it - 1) - v) <= dedup_tol_) return *(it - 1);
    return std::nullopt;
}

DistanceSet distance_set(const Design& design, double dedup_tol) {
    if (dedup_tol < 0.0) throw std::invalid_argument("dedup_tol must be nonnegative");
    const int n = design.size();
    std::vector<double> all;
    all.reserve(static_cast<std::size_t>(n) * (n + 1) / 2);
    for (int i = 0; i < n; ++i) {
        for (int j = i; j < n; ++j) all.push_back(design.distance(i, j));
    }
    std::sort(all.begin(), all.end());

    // Merge clusters anchored at their first (smallest) member, so kept values
    // stay more than dedup_tol apart.
    std::vector<double> merged;
    for (double v : all) {
        if (merged.empty() || v - merged.back() > dedup_tol) merged.push_back(v);
    }
    return DistanceSet(std::move(merged), dedup_tol);
}

bool is_period_multiple(double x, double p, double div_tol) {
    const double ratio = x / p;
    const double k = std::round(ratio);
    return k >= 1.0 && std::abs(ratio - k) <= div_tol;
}

CheckReport check_theorem1(const DistanceSet& X, double p, double div_tol) {
    if (!(p > 0.0)) throw std::invalid_argument("period must be positive");
    CheckReport report;
    report.theorem = TheoremId::RbfPeriodic;
    for (double x : X.values()) {
        if (!(x > 0.0)) continue;
        if (is_period_multiple(x, p, div_tol)) {
            if (!report.alpha) report.alpha = x;
        } else if (!report.beta) {
            report.beta = x;
        }
        if (report.alpha && report.beta) break;
    }
    report.verdict = (report.alpha && report.beta) ? Verdict::ConditionHolds : Verdict::ConditionFails;
    return report;
}

CheckReport check_theorem2(const DistanceSet& X) {
    CheckReport report;
    report.theorem = TheoremId::TwoRbf;
    report.distances = X.values();
    report.cardinality = X.size();
    report.verdict = X.size() >= 4 ? Verdict::ConditionHolds : Verdict::ConditionFails;
    return report;
}

std::optional<Lemma31Witness> find_lemma31_witness(const DistanceSet& X, double p, double div_tol) {
    if (!(p > 0.0)) throw std::invalid_argument("period must be positive");
    if (!X.contains(0.0)) return std::nullopt;

    struct Multiple {
        int m;
        double value;
    };
    std::vector<Multiple> multiples;
    std::vector<double> nonmultiples;
    for (double x : X.values()) {
        if (!(x > 0.0)) continue;
        if (is_period_multiple(x, p, div_tol)) {
            multiples.push_back({static_cast<int>(std::llround(x / p)), x});
        } else {
            nonmultiples.push_back(x);
        }
    }
    // X is sorted, so multiples are ordered by m and nonmultiples by value.

    const double zero = *X.find(0.0);
    for (const Multiple& mult : multiples) {
        for (double q : nonmultiples) {
            if (auto sum = X.find(mult.value + q)) {
                Lemma31Witness w;
                w.shape = WitnessShape::ZeroMpQMpq;
                w.m = mult.m;
                w.q = q;
                w.members = {zero, mult.value, q, *sum};
                return w;
            }
            if (q < mult.value) {
                if (auto diff = X.find(mult.value - q)) {
                    Lemma31Witness w;
                    w.shape = WitnessShape::ZeroQMpqMp;
                    w.m = mult.m;
                    w.q = q;
                    w.members = {zero, q, *diff, mult.value};
                    return w;
                }
            }
        }
    }
    return std::nullopt;
}

bool lemma31_witness_valid(const Lemma31Witness& w, const DistanceSet& X, double p,
                           double div_tol) {
    constexpr double kArithmeticTol = 1e-9;
    if (w.m < 1 || !(w.q > 0.0)) return false;
    if (is_period_multiple(w.q, p, div_tol)) return false;
    for (double member : w.members) {
        if (!X.contains(member)) return false;
    }
    const double mp = w.mp();
    if (!is_period_multiple(mp, p, div_tol)) return false;
    if (std::abs(mp / p - w.m) > 0.5) return false;
    if (w.shape == WitnessShape::ZeroMpQMpq) {
        return std::abs(w.members[0]) <= kArithmeticTol &&
               std::abs(w.members[2] - w.q) <= kArithmeticTol &&
               std::abs(w.members[3] - (mp + w.q)) <= kArithmeticTol;
    }
    return w.q < mp && std::abs(w.members[0]) <= kArithmeticTol &&
           std::abs(w.members[1] - w.q) <= kArithmeticTol &&
           std::abs(w.members[2] - (mp - w.q)) <= kArithmeticTol;
}

} // namespace kernid
