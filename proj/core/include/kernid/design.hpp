#pragma once

#include <Eigen/Core>

#include <array>
#include <optional>
#include <vector>

namespace kernid {

/// Ordered list of observation points in d-dimensional space.
///
/// Immutable after construction; rejects ragged rows, empty designs and
/// non-finite coordinates.
class Design {
public:
    Design(int dim, std::vector<std::vector<double>> points);
    explicit Design(Eigen::MatrixXd points); // rows are points

    /// Convenience for 1-d designs.
    static Design grid1d(std::vector<double> xs);

    int dim() const { return static_cast<int>(points_.cols()); }
    int size() const { return static_cast<int>(points_.rows()); }
    const Eigen::MatrixXd& points() const { return points_; }
    Eigen::RowVectorXd point(int i) const { return points_.row(i); }

    double distance(int i, int j) const { return (points_.row(i) - points_.row(j)).norm(); }

private:
    Eigen::MatrixXd points_;
};

/// Sorted, deduplicated set of pairwise distances of a design.
/// Contains 0 whenever the design is nonempty (i = j pairs included).
/// Consecutive values differ by more than dedup_tol.
class DistanceSet {
public:
    DistanceSet(std::vector<double> sorted_values, double dedup_tol);

    const std::vector<double>& values() const { return values_; }
    std::size_t size() const { return values_.size(); }
    double dedup_tol() const { return dedup_tol_; }

    /// Representative stored for `v`, if some member lies within dedup_tol of it.
    std::optional<double> find(double v) const;
    bool contains(double v) const { return find(v).has_value(); }

private:
    std::vector<double> values_;
    double dedup_tol_;
};

DistanceSet distance_set(const Design& design, double dedup_tol = 1e-9);

enum class TheoremId { RbfPeriodic, TwoRbf };
enum class Verdict { ConditionHolds, ConditionFails };

/// Outcome of a sufficient-condition check, with the constructive evidence.
///
/// For RbfPeriodic the evidence is the smallest qualifying (alpha, beta):
/// alpha a positive multiple of the period contained in the distance set,
/// beta a positive non-multiple. A missing value identifies the clause that
/// failed. For TwoRbf the evidence is the distance list and its cardinality.
struct CheckReport {
    TheoremId theorem = TheoremId::RbfPeriodic;
    Verdict verdict = Verdict::ConditionFails;

    std::optional<double> alpha; // RbfPeriodic
    std::optional<double> beta;  // RbfPeriodic

    std::vector<double> distances; // TwoRbf
    std::size_t cardinality = 0;   // TwoRbf

    bool holds() const { return verdict == Verdict::ConditionHolds; }
};

/// x counts as a multiple of p when round(x/p) >= 1 and |x/p - round(x/p)| <= div_tol.
bool is_period_multiple(double x, double p, double div_tol);

/// Sufficient condition for the RBF+periodic mixture: the distance set must
/// contain both a positive multiple of the period and a positive non-multiple.
CheckReport check_theorem1(const DistanceSet& X, double p, double div_tol = 1e-9);

/// Sufficient condition for the RBF+RBF mixture: at least 4 distinct distances
/// (zero counts as a member).
CheckReport check_theorem2(const DistanceSet& X);

enum class WitnessShape {
    ZeroMpQMpq, // {0, mp, q, mp+q}
    ZeroQMpqMp, // {0, q, mp-q, mp}
};

/// Constructive certificate that a distance set supports the rank argument
/// behind the RBF+periodic condition: a quadruple {0, mp, q, mp+q} or
/// {0, q, mp-q, mp} contained in the set, with q not a multiple of p.
struct Lemma31Witness {
    WitnessShape shape = WitnessShape::ZeroMpQMpq;
    int m = 0;
    double q = 0.0;
    std::array<double, 4> members{}; // in the shape's listed order

    double mp() const { return shape == WitnessShape::ZeroMpQMpq ? members[1] : members[3]; }
};

/// Exhaustive quadruple search over X. Ties broken by smallest m, then
/// smallest q, then {0, mp, q, mp+q} before {0, q, mp-q, mp}. Returns nullopt
/// when no quadruple exists (in particular whenever check_theorem1 fails).
std::optional<Lemma31Witness> find_lemma31_witness(const DistanceSet& X, double p,
                                                   double div_tol = 1e-9);

/// Membership, non-divisibility of q, shape arithmetic to 1e-9, and
/// 0 < q < mp for the subtracted shape.
bool lemma31_witness_valid(const Lemma31Witness& w, const DistanceSet& X, double p,
                           double div_tol = 1e-9);

} // namespace kernid
