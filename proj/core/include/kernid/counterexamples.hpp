#pragma once

#include <Eigen/Core>

#include <string>
#include <utility>
#include <vector>

#include "kernid/design.hpp"
#include "kernid/kernels.hpp"

namespace kernid::counterexamples {

// Bundled non-identifiable configurations with golden Gram matrices, used by
// the `reproduce` command and as fixtures in tests.

/// 1-d design {1, 8, ..., 36} whose gaps are all multiples of the period 7.
/// The periodic smoothness never enters the Gram there; any s gives the same
/// matrix.
Design periodic_multiples_design();
MixedKernelSpec periodic_multiples_spec(double s);
Eigen::MatrixXd periodic_multiples_golden(); // 2 on the diagonal, 1 elsewhere

/// 1-d design {0, 1, 2, 3} with period 4: no gap is a period multiple, and
/// two genuinely different parameter sets produce the same Gram matrix.
Design periodic_nonmultiples_design();
double periodic_nonmultiples_period();
std::pair<MixedKernelSpec, MixedKernelSpec> periodic_nonmultiples_pair();
Eigen::MatrixXd periodic_nonmultiples_golden();

/// Octahedron in R^3 with just three distinct pairwise distances; two
/// closed-form 2-RBF parameter sets share the same Gram matrix.
Design two_rbf_octahedron_design();
std::pair<MixedKernelSpec, MixedKernelSpec> two_rbf_octahedron_pair();
Eigen::MatrixXd two_rbf_octahedron_golden(); // entries 15936 / 1104 / 96

struct Reproduction {
    std::string id;
    double max_dev_vs_golden = 0.0;   // worst entry deviation of either set
    double max_dev_between_sets = 0.0;
    double tol_golden = 0.0;
    double tol_between = 0.0;

    bool pass() const {
        return max_dev_vs_golden <= tol_golden && max_dev_between_sets <= tol_between;
    }
};

/// Rebuilds every bundled example from both parameter sets and compares
/// entrywise against the golden matrices.
std::vector<Reproduction> reproduce_all();

} // namespace kernid::counterexamples
