#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

namespace kernid {

using Objective = std::function<double(const Eigen::VectorXd&)>;

struct NelderMeadOptions {
    int max_iters = 2000;
    double x_tol = 1e-10; // simplex diameter, infinity norm
    double f_tol = 1e-14; // spread of objective values over the simplex
    double initial_step = 0.5;
};

struct NelderMeadResult {
    Eigen::VectorXd x;
    double value = 0.0;
    int iterations = 0;
    bool converged = false; // tolerance reached before the iteration cap
};

/// Downhill simplex with the standard reflection/expansion/contraction/shrink
/// coefficients (1, 2, 1/2, 1/2).
NelderMeadResult nelder_mead(const Objective& objective, const Eigen::VectorXd& start,
                             const NelderMeadOptions& options = {});

/// Box in R^n given as per-coordinate (low, high).
using Box = std::vector<std::pair<double, double>>;

/// Objective wrapper that evaluates inner() at the box projection of x and
/// adds the squared projection distance, pulling iterates back inside.
Objective boxed_objective(Objective inner, Box box);

/// Deterministic uniform draw inside the box; stream selected by (seed, index).
Eigen::VectorXd random_point_in_box(const Box& box, std::uint64_t seed, std::uint64_t index);

/// Independent Nelder-Mead runs from seeded random points inside the box,
/// executed in parallel. Result i always corresponds to start i, so the output
/// does not depend on scheduling.
std::vector<NelderMeadResult> multi_start_minimize(const Objective& objective, const Box& box,
                                                   int starts, std::uint64_t seed,
                                                   const NelderMeadOptions& options = {});

} // namespace kernid
