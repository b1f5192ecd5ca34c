#pragma once

#include <Eigen/Core>

#include <iosfwd>
#include <string>

#include "kernid/design.hpp"
#include "kernid/gpfit.hpp"
#include "kernid/kernels.hpp"

namespace kernid {

// Design, params and dataset documents are JSON:
//   design:  {"dim": 1, "points": [[0], [1], [2]], "labels": ["a", "b", "c"]}
//   params:  {"variant": "rbf_periodic", "sigma": 1.0, "ell": 1.0,
//             "tau": 1.0, "s": 1.0, "p": 7.0, "noise_var": 0.0}
//            {"variant": "two_rbf", "sigma1": ..., "ell1": ...,
//             "sigma2": ..., "ell2": ..., "noise_var": 0.0}
//   dataset: design keys plus "responses": [...]
// Matrices are headerless CSV with shortest round-trip float formatting.

Design parse_design(const std::string& text);
Design load_design_file(const std::string& path);

struct LoadedParams {
    MixedKernelSpec spec;
    bool reordered = false; // two_rbf components were given out of order
};

LoadedParams parse_params(const std::string& text);
LoadedParams load_params_file(const std::string& path);

Dataset parse_dataset(const std::string& text);
Dataset load_dataset_file(const std::string& path);

void write_csv_matrix(std::ostream& os, const Eigen::MatrixXd& m);
std::string csv_matrix_string(const Eigen::MatrixXd& m);
Eigen::MatrixXd parse_csv_matrix(std::istream& is);

/// Shortest decimal form that parses back to exactly the same double.
std::string format_double(double v);

} // namespace kernid
