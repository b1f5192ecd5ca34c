#include "kernid/counterexamples.hpp"

#include <cmath>

namespace kernid::counterexamples {

Design periodic_multiples_design() {
    return Design::grid1d({1.0, 8.0, 15.0, 22.0, 29.0, 36.0});
}

MixedKernelSpec periodic_multiples_spec(double s) {
    return MixedKernelSpec::rbf_periodic(RbfParams(1.0, 1.0), PeriodicParams(1.0, s, 7.0));
}

Eigen::MatrixXd periodic_multiples_golden() {
    Eigen::MatrixXd g = Eigen::MatrixXd::Ones(6, 6);
    g.diagonal().setConstant(2.0);
    return g;
}

Design periodic_nonmultiples_design() {
    return Design::grid1d({0.0, 1.0, 2.0, 3.0});
}

double periodic_nonmultiples_period() { return 4.0; }

std::pair<MixedKernelSpec, MixedKernelSpec> periodic_nonmultiples_pair() {
    const double p = periodic_nonmultiples_period();
    return {MixedKernelSpec::rbf_periodic(RbfParams(1.5720871, 1.0045602),
                                          PeriodicParams(1.4284245, 1.2011224, p)),
            MixedKernelSpec::rbf_periodic(RbfParams(1.2295748, 1.4468554),
                                          PeriodicParams(1.7320508, 0.9540646, p))};
}

Eigen::MatrixXd periodic_nonmultiples_golden() {
    const double by_lag[4] = {4.5118543, 1.9376702, 0.5570357, 1.0205292};
    Eigen::MatrixXd g(4, 4);
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) g(i, j) = by_lag[std::abs(i - j)];
    }
    return g;
}

Design two_rbf_octahedron_design() {
    const double r = std::sqrt(2.0);
    return Design(3, {{1.0, 1.0, 0.0},
                      {1.0, -1.0, 0.0},
                      {-1.0, 1.0, 0.0},
                      {-1.0, -1.0, 0.0},
                      {0.0, 0.0, r},
                      {0.0, 0.0, -r}});
}

std::pair<MixedKernelSpec, MixedKernelSpec> two_rbf_octahedron_pair() {
    // Closed forms: amplitude pairs (32 sqrt(15), 24) and (25 sqrt(15), 81)
    // with length-scales 2 / sqrt(log k) for k = 16, 4 and 25, 9. Listed in
    // canonical order (shorter length-scale first).
    const double s15 = std::sqrt(15.0);
    const auto ell = [](double k) { return 2.0 / std::sqrt(std::log(k)); };
    return {MixedKernelSpec::two_rbf(RbfParams(32.0 * s15, ell(16.0)),
                                     RbfParams(24.0, ell(4.0))),
            MixedKernelSpec::two_rbf(RbfParams(25.0 * s15, ell(25.0)),
                                     RbfParams(81.0, ell(9.0)))};
}

Eigen::MatrixXd two_rbf_octahedron_golden() {
    Eigen::MatrixXd g = Eigen::MatrixXd::Constant(6, 6, 1104.0);
    g.diagonal().setConstant(15936.0);
    g(0, 3) = g(3, 0) = 96.0; // the three antipodal pairs
    g(1, 2) = g(2, 1) = 96.0;
    g(4, 5) = g(5, 4) = 96.0;
    return g;
}

namespace {

Reproduction compare(const std::string& id, const MixedKernelSpec& a, const MixedKernelSpec& b,
                     const Design& design, const Eigen::MatrixXd& golden, double tol_golden,
                     double tol_between) {
    const Eigen::MatrixXd ga = build_gram(a, design).matrix();
    const Eigen::MatrixXd gb = build_gram(b, design).matrix();
    Reproduction r;
    r.id = id;
    r.max_dev_vs_golden = std::max((ga - golden).cwiseAbs().maxCoeff(),
                                   (gb - golden).cwiseAbs().maxCoeff());
    r.max_dev_between_sets = (ga - gb).cwiseAbs().maxCoeff();
    r.tol_golden = tol_golden;
    r.tol_between = tol_between;
    return r;
}

} // namespace

std::vector<Reproduction> reproduce_all() {
    std::vector<Reproduction> out;
    out.push_back(compare("periodic-multiples", periodic_multiples_spec(1.0),
                          periodic_multiples_spec(2.0), periodic_multiples_design(),
                          periodic_multiples_golden(), 1e-12, 1e-12));
    const auto [p1, p2] = periodic_nonmultiples_pair();
    out.push_back(compare("periodic-nonmultiples", p1, p2, periodic_nonmultiples_design(),
                          periodic_nonmultiples_golden(), 5e-7, 1e-6));
    const auto [t1, t2] = two_rbf_octahedron_pair();
    out.push_back(compare("two-rbf-octahedron", t1, t2, two_rbf_octahedron_design(),
                          two_rbf_octahedron_golden(), 1e-9, 1e-9));
    return out;
}

} // namespace kernid::counterexamples
