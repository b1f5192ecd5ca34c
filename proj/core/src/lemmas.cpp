#include "kernid/lemmas.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <random>
#include <stdexcept>

#include "kernid/errors.hpp"
#include "kernid/kernels.hpp"
#include "kernid/parallel.hpp"

namespace kernid {

double fn_I(double t, double s) {
    // 1 - e^{-ts} via expm1 keeps the t -> 0 limit (1/s) exact.
    return t * std::exp(-t * s) / (-std::expm1(-t * s));
}

double fn_s(double x, double y, double p) {
    return std::expm1(-(x + p) * (x + p) * y * y) / std::expm1(-p * p * y * y);
}

double fn_h(double x, double p, double ell) {
    return std::expm1(-(x + p) * (x + p) / (ell * ell)) / std::expm1(-p * p / (ell * ell));
}

double fn_h_shifted(double x, double p, double ell) {
    const double inv = 1.0 / (ell * ell);
    return (std::exp(-(x + p) * (x + p) * inv) - std::exp(-x * x * inv)) /
           std::expm1(-p * p * inv);
}

namespace {

double canonical(std::mt19937_64& gen) {
    return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

std::mt19937_64 sample_rng(std::uint64_t seed, std::uint64_t index) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
    return std::mt19937_64(seq);
}

using Ranges = std::vector<std::pair<double, double>>;

const Ranges& pick_ranges(const GridSpec& grid, const Ranges& defaults) {
    if (grid.ranges.empty()) return defaults;
    if (grid.ranges.size() != defaults.size()) {
        throw std::invalid_argument("GridSpec ranges arity mismatch for this check");
    }
    for (const auto& [lo, hi] : grid.ranges) {
        if (!(lo < hi)) throw std::invalid_argument("GridSpec range with low >= high");
    }
    return grid.ranges;
}

// Runs `visit(inputs)` over admissible tuples; violations are merged in sample
// order so parallel scheduling cannot change the result.
template <typename Admissible, typename Visit>
LemmaCheckResult run_sampled_check(LemmaId id, double tolerance, const GridSpec& grid,
                                   const Ranges& defaults, Admissible admissible, Visit visit) {
    if (grid.samples_per_axis < 1) {
        throw std::invalid_argument("samples_per_axis must be positive");
    }
    const Ranges& ranges = pick_ranges(grid, defaults);
    const int arity = static_cast<int>(ranges.size());

    LemmaCheckResult result;
    result.lemma_id = id;
    result.tolerance = tolerance;

    if (grid.mode == SampleMode::RandomUniform) {
        const long total = grid.samples_per_axis;
        std::vector<std::optional<LemmaViolation>> slots(static_cast<std::size_t>(total));
        parallel_for(static_cast<int>(total), [&](int i) {
            auto gen = sample_rng(grid.rng_seed, static_cast<std::uint64_t>(i));
            std::vector<double> tuple(static_cast<std::size_t>(arity));
            for (int attempt = 0; attempt < 10000; ++attempt) {
                for (int j = 0; j < arity; ++j) {
                    const auto& [lo, hi] = ranges[static_cast<std::size_t>(j)];
                    tuple[static_cast<std::size_t>(j)] = lo + (hi - lo) * canonical(gen);
                }
                if (admissible(tuple)) {
                    slots[static_cast<std::size_t>(i)] = visit(tuple);
                    return;
                }
            }
            throw std::runtime_error("lemma sampler: no admissible tuple found; check ranges");
        });
        result.cases_run = total;
        for (auto& slot : slots) {
            if (slot) result.violations.push_back(std::move(*slot));
        }
        return result;
    }

    // Grid mode: admissible subset of the cartesian product.
    const long per_axis = grid.samples_per_axis;
    long total = 1;
    for (int j = 0; j < arity; ++j) {
        if (total > 20'000'000 / per_axis) {
            throw std::invalid_argument("grid too large; reduce samples_per_axis");
        }
        total *= per_axis;
    }
    std::vector<std::optional<LemmaViolation>> slots(static_cast<std::size_t>(total));
    std::vector<char> counted(static_cast<std::size_t>(total), 0);
    parallel_for(static_cast<int>(total), [&](int idx) {
        std::vector<double> tuple(static_cast<std::size_t>(arity));
        long rest = idx;
        for (int j = 0; j < arity; ++j) {
            const long pos = rest % per_axis;
            rest /= per_axis;
            const auto& [lo, hi] = ranges[static_cast<std::size_t>(j)];
            const double step = per_axis > 1 ? (hi - lo) / static_cast<double>(per_axis - 1) : 0.0;
            tuple[static_cast<std::size_t>(j)] = lo + step * static_cast<double>(pos);
        }
        if (!admissible(tuple)) return;
        counted[static_cast<std::size_t>(idx)] = 1;
        slots[static_cast<std::size_t>(idx)] = visit(tuple);
    });
    for (std::size_t i = 0; i < slots.size(); ++i) {
        if (counted[i]) ++result.cases_run;
        if (slots[i]) result.violations.push_back(std::move(*slots[i]));
    }
    return result;
}

double row_norm_product(const Eigen::MatrixXd& m) {
    double prod = 1.0;
    for (Eigen::Index i = 0; i < m.rows(); ++i) prod *= m.row(i).norm();
    return prod;
}

std::optional<LemmaViolation> det_violation(const Eigen::MatrixXd& m, double tolerance,
                                            const std::vector<double>& inputs) {
    const double det = m.determinant();
    const double scale = row_norm_product(m);
    if (std::abs(det) > tolerance * scale) return std::nullopt;
    return LemmaViolation{inputs, {det, scale}};
}

} // namespace

LemmaCheckResult check_lemma2(const GridSpec& grid) {
    const Ranges defaults = {{-2.0, 2.0}, {-2.0, 2.0}, {-2.0, 2.0}, {-2.0, 2.0}};
    constexpr double kTol = 1e-12;
    return run_sampled_check(
        LemmaId::L2, kTol, grid, defaults,
        [](const std::vector<double>& t) {
            return std::abs(t[0] - t[1]) >= 0.01 && std::abs(t[2] - t[3]) >= 0.01;
        },
        [&](const std::vector<double>& t) -> std::optional<LemmaViolation> {
            const double k = t[0], l = t[1], a = t[2], b = t[3];
            Eigen::Matrix2d m;
            m << std::exp(k * a), std::exp(l * a), std::exp(k * b), std::exp(l * b);
            return det_violation(m, kTol, t);
        });
}

LemmaCheckResult check_lemma3(const GridSpec& grid) {
    const Ranges defaults = {{0.05, 5.0}, {0.05, 10.0}, {0.05, 10.0}};
    return run_sampled_check(
        LemmaId::L3, 0.0, grid, defaults,
        [](const std::vector<double>& t) { return std::abs(t[1] - t[2]) >= 0.01; },
        [](const std::vector<double>& t) -> std::optional<LemmaViolation> {
            const double s = t[0];
            const double t1 = std::min(t[1], t[2]);
            const double t2 = std::max(t[1], t[2]);
            const double i1 = fn_I(t1, s);
            const double i2 = fn_I(t2, s);
            if (i2 < i1) return std::nullopt;
            return LemmaViolation{{t1, t2, s}, {i1, i2}};
        });
}

LemmaCheckResult check_lemma4(const GridSpec& grid) {
    // (x, p, y_a, y_b, l_a, l_b, frac): fn_s decreasing in y, fn_h and
    // fn_h_shifted increasing in ell, reciprocal identity at x' = frac * p.
    const Ranges defaults = {{0.05, 2.5}, {0.1, 2.5},  {0.05, 1.5}, {0.05, 1.5},
                             {0.6, 3.0},  {0.6, 3.0},  {0.05, 0.95}};
    constexpr double kIdentityTol = 1e-12;
    return run_sampled_check(
        LemmaId::L4, kIdentityTol, grid, defaults,
        [](const std::vector<double>& t) {
            return std::abs(t[2] - t[3]) >= 0.01 && std::abs(t[4] - t[5]) >= 0.01;
        },
        [&](const std::vector<double>& t) -> std::optional<LemmaViolation> {
            const double x = t[0], p = t[1];
            const double y1 = std::min(t[2], t[3]), y2 = std::max(t[2], t[3]);
            const double l1 = std::min(t[4], t[5]), l2 = std::max(t[4], t[5]);

            const double s1 = fn_s(x, y1, p);
            const double s2 = fn_s(x, y2, p);
            if (!(s1 > s2)) return LemmaViolation{{x, y1, y2, p}, {s1, s2}};
            if (!(s2 > 1.0)) return LemmaViolation{{x, y2, p}, {s2}};

            const double h1 = fn_h(x, p, l1);
            const double h2 = fn_h(x, p, l2);
            if (!(h2 > h1)) return LemmaViolation{{x, p, l1, l2}, {h1, h2}};
            const double hs1 = fn_h_shifted(x, p, l1);
            const double hs2 = fn_h_shifted(x, p, l2);
            if (!(hs2 > hs1)) return LemmaViolation{{x, p, l1, l2}, {hs1, hs2}};

            const double xq = t[6] * p;
            const double prod = fn_h(-xq, p, l1) * fn_h(xq, p - xq, l1);
            if (std::abs(prod - 1.0) > kIdentityTol) {
                return LemmaViolation{{xq, p, l1}, {prod}};
            }
            return std::nullopt;
        });
}

LemmaCheckResult check_lemma6(const GridSpec& grid) {
    const Ranges defaults = {{1.05, 6.0}, {1.05, 6.0}, {1.05, 6.0}, {1.1, 4.0}, {1.1, 4.0}};
    constexpr double kTol = 1e-12;
    return run_sampled_check(
        LemmaId::L6, kTol, grid, defaults,
        [](const std::vector<double>& t) {
            const bool zeta_ok = std::abs(t[0] - t[1]) >= 0.05 && std::abs(t[1] - t[2]) >= 0.05 &&
                                 std::abs(t[0] - t[2]) >= 0.05;
            return zeta_ok && std::abs(t[3] - t[4]) >= 0.05;
        },
        [&](const std::vector<double>& t) -> std::optional<LemmaViolation> {
            const double a = std::min(t[3], t[4]);
            const double b = std::max(t[3], t[4]);
            Eigen::Matrix3d m;
            for (int i = 0; i < 3; ++i) {
                const double zeta = t[static_cast<std::size_t>(i)];
                m(i, 0) = zeta - 1.0;
                m(i, 1) = std::pow(zeta, a) - 1.0;
                m(i, 2) = std::pow(zeta, b) - 1.0;
            }
            std::vector<double> inputs = {t[0], t[1], t[2], a, b};
            return det_violation(m, kTol, inputs);
        });
}

std::pair<LemmaCheckResult, LemmaCheckResult> check_lemma8_9(const GridSpec& grid) {
    const Ranges det_defaults = {{0.6, 2.4}, {0.6, 2.4}, {0.6, 2.4},
                                 {0.2, 2.0}, {0.2, 2.0}, {0.2, 2.0}};
    constexpr double kDetTol = 1e-12;
    LemmaCheckResult det_result = run_sampled_check(
        LemmaId::L8, kDetTol, grid, det_defaults,
        [](const std::vector<double>& t) {
            const bool ls = std::abs(t[0] - t[1]) >= 0.05 && std::abs(t[1] - t[2]) >= 0.05 &&
                            std::abs(t[0] - t[2]) >= 0.05;
            const bool xs = std::abs(t[3] - t[4]) >= 0.05 && std::abs(t[4] - t[5]) >= 0.05 &&
                            std::abs(t[3] - t[5]) >= 0.05;
            return ls && xs;
        },
        [&](const std::vector<double>& t) -> std::optional<LemmaViolation> {
            Eigen::Matrix3d m;
            for (int col = 0; col < 3; ++col) {
                const double x = t[static_cast<std::size_t>(3 + col)];
                for (int row = 0; row < 3; ++row) {
                    const double len = t[static_cast<std::size_t>(row)];
                    m(row, col) = std::exp(-x * x / (len * len));
                }
            }
            return det_violation(m, kDetTol, t);
        });

    const Ranges mono_defaults = {{0.05, 0.9}, {0.05, 0.9}, {1.05, 3.5}, {1.05, 3.5}};
    LemmaCheckResult mono_result = run_sampled_check(
        LemmaId::L9, 0.0, grid, mono_defaults,
        [](const std::vector<double>& t) {
            return std::abs(t[0] - t[1]) >= 0.02 && std::abs(t[2] - t[3]) >= 0.05;
        },
        [](const std::vector<double>& t) -> std::optional<LemmaViolation> {
            const double x1 = std::min(t[0], t[1]), x2 = std::max(t[0], t[1]);
            const double a = std::min(t[2], t[3]), b = std::max(t[2], t[3]);
            auto f = [&](double x) {
                return (std::pow(x, b) - std::pow(x, a)) / (std::pow(x, a) - 1.0);
            };
            const double f1 = f(x1), f2 = f(x2);
            if (f1 < f2) return std::nullopt;
            return LemmaViolation{{x1, x2, a, b}, {f1, f2}};
        });

    return {std::move(det_result), std::move(mono_result)};
}

namespace {

// v(x) columns of the RBF+periodic family over the certificate quadruple.
Eigen::MatrixXd periodic_columns(const std::array<double, 4>& xs, double p, double l1, double l2,
                                 double s1, double s2) {
    Eigen::MatrixXd m(4, 4);
    for (int j = 0; j < 4; ++j) {
        const double x = xs[static_cast<std::size_t>(j)];
        const double c = std::cos(2.0 * std::numbers::pi * x / p);
        m(0, j) = std::exp(-x * x / (l1 * l1));
        m(1, j) = std::exp(-x * x / (l2 * l2));
        m(2, j) = std::exp(c / (s1 * s1));
        m(3, j) = std::exp(c / (s2 * s2));
    }
    return m;
}

Eigen::MatrixXd two_rbf_columns(const std::array<double, 4>& xs,
                                const std::array<double, 4>& lens) {
    Eigen::MatrixXd m(4, 4);
    for (int j = 0; j < 4; ++j) {
        const double x = xs[static_cast<std::size_t>(j)];
        for (int i = 0; i < 4; ++i) {
            const double len = lens[static_cast<std::size_t>(i)];
            m(i, j) = std::exp(-x * x / (len * len));
        }
    }
    return m;
}

std::optional<LemmaViolation> rank4_violation(const Eigen::MatrixXd& m, double tolerance,
                                              const std::vector<double>& inputs) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
    const auto& sv = svd.singularValues();
    const double smallest = sv(sv.size() - 1);
    const double largest = sv(0);
    if (smallest > tolerance * largest) return std::nullopt;
    return LemmaViolation{inputs, {smallest, largest}};
}

} // namespace

LemmaCheckResult check_rank_lemmas(const std::vector<Design>& designs, double p,
                                   const GridSpec& grid) {
    constexpr double kRankTol = 1e-10;

    struct RankTask {
        bool periodic;
        std::array<double, 4> xs;
        double x_max;
    };
    std::vector<RankTask> tasks;
    for (const Design& design : designs) {
        const DistanceSet X = distance_set(design);
        bool usable = false;
        if (design.dim() == 1 && check_theorem1(X, p).holds()) {
            const auto witness = find_lemma31_witness(X, p);
            if (witness) {
                std::array<double, 4> xs = witness->members;
                std::sort(xs.begin(), xs.end());
                const bool degenerate = xs[1] == xs[2]; // q == mp - q collapses a column
                if (!degenerate) {
                    tasks.push_back({true, witness->members, xs[3]});
                    usable = true;
                }
            }
        }
        if (check_theorem2(X).holds()) {
            std::array<double, 4> xs = {X.values()[0], X.values()[1], X.values()[2],
                                        X.values()[3]};
            tasks.push_back({false, xs, xs[3]});
            usable = true;
        }
        if (!usable) {
            throw ConditionNotMetError(
                "design supports neither rank check (condition fails or certificate degenerate)");
        }
    }

    LemmaCheckResult merged;
    merged.lemma_id = LemmaId::L5;
    merged.tolerance = kRankTol;
    for (const RankTask& task : tasks) {
        const double lo = 0.3 * task.x_max;
        const double hi = 1.5 * task.x_max;
        const double gap = 0.02 * hi;
        if (task.periodic) {
            const Ranges defaults = {{lo, hi}, {lo, hi}, {0.5, 2.5}, {0.5, 2.5}};
            LemmaCheckResult r = run_sampled_check(
                LemmaId::L5, kRankTol, grid, defaults,
                [&](const std::vector<double>& t) {
                    return std::abs(t[0] - t[1]) >= gap && std::abs(t[2] - t[3]) >= 0.05;
                },
                [&](const std::vector<double>& t) -> std::optional<LemmaViolation> {
                    return rank4_violation(periodic_columns(task.xs, p, t[0], t[1], t[2], t[3]),
                                           kRankTol, t);
                });
            merged.cases_run += r.cases_run;
            for (auto& v : r.violations) merged.violations.push_back(std::move(v));
        } else {
            const Ranges defaults = {{lo, hi}, {lo, hi}, {lo, hi}, {lo, hi}};
            LemmaCheckResult r = run_sampled_check(
                LemmaId::L5, kRankTol, grid, defaults,
                [&](const std::vector<double>& t) {
                    for (int i = 0; i < 4; ++i) {
                        for (int j = i + 1; j < 4; ++j) {
                            if (std::abs(t[static_cast<std::size_t>(i)] -
                                         t[static_cast<std::size_t>(j)]) < gap) {
                                return false;
                            }
                        }
                    }
                    return true;
                },
                [&](const std::vector<double>& t) -> std::optional<LemmaViolation> {
                    const std::array<double, 4> lens = {t[0], t[1], t[2], t[3]};
                    return rank4_violation(two_rbf_columns(task.xs, lens), kRankTol, t);
                });
            merged.cases_run += r.cases_run;
            for (auto& v : r.violations) merged.violations.push_back(std::move(v));
        }
    }
    return merged;
}

std::vector<LemmaCheckResult> run_all_lemma_checks(const GridSpec& grid) {
    // Rank checks run on built-in designs: one satisfying the period condition
    // (and |X| >= 4), one satisfying only the cardinality condition.
    GridSpec default_ranges = grid;
    default_ranges.ranges.clear();

    std::vector<LemmaCheckResult> results;
    results.push_back(check_lemma2(default_ranges));
    results.push_back(check_lemma3(default_ranges));
    results.push_back(check_lemma4(default_ranges));
    auto [l8, l9] = check_lemma8_9(default_ranges);
    results.push_back(check_lemma6(default_ranges));
    results.push_back(std::move(l8));
    results.push_back(std::move(l9));

    const std::vector<Design> designs = {Design::grid1d({0.0, 3.0, 7.0, 10.0}),
                                         Design::grid1d({0.0, 1.0, 2.0, 3.0})};
    results.push_back(check_rank_lemmas(designs, 7.0, default_ranges));
    return results;
}

} // namespace kernid
