#include "kernid/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

#include "kernid/errors.hpp"
#include "kernid/parallel.hpp"

namespace kernid {

namespace {

// 53-bit mantissa draw in [0, 1); avoids distribution objects so streams are
// reproducible across standard library implementations.
double canonical(std::mt19937_64& gen) {
    return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

} // namespace

NelderMeadResult nelder_mead(const Objective& objective, const Eigen::VectorXd& start,
                             const NelderMeadOptions& options) {
    const int n = static_cast<int>(start.size());
    if (n < 1) throw std::invalid_argument("nelder_mead: empty start point");

    constexpr double kReflect = 1.0;
    constexpr double kExpand = 2.0;
    constexpr double kContract = 0.5;
    constexpr double kShrink = 0.5;

    std::vector<Eigen::VectorXd> simplex;
    simplex.reserve(static_cast<std::size_t>(n) + 1);
    simplex.push_back(start);
    for (int i = 0; i < n; ++i) {
        Eigen::VectorXd v = start;
        v[i] += options.initial_step;
        simplex.push_back(std::move(v));
    }
    std::vector<double> values(simplex.size());
    for (std::size_t i = 0; i < simplex.size(); ++i) values[i] = objective(simplex[i]);

    std::vector<int> order(simplex.size());
    NelderMeadResult result;
    for (result.iterations = 0; result.iterations < options.max_iters; ++result.iterations) {
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(),
                  [&](int a, int b) { return values[a] < values[b]; });
        const int best = order.front();
        const int worst = order.back();
        const int second_worst = order[order.size() - 2];

        double diameter = 0.0;
        for (std::size_t i = 0; i < simplex.size(); ++i) {
            diameter = std::max(diameter,
                                (simplex[i] - simplex[best]).lpNorm<Eigen::Infinity>());
        }
        const double spread = values[worst] - values[best];
        if (diameter < options.x_tol || spread < options.f_tol) {
            result.converged = true;
            break;
        }

        Eigen::VectorXd centroid = Eigen::VectorXd::Zero(n);
        for (int idx : order) {
            if (idx != worst) centroid += simplex[idx];
        }
        centroid /= static_cast<double>(n);

        const Eigen::VectorXd reflected = centroid + kReflect * (centroid - simplex[worst]);
        const double f_reflected = objective(reflected);

        if (f_reflected < values[best]) {
            const Eigen::VectorXd expanded = centroid + kExpand * (centroid - simplex[worst]);
            const double f_expanded = objective(expanded);
            if (f_expanded < f_reflected) {
                simplex[worst] = expanded;
                values[worst] = f_expanded;
            } else {
                simplex[worst] = reflected;
                values[worst] = f_reflected;
            }
            continue;
        }
        if (f_reflected < values[second_worst]) {
            simplex[worst] = reflected;
            values[worst] = f_reflected;
            continue;
        }

        Eigen::VectorXd contracted;
        if (f_reflected < values[worst]) {
            contracted = centroid + kContract * (reflected - centroid);
        } else {
            contracted = centroid - kContract * (centroid - simplex[worst]);
        }
        const double f_contracted = objective(contracted);
        if (f_contracted < std::min(f_reflected, values[worst])) {
            simplex[worst] = contracted;
            values[worst] = f_contracted;
            continue;
        }

        for (std::size_t i = 0; i < simplex.size(); ++i) {
            if (static_cast<int>(i) == best) continue;
            simplex[i] = simplex[best] + kShrink * (simplex[i] - simplex[best]);
            values[i] = objective(simplex[i]);
        }
    }

    const auto best_it = std::min_element(values.begin(), values.end());
    result.x = simplex[static_cast<std::size_t>(best_it - values.begin())];
    result.value = *best_it;
    return result;
}

Objective boxed_objective(Objective inner, Box box) {
    for (const auto& [lo, hi] : box) {
        if (!(lo < hi)) throw InvalidBoundsError("box bound with low >= high");
    }
    return [inner = std::move(inner), box = std::move(box)](const Eigen::VectorXd& x) {
        Eigen::VectorXd clamped = x;
        double penalty = 0.0;
        for (int i = 0; i < x.size(); ++i) {
            const auto& [lo, hi] = box[static_cast<std::size_t>(i)];
            const double c = std::clamp(x[i], lo, hi);
            penalty += (x[i] - c) * (x[i] - c);
            clamped[i] = c;
        }
        return inner(clamped) + penalty;
    };
}

Eigen::VectorXd random_point_in_box(const Box& box, std::uint64_t seed, std::uint64_t index) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
    std::mt19937_64 gen(seq);
    Eigen::VectorXd x(static_cast<Eigen::Index>(box.size()));
    for (std::size_t i = 0; i < box.size(); ++i) {
        x[static_cast<Eigen::Index>(i)] = box[i].first + (box[i].second - box[i].first) * canonical(gen);
    }
    return x;
}

std::vector<NelderMeadResult> multi_start_minimize(const Objective& objective, const Box& box,
                                                   int starts, std::uint64_t seed,
                                                   const NelderMeadOptions& options) {
    if (starts < 1) throw std::invalid_argument("multi_start_minimize: starts must be positive");
    const Objective boxed = boxed_objective(objective, box);
    std::vector<NelderMeadResult> results(static_cast<std::size_t>(starts));
    parallel_for(starts, [&](int i) {
        const Eigen::VectorXd x0 = random_point_in_box(box, seed, static_cast<std::uint64_t>(i));
        results[static_cast<std::size_t>(i)] = nelder_mead(boxed, x0, options);
    });
    return results;
}

} // namespace kernid
