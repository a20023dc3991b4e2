// Learn the frog problem from 100 examples and print the resulting rules
// together with a few parametrization choices.

#include <cstdio>

#include <fmt/core.h>

#include "suprb/ga.hpp"
#include "suprb/metrics.hpp"
#include "suprb/problems.hpp"

using namespace suprb;

int main()
{
    Rng data_rng{7};
    const auto pool = frog_dataset(100, data_rng);
    const auto holdout = frog_dataset(1000, data_rng);
    auto [train, valid] = split_dataset(pool, 0.5, data_rng);

    GaConfig config;
    config.k = 0.1;
    config.generations = 100;

    Rng rng{42};
    const auto result = evolve(config, train, valid, rng);

    const Problem problem = FrogProblem{};
    const auto optima = optima_for(problem, holdout);
    const auto choice = choice_errors(result.elitist, holdout, problem, optima);
    fmt::print("classifiers: {}\nquality MSE (holdout): {:.4f}\naction MSE (holdout): {:.4f}\n",
               result.elitist.length(), quality_mse(result.elitist, holdout), choice.mse_action);

    for (const auto& c : result.elitist.classifiers)
        if (c.fitted()) fmt::print("{}\n", render_rule(c));

    const auto bounds = frog_bounds();
    for (double x : {0.1, 0.3, 0.5, 0.7, 0.9}) {
        const double raw[] = {x};
        const Situation s(normalize(raw, bounds.situation));
        const auto a = predict_parametrization(result.elitist, s, 1).a;
        fmt::print("x = {:.1f}: chosen a = {:.3f} (optimal {:.3f})\n", x,
                   denormalize(a.view(), bounds.parametrization)[0], frog_optimal(x));
    }
}
