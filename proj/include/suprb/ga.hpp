#pragma once

// Generational GA over classifier populations. Each generation: copy the
// top-ranked elitists, fill the rest with tournament-selected parents that
// are crossed over (or cloned) and then mutated, refit what changed,
// re-evaluate on the validation set and adapt the shared mutation step
// size with the one-fifth rule.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <numeric>
#include <utility>
#include <vector>

#include <fmt/format.h>

#include "suprb/classifier.hpp"
#include "suprb/core.hpp"
#include "suprb/errors.hpp"
#include "suprb/individual.hpp"
#include "suprb/mixing.hpp"
#include "suprb/random.hpp"

namespace suprb {

struct GaConfig {
    std::size_t population_size = 30;
    std::size_t elitists = 1;
    std::size_t initial_individual_size = 30;
    double k = -1.0; // no default, must be set
    double one_fifth_factor = 1.05;
    double crossover_rate = 0.9;
    double initial_step_size = 2.0 / 1000.0;
    std::size_t generations = 100;
    double random_classifier_prob = 0.5;
    bool clip_mutation = true;
    bool include_linear = false;
    double ridge_epsilon = kDefaultRidge;

    void validate() const
    {
        if (population_size == 0) throw ConfigError("population_size must be positive");
        if (elitists >= population_size) throw ConfigError("elitists must be smaller than population_size");
        if (initial_individual_size == 0) throw ConfigError("initial_individual_size must be positive");
        if (!(k >= 0.0 && k <= 1.0)) throw ConfigError("k must be set and lie in [0, 1]");
        if (!(one_fifth_factor > 0.0)) throw ConfigError("one_fifth_factor must be positive");
        if (!(crossover_rate >= 0.0 && crossover_rate <= 1.0)) throw ConfigError("crossover_rate not in [0, 1]");
        if (!(random_classifier_prob >= 0.0 && random_classifier_prob <= 1.0))
            throw ConfigError("random_classifier_prob not in [0, 1]");
        if (!(initial_step_size > 0.0)) throw ConfigError("initial_step_size must be positive");
        if (!(ridge_epsilon >= 0.0)) throw ConfigError("ridge_epsilon must be >= 0");
    }
};

struct StepSizeState {
    double s = 2.0 / 1000.0;
    std::size_t success_count = 0;
    std::size_t trial_count = 0;

    double success_ratio() const noexcept
    {
        return trial_count ? static_cast<double>(success_count) / static_cast<double>(trial_count) : 0.0;
    }
};

inline void evaluate(Individual& ind, const Dataset& valid)
{
    ind.valid_error = quality_mse(ind, valid);
}

/// Unfitted classifier whose interval bounds are uniform in [-1, 1].
inline Classifier random_classifier(Rng& rng, std::size_t dx)
{
    std::vector<double> lower(dx), upper(dx);
    for (std::size_t i = 0; i < dx; ++i) {
        const double u = uniform(rng, -1.0, 1.0);
        const double v = uniform(rng, -1.0, 1.0);
        lower[i] = std::min(u, v);
        upper[i] = std::max(u, v);
    }
    return Classifier{IntervalCondition(std::move(lower), std::move(upper)), std::nullopt, kUnfittedError, 0};
}

inline std::vector<Individual> init_population(const GaConfig& config, Rng& rng, const Dataset& train,
                                               const Dataset& valid)
{
    std::vector<Individual> pop(config.population_size);
    for (auto& ind : pop) {
        ind.classifiers.reserve(config.initial_individual_size);
        for (std::size_t c = 0; c < config.initial_individual_size; ++c)
            ind.classifiers.push_back(random_classifier(rng, train.dx()));
    }
    for (auto& ind : pop) {
        for (auto& c : ind.classifiers) c = fit(std::move(c), train, config.include_linear, config.ridge_epsilon);
        evaluate(ind, valid);
    }
    return pop;
}

/// Perturbs every bound by s * N(0, 1), optionally clipping to [-1, 1] and
/// swapping inverted bounds, may append one random classifier, then refits
/// changed classifiers and refreshes the validation error.
inline Individual mutate(Individual ind, const StepSizeState& step, const GaConfig& config, Rng& rng,
                         const Dataset& train, const Dataset& valid)
{
    std::vector<bool> changed(ind.classifiers.size(), false);
    for (std::size_t c = 0; c < ind.classifiers.size(); ++c) {
        auto& cond = ind.classifiers[c].condition;
        const IntervalCondition before = cond;
        for (std::size_t i = 0; i < cond.size(); ++i) {
            double lo = cond.lower()[i] + step.s * standard_normal(rng);
            double hi = cond.upper()[i] + step.s * standard_normal(rng);
            if (config.clip_mutation) {
                lo = std::clamp(lo, -1.0, 1.0);
                hi = std::clamp(hi, -1.0, 1.0);
            }
            if (lo > hi) std::swap(lo, hi);
            cond.lower()[i] = lo;
            cond.upper()[i] = hi;
        }
        changed[c] = !(cond == before);
    }
    if (bernoulli(rng, config.random_classifier_prob)) {
        ind.classifiers.push_back(random_classifier(rng, train.dx()));
        changed.push_back(true);
    }
    for (std::size_t c = 0; c < ind.classifiers.size(); ++c)
        if (changed[c] || !ind.classifiers[c].fitted())
            ind.classifiers[c] =
                fit(std::move(ind.classifiers[c]), train, config.include_linear, config.ridge_epsilon);
    evaluate(ind, valid);
    return ind;
}

/// One-fifth rule: grow s by F above a 1/5 success ratio, shrink below it.
inline StepSizeState adapt_step_size(StepSizeState step, const GaConfig& config)
{
    if (step.trial_count == 0) throw UsageError("adapt_step_size without trials");
    // integer comparison so a ratio of exactly 1/5 is recognised
    const auto successes5 = 5 * step.success_count;
    if (successes5 > step.trial_count)
        step.s *= config.one_fifth_factor;
    else if (successes5 < step.trial_count)
        step.s /= config.one_fifth_factor;
    step.success_count = 0;
    step.trial_count = 0;
    return step;
}

/// Child-1 size drawn from round(N((l1 + l2) / 2, 1)) until it leaves both
/// children non-empty; the pooled classifiers are shuffled and dealt out.
/// Children are re-evaluated when `valid` is given.
inline std::pair<Individual, Individual> crossover(const Individual& p1, const Individual& p2, Rng& rng,
                                                   const Dataset* valid = nullptr)
{
    const std::size_t l1 = p1.length();
    const std::size_t l2 = p2.length();
    if (l1 == 0 || l2 == 0) throw UsageError("crossover needs non-empty parents");
    const std::size_t total = l1 + l2;
    const double mean = static_cast<double>(total) / 2.0;

    long long size1 = 0;
    do {
        size1 = std::llround(mean + standard_normal(rng));
    } while (size1 < 1 || size1 > static_cast<long long>(total - 1));

    std::vector<Classifier> pool;
    pool.reserve(total);
    pool.insert(pool.end(), p1.classifiers.begin(), p1.classifiers.end());
    pool.insert(pool.end(), p2.classifiers.begin(), p2.classifiers.end());
    std::shuffle(pool.begin(), pool.end(), rng);

    const auto split = pool.begin() + size1;
    Individual c1{{pool.begin(), split}, p1.valid_error};
    Individual c2{{split, pool.end()}, p2.valid_error};
    if (valid) {
        evaluate(c1, *valid);
        evaluate(c2, *valid);
    }
    return {std::move(c1), std::move(c2)};
}

/// Pairwise complexity-aware fitness: true when `i1` beats `i2`.
///   e1 <  e2 and l1 <=     (e2 / e1) l2, or
///   e1 >= e2 and l1 <= k (e2 / e1) l2.
/// A zero-error i1 against a non-zero i2 always wins; two zero-error
/// individuals are decided by length, ties to i1. Identical error and
/// length also go to i1.
inline bool tournament(const Individual& i1, const Individual& i2, double k)
{
    const double e1 = i1.valid_error;
    const double e2 = i2.valid_error;
    const auto l1 = static_cast<double>(i1.length());
    const auto l2 = static_cast<double>(i2.length());
    if (e1 == 0.0) return e2 > 0.0 || l1 <= l2;
    if (e1 == e2 && l1 == l2) return true;
    const double ratio = e2 / e1;
    if (e1 < e2) return l1 <= ratio * l2;
    return l1 <= k * ratio * l2;
}

/// Total order for elitism: round-robin tournament wins (each pair plays in
/// both seatings), then lower validation error, shorter length, input order.
inline std::vector<std::size_t> rank_population(const std::vector<Individual>& pop, double k)
{
    const std::size_t n = pop.size();
    std::vector<std::size_t> wins(n, 0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (i != j && tournament(pop[i], pop[j], k)) ++wins[i];

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (wins[a] != wins[b]) return wins[a] > wins[b];
        if (pop[a].valid_error != pop[b].valid_error) return pop[a].valid_error < pop[b].valid_error;
        return pop[a].length() < pop[b].length();
    });
    return order;
}

/// Size-2 tournament over two uniformly drawn (with replacement) members.
inline const Individual& select_parent(const std::vector<Individual>& pop, double k, Rng& rng)
{
    const auto& a = pop[uniform_index(rng, pop.size())];
    const auto& b = pop[uniform_index(rng, pop.size())];
    return tournament(a, b, k) ? a : b;
}

struct GenerationReport {
    std::size_t generation = 0;
    double elitist_valid_error = 0.0;
    std::size_t elitist_length = 0;
    double step_size = 0.0;
    double success_ratio = 0.0;
};

/// Called after every generation with the rank-1 individual.
using GenerationObserver = std::function<void(const GenerationReport&, const Individual& elitist)>;

struct EvolutionResult {
    Individual elitist;
    std::vector<GenerationReport> history;
    StepSizeState step;
};

struct GenerationOutcome {
    std::vector<Individual> population; // elitists first
    double success_ratio = 0.0;
};

/// One generation on an already evaluated population; adapts `step`.
inline GenerationOutcome next_generation(const std::vector<Individual>& pop, StepSizeState& step,
                                               const GaConfig& config, Rng& rng, const Dataset& train,
                                               const Dataset& valid)
{
    const auto order = rank_population(pop, config.k);
    std::vector<Individual> next;
    next.reserve(config.population_size);
    for (std::size_t e = 0; e < config.elitists; ++e) next.push_back(pop[order[e]]);

    while (next.size() < config.population_size) {
        const Individual& p1 = select_parent(pop, config.k, rng);
        const Individual& p2 = select_parent(pop, config.k, rng);
        std::pair<Individual, Individual> children =
            bernoulli(rng, config.crossover_rate) ? crossover(p1, p2, rng) : std::pair{p1, p2};

        // success is measured against the first parent for both children
        const double baseline = p1.valid_error;
        Individual* kids[] = {&children.first, &children.second};
        for (int c = 0; c < 2 && next.size() < config.population_size; ++c) {
            Individual child = mutate(std::move(*kids[c]), step, config, rng, train, valid);
            ++step.trial_count;
            if (child.valid_error < baseline) ++step.success_count;
            next.push_back(std::move(child));
        }
    }
    const double ratio = step.success_ratio();
    if (step.trial_count > 0) step = adapt_step_size(step, config);
    return {std::move(next), ratio};
}

inline EvolutionResult evolve(const GaConfig& config, const Dataset& train, const Dataset& valid, Rng& rng,
                              const std::vector<GenerationObserver>& observers = {})
{
    config.validate();
    if (train.empty() || valid.empty()) throw ConfigError("evolve needs non-empty train and validation sets");

    auto pop = init_population(config, rng, train, valid);
    EvolutionResult result;
    result.step.s = config.initial_step_size;

    for (std::size_t gen = 1; gen <= config.generations; ++gen) {
        auto outcome = next_generation(pop, result.step, config, rng, train, valid);
        pop = std::move(outcome.population);
        const auto& best = pop[rank_population(pop, config.k).front()];
        GenerationReport report{gen, best.valid_error, best.length(), result.step.s, outcome.success_ratio};
        result.history.push_back(report);
        for (const auto& obs : observers) obs(report, best);
    }
    result.elitist = pop[rank_population(pop, config.k).front()];
    return result;
}

} // namespace suprb
