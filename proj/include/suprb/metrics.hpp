#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "suprb/core.hpp"
#include "suprb/errors.hpp"
#include "suprb/individual.hpp"
#include "suprb/mixing.hpp"
#include "suprb/problems.hpp"

namespace suprb {

inline double mse(std::span<const double> predictions, std::span<const double> targets)
{
    if (predictions.empty()) throw UsageError("mse of empty input");
    if (predictions.size() != targets.size()) throw DimensionError("mse: length mismatch");
    double sse = 0.0;
    for (std::size_t i = 0; i < predictions.size(); ++i) {
        const double d = predictions[i] - targets[i];
        sse += d * d;
    }
    return sse / static_cast<double>(predictions.size());
}

inline double rmse(std::span<const double> predictions, std::span<const double> targets)
{
    return std::sqrt(mse(predictions, targets));
}

/// Quality-prediction RMSE of the mixed model (uncovered examples predict 0).
inline double rmse_quality(const Individual& ind, const Dataset& data)
{
    return std::sqrt(quality_mse(ind, data));
}

/// Examples whose situation no fitted classifier matches.
inline std::size_t unmatched_count(const Individual& ind, const Dataset& data)
{
    std::size_t n = 0;
    for (const auto& e : data)
        if (match_set(ind, e.x).empty()) ++n;
    return n;
}

/// Ground-truth optima for a list of situations; computing these is the
/// expensive part of choice metrics, so callers cache them.
inline std::vector<Optimum> optima_for(const Problem& problem, const Dataset& data)
{
    std::vector<Optimum> out;
    out.reserve(data.size());
    for (const auto& e : data) out.push_back(optimum(problem, e.x));
    return out;
}

struct ChoiceErrors {
    double rmse_gap = 0.0;   // sqrt(mean (q(x, a_max) - q(x, a_hat))^2), true q
    double mse_action = 0.0; // mean ||a_hat - a_max||^2 in native units
};

/// Both readings of "error of the chosen parametrization" over the
/// situations of `data`, against precomputed optima.
inline ChoiceErrors choice_errors(const Individual& ind, const Dataset& data, const Problem& problem,
                                  std::span<const Optimum> optima)
{
    if (data.empty()) throw UsageError("choice_errors on an empty dataset");
    if (optima.size() != data.size()) throw DimensionError("choice_errors: one optimum per example required");
    const auto bounds = problem_bounds(problem);
    double gap_sq = 0.0;
    double action_sq = 0.0;
    for (std::size_t i = 0; i < data.size(); ++i) {
        const auto& x = data[i].x;
        const auto choice = predict_parametrization(ind, x, data.da());
        const double gap = optima[i].q - true_quality(problem, x, choice.a);
        gap_sq += gap * gap;
        const auto chosen = denormalize(choice.a.view(), bounds.parametrization);
        const auto best = denormalize(optima[i].a.view(), bounds.parametrization);
        for (std::size_t k = 0; k < chosen.size(); ++k) action_sq += (chosen[k] - best[k]) * (chosen[k] - best[k]);
    }
    const auto n = static_cast<double>(data.size());
    return {std::sqrt(gap_sq / n), action_sq / n};
}

/// RMSE of the quality gap for an arbitrary policy, mainly for checking
/// the metric itself against known policies.
template <class Policy>
double choice_gap(Policy&& policy, const Dataset& situations, const Problem& problem, std::span<const Optimum> optima)
{
    double gap_sq = 0.0;
    for (std::size_t i = 0; i < situations.size(); ++i) {
        const Parametrization a = policy(situations[i].x);
        const double gap = optima[i].q - true_quality(problem, situations[i].x, a);
        gap_sq += gap * gap;
    }
    return std::sqrt(gap_sq / static_cast<double>(situations.size()));
}

struct GenerationMetrics {
    std::size_t generation = 0;
    double rmse_quality_train = 0.0;
    double rmse_quality_valid = 0.0;
    double rmse_quality_holdout = 0.0;
    double rmse_choice_gap_holdout = 0.0;
    double mse_action_holdout = 0.0;
    std::size_t n_classifiers_elitist = 0;
    std::size_t unmatched_train = 0;
    double step_size = 0.0;
};

struct EvaluationSets {
    const Dataset& train;
    const Dataset& valid;
    const Dataset& holdout;
    const Problem& problem;
    std::span<const Optimum> holdout_optima;
};

inline GenerationMetrics measure(const Individual& elitist, std::size_t generation, double step_size,
                                 const EvaluationSets& sets)
{
    GenerationMetrics m;
    m.generation = generation;
    m.rmse_quality_train = rmse_quality(elitist, sets.train);
    m.rmse_quality_valid = rmse_quality(elitist, sets.valid);
    m.rmse_quality_holdout = rmse_quality(elitist, sets.holdout);
    const auto choice = choice_errors(elitist, sets.holdout, sets.problem, sets.holdout_optima);
    m.rmse_choice_gap_holdout = choice.rmse_gap;
    m.mse_action_holdout = choice.mse_action;
    m.n_classifiers_elitist = elitist.length();
    m.unmatched_train = unmatched_count(elitist, sets.train);
    m.step_size = step_size;
    return m;
}

} // namespace suprb
