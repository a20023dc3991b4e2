#pragma once

// System-level predictions: matching classifiers are combined with weights
// proportional to 1 / (e_c + 1), normalized over the match set.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "suprb/classifier.hpp"
#include "suprb/core.hpp"
#include "suprb/errors.hpp"
#include "suprb/individual.hpp"

namespace suprb {

/// Fitted classifiers of an individual that match a situation, in population order.
using MatchSet = std::vector<std::reference_wrapper<const Classifier>>;

struct MixWeights {
    std::vector<double> g;
};

inline MatchSet match_set(const Individual& ind, const Situation& x)
{
    MatchSet out;
    for (const auto& c : ind.classifiers)
        if (c.fitted() && matches(c, x)) out.emplace_back(c);
    return out;
}

/// E = sum(e_c + 1), g'_c = E / (e_c + 1), g_c = g'_c / sum(g').
inline MixWeights mix_weights(std::span<const double> errors)
{
    if (errors.empty()) throw NoCoverageError("mix_weights: empty match set");
    double total = 0.0;
    for (double e : errors) {
        if (!(e >= 0.0) || !std::isfinite(e)) throw UsageError("mix_weights: errors must be finite and >= 0");
        total += e + 1.0;
    }
    MixWeights w;
    w.g.resize(errors.size());
    double norm = 0.0;
    for (std::size_t i = 0; i < errors.size(); ++i) {
        w.g[i] = total / (errors[i] + 1.0);
        norm += w.g[i];
    }
    for (double& g : w.g) g /= norm;
    return w;
}

inline MixWeights mix_weights(const MatchSet& ms)
{
    std::vector<double> errors;
    errors.reserve(ms.size());
    for (const Classifier& c : ms) errors.push_back(c.train_error);
    return mix_weights(errors);
}

struct QualityPrediction {
    double value = 0.0;
    bool covered = false;
};

struct ParametrizationPrediction {
    Parametrization a;
    bool covered = false;
};

/// Uncovered situations predict `fallback` with `covered == false`.
inline QualityPrediction predict_quality(const Individual& ind, const Situation& x, const Parametrization& a,
                                         double fallback = 0.0)
{
    const auto ms = match_set(ind, x);
    if (ms.empty()) return {fallback, false};
    const auto w = mix_weights(ms);
    double q = 0.0;
    for (std::size_t i = 0; i < ms.size(); ++i) q += w.g[i] * local_predict(ms[i], x, a);
    return {q, true};
}

/// Weighted mix of the per-classifier argmaxes (not the argmax of the mix).
/// Uncovered situations return the zero vector with `covered == false`.
inline ParametrizationPrediction predict_parametrization(const Individual& ind, const Situation& x, std::size_t da)
{
    const auto ms = match_set(ind, x);
    ParametrizationPrediction out{Parametrization(da), false};
    if (ms.empty()) return out;
    const auto w = mix_weights(ms);
    for (std::size_t i = 0; i < ms.size(); ++i) {
        const auto local = local_argmax(ms[i], x);
        for (std::size_t k = 0; k < da; ++k) out.a[k] += w.g[i] * local[k];
    }
    for (std::size_t k = 0; k < da; ++k) out.a[k] = std::clamp(out.a[k], -1.0, 1.0);
    out.covered = true;
    return out;
}

/// Validation MSE of the mixed quality prediction; this is what the GA caches.
inline double quality_mse(const Individual& ind, const Dataset& data)
{
    if (data.empty()) throw UsageError("quality_mse on an empty dataset");
    double sse = 0.0;
    for (const auto& e : data) {
        const double d = predict_quality(ind, e.x, e.a).value - e.q;
        sse += d * d;
    }
    return sse / static_cast<double>(data.size());
}

} // namespace suprb
