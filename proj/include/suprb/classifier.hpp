#pragma once

// A classifier is an interval box over situation space plus a local
// quadratic model fitted by least squares on the training examples it matches.
//
// Feature layout (length Dx(Dx+1)/2 + Dx*Da + Da, plus Dx + Da with linear terms):
//   x_i * x_j  for i <= j, row-major over i
//   x_i * a_k  i-major
//   a_k^2
//   [x_i, a_k]  only when include_linear is set
// There are no a_j * a_k cross terms, so the model separates per
// parametrization dimension for a fixed situation.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "suprb/core.hpp"
#include "suprb/errors.hpp"
#include "suprb/linalg.hpp"

namespace suprb {

/// Training error of a classifier that matched nothing. Finite so it
/// survives serialization; such classifiers never take part in mixing.
inline constexpr double kUnfittedError = std::numeric_limits<double>::max();

class IntervalCondition {
public:
    IntervalCondition() = default;
    IntervalCondition(std::vector<double> lower, std::vector<double> upper)
        : lower_(std::move(lower)), upper_(std::move(upper))
    {
        if (lower_.size() != upper_.size()) throw DimensionError("interval bounds differ in length");
    }

    /// Full-range box [-1, 1]^dx.
    static IntervalCondition full(std::size_t dx)
    {
        return {std::vector<double>(dx, -1.0), std::vector<double>(dx, 1.0)};
    }

    std::size_t size() const noexcept { return lower_.size(); }
    const std::vector<double>& lower() const noexcept { return lower_; }
    const std::vector<double>& upper() const noexcept { return upper_; }
    std::vector<double>& lower() noexcept { return lower_; }
    std::vector<double>& upper() noexcept { return upper_; }

    /// Closed on both ends.
    bool contains(std::span<const double> x) const
    {
        if (x.size() != lower_.size())
            throw DimensionError(fmt::format("condition has {} dimensions, situation {}", lower_.size(), x.size()));
        for (std::size_t i = 0; i < x.size(); ++i)
            if (x[i] < lower_[i] || x[i] > upper_[i]) return false;
        return true;
    }

    /// -1 <= lower_i <= upper_i <= 1 everywhere.
    bool is_legal() const noexcept
    {
        for (std::size_t i = 0; i < lower_.size(); ++i)
            if (!(-1.0 <= lower_[i] && lower_[i] <= upper_[i] && upper_[i] <= 1.0)) return false;
        return true;
    }

    friend bool operator==(const IntervalCondition&, const IntervalCondition&) = default;

private:
    std::vector<double> lower_;
    std::vector<double> upper_;
};

inline std::size_t feature_count(std::size_t dx, std::size_t da, bool include_linear) noexcept
{
    return dx * (dx + 1) / 2 + dx * da + da + (include_linear ? dx + da : 0);
}

/// Index arithmetic over the feature layout above.
struct FeatureLayout {
    std::size_t dx;
    std::size_t da;
    bool include_linear;

    std::size_t n_xx() const noexcept { return dx * (dx + 1) / 2; }
    std::size_t xx(std::size_t i, std::size_t j) const noexcept
    {
        if (i > j) std::swap(i, j);
        return i * dx - i * (i - 1) / 2 + (j - i);
    }
    std::size_t xa(std::size_t i, std::size_t k) const noexcept { return n_xx() + i * da + k; }
    std::size_t aa(std::size_t k) const noexcept { return n_xx() + dx * da + k; }
    std::size_t x(std::size_t i) const noexcept { return n_xx() + dx * da + da + i; }
    std::size_t a(std::size_t k) const noexcept { return n_xx() + dx * da + da + dx + k; }
    std::size_t size() const noexcept { return feature_count(dx, da, include_linear); }
};

inline void build_features_into(std::span<const double> x, std::span<const double> a, bool include_linear,
                                std::span<double> out)
{
    const std::size_t dx = x.size();
    const std::size_t da = a.size();
    std::size_t f = 0;
    for (std::size_t i = 0; i < dx; ++i)
        for (std::size_t j = i; j < dx; ++j) out[f++] = x[i] * x[j];
    for (std::size_t i = 0; i < dx; ++i)
        for (std::size_t k = 0; k < da; ++k) out[f++] = x[i] * a[k];
    for (std::size_t k = 0; k < da; ++k) out[f++] = a[k] * a[k];
    if (include_linear) {
        for (std::size_t i = 0; i < dx; ++i) out[f++] = x[i];
        for (std::size_t k = 0; k < da; ++k) out[f++] = a[k];
    }
}

inline std::vector<double> build_features(const Situation& x, const Parametrization& a, bool include_linear)
{
    std::vector<double> out(feature_count(x.size(), a.size(), include_linear));
    build_features_into(x.view(), a.view(), include_linear, out);
    return out;
}

/// Quadratic local model: intercept + coefficients . features.
struct LocalModel {
    FeatureLayout layout{1, 1, false};
    double intercept = 0.0;
    std::vector<double> coefficients;

    static LocalModel zero(std::size_t dx, std::size_t da, bool include_linear = false)
    {
        LocalModel m;
        m.layout = {dx, da, include_linear};
        m.coefficients.assign(m.layout.size(), 0.0);
        return m;
    }

    double w_xx(std::size_t i, std::size_t j) const { return coefficients[layout.xx(i, j)]; }
    double w_xa(std::size_t i, std::size_t k) const { return coefficients[layout.xa(i, k)]; }
    double w_aa(std::size_t k) const { return coefficients[layout.aa(k)]; }
    double w_x(std::size_t i) const { return layout.include_linear ? coefficients[layout.x(i)] : 0.0; }
    double w_a(std::size_t k) const { return layout.include_linear ? coefficients[layout.a(k)] : 0.0; }

    double& w_xx(std::size_t i, std::size_t j) { return coefficients[layout.xx(i, j)]; }
    double& w_xa(std::size_t i, std::size_t k) { return coefficients[layout.xa(i, k)]; }
    double& w_aa(std::size_t k) { return coefficients[layout.aa(k)]; }

    double evaluate(std::span<const double> x, std::span<const double> a) const
    {
        if (x.size() != layout.dx || a.size() != layout.da) throw DimensionError("local model: input shape mismatch");
        double q = intercept;
        std::size_t f = 0;
        const std::size_t dx = layout.dx, da = layout.da;
        for (std::size_t i = 0; i < dx; ++i)
            for (std::size_t j = i; j < dx; ++j) q += coefficients[f++] * x[i] * x[j];
        for (std::size_t i = 0; i < dx; ++i)
            for (std::size_t k = 0; k < da; ++k) q += coefficients[f++] * x[i] * a[k];
        for (std::size_t k = 0; k < da; ++k) q += coefficients[f++] * a[k] * a[k];
        if (layout.include_linear) {
            for (std::size_t i = 0; i < dx; ++i) q += coefficients[f++] * x[i];
            for (std::size_t k = 0; k < da; ++k) q += coefficients[f++] * a[k];
        }
        return q;
    }

    friend bool operator==(const LocalModel& l, const LocalModel& r)
    {
        return l.layout.dx == r.layout.dx && l.layout.da == r.layout.da &&
               l.layout.include_linear == r.layout.include_linear && l.intercept == r.intercept &&
               l.coefficients == r.coefficients;
    }
};

struct Classifier {
    IntervalCondition condition;
    std::optional<LocalModel> model;
    double train_error = kUnfittedError;
    std::size_t experience = 0;

    bool fitted() const noexcept { return model.has_value(); }

    friend bool operator==(const Classifier&, const Classifier&) = default;
};

inline bool matches(const Classifier& c, const Situation& x)
{
    return c.condition.contains(x.view());
}

/// Refit on every training example whose situation the condition matches.
inline Classifier fit(Classifier c, const Dataset& train, bool include_linear = false,
                      double ridge_epsilon = kDefaultRidge)
{
    if (c.condition.size() != train.dx()) throw DimensionError("classifier and dataset disagree on Dx");

    std::vector<const Example*> matched;
    for (const auto& e : train)
        if (c.condition.contains(e.x.view())) matched.push_back(&e);

    c.experience = matched.size();
    if (matched.empty()) {
        c.model.reset();
        c.train_error = kUnfittedError;
        return c;
    }

    const FeatureLayout layout{train.dx(), train.da(), include_linear};
    DesignMatrix design(matched.size(), layout.size());
    std::vector<double> y(matched.size());
    for (std::size_t r = 0; r < matched.size(); ++r) {
        build_features_into(matched[r]->x.view(), matched[r]->a.view(), include_linear, design.row(r));
        y[r] = matched[r]->q;
    }
    auto ols = ols_fit(design, y, ridge_epsilon);

    LocalModel model;
    model.layout = layout;
    model.intercept = ols.intercept;
    model.coefficients = std::move(ols.coefficients);

    double sse = 0.0;
    for (std::size_t r = 0; r < matched.size(); ++r) {
        const double pred = model.evaluate(matched[r]->x.view(), matched[r]->a.view());
        sse += (pred - y[r]) * (pred - y[r]);
    }
    c.train_error = sse / static_cast<double>(matched.size());
    c.model = std::move(model);
    return c;
}

inline double local_predict(const Classifier& c, const Situation& x, const Parametrization& a)
{
    if (!c.fitted()) throw UsageError("local_predict on an unfitted classifier");
    return c.model->evaluate(x.view(), a.view());
}

/// Exact maximizer of the local model over [-1, 1]^Da for fixed x. Per
/// dimension the model is u a^2 + s a + const with s depending on x:
/// downward parabolas take the clipped vertex, upward ones the better end
/// (+1 on ties), flat ones sign(s) and 0 when s == 0.
inline Parametrization local_argmax(const Classifier& c, const Situation& x)
{
    if (!c.fitted()) throw UsageError("local_argmax on an unfitted classifier");
    const auto& m = *c.model;
    if (x.size() != m.layout.dx) throw DimensionError("local_argmax: situation shape mismatch");

    Parametrization out(m.layout.da);
    for (std::size_t k = 0; k < m.layout.da; ++k) {
        double slope = m.w_a(k);
        for (std::size_t i = 0; i < m.layout.dx; ++i) slope += m.w_xa(i, k) * x[i];
        const double curvature = m.w_aa(k);
        if (curvature < 0.0)
            out[k] = std::clamp(-slope / (2.0 * curvature), -1.0, 1.0);
        else if (curvature > 0.0)
            out[k] = slope >= 0.0 ? 1.0 : -1.0;
        else
            out[k] = slope > 0.0 ? 1.0 : (slope < 0.0 ? -1.0 : 0.0);
    }
    return out;
}

namespace detail {

inline std::string sig4(double v)
{
    return fmt::format("{:.4g}", v);
}

inline void append_term(std::string& out, double coef, const std::string& monomial)
{
    if (coef >= 0.0)
        out += " + " + sig4(coef);
    else
        out += " - " + sig4(-coef);
    out += "*" + monomial;
}

} // namespace detail

/// One-line rule, e.g.
/// `IF x1 ∈ [-0.2,0.7] THEN q ≈ 0.9 - 0.25*x1^2 + ... (MSE=0.001, n=12)`.
inline std::string render_rule(const Classifier& c)
{
    std::string out = "IF ";
    const auto& cond = c.condition;
    for (std::size_t i = 0; i < cond.size(); ++i) {
        if (i) out += " AND ";
        out += fmt::format("x{} ∈ [{},{}]", i + 1, detail::sig4(cond.lower()[i]), detail::sig4(cond.upper()[i]));
    }
    if (!c.fitted()) return out + " THEN q ≈ undefined (unfitted, n=0)";

    const auto& m = *c.model;
    const auto& L = m.layout;
    out += " THEN q ≈ " + detail::sig4(m.intercept);
    for (std::size_t i = 0; i < L.dx; ++i)
        for (std::size_t j = i; j < L.dx; ++j)
            detail::append_term(out, m.w_xx(i, j),
                                i == j ? fmt::format("x{}^2", i + 1) : fmt::format("x{}*x{}", i + 1, j + 1));
    for (std::size_t i = 0; i < L.dx; ++i)
        for (std::size_t k = 0; k < L.da; ++k)
            detail::append_term(out, m.w_xa(i, k), fmt::format("x{}*a{}", i + 1, k + 1));
    for (std::size_t k = 0; k < L.da; ++k) detail::append_term(out, m.w_aa(k), fmt::format("a{}^2", k + 1));
    if (L.include_linear) {
        for (std::size_t i = 0; i < L.dx; ++i) detail::append_term(out, m.w_x(i), fmt::format("x{}", i + 1));
        for (std::size_t k = 0; k < L.da; ++k) detail::append_term(out, m.w_a(k), fmt::format("a{}", k + 1));
    }
    out += fmt::format(" (MSE={}, n={})", detail::sig4(c.train_error), c.experience);
    return out;
}

} // namespace suprb
