#pragma once

// Domain data model: situations, parametrizations, examples, datasets,
// normalization to [-1, 1] and the random train/validation split.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <fmt/format.h>

#include "suprb/errors.hpp"
#include "suprb/random.hpp"

namespace suprb {

/// Real vector tagged with its role so situations and parametrizations
/// cannot be swapped by accident.
template <class Tag>
class TaggedVector {
public:
    TaggedVector() = default;
    explicit TaggedVector(std::vector<double> values) : values_(std::move(values)) {}
    TaggedVector(std::initializer_list<double> values) : values_(values) {}
    explicit TaggedVector(std::size_t n, double fill = 0.0) : values_(n, fill) {}

    std::size_t size() const noexcept { return values_.size(); }
    double operator[](std::size_t i) const { return values_[i]; }
    double& operator[](std::size_t i) { return values_[i]; }

    std::span<const double> view() const noexcept { return values_; }
    std::span<double> view() noexcept { return values_; }
    const std::vector<double>& values() const noexcept { return values_; }

    auto begin() const noexcept { return values_.begin(); }
    auto end() const noexcept { return values_.end(); }

    friend bool operator==(const TaggedVector&, const TaggedVector&) = default;

private:
    std::vector<double> values_;
};

using Situation = TaggedVector<struct SituationTag>;
using Parametrization = TaggedVector<struct ParametrizationTag>;

struct Example {
    Situation x;
    Parametrization a;
    double q = 0.0;

    friend bool operator==(const Example&, const Example&) = default;
};

inline bool in_unit_box(std::span<const double> v) noexcept
{
    return std::all_of(v.begin(), v.end(), [](double c) { return c >= -1.0 && c <= 1.0; });
}

/// Examples sharing one (dx, da) shape. Situation and parametrization
/// components are in normalized units; q is in problem units.
class Dataset {
public:
    Dataset() = default;
    Dataset(std::size_t dx, std::size_t da) : dx_(dx), da_(da)
    {
        if (dx == 0 || da == 0) throw DimensionError("dataset dimensions must be positive");
    }

    std::size_t dx() const noexcept { return dx_; }
    std::size_t da() const noexcept { return da_; }
    std::size_t size() const noexcept { return examples_.size(); }
    bool empty() const noexcept { return examples_.empty(); }

    const Example& operator[](std::size_t i) const { return examples_[i]; }
    const std::vector<Example>& examples() const noexcept { return examples_; }
    auto begin() const noexcept { return examples_.begin(); }
    auto end() const noexcept { return examples_.end(); }

    void reserve(std::size_t n) { examples_.reserve(n); }

    void add(Example e)
    {
        if (e.x.size() != dx_ || e.a.size() != da_)
            throw DimensionError(fmt::format("example has shape ({}, {}), dataset expects ({}, {})",
                                             e.x.size(), e.a.size(), dx_, da_));
        if (!std::isfinite(e.q)) throw Error("example quality is not finite");
        examples_.push_back(std::move(e));
    }

    friend bool operator==(const Dataset&, const Dataset&) = default;

private:
    std::size_t dx_ = 0;
    std::size_t da_ = 0;
    std::vector<Example> examples_;
};

struct Bound {
    double low;
    double high;
};

/// Raw-unit bounds for every situation and parametrization dimension.
struct BoundsSpec {
    std::vector<Bound> situation;
    std::vector<Bound> parametrization;

    static BoundsSpec uniform(std::size_t dx, std::size_t da, Bound b)
    {
        return {std::vector<Bound>(dx, b), std::vector<Bound>(da, b)};
    }

    void validate() const
    {
        auto check = [](const std::vector<Bound>& bs, const char* role) {
            for (std::size_t i = 0; i < bs.size(); ++i)
                if (!(bs[i].low < bs[i].high))
                    throw ConfigError(fmt::format("{} bound {} has low >= high", role, i + 1));
        };
        check(situation, "situation");
        check(parametrization, "parametrization");
    }
};

/// Affine map of each component onto [-1, 1].
inline std::vector<double> normalize(std::span<const double> raw, std::span<const Bound> bounds)
{
    if (raw.size() != bounds.size())
        throw DimensionError(fmt::format("normalize: {} values for {} bounds", raw.size(), bounds.size()));
    std::vector<double> out(raw.size());
    for (std::size_t i = 0; i < raw.size(); ++i) {
        const auto [lo, hi] = bounds[i];
        if (!(raw[i] >= lo && raw[i] <= hi))
            throw OutOfRangeError(
                fmt::format("dimension {}: value {} outside [{}, {}]", i + 1, raw[i], lo, hi), i);
        out[i] = 2.0 * (raw[i] - lo) / (hi - lo) - 1.0;
    }
    return out;
}

inline std::vector<double> denormalize(std::span<const double> norm, std::span<const Bound> bounds)
{
    if (norm.size() != bounds.size())
        throw DimensionError(fmt::format("denormalize: {} values for {} bounds", norm.size(), bounds.size()));
    std::vector<double> out(norm.size());
    for (std::size_t i = 0; i < norm.size(); ++i) {
        if (!(norm[i] >= -1.0 && norm[i] <= 1.0))
            throw OutOfRangeError(
                fmt::format("dimension {}: normalized value {} outside [-1, 1]", i + 1, norm[i]), i);
        const auto [lo, hi] = bounds[i];
        out[i] = lo + (norm[i] + 1.0) * 0.5 * (hi - lo);
    }
    return out;
}

struct Split {
    Dataset train;
    Dataset valid;
};

/// Validation side gets floor(fraction * N) examples chosen by shuffling
/// indices; both sides keep the input's relative order.
inline Split split_dataset(const Dataset& data, double validation_fraction, Rng& rng)
{
    if (data.empty()) throw ConfigError("cannot split an empty dataset");
    if (!(validation_fraction > 0.0 && validation_fraction < 1.0))
        throw ConfigError(fmt::format("validation fraction {} not in (0, 1)", validation_fraction));

    const std::size_t n = data.size();
    // the epsilon keeps products like 0.5 * 100 from landing just below an integer
    const auto n_valid = static_cast<std::size_t>(std::floor(validation_fraction * n + 1e-9));
    if (n_valid == 0 || n_valid >= n)
        throw ConfigError(fmt::format("validation fraction {} on {} examples leaves an empty side",
                                      validation_fraction, n));

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::shuffle(order.begin(), order.end(), rng);

    std::vector<bool> is_valid(n, false);
    for (std::size_t i = 0; i < n_valid; ++i) is_valid[order[i]] = true;

    Split out{Dataset(data.dx(), data.da()), Dataset(data.dx(), data.da())};
    out.train.reserve(n - n_valid);
    out.valid.reserve(n_valid);
    for (std::size_t i = 0; i < n; ++i)
        (is_valid[i] ? out.valid : out.train).add(data[i]);
    return out;
}

} // namespace suprb
