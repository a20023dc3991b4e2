#pragma once

#include <cstddef>
#include <limits>
#include <vector>

#include "suprb/classifier.hpp"

namespace suprb {

/// One candidate global model: an ordered, variable-length classifier set.
/// `valid_error` caches the validation MSE of the mixed quality prediction
/// and must be refreshed whenever a condition or model changes.
struct Individual {
    std::vector<Classifier> classifiers;
    double valid_error = std::numeric_limits<double>::infinity();

    std::size_t length() const noexcept { return classifiers.size(); }

    friend bool operator==(const Individual&, const Individual&) = default;
};

} // namespace suprb
