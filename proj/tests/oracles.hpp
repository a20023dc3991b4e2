#pragma once

// Independent reference computations used only by the tests. None of these
// share code paths with the library implementations they check.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <vector>

namespace oracle {

/// Solve A z = b by Gaussian elimination with partial pivoting, carried out in
/// extended precision (A copied).
inline std::vector<double> gauss_solve(std::vector<std::vector<long double>> A, std::vector<long double> b)
{
    const std::size_t n = b.size();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (std::abs(A[r][col]) > std::abs(A[piv][col])) piv = r;
        std::swap(A[piv], A[col]);
        std::swap(b[piv], b[col]);
        for (std::size_t r = col + 1; r < n; ++r) {
            const long double f = A[r][col] / A[col][col];
            for (std::size_t c = col; c < n; ++c) A[r][c] -= f * A[col][c];
            b[r] -= f * b[col];
        }
    }
    std::vector<long double> z(n);
    for (std::size_t i = n; i-- > 0;) {
        long double s = b[i];
        for (std::size_t c = i + 1; c < n; ++c) s -= A[i][c] * z[c];
        z[i] = s / A[i][i];
    }
    return std::vector<double>(z.begin(), z.end());
}

struct LinearFit {
    double intercept;
    std::vector<double> w;
};

/// Least squares with intercept from the uncentered normal equations
/// [1 X]^T [1 X] z = [1 X]^T y, accumulated in extended precision.
inline LinearFit normal_equations(const std::vector<std::vector<double>>& X, const std::vector<double>& y)
{
    const std::size_t n = X.size();
    const std::size_t p = X.front().size() + 1;
    std::vector<std::vector<long double>> A(p, std::vector<long double>(p, 0.0L));
    std::vector<long double> b(p, 0.0L);
    for (std::size_t r = 0; r < n; ++r) {
        std::vector<long double> row(p);
        row[0] = 1.0;
        for (std::size_t c = 1; c < p; ++c) row[c] = X[r][c - 1];
        for (std::size_t i = 0; i < p; ++i) {
            b[i] += row[i] * y[r];
            for (std::size_t j = 0; j < p; ++j) A[i][j] += row[i] * row[j];
        }
    }
    const auto z = gauss_solve(A, b);
    return {z[0], std::vector<double>(z.begin() + 1, z.end())};
}

/// Eigenvalues of the symmetric matrix [[a, b], [b, d]], ascending.
inline std::array<double, 2> sym2_eigenvalues(double a, double b, double d)
{
    const double mean = 0.5 * (a + d);
    const double r = std::sqrt(0.25 * (a - d) * (a - d) + b * b);
    return {mean - r, mean + r};
}

/// Best value of f on a regular grid over [-1, 1]^dims (dims <= 2).
inline double grid_max(const std::function<double(const std::vector<double>&)>& f, std::size_t dims, double step)
{
    const auto n = static_cast<std::size_t>(std::llround(2.0 / step));
    double best = -INFINITY;
    std::vector<double> a(dims);
    if (dims == 1) {
        for (std::size_t i = 0; i <= n; ++i) {
            a[0] = -1.0 + static_cast<double>(i) * step;
            best = std::max(best, f(a));
        }
    } else {
        for (std::size_t i = 0; i <= n; ++i)
            for (std::size_t j = 0; j <= n; ++j) {
                a[0] = -1.0 + static_cast<double>(i) * step;
                a[1] = -1.0 + static_cast<double>(j) * step;
                best = std::max(best, f(a));
            }
    }
    return best;
}

/// Standard normal CDF.
inline double phi(double z)
{
    return 0.5 * std::erfc(-z / std::sqrt(2.0));
}

} // namespace oracle

#include "suprb/classifier.hpp"

namespace oracle {

/// Local model value through the named coefficient accessors rather than
/// the packed feature order used by LocalModel::evaluate.
inline double model_value(const suprb::LocalModel& m, const std::vector<double>& x, const std::vector<double>& a)
{
    const auto& L = m.layout;
    double q = m.intercept;
    for (std::size_t i = 0; i < L.dx; ++i)
        for (std::size_t j = i; j < L.dx; ++j) q += m.w_xx(i, j) * x[i] * x[j];
    for (std::size_t i = 0; i < L.dx; ++i)
        for (std::size_t k = 0; k < L.da; ++k) q += m.w_xa(i, k) * x[i] * a[k];
    for (std::size_t k = 0; k < L.da; ++k) q += m.w_aa(k) * a[k] * a[k] + m.w_a(k) * a[k];
    for (std::size_t i = 0; i < L.dx; ++i) q += m.w_x(i) * x[i];
    return q;
}

} // namespace oracle
