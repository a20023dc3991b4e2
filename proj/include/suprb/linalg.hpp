#pragma once

// Ordinary least squares with intercept and random 2x2 PSD matrices.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <numbers>
#include <span>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Core>
#include <Eigen/QR>

#include "suprb/errors.hpp"
#include "suprb/random.hpp"

namespace suprb {

inline constexpr double kDefaultRidge = 1e-9;

/// Dense n x p feature matrix, row-major.
class DesignMatrix {
public:
    using Storage = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

    DesignMatrix(std::size_t rows, std::size_t cols)
        : m_(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols))
    {
        if (cols == 0) throw DimensionError("design matrix needs at least one column");
        m_.setZero();
    }

    DesignMatrix(std::initializer_list<std::initializer_list<double>> rows)
        : DesignMatrix(rows.size(), rows.size() ? rows.begin()->size() : 0)
    {
        Eigen::Index i = 0;
        for (const auto& r : rows) {
            if (static_cast<Eigen::Index>(r.size()) != m_.cols()) throw DimensionError("ragged design matrix");
            Eigen::Index j = 0;
            for (double v : r) m_(i, j++) = v;
            ++i;
        }
    }

    std::size_t rows() const noexcept { return static_cast<std::size_t>(m_.rows()); }
    std::size_t cols() const noexcept { return static_cast<std::size_t>(m_.cols()); }

    double operator()(std::size_t i, std::size_t j) const
    {
        return m_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    }
    double& operator()(std::size_t i, std::size_t j)
    {
        return m_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    }

    std::span<double> row(std::size_t i) { return {m_.data() + i * cols(), cols()}; }
    std::span<const double> row(std::size_t i) const { return {m_.data() + i * cols(), cols()}; }

    const Storage& matrix() const noexcept { return m_; }

private:
    Storage m_;
};

struct OlsResult {
    double intercept = 0.0;
    std::vector<double> coefficients;
};

/// Minimizer of ||y - (b + X w)||^2. The intercept is eliminated by centering,
/// the slope solved from the normal equations by Cholesky and refined once
/// against the residual. When the system is
/// rank deficient (or n < p + 1) `ridge_epsilon` is added to the diagonal of
/// the slope block so the solution is always unique.
inline OlsResult ols_fit(const DesignMatrix& design, std::span<const double> y,
                         double ridge_epsilon = kDefaultRidge)
{
    const std::size_t n = design.rows();
    const std::size_t p = design.cols();
    if (n == 0) throw EmptyDataError("ols_fit: no rows");
    if (y.size() != n) throw DimensionError("ols_fit: target length does not match rows");
    if (ridge_epsilon < 0.0) throw UsageError("ols_fit: negative ridge");

    const auto& X = design.matrix();
    const Eigen::Map<const Eigen::VectorXd> target(y.data(), static_cast<Eigen::Index>(n));

    const Eigen::RowVectorXd x_mean = X.colwise().mean();
    const double y_mean = target.mean();
    const Eigen::MatrixXd centered = X.rowwise() - x_mean;
    const Eigen::VectorXd y_centered = target.array() - y_mean;

    Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(p));
    gram.selfadjointView<Eigen::Lower>().rankUpdate(centered.transpose());
    gram = gram.selfadjointView<Eigen::Lower>();
    const Eigen::VectorXd rhs = centered.transpose() * y_centered;

    Eigen::VectorXd w;
    bool solved = false;
    if (n >= p + 1) {
        Eigen::LLT<Eigen::MatrixXd> llt(gram);
        if (llt.info() == Eigen::Success) {
            const Eigen::VectorXd pivots = llt.matrixL().toDenseMatrix().diagonal().array().square();
            const double scale = std::max(1.0, gram.diagonal().maxCoeff());
            if (pivots.minCoeff() > 1e-12 * scale) {
                w = llt.solve(rhs);
                // one refinement step on the residual; squaring the condition
                // number otherwise costs digits on nearly square systems
                const Eigen::VectorXd residual = y_centered - centered * w;
                w += llt.solve(centered.transpose() * residual);
                solved = w.allFinite();
            }
        }
    }
    if (!solved) {
        if (ridge_epsilon > 0.0) {
            Eigen::MatrixXd damped = gram;
            damped.diagonal().array() += ridge_epsilon;
            w = damped.llt().solve(rhs);
        } else {
            w = gram.completeOrthogonalDecomposition().solve(rhs);
        }
    }

    OlsResult out;
    out.intercept = y_mean - x_mean.dot(w);
    out.coefficients.assign(w.data(), w.data() + w.size());
    return out;
}

/// Symmetric positive semi-definite 2x2 matrix.
struct Psd2x2 {
    Eigen::Matrix2d m = Eigen::Matrix2d::Zero();

    /// Q(theta) diag(l1, l2) Q(theta)^T with Q a rotation.
    static Psd2x2 from_rotation(double theta, double l1, double l2)
    {
        Eigen::Matrix2d q;
        q << std::cos(theta), -std::sin(theta), std::sin(theta), std::cos(theta);
        Psd2x2 out;
        out.m = q * Eigen::Vector2d(l1, l2).asDiagonal() * q.transpose();
        // exact symmetry
        out.m(0, 1) = out.m(1, 0) = 0.5 * (out.m(0, 1) + out.m(1, 0));
        return out;
    }

    double quad(double u, double v) const
    {
        return m(0, 0) * u * u + 2.0 * m(0, 1) * u * v + m(1, 1) * v * v;
    }
};

inline Psd2x2 random_psd_2x2(Rng& rng, double eig_low, double eig_high)
{
    if (!(eig_low >= 0.0 && eig_low <= eig_high)) throw UsageError("random_psd_2x2: need 0 <= low <= high");
    const double l1 = uniform(rng, eig_low, eig_high);
    const double l2 = uniform(rng, eig_low, eig_high);
    const double theta = uniform(rng, 0.0, 2.0 * std::numbers::pi);
    return Psd2x2::from_rotation(theta, l1, l2);
}

} // namespace suprb
