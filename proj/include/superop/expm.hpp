#pragma once

// Matrix exponentials. Small dense coefficient matrices go through Eigen's
// MatrixFunctions (scaling and squaring with Pade). Superoperator matrices are
// large and sparse, so only their action on a block of vectors is computed,
// by a shifted, scaled Taylor series.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <limits>

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <unsupported/Eigen/MatrixFunctions>

#include "superop/error.hpp"

namespace superop {

inline Eigen::MatrixXcd expm(const Eigen::MatrixXcd& m)
{
    Eigen::MatrixXcd out = m.exp();
    if (!out.allFinite())
        throw numerical_error("matrix exponential overflowed");
    return out;
}

namespace detail {

inline double norm1(const Eigen::SparseMatrix<std::complex<double>>& a)
{
    double best = 0.0;
    for (Eigen::Index k = 0; k < a.outerSize(); ++k) {
        double col = 0.0;
        for (Eigen::SparseMatrix<std::complex<double>>::InnerIterator it(a, k); it; ++it)
            col += std::abs(it.value());
        best = std::max(best, col);
    }
    return best;
}

} // namespace detail

/// exp(t A) V for sparse A and a dense block V.
inline Eigen::MatrixXcd expm_action(const Eigen::SparseMatrix<std::complex<double>>& a, const Eigen::MatrixXcd& v,
                                    double t, double tol = 1e-15)
{
    using cplx = std::complex<double>;
    if (a.rows() != a.cols() || a.cols() != v.rows())
        throw invalid_input("expm_action: dimension mismatch");
    if (t == 0.0 || v.size() == 0)
        return v;

    // shift by the mean diagonal to shrink the norm
    const cplx mu = a.diagonal().sum() / static_cast<double>(a.rows());
    Eigen::SparseMatrix<cplx> shifted = a;
    for (Eigen::Index i = 0; i < shifted.rows(); ++i)
        shifted.coeffRef(i, i) -= mu;

    // Taylor degree m and step count s chosen to minimise m * s; theta_m bounds
    // |h A|_1 so that the truncated series is accurate to double precision
    static constexpr std::array<std::pair<int, double>, 10> theta{{{10, 1.44e-1}, {15, 6.41e-1}, {20, 1.44},
                                                                   {25, 2.43}, {30, 3.54}, {35, 4.7}, {40, 6.0},
                                                                   {45, 7.2}, {50, 8.5}, {55, 9.9}}};
    const double norm = detail::norm1(shifted) * std::abs(t);
    int degree = theta.back().first;
    int steps = std::max(1, static_cast<int>(std::ceil(norm / theta.back().second)));
    for (const auto& [m, th] : theta) {
        const int s = std::max(1, static_cast<int>(std::ceil(norm / th)));
        if (static_cast<long>(m) * s < static_cast<long>(degree) * steps) {
            degree = m;
            steps = s;
        }
    }
    const double h = t / steps;
    const cplx step_factor = std::exp(mu * h);

    Eigen::MatrixXcd x = v;
    for (int s = 0; s < steps; ++s) {
        Eigen::MatrixXcd term = x;
        Eigen::MatrixXcd acc = x;
        double prev = std::numeric_limits<double>::infinity();
        for (int k = 1; k <= degree; ++k) {
            term = (shifted * term) * (h / k);
            acc += term;
            const double tn = term.cwiseAbs().maxCoeff();
            if (tn == 0.0)
                break;
            if (std::max(tn, prev) <= tol * acc.cwiseAbs().maxCoeff())
                break;
            prev = tn;
        }
        x = acc * step_factor;
    }
    if (!x.allFinite())
        throw numerical_error("expm_action produced non-finite values");
    return x;
}

} // namespace superop
