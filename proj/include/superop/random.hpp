#pragma once

// Seeded random inputs for property checks.

#include <cstdint>
#include <random>

#include <Eigen/Dense>

#include "superop/fock.hpp"
#include "superop/liouvillian.hpp"

namespace superop {

class RandomSource {
public:
    explicit RandomSource(std::uint64_t seed) : engine_(seed) {}

    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(engine_); }

    int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(engine_); }

    // entries in [-1,1] + i[-1,1]
    Eigen::MatrixXcd complex_matrix(Eigen::Index rows, Eigen::Index cols)
    {
        Eigen::MatrixXcd m(rows, cols);
        for (Eigen::Index j = 0; j < cols; ++j)
            for (Eigen::Index i = 0; i < rows; ++i)
                m(i, j) = {uniform(-1.0, 1.0), uniform(-1.0, 1.0)};
        return m;
    }

    Eigen::MatrixXcd hermitian(Eigen::Index dim)
    {
        Eigen::MatrixXcd m = complex_matrix(dim, dim);
        return 0.5 * (m + m.adjoint());
    }

    // G G^dagger / dim + floor * I
    Eigen::MatrixXcd positive_definite(Eigen::Index dim, double floor = 0.1)
    {
        Eigen::MatrixXcd g = complex_matrix(dim, dim);
        Eigen::MatrixXcd m = g * g.adjoint() / static_cast<double>(dim);
        m += floor * Eigen::MatrixXcd::Identity(dim, dim);
        return 0.5 * (m + m.adjoint());
    }

    SystemSpec system(std::size_t modes, double n_min = 0.0, double n_max = 1.0)
    {
        const auto m = static_cast<Eigen::Index>(modes);
        auto omega = hermitian(m);
        auto gamma = positive_definite(m);
        return SystemSpec::make(omega, gamma, uniform(n_min, n_max));
    }

    // full-rank mixed state on the whole truncated space
    DensityMatrix density_matrix(const FockCutoff& cutoff)
    {
        Eigen::MatrixXcd g = complex_matrix(cutoff.dim(), cutoff.dim());
        Eigen::MatrixXcd rho = g * g.adjoint();
        rho /= rho.trace().real();
        return {cutoff, 0.5 * (rho + rho.adjoint())};
    }

    std::mt19937_64& engine() { return engine_; }

private:
    std::mt19937_64 engine_;
};

} // namespace superop
