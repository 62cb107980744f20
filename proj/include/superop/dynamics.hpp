#pragma once

// Time evolution on a truncated Fock space: exact, zero-order and
// linear-in-n_T propagators, plus Heisenberg-picture expectations.

#include <cmath>
#include <complex>
#include <string>

#include <Eigen/Dense>

#include "superop/algebra.hpp"
#include "superop/error.hpp"
#include "superop/expm.hpp"
#include "superop/fock.hpp"
#include "superop/liouvillian.hpp"

namespace superop {

struct PropagationResult {
    DensityMatrix state;
    double trace_drift = 0.0;            // |Tr rho(t) - Tr rho(0)|
    double hermiticity_deviation = 0.0;  // max |rho - rho^dagger| before re-symmetrizing
    bool leak_warning = false;
};

/// exp(L t) on vectorized states for a fixed expression and cutoff.
class Propagator {
public:
    Propagator(const SuperOpExpr& l, const FockCutoff& cutoff, double leak_tolerance = 1e-6)
        : rep_(represent(l, cutoff)), leak_tolerance_(leak_tolerance)
    {
    }

    const SuperOpMatrix& matrix() const { return rep_; }

    PropagationResult propagate(const DensityMatrix& rho0, double t) const
    {
        if (!(rho0.cutoff() == rep_.cutoff))
            throw invalid_input("state cutoff does not match propagator cutoff");
        if (t < 0.0 || !std::isfinite(t))
            throw invalid_input("time must be finite and non-negative");
        const Eigen::Index d = rep_.cutoff.dim();
        Matrix rho = unvectorize(expm_action(rep_.matrix, vectorize(rho0.matrix()), t), d);

        PropagationResult out{DensityMatrix(rep_.cutoff, 0.5 * (rho + rho.adjoint()))};
        out.hermiticity_deviation = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
        out.trace_drift = std::abs(rho.trace() - rho0.matrix().trace());
        out.leak_warning = out.trace_drift > leak_tolerance_;
        return out;
    }

private:
    SuperOpMatrix rep_;
    double leak_tolerance_;
};

inline PropagationResult exact_propagate(const SuperOpExpr& l, const DensityMatrix& rho0, double t,
                                         double leak_tolerance = 1e-6)
{
    return Propagator(l, rho0.cutoff(), leak_tolerance).propagate(rho0, t);
}

inline PropagationResult zero_order_propagate(const SystemSpec& spec, const DensityMatrix& rho0, double t)
{
    auto out = exact_propagate(zero_order(spec), rho0, t);
    if (out.trace_drift > 1e-10)
        throw consistency_error("zero-order propagation lost trace: " + std::to_string(out.trace_drift));
    return out;
}

struct EvolutionMatrixU {
    CoeffMatrix u_of_t;
    double time = 0.0;
};

/// U(t) = exp((-i Omega - Gamma/2) t) exp((i Omega - Gamma/2) t)
inline EvolutionMatrixU evolution_matrix_u(const SystemSpec& spec, double t)
{
    if (t < 0.0 || !std::isfinite(t))
        throw invalid_input("time must be finite and non-negative");
    const cplx i = detail::imag_unit;
    const CoeffMatrix lhs = (-i * spec.omega() - 0.5 * spec.gamma()) * t;
    const CoeffMatrix rhs = (i * spec.omega() - 0.5 * spec.gamma()) * t;
    return {expm(lhs) * expm(rhs), t};
}

/// Correction superoperator (K+ - 2 K0 + K-)_{I - U(t)} of the linear approximation.
inline SuperOpExpr linear_correction(const SystemSpec& spec, double t)
{
    const CoeffMatrix c = spec.identity() - evolution_matrix_u(spec, t).u_of_t;
    return k_plus(c) + k_zero(-2.0 * c) + k_minus(c);
}

/// (1 + n_T (K+ - 2K0 + K-)_{I-U(t)}) exp(L0 t) rho0. The correction raises the
/// photon number by at most one, so the cutoff needs one spare level above the
/// support of rho0 and the result is then free of truncation error.
inline PropagationResult linear_propagate(const SystemSpec& spec, const DensityMatrix& rho0, double t)
{
    const auto& cutoff = rho0.cutoff();
    const int support = rho0.support();
    if (support + 1 > cutoff.per_mode_max())
        throw invalid_input("linear propagation needs one spare level: state reaches occupation " +
                            std::to_string(support) + " at cutoff " + std::to_string(cutoff.per_mode_max()));
    auto zero = zero_order_propagate(spec, rho0, t);
    if (spec.n_thermal() == 0.0)
        return zero;

    const auto corr = represent(linear_correction(spec, t), cutoff);
    const Vector v = vectorize(zero.state.matrix());
    const Vector w = v + spec.n_thermal() * corr.apply(v);
    Matrix rho = unvectorize(w, cutoff.dim());

    PropagationResult out{DensityMatrix(cutoff, 0.5 * (rho + rho.adjoint()))};
    out.hermiticity_deviation = std::max(zero.hermiticity_deviation, (rho - rho.adjoint()).cwiseAbs().maxCoeff());
    out.trace_drift = std::abs(rho.trace() - rho0.matrix().trace());
    return out;
}

/// Tr(A rho) with A acting on the same truncated space.
inline cplx expectation(const Matrix& observable, const DensityMatrix& rho)
{
    if (observable.rows() != rho.matrix().rows() || observable.cols() != rho.matrix().cols())
        throw invalid_input("observable dimension does not match state");
    return (observable * rho.matrix()).trace();
}

/// A(t) = exp(L+ t) A, the observable carried forward by the conjugate Liouvillian.
inline Matrix heisenberg_observable(const SuperOpExpr& l, const FockCutoff& cutoff, const Matrix& observable,
                                    double t)
{
    if (observable.rows() != cutoff.dim() || observable.cols() != cutoff.dim())
        throw invalid_input("observable dimension does not match cutoff");
    const auto rep = represent(conjugate(l), cutoff);
    return unvectorize(expm_action(rep.matrix, vectorize(observable), t), cutoff.dim());
}

/// Tr((exp(L+ t) A) rho0), which equals Tr(A exp(L t) rho0).
inline cplx heisenberg_expect(const SystemSpec& spec, const Matrix& observable, const DensityMatrix& rho0, double t)
{
    if (rho0.cutoff().mode_count() != spec.mode_count())
        throw invalid_input("state and system have different mode counts");
    return expectation(heisenberg_observable(build_liouvillian(spec), rho0.cutoff(), observable, t), rho0);
}

/// Tr(A exp(L t) rho0), the Schroedinger-picture side of the same number.
inline cplx schrodinger_expect(const SystemSpec& spec, const Matrix& observable, const DensityMatrix& rho0, double t)
{
    return expectation(observable, exact_propagate(build_liouvillian(spec), rho0, t).state);
}

/// Number operator a+_j a_j on the truncated space.
inline Matrix number_operator(const FockCutoff& cutoff, std::size_t mode)
{
    if (mode >= cutoff.mode_count())
        throw invalid_input("mode index out of range");
    const auto ops = mode_operators(cutoff);
    return Matrix(ops.creation[mode] * ops.annihilation[mode]);
}

} // namespace superop
