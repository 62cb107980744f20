#pragma once

// Multi-mode thermal Liouvillian and its closed-form diagonalization by the
// similarity transforms exp(K-_A) exp(K+_B) (.) exp(-K+_B) exp(-K-_A).

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include <Eigen/Dense>

#include "superop/algebra.hpp"
#include "superop/error.hpp"

namespace superop {

namespace detail {

inline double max_abs(const CoeffMatrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

inline bool is_hermitian(const CoeffMatrix& m, double rel_tol = 1e-12)
{
    return max_abs(m - m.adjoint()) <= rel_tol * std::max(1.0, max_abs(m));
}

} // namespace detail

/// Physical input: frequency matrix Omega (Hermitian), relaxation matrix Gamma
/// (Hermitian, positive definite) and the mean thermal photon number n_T >= 0.
class SystemSpec {
public:
    static SystemSpec make(CoeffMatrix omega, CoeffMatrix gamma, double n_thermal)
    {
        if (omega.rows() == 0 || omega.rows() != omega.cols())
            throw invalid_input("omega must be a non-empty square matrix");
        if (gamma.rows() != omega.rows() || gamma.cols() != omega.cols())
            throw invalid_input("gamma dimension does not match omega");
        if (!omega.allFinite() || !gamma.allFinite() || !std::isfinite(n_thermal))
            throw invalid_input("system parameters must be finite");
        if (!detail::is_hermitian(omega))
            throw invalid_input("omega is not Hermitian");
        if (!detail::is_hermitian(gamma))
            throw invalid_input("gamma is not Hermitian");
        const CoeffMatrix herm = 0.5 * (gamma + gamma.adjoint());
        Eigen::SelfAdjointEigenSolver<CoeffMatrix> es(herm, Eigen::EigenvaluesOnly);
        if (es.info() != Eigen::Success)
            throw numerical_error("eigensolver failed while validating gamma");
        const double smallest = es.eigenvalues().minCoeff();
        if (!(smallest > 1e-14 * std::max(1.0, detail::max_abs(gamma))))
            throw invalid_input("gamma is not positive definite (smallest eigenvalue " +
                                std::to_string(smallest) + ")");
        if (n_thermal < 0.0)
            throw invalid_input("n_thermal must be non-negative");
        return SystemSpec(std::move(omega), std::move(gamma), n_thermal);
    }

    std::size_t mode_count() const { return static_cast<std::size_t>(omega_.rows()); }
    const CoeffMatrix& omega() const { return omega_; }
    const CoeffMatrix& gamma() const { return gamma_; }
    double n_thermal() const { return n_thermal_; }

    SystemSpec with_n_thermal(double n) const { return make(omega_, gamma_, n); }

    CoeffMatrix identity() const { return CoeffMatrix::Identity(omega_.rows(), omega_.cols()); }

private:
    SystemSpec(CoeffMatrix omega, CoeffMatrix gamma, double n)
        : omega_(std::move(omega)), gamma_(std::move(gamma)), n_thermal_(n)
    {
    }

    CoeffMatrix omega_;
    CoeffMatrix gamma_;
    double n_thermal_;
};

namespace detail {
inline const cplx imag_unit{0.0, 1.0};
}

/// L = N-_{-i Omega} - K0_{(2n+1) Gamma} + K+_{n Gamma} + K-_{(n+1) Gamma} + I_{Gamma/2}
inline SuperOpExpr build_liouvillian(const SystemSpec& spec)
{
    const double n = spec.n_thermal();
    const auto& g = spec.gamma();
    SuperOpExpr l = n_minus(-detail::imag_unit * spec.omega());
    l.add_term(GeneratorKind::k_zero, -(2.0 * n + 1.0) * g);
    l.add_term(GeneratorKind::k_plus, n * g);
    l.add_term(GeneratorKind::k_minus, (n + 1.0) * g);
    return l + SuperOpExpr::identity_of(0.5 * g);
}

struct FirstTransform {
    SuperOpExpr expr;
    CoeffMatrix p, q, r;
};

/// Coefficient matrices of every step of the two-sided transform.
struct TransformIntermediate {
    CoeffMatrix p, q, r;
    CoeffMatrix x, y, z;
};

struct SecondTransform {
    SuperOpExpr expr;
    TransformIntermediate mats;
};

/// exp(K+_B) L exp(-K+_B) = N-_P - K0_Q + K+_R + K-_{(n+1)Gamma} + I_{Gamma/2}.
inline FirstTransform transform_once(const SystemSpec& spec, const CoeffMatrix& b)
{
    using detail::anticomm;
    using detail::comm;
    const auto m = static_cast<Eigen::Index>(spec.mode_count());
    if (b.rows() != m || b.cols() != m)
        throw invalid_input("transform matrix B has wrong dimension");
    const double n = spec.n_thermal();
    const auto& om = spec.omega();
    const auto& g = spec.gamma();
    const cplx i = detail::imag_unit;

    CoeffMatrix p = -i * om + 0.5 * (n + 1.0) * comm(g, b);
    CoeffMatrix q = (2.0 * n + 1.0) * g + (n + 1.0) * anticomm(g, b);
    CoeffMatrix r = i * comm(om, b) + 0.5 * (2.0 * n + 1.0) * anticomm(g, b) + n * g + (n + 1.0) * b * g * b;

    SuperOpExpr expr = n_minus(p);
    expr.add_term(GeneratorKind::k_zero, -q);
    expr.add_term(GeneratorKind::k_plus, r);
    expr.add_term(GeneratorKind::k_minus, (n + 1.0) * g);
    expr += SuperOpExpr::identity_of(0.5 * g);
    return {std::move(expr), std::move(p), std::move(q), std::move(r)};
}

/// exp(K-_A) exp(K+_B) L exp(-K+_B) exp(-K-_A) = N-_X + K0_Y + K+_R + K-_Z + I_{Gamma/2}.
inline SecondTransform transform_twice(const SystemSpec& spec, const CoeffMatrix& a, const CoeffMatrix& b)
{
    using detail::anticomm;
    using detail::comm;
    const auto m = static_cast<Eigen::Index>(spec.mode_count());
    if (a.rows() != m || a.cols() != m)
        throw invalid_input("transform matrix A has wrong dimension");
    auto first = transform_once(spec, b);
    const double n = spec.n_thermal();

    TransformIntermediate t{first.p, first.q, first.r, {}, {}, {}};
    t.x = t.p + 0.5 * comm(t.r, a);
    t.y = anticomm(t.r, a) - t.q;
    t.z = comm(a, t.p) - 0.5 * anticomm(t.q, a) + a * t.r * a + (n + 1.0) * spec.gamma();

    SuperOpExpr expr = n_minus(t.x);
    expr.add_term(GeneratorKind::k_zero, t.y);
    expr.add_term(GeneratorKind::k_plus, t.r);
    expr.add_term(GeneratorKind::k_minus, t.z);
    expr += SuperOpExpr::identity_of(0.5 * spec.gamma());
    return {std::move(expr), std::move(t)};
}

/// Closed-form solution of R(B) = 0, Z(A, B) = 0 together with the
/// perturbative (linear in n_T) cross-check B ~ B0 + n_T B1, B0 = 0, B1 = -I.
struct RiccatiSolution {
    CoeffMatrix a_matrix;
    CoeffMatrix b_matrix;
    double zero_order_residual = 0.0;  // |(i Om + G/2) B0 + B0 (-i Om + G/2) + B0 G B0|
    double first_order_residual = 0.0; // |(i Om + G/2) B1 + B1 (-i Om + G/2) + G|
    double slope_gap = 0.0;            // |dB/dn_T at 0 - B1|
};

inline RiccatiSolution solve_riccati(const SystemSpec& spec)
{
    const double n = spec.n_thermal();
    const CoeffMatrix id = spec.identity();
    RiccatiSolution sol;
    sol.b_matrix = -(n / (n + 1.0)) * id;
    sol.a_matrix = (n + 1.0) * id;

    const cplx i = detail::imag_unit;
    const CoeffMatrix left = i * spec.omega() + 0.5 * spec.gamma();
    const CoeffMatrix right = -i * spec.omega() + 0.5 * spec.gamma();
    const CoeffMatrix b0 = CoeffMatrix::Zero(id.rows(), id.cols());
    const CoeffMatrix b1 = -id;
    sol.zero_order_residual = detail::max_abs(left * b0 + b0 * right + b0 * spec.gamma() * b0);
    sol.first_order_residual = detail::max_abs(left * b1 + b1 * right + spec.gamma());

    // second-order one-sided difference of the closed form at n_T = 0
    const double h = 1e-4;
    auto closed = [&](double nt) -> CoeffMatrix { return -(nt / (nt + 1.0)) * id; };
    const CoeffMatrix slope = (-3.0 * closed(0.0) + 4.0 * closed(h) - closed(2.0 * h)) / (2.0 * h);
    sol.slope_gap = detail::max_abs(slope - b1);

    if (sol.zero_order_residual > 1e-12 || sol.first_order_residual > 1e-12 * std::max(1.0, detail::max_abs(spec.gamma())) ||
        sol.slope_gap > 1e-6)
        throw consistency_error("linear-in-n_T Riccati ansatz disagrees with the closed form");
    return sol;
}

struct DiagonalizationResult {
    CoeffMatrix a_matrix;
    CoeffMatrix b_matrix;
    SuperOpExpr l_diag;
    double residual_r = 0.0;
    double residual_z = 0.0;
};

/// Brings L to N-_{-i Omega} + K0_{-Gamma} + I_{Gamma/2}. The K+/K- coefficients
/// left over after the transform are checked against `tol` and dropped.
inline DiagonalizationResult diagonalize(const SystemSpec& spec, double tol = 1e-10)
{
    auto sol = solve_riccati(spec);
    auto second = transform_twice(spec, sol.a_matrix, sol.b_matrix);
    const auto& t = second.mats;

    DiagonalizationResult out{sol.a_matrix, sol.b_matrix, SuperOpExpr(spec.mode_count()), detail::max_abs(t.r),
                              detail::max_abs(t.z)};
    if (out.residual_r >= tol || out.residual_z >= tol)
        throw consistency_error("diagonalization residual above tolerance: |R| = " + std::to_string(out.residual_r) +
                                ", |Z| = " + std::to_string(out.residual_z));

    out.l_diag = n_minus(t.x);
    out.l_diag.add_term(GeneratorKind::k_zero, t.y);
    out.l_diag += SuperOpExpr::identity_of(0.5 * spec.gamma());

    const SuperOpExpr expected = n_minus(-detail::imag_unit * spec.omega()) + k_zero(-spec.gamma()) +
                                 SuperOpExpr::identity_of(0.5 * spec.gamma());
    const double scale = std::max({1.0, detail::max_abs(spec.omega()), detail::max_abs(spec.gamma())});
    if (!approx_equal(out.l_diag, expected, tol * scale))
        throw consistency_error("diagonalized Liouvillian does not reduce to N-_{-i Omega} + K0_{-Gamma}");
    return out;
}

/// Undo the diagonalizing transforms: exp(-K+_B) exp(-K-_A) Ld exp(K-_A) exp(K+_B).
inline SuperOpExpr undo_diagonalization(const DiagonalizationResult& d)
{
    return similarity_kpm(Sign::plus, -d.b_matrix, similarity_kpm(Sign::minus, -d.a_matrix, d.l_diag));
}

/// Pure relaxation (n_T = 0) generator, exp(-K-_I) Ld exp(K-_I).
inline SuperOpExpr zero_order(const SystemSpec& spec)
{
    const auto& g = spec.gamma();
    SuperOpExpr l0 = n_minus(-detail::imag_unit * spec.omega());
    l0.add_term(GeneratorKind::k_zero, -g);
    l0.add_term(GeneratorKind::k_minus, g);
    l0 += SuperOpExpr::identity_of(0.5 * g);

    const SuperOpExpr ld = n_minus(-detail::imag_unit * spec.omega()) + k_zero(-g) + SuperOpExpr::identity_of(0.5 * g);
    const SuperOpExpr via_transform = similarity_kpm(Sign::minus, -spec.identity(), ld);
    const double scale = std::max({1.0, detail::max_abs(spec.omega()), detail::max_abs(g)});
    if (!approx_equal(via_transform, l0, 1e-12 * scale))
        throw consistency_error("exp(-K-_I) Ld exp(K-_I) does not reproduce the zero-order Liouvillian");
    return l0;
}

/// Adjoint under the trace pairing Tr(A rho): left and right multiplications
/// trade places, so K+ and K- swap coefficients and N- changes sign.
inline SuperOpExpr conjugate(const SuperOpExpr& l)
{
    SuperOpExpr out = SuperOpExpr::identity(l.mode_count(), l.scalar());
    if (const auto& c = l.term(GeneratorKind::n_minus))
        out.add_term(GeneratorKind::n_minus, -*c);
    if (const auto& c = l.term(GeneratorKind::k_zero))
        out.add_term(GeneratorKind::k_zero, *c);
    if (const auto& c = l.term(GeneratorKind::k_plus))
        out.add_term(GeneratorKind::k_minus, *c);
    if (const auto& c = l.term(GeneratorKind::k_minus))
        out.add_term(GeneratorKind::k_plus, *c);
    return out;
}

/// Single-mode reduction: the transform exp(alpha K-) exp(beta K+) applied to
/// a K0 + b K+ + c K-, coefficients written out by hand.
struct SingleModeBranch {
    double alpha = 0.0;
    double beta = 0.0;
    double riccati_residual = 0.0; // c beta^2 - a beta + b
    double linear_residual = 0.0;  // (a - 2 c beta) alpha + c
    double k_zero_coeff = 0.0;
    double k_plus_coeff = 0.0;
    double k_minus_coeff = 0.0;
};

inline SingleModeBranch single_mode_transform(double a, double b, double c, double alpha, double beta)
{
    SingleModeBranch s;
    s.alpha = alpha;
    s.beta = beta;
    s.riccati_residual = c * beta * beta - a * beta + b;
    s.linear_residual = (a - 2.0 * c * beta) * alpha + c;
    s.k_zero_coeff = a + 2.0 * (b * alpha - c * beta - a * alpha * beta + c * alpha * beta * beta);
    s.k_plus_coeff = b + c * beta * beta - a * beta;
    s.k_minus_coeff = c + a * alpha + b * alpha * alpha - a * alpha * alpha * beta - 2.0 * c * alpha * beta +
                      c * alpha * alpha * beta * beta;
    return s;
}

/// Both roots of the single-mode problem with a = 2n+1, b = -n, c = -(n+1).
/// Index 0 is the relaxing branch (alpha = n+1, beta = -n/(n+1)) that maps the
/// dissipator onto +K0; index 1 is the pump branch mapping it onto -K0.
inline std::array<SingleModeBranch, 2> single_mode_branches(double n_thermal)
{
    const double a = 2.0 * n_thermal + 1.0;
    const double b = -n_thermal;
    const double c = -(n_thermal + 1.0);
    return {single_mode_transform(a, b, c, n_thermal + 1.0, -n_thermal / (n_thermal + 1.0)),
            single_mode_transform(a, b, c, -(n_thermal + 1.0), -1.0)};
}

} // namespace superop
