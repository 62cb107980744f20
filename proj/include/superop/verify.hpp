#pragma once

// Identity suite: every closed-form rewrite of the algebra is compared against
// matrices on a truncated Fock space. Comparisons that involve K+ (which
// raises photon number) are restricted to interior matrix elements.

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "superop/algebra.hpp"
#include "superop/dynamics.hpp"
#include "superop/expm.hpp"
#include "superop/fock.hpp"
#include "superop/liouvillian.hpp"
#include "superop/random.hpp"

namespace superop {

struct IdentityCheck {
    std::string name;
    double residual = 0.0;
    double tolerance = 0.0;
    bool passed = false;
};

inline IdentityCheck make_check(std::string name, double residual, double tolerance)
{
    return {std::move(name), residual, tolerance, residual <= tolerance};
}

inline double spectral_norm(const CoeffMatrix& m)
{
    Eigen::JacobiSVD<CoeffMatrix> svd(m);
    return svd.singularValues()(0);
}

/// Unit vectors e_j for j in `cols`, as columns of a dim x |cols| block.
inline Matrix unit_columns(Eigen::Index dim, const std::vector<Eigen::Index>& cols)
{
    Matrix e = Matrix::Zero(dim, static_cast<Eigen::Index>(cols.size()));
    for (std::size_t k = 0; k < cols.size(); ++k)
        e(cols[k], static_cast<Eigen::Index>(k)) = 1.0;
    return e;
}

inline Matrix select_rows(const Matrix& m, const std::vector<Eigen::Index>& rows)
{
    Matrix out(static_cast<Eigen::Index>(rows.size()), m.cols());
    for (std::size_t k = 0; k < rows.size(); ++k)
        out.row(static_cast<Eigen::Index>(k)) = m.row(rows[k]);
    return out;
}

/// Block (rows, cols) of exp(t S) X exp(-t S).
inline Matrix conjugated_block(const SparseMatrix& s, double t, const SparseMatrix& x,
                               const std::vector<Eigen::Index>& rows, const std::vector<Eigen::Index>& cols)
{
    Matrix y = expm_action(s, unit_columns(s.rows(), cols), -t);
    y = x * y;
    y = expm_action(s, y, t);
    return select_rows(y, rows);
}

inline double interior_gap(const SparseMatrix& lhs, const SparseMatrix& rhs, const std::vector<Eigen::Index>& idx)
{
    SparseMatrix diff = lhs - rhs;
    Matrix block = extract_block(diff, idx, idx);
    return block.size() == 0 ? 0.0 : block.cwiseAbs().maxCoeff();
}

inline double interior_gap(const Matrix& lhs_block, const SparseMatrix& rhs, const std::vector<Eigen::Index>& idx)
{
    Matrix diff = lhs_block - extract_block(rhs, idx, idx);
    return diff.size() == 0 ? 0.0 : diff.cwiseAbs().maxCoeff();
}

/// Largest interior error of [X, Y] over all 16 family pairs and `samples`
/// random coefficient pairs.
inline double commutator_oracle_error(std::size_t modes, const FockCutoff& cutoff, RandomSource& rng, int samples)
{
    const auto ops = mode_operators(cutoff);
    const auto idx = interior_indices(cutoff);
    const auto m = static_cast<Eigen::Index>(modes);
    double worst = 0.0;
    for (int s = 0; s < samples; ++s) {
        for (auto f : matrix_families) {
            for (auto g : matrix_families) {
                const auto x = SuperOpExpr::generator(f, rng.complex_matrix(m, m));
                const auto y = SuperOpExpr::generator(g, rng.complex_matrix(m, m));
                const SparseMatrix rx = represent(x, cutoff, ops).matrix;
                const SparseMatrix ry = represent(y, cutoff, ops).matrix;
                const SparseMatrix direct = rx * ry - ry * rx;
                worst = std::max(worst, interior_gap(represent(commutator(x, y), cutoff, ops).matrix, direct, idx));
            }
        }
    }
    return worst;
}

inline double jacobi_error(std::size_t modes, RandomSource& rng, int samples)
{
    const auto m = static_cast<Eigen::Index>(modes);
    double worst = 0.0;
    for (int s = 0; s < samples; ++s) {
        auto pick = [&] {
            auto kind = matrix_families[static_cast<std::size_t>(rng.integer(0, 3))];
            return SuperOpExpr::generator(kind, rng.complex_matrix(m, m));
        };
        const auto x = pick();
        const auto y = pick();
        const auto z = pick();
        const auto sum = commutator(x, commutator(y, z)) + commutator(y, commutator(z, x)) +
                         commutator(z, commutator(x, y));
        worst = std::max(worst, max_abs_difference(sum, SuperOpExpr(modes)));
    }
    return worst;
}

/// Interior error of the closed-form exp(K^s_B) X exp(-K^s_B) over every family X.
inline double similarity_oracle_error(Sign sign, std::size_t modes, const FockCutoff& cutoff, RandomSource& rng,
                                      int samples, double b_norm = 0.5)
{
    const auto ops = mode_operators(cutoff);
    const auto idx = interior_indices(cutoff);
    const auto m = static_cast<Eigen::Index>(modes);
    double worst = 0.0;
    for (int s = 0; s < samples; ++s) {
        CoeffMatrix b = rng.complex_matrix(m, m);
        b *= b_norm / spectral_norm(b);
        const SparseMatrix gen = represent(SuperOpExpr::generator(raising_family(sign), b), cutoff, ops).matrix;
        for (auto f : matrix_families) {
            const auto x = SuperOpExpr::generator(f, rng.complex_matrix(m, m));
            const Matrix direct = conjugated_block(gen, 1.0, represent(x, cutoff, ops).matrix, idx, idx);
            worst = std::max(worst, interior_gap(direct, represent(similarity_kpm(sign, b, x), cutoff, ops).matrix, idx));
        }
    }
    return worst;
}

/// Largest error of the thermal factorization
///   exp(L t) = exp(c K+_I) exp(-n K-_I) exp(L0 t) exp(n K-_I) exp(-c K+_I),  c = n/(n+1),
/// on the block of states with at most `support` photons in total. The cutoff
/// must leave four spare levels above that support.
inline double factorization_error(const SystemSpec& spec, const FockCutoff& cutoff, double t, int support = 1)
{
    if (support < 0 || cutoff.per_mode_max() < support + 4)
        throw invalid_input("factorization check needs cutoff >= support + 4 (cutoff " +
                            std::to_string(cutoff.per_mode_max()) + ", support " + std::to_string(support) + ")");
    const double n = spec.n_thermal();
    const double c = n / (n + 1.0);
    const auto ops = mode_operators(cutoff);
    const auto idx = total_block_indices(cutoff, support);
    const auto id = spec.identity();
    const SparseMatrix l = represent(build_liouvillian(spec), cutoff, ops).matrix;
    const SparseMatrix l0 = represent(zero_order(spec), cutoff, ops).matrix;
    const SparseMatrix kp = represent(k_plus(id), cutoff, ops).matrix;
    const SparseMatrix km = represent(k_minus(id), cutoff, ops).matrix;

    const Matrix e = unit_columns(cutoff.superop_dim(), idx);
    const Matrix lhs = expm_action(l, e, t);
    Matrix rhs = expm_action(kp, e, -c);
    rhs = expm_action(km, rhs, n);
    rhs = expm_action(l0, rhs, t);
    rhs = expm_action(km, rhs, -n);
    rhs = expm_action(kp, rhs, c);
    return (select_rows(lhs, idx) - select_rows(rhs, idx)).cwiseAbs().maxCoeff();
}

struct ConjugationErrors {
    double k_zero_invariant = 0.0; // exp(Ld t) K0_I exp(-Ld t) = K0_I
    double k_plus_evolved = 0.0;   // exp(Ld t) K+_I exp(-Ld t) = K+_{U(t)}
    double k_plus_lowered = 0.0;   // exp(-K-_I) K+_U exp(K-_I) = K+_U - 2 K0_U + K-_U
    double k_zero_lowered = 0.0;   // exp(-K-_I) K0_I exp(K-_I) = K0_I - K-_I
};

inline ConjugationErrors conjugation_errors(const SystemSpec& spec, const FockCutoff& cutoff, double t)
{
    const auto ops = mode_operators(cutoff);
    const auto idx = interior_indices(cutoff);
    const auto closed = total_block_indices(cutoff, cutoff.per_mode_max() - 1); // exp(Ld t) stays inside
    const auto id = spec.identity();
    const auto u = evolution_matrix_u(spec, t).u_of_t;
    const SparseMatrix ld = represent(diagonalize(spec).l_diag, cutoff, ops).matrix;
    const SparseMatrix km = represent(k_minus(id), cutoff, ops).matrix;
    const SparseMatrix k0 = represent(k_zero(id), cutoff, ops).matrix;
    const SparseMatrix kp = represent(k_plus(id), cutoff, ops).matrix;
    const SparseMatrix kpu = represent(k_plus(u), cutoff, ops).matrix;

    ConjugationErrors out;
    out.k_zero_invariant = interior_gap(conjugated_block(ld, t, k0, closed, closed), k0, closed);
    out.k_plus_evolved = interior_gap(conjugated_block(ld, t, kp, closed, closed), kpu, closed);
    out.k_plus_lowered = interior_gap(conjugated_block(km, -1.0, kpu, idx, idx),
                                      represent(k_plus(u) + k_zero(-2.0 * u) + k_minus(u), cutoff, ops).matrix, idx);
    out.k_zero_lowered =
        interior_gap(conjugated_block(km, -1.0, k0, idx, idx), represent(k_zero(id) - k_minus(id), cutoff, ops).matrix, idx);
    return out;
}

/// max over samples of |Tr(A exp(L t) rho) - Tr((exp(L+ t) A) rho)| with random
/// non-Hermitian A and full-rank rho.
inline double duality_error(const SystemSpec& spec, const FockCutoff& cutoff, const std::vector<double>& times,
                            RandomSource& rng, int samples)
{
    const auto l = build_liouvillian(spec);
    const SparseMatrix fwd = represent(l, cutoff).matrix;
    const SparseMatrix bwd = represent(conjugate(l), cutoff).matrix;
    const Eigen::Index d = cutoff.dim();
    double worst = 0.0;
    for (int s = 0; s < samples; ++s) {
        const Matrix a = rng.complex_matrix(d, d);
        const Matrix rho = rng.density_matrix(cutoff).matrix();
        for (double t : times) {
            const Matrix rho_t = unvectorize(expm_action(fwd, vectorize(rho), t), d);
            const Matrix a_t = unvectorize(expm_action(bwd, vectorize(a), t), d);
            worst = std::max(worst, std::abs((a * rho_t).trace() - (a_t * rho).trace()));
        }
    }
    return worst;
}

/// Largest per-mode cutoff (between 2 and `cap`) whose superoperator dimension stays below `max_dim`.
inline FockCutoff algebra_cutoff(std::size_t modes, int cap = 4, Eigen::Index max_dim = 2000)
{
    int n = 2;
    while (n < cap && FockCutoff(modes, n + 1).superop_dim() <= max_dim)
        ++n;
    return {modes, n};
}

struct VerifyOptions {
    int cutoff = 0;                        // 0 picks support + 4
    int support = 1;                       // photon-number block for the factorization check
    double time = 0.0;                     // 0 means 0.3 / |Gamma|_2
    double factorization_tolerance = 1e-6;
    std::uint64_t seed = 12345;
    int samples = 2;
};

inline std::vector<IdentityCheck> run_identity_suite(const SystemSpec& spec, const VerifyOptions& opt = {})
{
    std::vector<IdentityCheck> out;
    RandomSource rng(opt.seed);
    const std::size_t m = spec.mode_count();
    const FockCutoff small = algebra_cutoff(m);
    const FockCutoff cutoff(m, opt.cutoff > 0 ? opt.cutoff : opt.support + 4);
    const double t = opt.time > 0.0 ? opt.time : 0.3 / spectral_norm(spec.gamma());
    const double scale = std::max({1.0, detail::max_abs(spec.omega()), detail::max_abs(spec.gamma())});

    out.push_back(make_check("commutator_oracle", commutator_oracle_error(m, small, rng, opt.samples), 1e-9));
    out.push_back(make_check("jacobi_identity", jacobi_error(std::min<std::size_t>(m, 3), rng, 10 * opt.samples), 1e-10));
    out.push_back(make_check("similarity_k_plus_oracle",
                             similarity_oracle_error(Sign::plus, m, small, rng, opt.samples), 1e-9));
    out.push_back(make_check("similarity_k_minus_oracle",
                             similarity_oracle_error(Sign::minus, m, small, rng, opt.samples), 1e-9));

    const auto ric = solve_riccati(spec);
    const auto tw = transform_twice(spec, ric.a_matrix, ric.b_matrix);
    out.push_back(make_check("riccati_residual_r", detail::max_abs(tw.mats.r), 1e-12 * scale));
    out.push_back(make_check("riccati_residual_z", detail::max_abs(tw.mats.z), 1e-12 * scale));
    out.push_back(make_check("riccati_linear_ansatz",
                             std::max({ric.zero_order_residual, ric.first_order_residual}), 1e-12 * scale));

    double branch = 0.0;
    for (const auto& b : single_mode_branches(spec.n_thermal()))
        branch = std::max({branch, std::abs(b.riccati_residual), std::abs(b.linear_residual),
                           std::abs(b.k_plus_coeff), std::abs(b.k_minus_coeff), std::abs(std::abs(b.k_zero_coeff) - 1.0)});
    out.push_back(make_check("single_mode_branches", branch, 1e-12 * (1.0 + spec.n_thermal()) * (1.0 + spec.n_thermal())));

    const auto diag = diagonalize(spec);
    const bool structural = !diag.l_diag.has(GeneratorKind::k_plus) && !diag.l_diag.has(GeneratorKind::k_minus);
    out.push_back(make_check("diagonal_structure", structural ? 0.0 : 1.0, 0.0));

    const SuperOpExpr l = build_liouvillian(spec);
    const SuperOpExpr l0 = zero_order(spec);
    out.push_back(make_check("zero_order_similarity",
                             max_abs_difference(similarity_kpm(Sign::minus, -spec.identity(), diag.l_diag), l0),
                             1e-12 * scale));
    out.push_back(make_check("diagonalization_round_trip",
                             max_abs_difference(undo_diagonalization(diag), l), 1e-10 * scale));

    out.push_back(make_check("conjugate_involution", max_abs_difference(conjugate(conjugate(l)), l), 0.0));
    const double n = spec.n_thermal();
    const SuperOpExpr expected_adjoint = n_minus(detail::imag_unit * spec.omega()) +
                                         k_zero(-(2.0 * n + 1.0) * spec.gamma()) + k_plus((n + 1.0) * spec.gamma()) +
                                         k_minus(n * spec.gamma()) + SuperOpExpr::identity_of(0.5 * spec.gamma());
    out.push_back(make_check("conjugate_liouvillian_form", max_abs_difference(conjugate(l), expected_adjoint), 1e-14 * scale));

    const auto d = conjugation_errors(spec, small, t);
    out.push_back(make_check("evolved_k_zero_invariant", d.k_zero_invariant, 1e-9));
    out.push_back(make_check("evolved_k_plus", d.k_plus_evolved, 1e-9));
    out.push_back(make_check("lowered_k_plus", d.k_plus_lowered, 1e-9));
    out.push_back(make_check("lowered_k_zero", d.k_zero_lowered, 1e-9));

    out.push_back(make_check("factorization", factorization_error(spec, cutoff, t, opt.support), opt.factorization_tolerance));
    out.push_back(make_check("heisenberg_duality", duality_error(spec, small, {0.0, t, 3.0 * t}, rng, opt.samples), 1e-9));
    return out;
}

} // namespace superop
