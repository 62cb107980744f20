#include <catch_amalgamated.hpp>

#include <unsupported/Eigen/MatrixFunctions>

#include "gksl_oracle.hpp"
#include "superop/algebra.hpp"
#include "superop/random.hpp"

using namespace superop;
using K = GeneratorKind;

namespace {

CoeffMatrix scalar(cplx x)
{
    CoeffMatrix m(1, 1);
    m(0, 0) = x;
    return m;
}

} // namespace

TEST_CASE("expr_add_merges_families")
{
    RandomSource rng(1);
    auto a = rng.complex_matrix(2, 2);
    auto b = rng.complex_matrix(2, 2);
    auto c = rng.complex_matrix(2, 2);
    CHECK(approx_equal(k_plus(a) + k_plus(b), k_plus(a + b)));

    auto x = n_minus(a) + k_zero(b);
    CHECK(approx_equal(x + SuperOpExpr(2), x, 0.0));
    auto merged = (n_minus(a) + k_zero(b)) + k_zero(c);
    CHECK(approx_equal(merged, n_minus(a) + k_zero(b + c)));
    CHECK_FALSE(merged.has(K::k_plus));
}

TEST_CASE("expr_add_rejects_mode_mismatch")
{
    CHECK_THROWS_AS(k_plus(CoeffMatrix::Identity(2, 2)) + k_plus(CoeffMatrix::Identity(3, 3)), invalid_input);
    SuperOpExpr x(2);
    CHECK_THROWS_AS(x.add_term(K::k_zero, CoeffMatrix::Identity(3, 3)), invalid_input);
}

TEST_CASE("expr_scale_examples")
{
    auto two_k0 = expr_scale(2.0, k_zero(scalar(1.0)));
    CHECK(approx_equal(two_k0, k_zero(scalar(2.0)), 0.0));

    RandomSource rng(2);
    auto x = n_minus(rng.complex_matrix(2, 2)) + k_plus(rng.complex_matrix(2, 2)) + SuperOpExpr::identity(2, 3.0);
    auto zero = expr_scale(0.0, x);
    CHECK(zero.is_zero());
    CHECK_FALSE(zero.has(K::n_minus));

    auto a = rng.complex_matrix(2, 2);
    CHECK(approx_equal(expr_scale(-1.0, k_plus(a)), k_plus(-a), 0.0));
}

TEST_CASE("identity_term_carries_trace")
{
    CoeffMatrix g(2, 2);
    g << 0.2, 0.1, 0.1, 0.4;
    auto id = SuperOpExpr::identity_of(0.5 * g);
    CHECK(std::abs(id.scalar() - cplx{0.3, 0.0}) < 1e-15);
    CHECK_THROWS_AS(id.coeff(K::identity), invalid_input);
}

TEST_CASE("commutator_scalar_examples")
{
    CHECK(approx_equal(commutator(k_zero(scalar(2.0)), k_plus(scalar(3.0))), k_plus(scalar(6.0))));
    CHECK(approx_equal(commutator(k_minus(scalar(1.0)), k_plus(scalar(1.0))), k_zero(scalar(2.0))));
    CHECK(approx_equal(commutator(k_plus(scalar(1.0)), k_plus(scalar(2.0))), SuperOpExpr(1), 0.0));
    CHECK(commutator(SuperOpExpr::identity(1, 5.0), k_minus(scalar(1.0))).is_zero());
}

TEST_CASE("commutator_matches_oracle_hermitian_pairs")
{
    RandomSource rng(3);
    const auto space = oracle::make_space(2, 3);
    const auto idx = oracle::interior(space, 2);
    for (auto f : matrix_families) {
        for (auto g : matrix_families) {
            auto x = SuperOpExpr::generator(f, rng.hermitian(2));
            auto y = SuperOpExpr::generator(g, rng.hermitian(2));
            const auto rx = oracle::expression(space, x);
            const auto ry = oracle::expression(space, y);
            const auto rc = oracle::expression(space, commutator(x, y));
            INFO(to_string(f) << " with " << to_string(g));
            CHECK(oracle::block_gap(rc, rx * ry - ry * rx, idx) < 1e-10);
        }
    }
}

TEST_CASE("commutator_matches_oracle_complex_coefficients")
{
    RandomSource rng(4);
    const oracle::FamilyBasis basis(2, 4);
    const auto idx = oracle::interior(basis.space, 3);
    double worst = 0.0;
    for (int s = 0; s < 3; ++s) {
        for (auto f : matrix_families) {
            for (auto g : matrix_families) {
                auto x = SuperOpExpr::generator(f, rng.complex_matrix(2, 2));
                auto y = SuperOpExpr::generator(g, rng.complex_matrix(2, 2));
                const oracle::OracleSparse rx = basis.expression(x);
                const oracle::OracleSparse ry = basis.expression(y);
                const oracle::OracleSparse direct = oracle::OracleSparse(rx * ry) - oracle::OracleSparse(ry * rx);
                worst = std::max(worst, oracle::sparse_block_gap(basis.expression(commutator(x, y)), direct, idx));
            }
        }
    }
    CHECK(worst < 1e-9);
}

TEST_CASE("number_and_symmetric_families_close")
{
    RandomSource rng(5);
    auto a = rng.complex_matrix(2, 2);
    auto b = rng.complex_matrix(2, 2);
    CoeffMatrix ab = a * b - b * a;
    CHECK(approx_equal(commutator(n_minus(a), n_minus(b)), n_minus(ab)));
    CHECK(approx_equal(commutator(k_zero(a), k_zero(b)), n_minus(0.25 * ab)));

    const auto space = oracle::make_space(2, 3);
    const auto idx = oracle::interior(space, 2);
    const auto k0a = oracle::family(space, K::k_zero, a);
    const auto k0b = oracle::family(space, K::k_zero, b);
    CHECK(oracle::block_gap(oracle::family(space, K::n_minus, 0.25 * ab), k0a * k0b - k0b * k0a, idx) < 1e-10);
}

TEST_CASE("commutator_is_bilinear")
{
    RandomSource rng(6);
    auto x = k_zero(rng.complex_matrix(3, 3)) + k_minus(rng.complex_matrix(3, 3));
    auto y = n_minus(rng.complex_matrix(3, 3)) + k_plus(rng.complex_matrix(3, 3));
    auto z = k_plus(rng.complex_matrix(3, 3)) + k_minus(rng.complex_matrix(3, 3)) + k_zero(rng.complex_matrix(3, 3));
    const cplx a{0.3, -1.2};
    const cplx b{2.0, 0.5};
    CHECK(approx_equal(commutator(a * x + b * y, z), a * commutator(x, z) + b * commutator(y, z)));
}

TEST_CASE("jacobi_identity_random_families")
{
    RandomSource rng(7);
    for (std::size_t m = 1; m <= 3; ++m) {
        for (int s = 0; s < 30; ++s) {
            auto pick = [&] {
                return SuperOpExpr::generator(matrix_families[std::size_t(rng.integer(0, 3))],
                                              rng.complex_matrix(Eigen::Index(m), Eigen::Index(m)));
            };
            auto x = pick();
            auto y = pick();
            auto z = pick();
            auto sum = commutator(x, commutator(y, z)) + commutator(y, commutator(z, x)) + commutator(z, commutator(x, y));
            CHECK(max_abs_difference(sum, SuperOpExpr(m)) < 1e-10);
        }
    }
}

TEST_CASE("similarity_single_mode_examples")
{
    const double beta = 0.37;
    auto k0 = similarity_kpm(Sign::plus, scalar(beta), k_zero(scalar(1.0)));
    CHECK(approx_equal(k0, k_zero(scalar(1.0)) + k_plus(scalar(-beta))));

    auto km = similarity_kpm(Sign::plus, scalar(beta), k_minus(scalar(1.0)));
    CHECK(approx_equal(km, k_minus(scalar(1.0)) + k_zero(scalar(-2.0 * beta)) + k_plus(scalar(beta * beta))));

    RandomSource rng(8);
    auto x = n_minus(rng.complex_matrix(2, 2)) + k_zero(rng.complex_matrix(2, 2)) + k_plus(rng.complex_matrix(2, 2)) +
             k_minus(rng.complex_matrix(2, 2)) + SuperOpExpr::identity(2, 0.7);
    CHECK(approx_equal(similarity_kpm(Sign::plus, CoeffMatrix::Zero(2, 2), x), x, 0.0));
    CHECK(approx_equal(similarity_kpm(Sign::minus, CoeffMatrix::Zero(2, 2), x), x, 0.0));
}

TEST_CASE("similarity_inverse_round_trip")
{
    RandomSource rng(9);
    auto b = rng.complex_matrix(3, 3);
    auto x = n_minus(rng.complex_matrix(3, 3)) + k_zero(rng.complex_matrix(3, 3)) + k_plus(rng.complex_matrix(3, 3)) +
             k_minus(rng.complex_matrix(3, 3));
    for (auto sign : {Sign::plus, Sign::minus})
        CHECK(approx_equal(similarity_kpm(sign, -b, similarity_kpm(sign, b, x)), x, 1e-11));
}

TEST_CASE("similarity_matches_oracle_both_signs")
{
    RandomSource rng(10);
    const auto space = oracle::make_space(2, 3);
    const auto idx = oracle::interior(space, 2);
    for (auto sign : {Sign::plus, Sign::minus}) {
        CoeffMatrix b = rng.complex_matrix(2, 2);
        b *= 0.5 / b.norm();
        const oracle::Matrix gen = oracle::family(space, raising_family(sign), b);
        const oracle::Matrix e = gen.exp();
        const oracle::Matrix e_inv = (-gen).exp();
        for (auto f : matrix_families) {
            auto x = SuperOpExpr::generator(f, rng.complex_matrix(2, 2));
            const oracle::Matrix direct = e * oracle::expression(space, x) * e_inv;
            INFO("sign " << (sign == Sign::plus ? "+" : "-") << " family " << to_string(f));
            CHECK(oracle::block_gap(oracle::expression(space, similarity_kpm(sign, b, x)), direct, idx) < 1e-9);
        }
    }
}
