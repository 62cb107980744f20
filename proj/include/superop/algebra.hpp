#pragma once

// Superoperators with matrix coefficients.
//
// For a complex m x m matrix C, each generator family denotes the sum
//   F_C = sum_{n,k} C(n,k) F_{nk}
// over the two-index superoperators (Liouville notation, <-X rho = X rho, ->X rho = rho X):
//   N-  : <-(a+_n a_k) - ->(a+_n a_k)
//   K0  : 1/2 (<-(a+_n a_k) + ->(a_k a+_n))
//   K+  : <-a+_n ->a_k
//   K-  : <-a_k ->a+_n
// plus a scalar multiple of the identity superoperator. The commutator and the
// exponential similarity transforms by K+/K- close on this five-family span, so
// every operation here is an exact rewrite of the coefficient matrices.

#include <algorithm>
#include <array>
#include <complex>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

#include <Eigen/Dense>

#include "superop/error.hpp"

namespace superop {

using cplx = std::complex<double>;
using CoeffMatrix = Eigen::MatrixXcd;

enum class GeneratorKind { n_minus, k_zero, k_plus, k_minus, identity };

inline constexpr std::array<GeneratorKind, 4> matrix_families{
    GeneratorKind::n_minus, GeneratorKind::k_zero, GeneratorKind::k_plus, GeneratorKind::k_minus};

inline std::string_view to_string(GeneratorKind kind)
{
    switch (kind) {
    case GeneratorKind::n_minus: return "N-";
    case GeneratorKind::k_zero: return "K0";
    case GeneratorKind::k_plus: return "K+";
    case GeneratorKind::k_minus: return "K-";
    case GeneratorKind::identity: return "I";
    }
    return "?";
}

enum class Sign { plus, minus };

inline GeneratorKind raising_family(Sign s)
{
    return s == Sign::plus ? GeneratorKind::k_plus : GeneratorKind::k_minus;
}

namespace detail {

inline CoeffMatrix comm(const CoeffMatrix& a, const CoeffMatrix& b) { return a * b - b * a; }
inline CoeffMatrix anticomm(const CoeffMatrix& a, const CoeffMatrix& b) { return a * b + b * a; }

inline std::size_t slot(GeneratorKind kind)
{
    switch (kind) {
    case GeneratorKind::n_minus: return 0;
    case GeneratorKind::k_zero: return 1;
    case GeneratorKind::k_plus: return 2;
    case GeneratorKind::k_minus: return 3;
    case GeneratorKind::identity: break;
    }
    throw invalid_input("identity carries a scalar, not a coefficient matrix");
}

} // namespace detail

/// Formal linear combination of the four matrix-coefficient families and the
/// identity superoperator.
///
/// Canonical form: a family whose coefficient is exactly zero is absent, so two
/// expressions built along different routes compare structurally. The scalar is
/// the coefficient of the identity superoperator (Tr of its subscript matrix).
class SuperOpExpr {
public:
    explicit SuperOpExpr(std::size_t mode_count) : modes_(mode_count)
    {
        if (mode_count == 0)
            throw invalid_input("mode count must be positive");
    }

    static SuperOpExpr generator(GeneratorKind kind, CoeffMatrix coeff)
    {
        if (coeff.rows() != coeff.cols() || coeff.rows() == 0)
            throw invalid_input("coefficient matrix must be square and non-empty");
        SuperOpExpr out(static_cast<std::size_t>(coeff.rows()));
        out.set(kind, std::move(coeff));
        return out;
    }

    static SuperOpExpr identity(std::size_t mode_count, cplx scalar)
    {
        SuperOpExpr out(mode_count);
        out.scalar_ = scalar;
        return out;
    }

    // Identity superoperator with matrix subscript: I_C = Tr(C).
    static SuperOpExpr identity_of(const CoeffMatrix& coeff)
    {
        return identity(static_cast<std::size_t>(coeff.rows()), coeff.trace());
    }

    std::size_t mode_count() const { return modes_; }
    cplx scalar() const { return scalar_; }

    bool has(GeneratorKind kind) const
    {
        if (kind == GeneratorKind::identity)
            return scalar_ != cplx{};
        return terms_[detail::slot(kind)].has_value();
    }

    // Coefficient of a family; the zero matrix when absent.
    CoeffMatrix coeff(GeneratorKind kind) const
    {
        const auto& t = terms_[detail::slot(kind)];
        if (t)
            return *t;
        return CoeffMatrix::Zero(dim(), dim());
    }

    const std::optional<CoeffMatrix>& term(GeneratorKind kind) const { return terms_[detail::slot(kind)]; }

    bool is_zero() const
    {
        for (const auto& t : terms_)
            if (t)
                return false;
        return scalar_ == cplx{};
    }

    SuperOpExpr& operator+=(const SuperOpExpr& rhs)
    {
        require_same_modes(rhs);
        for (std::size_t i = 0; i < terms_.size(); ++i) {
            if (!rhs.terms_[i])
                continue;
            if (terms_[i])
                *terms_[i] += *rhs.terms_[i];
            else
                terms_[i] = rhs.terms_[i];
            prune(i);
        }
        scalar_ += rhs.scalar_;
        return *this;
    }

    SuperOpExpr& operator-=(const SuperOpExpr& rhs) { return *this += rhs * cplx{-1.0}; }

    SuperOpExpr& operator*=(cplx c)
    {
        for (std::size_t i = 0; i < terms_.size(); ++i) {
            if (terms_[i]) {
                *terms_[i] *= c;
                prune(i);
            }
        }
        scalar_ *= c;
        return *this;
    }

    friend SuperOpExpr operator+(SuperOpExpr lhs, const SuperOpExpr& rhs) { return lhs += rhs; }
    friend SuperOpExpr operator-(SuperOpExpr lhs, const SuperOpExpr& rhs) { return lhs -= rhs; }
    friend SuperOpExpr operator*(SuperOpExpr x, cplx c) { return x *= c; }
    friend SuperOpExpr operator*(cplx c, SuperOpExpr x) { return x *= c; }
    friend SuperOpExpr operator-(SuperOpExpr x) { return x *= cplx{-1.0}; }

    // Adds c * F_coeff for a matrix family, merging with any existing term.
    SuperOpExpr& add_term(GeneratorKind kind, const CoeffMatrix& coeff)
    {
        if (kind == GeneratorKind::identity)
            throw invalid_input("use identity() for the scalar term");
        if (coeff.rows() != dim() || coeff.cols() != dim())
            throw invalid_input("coefficient dimension does not match mode count");
        auto i = detail::slot(kind);
        if (terms_[i])
            *terms_[i] += coeff;
        else
            terms_[i] = coeff;
        prune(i);
        return *this;
    }

    void require_same_modes(const SuperOpExpr& other) const
    {
        if (other.modes_ != modes_)
            throw invalid_input("mode count mismatch: " + std::to_string(modes_) + " vs " +
                                std::to_string(other.modes_));
    }

private:
    Eigen::Index dim() const { return static_cast<Eigen::Index>(modes_); }

    void set(GeneratorKind kind, CoeffMatrix coeff)
    {
        if (kind == GeneratorKind::identity)
            throw invalid_input("use identity() for the scalar term");
        auto i = detail::slot(kind);
        terms_[i] = std::move(coeff);
        prune(i);
    }

    void prune(std::size_t i)
    {
        if (terms_[i] && (terms_[i]->array() == cplx{}).all())
            terms_[i].reset();
    }

    std::size_t modes_;
    std::array<std::optional<CoeffMatrix>, 4> terms_{};
    cplx scalar_{};
};

inline SuperOpExpr n_minus(const CoeffMatrix& c) { return SuperOpExpr::generator(GeneratorKind::n_minus, c); }
inline SuperOpExpr k_zero(const CoeffMatrix& c) { return SuperOpExpr::generator(GeneratorKind::k_zero, c); }
inline SuperOpExpr k_plus(const CoeffMatrix& c) { return SuperOpExpr::generator(GeneratorKind::k_plus, c); }
inline SuperOpExpr k_minus(const CoeffMatrix& c) { return SuperOpExpr::generator(GeneratorKind::k_minus, c); }

inline SuperOpExpr expr_add(const SuperOpExpr& lhs, const SuperOpExpr& rhs) { return lhs + rhs; }
inline SuperOpExpr expr_scale(cplx c, const SuperOpExpr& x) { return c * x; }

/// Largest entrywise difference over all coefficient matrices and the scalar.
inline double max_abs_difference(const SuperOpExpr& lhs, const SuperOpExpr& rhs)
{
    lhs.require_same_modes(rhs);
    double worst = std::abs(lhs.scalar() - rhs.scalar());
    for (auto kind : matrix_families) {
        const auto& a = lhs.term(kind);
        const auto& b = rhs.term(kind);
        if (!a && !b)
            continue;
        double d = 0.0;
        if (a && b)
            d = (*a - *b).cwiseAbs().maxCoeff();
        else
            d = (a ? *a : *b).cwiseAbs().maxCoeff();
        worst = std::max(worst, d);
    }
    return worst;
}

inline bool approx_equal(const SuperOpExpr& lhs, const SuperOpExpr& rhs, double tol = 1e-12)
{
    return max_abs_difference(lhs, rhs) <= tol;
}

namespace detail {

// [F_a, G_b] for two single families. Antisymmetric completion of the closed table.
inline SuperOpExpr family_commutator(GeneratorKind f, const CoeffMatrix& a, GeneratorKind g,
                                     const CoeffMatrix& b)
{
    using K = GeneratorKind;
    const auto m = static_cast<std::size_t>(a.rows());

    if (f == K::n_minus)
        return SuperOpExpr::generator(g, comm(a, b));
    if (g == K::n_minus)
        return SuperOpExpr::generator(f, comm(a, b)); // -[N_b, F_a] = -F_{[b,a]}

    if (f == K::k_zero && g == K::k_zero)
        return n_minus(0.25 * comm(a, b));
    if (f == K::k_zero)
        return g == K::k_plus ? k_plus(0.5 * anticomm(a, b)) : k_minus(-0.5 * anticomm(a, b));
    if (g == K::k_zero)
        return f == K::k_plus ? k_plus(-0.5 * anticomm(a, b)) : k_minus(0.5 * anticomm(a, b));

    if (f == g)
        return SuperOpExpr(m); // [K+,K+] = [K-,K-] = 0

    if (f == K::k_minus) // [K-_a, K+_b]
        return k_zero(anticomm(a, b)) - n_minus(0.5 * comm(a, b));
    // [K+_a, K-_b] = -[K-_b, K+_a]
    return k_zero(-anticomm(b, a)) + n_minus(0.5 * comm(b, a));
}

} // namespace detail

/// Commutator [lhs, rhs], expanded bilinearly over the family table.
/// The identity term commutes with everything.
inline SuperOpExpr commutator(const SuperOpExpr& lhs, const SuperOpExpr& rhs)
{
    lhs.require_same_modes(rhs);
    SuperOpExpr out(lhs.mode_count());
    for (auto f : matrix_families) {
        const auto& a = lhs.term(f);
        if (!a)
            continue;
        for (auto g : matrix_families) {
            const auto& b = rhs.term(g);
            if (!b)
                continue;
            out += detail::family_commutator(f, *a, g, *b);
        }
    }
    return out;
}

/// exp(K^s_B) x exp(-K^s_B), written out in closed form. The nested commutator
/// series stops after the BAB term, so the rewrite is exact.
inline SuperOpExpr similarity_kpm(Sign sign, const CoeffMatrix& b, const SuperOpExpr& x)
{
    using K = GeneratorKind;
    const auto m = static_cast<Eigen::Index>(x.mode_count());
    if (b.rows() != m || b.cols() != m)
        throw invalid_input("similarity generator dimension does not match expression");

    const K same = raising_family(sign);
    const K opposite = sign == Sign::plus ? K::k_minus : K::k_plus;
    const double s = sign == Sign::plus ? 1.0 : -1.0;

    SuperOpExpr out = SuperOpExpr::identity(x.mode_count(), x.scalar());
    if (const auto& a = x.term(same))
        out.add_term(same, *a);
    if (const auto& a = x.term(K::n_minus)) {
        out.add_term(K::n_minus, *a);
        out.add_term(same, -detail::comm(*a, b));
    }
    if (const auto& a = x.term(K::k_zero)) {
        out.add_term(K::k_zero, *a);
        out.add_term(same, -s * 0.5 * detail::anticomm(*a, b));
    }
    if (const auto& a = x.term(opposite)) {
        out.add_term(opposite, *a);
        out.add_term(K::k_zero, -s * detail::anticomm(*a, b));
        out.add_term(K::n_minus, 0.5 * detail::comm(*a, b));
        out.add_term(same, b * *a * b);
    }
    return out;
}

} // namespace superop
