#pragma once

// Truncated multi-mode Fock space and the matrix representation of
// superoperator expressions acting on vectorized density matrices.
//
// Conventions:
//   basis   mode-1-major tensor order, occupations ascending; index = sum_j n_j (N+1)^(m-1-j)
//   vec     row-major stacking: vec(rho)[i*d + j] = rho(i, j)
//           so vec(X rho Y) = (X kron Y^T) vec(rho)
//
// Quadratic operators are represented by restricting the exact operator to the
// truncated space: a+_n a_k is the product of truncated ladder matrices and
// a_k a+_n = a+_n a_k + delta_nk. Only the K+ and K- sandwiches see the cutoff.

#include <cmath>
#include <complex>
#include <cstddef>
#include <numeric>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <unsupported/Eigen/KroneckerProduct>

#include "superop/algebra.hpp"
#include "superop/error.hpp"

namespace superop {

using SparseMatrix = Eigen::SparseMatrix<cplx>;
using Vector = Eigen::VectorXcd;
using Matrix = Eigen::MatrixXcd;

/// Each of `mode_count` modes holds 0..per_mode_max photons.
class FockCutoff {
public:
    FockCutoff(std::size_t mode_count, int per_mode_max) : modes_(mode_count), max_(per_mode_max)
    {
        if (mode_count == 0)
            throw invalid_input("cutoff needs at least one mode");
        if (per_mode_max < 1)
            throw invalid_input("per-mode cutoff must be at least 1");
        dim_ = 1;
        for (std::size_t j = 0; j < modes_; ++j) {
            dim_ *= static_cast<Eigen::Index>(max_ + 1);
            if (dim_ > 1'000'000)
                throw invalid_input("Fock space dimension too large");
        }
    }

    std::size_t mode_count() const { return modes_; }
    int per_mode_max() const { return max_; }
    Eigen::Index dim() const { return dim_; }
    Eigen::Index superop_dim() const { return dim_ * dim_; }

    std::vector<int> occupations(Eigen::Index index) const
    {
        std::vector<int> occ(modes_);
        for (std::size_t j = modes_; j-- > 0;) {
            occ[j] = static_cast<int>(index % (max_ + 1));
            index /= (max_ + 1);
        }
        return occ;
    }

    Eigen::Index index(const std::vector<int>& occ) const
    {
        if (occ.size() != modes_)
            throw invalid_input("occupation vector has wrong number of modes");
        Eigen::Index idx = 0;
        for (int n : occ) {
            if (n < 0 || n > max_)
                throw invalid_input("occupation " + std::to_string(n) + " outside cutoff " + std::to_string(max_));
            idx = idx * (max_ + 1) + n;
        }
        return idx;
    }

    int max_occupation(Eigen::Index index) const
    {
        int best = 0;
        for (int n : occupations(index))
            best = std::max(best, n);
        return best;
    }

    int total_occupation(Eigen::Index index) const
    {
        auto occ = occupations(index);
        return std::accumulate(occ.begin(), occ.end(), 0);
    }

    friend bool operator==(const FockCutoff& a, const FockCutoff& b)
    {
        return a.modes_ == b.modes_ && a.max_ == b.max_;
    }

private:
    std::size_t modes_;
    int max_;
    Eigen::Index dim_;
};

/// Truncated ladder operators for every mode.
struct ModeOperators {
    std::vector<SparseMatrix> annihilation;
    std::vector<SparseMatrix> creation;
    SparseMatrix identity;
};

inline ModeOperators mode_operators(const FockCutoff& cutoff)
{
    const int n_max = cutoff.per_mode_max();
    const Eigen::Index local = n_max + 1;
    SparseMatrix a1(local, local);
    for (int k = 1; k <= n_max; ++k)
        a1.insert(k - 1, k) = std::sqrt(static_cast<double>(k));
    a1.makeCompressed();
    SparseMatrix id1(local, local);
    id1.setIdentity();

    ModeOperators ops;
    ops.identity.resize(cutoff.dim(), cutoff.dim());
    ops.identity.setIdentity();
    for (std::size_t j = 0; j < cutoff.mode_count(); ++j) {
        SparseMatrix acc(1, 1);
        acc.insert(0, 0) = 1.0;
        for (std::size_t k = 0; k < cutoff.mode_count(); ++k) {
            SparseMatrix next = Eigen::kroneckerProduct(acc, k == j ? a1 : id1);
            acc = std::move(next);
        }
        acc.makeCompressed();
        ops.creation.push_back(SparseMatrix(acc.adjoint()));
        ops.annihilation.push_back(std::move(acc));
    }
    return ops;
}

/// Matrix of a superoperator on vec(rho) for a given cutoff.
struct SuperOpMatrix {
    FockCutoff cutoff;
    SparseMatrix matrix;

    Vector apply(const Vector& v) const { return matrix * v; }
};

/// Row-major vectorization of an operator on the truncated space.
inline Vector vectorize(const Matrix& op)
{
    Vector v(op.size());
    for (Eigen::Index i = 0; i < op.rows(); ++i)
        for (Eigen::Index j = 0; j < op.cols(); ++j)
            v(i * op.cols() + j) = op(i, j);
    return v;
}

inline Matrix unvectorize(const Vector& v, Eigen::Index dim)
{
    if (v.size() != dim * dim)
        throw invalid_input("vector length is not dim^2");
    Matrix op(dim, dim);
    for (Eigen::Index i = 0; i < dim; ++i)
        for (Eigen::Index j = 0; j < dim; ++j)
            op(i, j) = v(i * dim + j);
    return op;
}

/// rho -> X rho Y
inline SparseMatrix sandwich(const SparseMatrix& x, const SparseMatrix& y)
{
    SparseMatrix yt = y.transpose();
    SparseMatrix out = Eigen::kroneckerProduct(x, yt);
    return out;
}

/// rho -> X rho
inline SparseMatrix left_multiplication(const SparseMatrix& x)
{
    SparseMatrix id(x.rows(), x.cols());
    id.setIdentity();
    return sandwich(x, id);
}

/// rho -> rho X
inline SparseMatrix right_multiplication(const SparseMatrix& x)
{
    SparseMatrix id(x.rows(), x.cols());
    id.setIdentity();
    return sandwich(id, x);
}

namespace detail {

// sum_{n,k} C(n,k) a+_n a_k
inline SparseMatrix quadratic_form(const ModeOperators& ops, const CoeffMatrix& c)
{
    const Eigen::Index d = ops.identity.rows();
    SparseMatrix out(d, d);
    for (Eigen::Index n = 0; n < c.rows(); ++n)
        for (Eigen::Index k = 0; k < c.cols(); ++k)
            if (c(n, k) != cplx{})
                out += c(n, k) * (ops.creation[n] * ops.annihilation[k]);
    return out;
}

} // namespace detail

inline SparseMatrix represent_family(GeneratorKind kind, const CoeffMatrix& c, const ModeOperators& ops)
{
    const Eigen::Index d = ops.identity.rows();
    SparseMatrix out(d * d, d * d);
    switch (kind) {
    case GeneratorKind::n_minus: {
        SparseMatrix q = detail::quadratic_form(ops, c);
        out = left_multiplication(q) - right_multiplication(q);
        break;
    }
    case GeneratorKind::k_zero: {
        SparseMatrix q = detail::quadratic_form(ops, c);
        SparseMatrix anti = q + c.trace() * ops.identity; // sum C(n,k) a_k a+_n
        out = 0.5 * (left_multiplication(q) + right_multiplication(anti));
        break;
    }
    case GeneratorKind::k_plus:
        for (Eigen::Index n = 0; n < c.rows(); ++n)
            for (Eigen::Index k = 0; k < c.cols(); ++k)
                if (c(n, k) != cplx{})
                    out += c(n, k) * sandwich(ops.creation[n], ops.annihilation[k]);
        break;
    case GeneratorKind::k_minus:
        for (Eigen::Index n = 0; n < c.rows(); ++n)
            for (Eigen::Index k = 0; k < c.cols(); ++k)
                if (c(n, k) != cplx{})
                    out += c(n, k) * sandwich(ops.annihilation[k], ops.creation[n]);
        break;
    case GeneratorKind::identity:
        throw invalid_input("identity is represented through the scalar term");
    }
    out.makeCompressed();
    return out;
}

inline SuperOpMatrix represent(const SuperOpExpr& x, const FockCutoff& cutoff, const ModeOperators& ops)
{
    if (x.mode_count() != cutoff.mode_count())
        throw invalid_input("expression and cutoff have different mode counts");
    const Eigen::Index dd = cutoff.superop_dim();
    SparseMatrix out(dd, dd);
    for (auto kind : matrix_families)
        if (const auto& c = x.term(kind))
            out += represent_family(kind, *c, ops);
    if (x.scalar() != cplx{}) {
        SparseMatrix id(dd, dd);
        id.setIdentity();
        out += x.scalar() * id;
    }
    out.makeCompressed();
    return {cutoff, std::move(out)};
}

inline SuperOpMatrix represent(const SuperOpExpr& x, const FockCutoff& cutoff)
{
    return represent(x, cutoff, mode_operators(cutoff));
}

/// Superoperator indices (ket, bra) whose every mode occupation is <= limit on
/// both sides. limit = N - 1 gives the interior block that is free of
/// truncation artifacts for a single raising step.
inline std::vector<Eigen::Index> block_indices(const FockCutoff& cutoff, int limit)
{
    std::vector<Eigen::Index> states;
    for (Eigen::Index i = 0; i < cutoff.dim(); ++i)
        if (cutoff.max_occupation(i) <= limit)
            states.push_back(i);
    std::vector<Eigen::Index> out;
    out.reserve(states.size() * states.size());
    for (auto k : states)
        for (auto b : states)
            out.push_back(k * cutoff.dim() + b);
    return out;
}

inline std::vector<Eigen::Index> interior_indices(const FockCutoff& cutoff, int depth = 1)
{
    return block_indices(cutoff, cutoff.per_mode_max() - depth);
}

/// Superoperator indices whose ket and bra both carry at most `limit` photons
/// in total. Number-conserving intermode terms keep this block closed, which
/// a per-mode bound does not.
inline std::vector<Eigen::Index> total_block_indices(const FockCutoff& cutoff, int limit)
{
    std::vector<Eigen::Index> states;
    for (Eigen::Index i = 0; i < cutoff.dim(); ++i)
        if (cutoff.total_occupation(i) <= limit)
            states.push_back(i);
    std::vector<Eigen::Index> out;
    out.reserve(states.size() * states.size());
    for (auto k : states)
        for (auto b : states)
            out.push_back(k * cutoff.dim() + b);
    return out;
}

/// Kets with total photon number `total`, in ascending lexicographic order of
/// the occupation vector (for two modes: mode-1 occupation ascending).
inline std::vector<Eigen::Index> states_with_total(const FockCutoff& cutoff, int total)
{
    std::vector<Eigen::Index> out;
    for (Eigen::Index i = 0; i < cutoff.dim(); ++i)
        if (cutoff.total_occupation(i) == total)
            out.push_back(i);
    std::sort(out.begin(), out.end(), [&](Eigen::Index a, Eigen::Index b) {
        return cutoff.occupations(a) < cutoff.occupations(b);
    });
    return out;
}

/// Largest entrywise |lhs - rhs| over the sub-block rows x cols.
inline double block_max_difference(const Matrix& lhs, const Matrix& rhs, const std::vector<Eigen::Index>& rows,
                                   const std::vector<Eigen::Index>& cols)
{
    double worst = 0.0;
    for (auto c : cols)
        for (auto r : rows)
            worst = std::max(worst, std::abs(lhs(r, c) - rhs(r, c)));
    return worst;
}

inline Matrix extract_block(const SparseMatrix& m, const std::vector<Eigen::Index>& rows,
                            const std::vector<Eigen::Index>& cols)
{
    std::vector<Eigen::Index> row_pos(static_cast<std::size_t>(m.rows()), -1);
    for (std::size_t i = 0; i < rows.size(); ++i)
        row_pos[static_cast<std::size_t>(rows[i])] = static_cast<Eigen::Index>(i);
    Matrix out = Matrix::Zero(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols.size()));
    for (std::size_t j = 0; j < cols.size(); ++j)
        for (SparseMatrix::InnerIterator it(m, cols[j]); it; ++it)
            if (auto p = row_pos[static_cast<std::size_t>(it.row())]; p >= 0)
                out(p, static_cast<Eigen::Index>(j)) = it.value();
    return out;
}

/// Density matrix on a truncated Fock space.
class DensityMatrix {
public:
    DensityMatrix(FockCutoff cutoff, Matrix rho) : cutoff_(std::move(cutoff)), rho_(std::move(rho))
    {
        if (rho_.rows() != cutoff_.dim() || rho_.cols() != cutoff_.dim())
            throw invalid_input("density matrix dimension does not match cutoff");
    }

    /// Validates Hermiticity, unit trace and positivity.
    static DensityMatrix physical(FockCutoff cutoff, Matrix rho)
    {
        DensityMatrix out(std::move(cutoff), std::move(rho));
        if ((out.rho_ - out.rho_.adjoint()).cwiseAbs().maxCoeff() > 1e-12)
            throw invalid_input("density matrix is not Hermitian");
        if (std::abs(out.trace() - 1.0) > 1e-12)
            throw invalid_input("density matrix trace is not 1");
        if (out.min_eigenvalue() < -1e-10)
            throw invalid_input("density matrix is not positive semidefinite");
        return out;
    }

    static DensityMatrix fock(const FockCutoff& cutoff, const std::vector<int>& occupations)
    {
        Matrix rho = Matrix::Zero(cutoff.dim(), cutoff.dim());
        auto i = cutoff.index(occupations);
        rho(i, i) = 1.0;
        return {cutoff, std::move(rho)};
    }

    // (|0,1> + |1,0>)/sqrt(2) on two modes
    static DensityMatrix bell_01_10(const FockCutoff& cutoff)
    {
        if (cutoff.mode_count() != 2)
            throw invalid_input("bell_01_10 needs exactly two modes");
        Vector psi = Vector::Zero(cutoff.dim());
        psi(cutoff.index({0, 1})) = 1.0 / std::sqrt(2.0);
        psi(cutoff.index({1, 0})) = 1.0 / std::sqrt(2.0);
        return {cutoff, psi * psi.adjoint()};
    }

    /// Product of single-mode thermal states with mean `mean` each, truncated and renormalized.
    static DensityMatrix thermal(const FockCutoff& cutoff, double mean)
    {
        if (mean < 0.0)
            throw invalid_input("thermal mean occupation must be non-negative");
        Matrix rho = Matrix::Zero(cutoff.dim(), cutoff.dim());
        double norm = 0.0;
        for (Eigen::Index i = 0; i < cutoff.dim(); ++i) {
            double p = 1.0;
            for (int n : cutoff.occupations(i))
                p *= std::pow(mean, n) / std::pow(mean + 1.0, n + 1);
            rho(i, i) = p;
            norm += p;
        }
        return {cutoff, rho / norm};
    }

    const FockCutoff& cutoff() const { return cutoff_; }
    const Matrix& matrix() const { return rho_; }

    double trace() const { return rho_.trace().real(); }
    double purity() const { return (rho_ * rho_).trace().real(); }
    double hermiticity_deviation() const { return (rho_ - rho_.adjoint()).cwiseAbs().maxCoeff(); }

    double min_eigenvalue() const
    {
        Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (rho_ + rho_.adjoint()), Eigen::EigenvaluesOnly);
        return es.eigenvalues().minCoeff();
    }

    /// Largest single-mode occupation among basis states the state touches.
    int support(double threshold = 1e-14) const
    {
        int best = 0;
        for (Eigen::Index i = 0; i < rho_.rows(); ++i)
            if (rho_.row(i).cwiseAbs().maxCoeff() > threshold || rho_.col(i).cwiseAbs().maxCoeff() > threshold)
                best = std::max(best, cutoff_.max_occupation(i));
        return best;
    }

    /// The same state on a larger cutoff (zero padded).
    DensityMatrix embed(const FockCutoff& larger) const
    {
        if (larger.mode_count() != cutoff_.mode_count() || larger.per_mode_max() < cutoff_.per_mode_max())
            throw invalid_input("embedding target must be a larger cutoff with the same modes");
        Matrix out = Matrix::Zero(larger.dim(), larger.dim());
        for (Eigen::Index i = 0; i < cutoff_.dim(); ++i)
            for (Eigen::Index j = 0; j < cutoff_.dim(); ++j)
                out(larger.index(cutoff_.occupations(i)), larger.index(cutoff_.occupations(j))) = rho_(i, j);
        return {larger, std::move(out)};
    }

private:
    FockCutoff cutoff_;
    Matrix rho_;
};

/// Sum of singular values of a Hermitian difference.
inline double trace_norm_hermitian(const Matrix& m)
{
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (m + m.adjoint()), Eigen::EigenvaluesOnly);
    return es.eigenvalues().cwiseAbs().sum();
}

} // namespace superop
