#pragma once

// Spectrum of the diagonalized two-mode Liouvillian, sector by sector.
//
// L^(d) conserves the total ket photon number u and bra photon number v, so it
// splits into (u+1)(v+1) blocks. Inside sector (u, v) the basis is
// |n, u-n><m, v-m|, flattened as n (v+1) + m.

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "superop/error.hpp"
#include "superop/fock.hpp"
#include "superop/liouvillian.hpp"

namespace superop {

struct SectorIndex {
    int u = 0;
    int v = 0;

    friend auto operator<=>(const SectorIndex&, const SectorIndex&) = default;
};

inline std::string to_string(const SectorIndex& s)
{
    return "(" + std::to_string(s.u) + "," + std::to_string(s.v) + ")";
}

struct SectorMatrix {
    SectorIndex sector;
    Matrix entries;

    Eigen::Index dim() const { return entries.rows(); }
};

/// Spectrum coefficients A = -i Omega - Gamma/2 and B = i Omega - Gamma/2.
struct DiagCoeffs {
    CoeffMatrix a_nm;
    CoeffMatrix b_nm;
};

inline DiagCoeffs diag_coeffs(const SystemSpec& spec)
{
    const cplx i = detail::imag_unit;
    return {-i * spec.omega() - 0.5 * spec.gamma(), i * spec.omega() - 0.5 * spec.gamma()};
}

inline void require_sector(const SectorIndex& s)
{
    if (s.u < 0 || s.v < 0)
        throw invalid_input("sector indices must be non-negative, got " + to_string(s));
}

inline SectorMatrix sector_matrix(const SystemSpec& spec, SectorIndex sector)
{
    if (spec.mode_count() != 2)
        throw invalid_input("sector_matrix is implemented for two modes only (got " +
                            std::to_string(spec.mode_count()) + ")");
    require_sector(sector);
    const auto [a, b] = diag_coeffs(spec);
    const int u = sector.u;
    const int v = sector.v;
    const Eigen::Index dim = static_cast<Eigen::Index>(u + 1) * (v + 1);
    auto flat = [v](int n, int m) { return static_cast<Eigen::Index>(n) * (v + 1) + m; };
    auto root = [](int x) { return std::sqrt(static_cast<double>(x)); };

    Matrix mat = Matrix::Zero(dim, dim);
    for (int n = 0; n <= u; ++n) {
        for (int m = 0; m <= v; ++m) {
            const auto row = flat(n, m);
            mat(row, row) = a(0, 0) * double(n) + b(0, 0) * double(m) + a(1, 1) * double(u - n) + b(1, 1) * double(v - m);
            if (n >= 1)
                mat(row, flat(n - 1, m)) = a(0, 1) * root(n * (u - n + 1));
            if (m + 1 <= v)
                mat(row, flat(n, m + 1)) = b(0, 1) * root((m + 1) * (v - m));
            if (n + 1 <= u)
                mat(row, flat(n + 1, m)) = a(1, 0) * root((n + 1) * (u - n));
            if (m >= 1)
                mat(row, flat(n, m - 1)) = b(1, 0) * root(m * (v - m + 1));
        }
    }
    return {sector, std::move(mat)};
}

/// Sorted by real part descending, ties by imaginary part descending.
inline void sort_spectrum(std::vector<cplx>& values)
{
    std::sort(values.begin(), values.end(), [](cplx x, cplx y) {
        if (x.real() != y.real())
            return x.real() > y.real();
        return x.imag() > y.imag();
    });
}

struct SectorEigensystem {
    std::vector<cplx> eigenvalues;
    Matrix eigenvectors; // columns, in the order of `eigenvalues`
    double residual = 0.0; // max_k |M c_k - lambda_k c_k|
};

inline SectorEigensystem sector_eigensystem(const SectorMatrix& mat)
{
    Eigen::ComplexEigenSolver<Matrix> es(mat.entries, true);
    if (es.info() != Eigen::Success)
        throw numerical_error("eigensolver failed in sector " + to_string(mat.sector));
    const Eigen::Index d = mat.dim();
    std::vector<Eigen::Index> order(static_cast<std::size_t>(d));
    for (Eigen::Index k = 0; k < d; ++k)
        order[static_cast<std::size_t>(k)] = k;
    const auto& ev = es.eigenvalues();
    std::sort(order.begin(), order.end(), [&](Eigen::Index x, Eigen::Index y) {
        if (ev(x).real() != ev(y).real())
            return ev(x).real() > ev(y).real();
        return ev(x).imag() > ev(y).imag();
    });
    SectorEigensystem out;
    out.eigenvectors.resize(d, d);
    for (Eigen::Index k = 0; k < d; ++k) {
        const auto src = order[static_cast<std::size_t>(k)];
        out.eigenvalues.push_back(ev(src));
        out.eigenvectors.col(k) = es.eigenvectors().col(src);
        const double r = (mat.entries * out.eigenvectors.col(k) - ev(src) * out.eigenvectors.col(k)).cwiseAbs().maxCoeff();
        out.residual = std::max(out.residual, r);
    }
    return out;
}

inline std::vector<cplx> sector_eigenvalues(const SectorMatrix& mat)
{
    Eigen::ComplexEigenSolver<Matrix> es(mat.entries, false);
    if (es.info() != Eigen::Success)
        throw numerical_error("eigensolver failed in sector " + to_string(mat.sector));
    std::vector<cplx> values(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
    sort_spectrum(values);
    return values;
}

using Spectrum = std::map<SectorIndex, std::vector<cplx>>;

inline Spectrum full_spectrum(const SystemSpec& spec, int max_total)
{
    if (max_total < 0)
        throw invalid_input("max_total must be non-negative");
    Spectrum out;
    for (int u = 0; u <= max_total; ++u)
        for (int v = 0; v <= max_total; ++v)
            out[{u, v}] = sector_eigenvalues(sector_matrix(spec, {u, v}));
    return out;
}

/// Sector block of represent(L^(d)) for any mode count. Basis states are the
/// kets and bras of the given totals in ascending occupation order; for two
/// modes that is the mode-1 occupation ascending, the same order sector_matrix uses.
inline SectorMatrix oracle_sector_matrix(const SystemSpec& spec, SectorIndex sector)
{
    require_sector(sector);
    const FockCutoff cutoff(spec.mode_count(), std::max({1, sector.u, sector.v}));
    const auto ld = diagonalize(spec).l_diag;
    const auto rep = represent(ld, cutoff);
    const auto kets = states_with_total(cutoff, sector.u);
    const auto bras = states_with_total(cutoff, sector.v);
    std::vector<Eigen::Index> idx;
    for (auto k : kets)
        for (auto b : bras)
            idx.push_back(k * cutoff.dim() + b);
    return {sector, extract_block(rep.matrix, idx, idx)};
}

/// Greedy nearest-neighbour matching of two eigenvalue multisets. Returns the
/// largest matched distance, or infinity when the sizes differ.
inline double multiset_distance(std::vector<cplx> lhs, std::vector<cplx> rhs)
{
    if (lhs.size() != rhs.size())
        return std::numeric_limits<double>::infinity();
    auto by_re_im = [](cplx x, cplx y) {
        if (x.real() != y.real())
            return x.real() < y.real();
        return x.imag() < y.imag();
    };
    std::sort(lhs.begin(), lhs.end(), by_re_im);
    std::sort(rhs.begin(), rhs.end(), by_re_im);
    std::vector<bool> used(rhs.size(), false);
    double worst = 0.0;
    for (const auto& x : lhs) {
        std::size_t best = rhs.size();
        double best_d = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < rhs.size(); ++j) {
            if (used[j])
                continue;
            const double d = std::abs(x - rhs[j]);
            if (d < best_d) {
                best_d = d;
                best = j;
            }
        }
        used[best] = true;
        worst = std::max(worst, best_d);
    }
    return worst;
}

/// Eigenvalues of represent(L^(0)) restricted to the invariant subspace with at
/// most `max_total` photons on each side; nothing in L^(0) raises photon number.
inline std::vector<cplx> oracle_zero_order_spectrum(const SystemSpec& spec, int max_total)
{
    const FockCutoff cutoff(spec.mode_count(), std::max(1, max_total));
    const auto rep = represent(zero_order(spec), cutoff);
    std::vector<Eigen::Index> states;
    for (Eigen::Index i = 0; i < cutoff.dim(); ++i)
        if (cutoff.total_occupation(i) <= max_total)
            states.push_back(i);
    std::vector<Eigen::Index> idx;
    for (auto k : states)
        for (auto b : states)
            idx.push_back(k * cutoff.dim() + b);
    Eigen::ComplexEigenSolver<Matrix> es(extract_block(rep.matrix, idx, idx), false);
    if (es.info() != Eigen::Success)
        throw numerical_error("eigensolver failed on the zero-order Liouvillian");
    std::vector<cplx> values(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
    sort_spectrum(values);
    return values;
}

/// Largest mismatch between the union of sector spectra (u, v <= max_total) and
/// the oracle zero-order spectrum.
inline double spectrum_oracle_mismatch(const SystemSpec& spec, int max_total)
{
    std::vector<cplx> all;
    for (const auto& [sector, values] : full_spectrum(spec, max_total))
        all.insert(all.end(), values.begin(), values.end());
    return multiset_distance(all, oracle_zero_order_spectrum(spec, max_total));
}

} // namespace superop
