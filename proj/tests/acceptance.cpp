// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <string>

#include <Eigen/Sparse>

#include "gksl_oracle.hpp"
#include "process.hpp"
#include "superop/superop.hpp"

using namespace superop;

namespace {

struct Outcome {
    bool passed = false;
    std::string detail;
};

std::string sci(double x)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3e", x);
    return buf;
}

using oracle::FamilyBasis;
using oracle::OracleSparse;
using oracle::sparse_block_gap;

Outcome ac1()
{
    RandomSource rng(1001);
    const FamilyBasis basis(2, 4);
    const auto idx = oracle::interior(basis.space, 3);
    double worst = 0.0;
    for (int pair = 0; pair < 50; ++pair) {
        const CoeffMatrix a = rng.complex_matrix(2, 2);
        const CoeffMatrix b = rng.complex_matrix(2, 2);
        for (auto f : matrix_families) {
            for (auto g : matrix_families) {
                const auto x = SuperOpExpr::generator(f, a);
                const auto y = SuperOpExpr::generator(g, b);
                const OracleSparse rx = basis.expression(x);
                const OracleSparse ry = basis.expression(y);
                const OracleSparse direct = OracleSparse(rx * ry) - OracleSparse(ry * rx);
                worst = std::max(worst, sparse_block_gap(basis.expression(commutator(x, y)), direct, idx));
            }
        }
    }
    return {worst < 1e-9, "max interior error " + sci(worst) + " (tol 1e-9, 50 pairs x 16 family pairs)"};
}

Outcome ac2()
{
    RandomSource rng(1002);
    double worst_r = 0.0, worst_z = 0.0;
    int structural_failures = 0;
    for (int s = 0; s < 100; ++s) {
        const auto m = static_cast<std::size_t>(rng.integer(1, 4));
        const auto spec = rng.system(m, 0.0, 5.0);
        const auto d = diagonalize(spec);
        worst_r = std::max(worst_r, d.residual_r);
        worst_z = std::max(worst_z, d.residual_z);
        if (d.l_diag.has(GeneratorKind::k_plus) || d.l_diag.has(GeneratorKind::k_minus))
            ++structural_failures;
        const auto expected = n_minus(-detail::imag_unit * spec.omega()) + k_zero(-spec.gamma()) +
                              SuperOpExpr::identity_of(0.5 * spec.gamma());
        if (max_abs_difference(d.l_diag, expected) > 1e-12)
            ++structural_failures;
    }
    const bool ok = worst_r < 1e-12 && worst_z < 1e-12 && structural_failures == 0;
    return {ok, "max |R| " + sci(worst_r) + ", max |Z| " + sci(worst_z) + ", structural failures " +
                    std::to_string(structural_failures) + " (tol 1e-12, 100 specs)"};
}

Outcome ac3()
{
    RandomSource rng(1003);
    double worst = 0.0, worst_re = -1.0, worst_nt = 0.0;
    bool zero_present = true;
    for (int s = 0; s < 20; ++s) {
        const auto spec = rng.system(2, 0.0, 2.0);
        const auto spectrum = full_spectrum(spec, 4);
        std::vector<cplx> all;
        for (const auto& [sector, values] : spectrum) {
            all.insert(all.end(), values.begin(), values.end());
            if (sector.u == 0 && sector.v == 0) {
                zero_present = zero_present && values.size() == 1 && std::abs(values[0]) < 1e-12;
                continue;
            }
            for (auto z : values)
                worst_re = std::max(worst_re, z.real());
        }

        // independent reference: L at n_T = 0 in GKSL form on per-mode cutoff 4,
        // restricted to the invariant block with at most 4 photons on each side
        const auto space = oracle::make_space(2, 4);
        const oracle::Matrix l0 = oracle::gksl_liouvillian(space, spec.with_n_thermal(0.0));
        std::vector<int> kets;
        for (int i = 0; i < space.dim_small; ++i)
            if (i / 5 + i % 5 <= 4)
                kets.push_back(i);
        std::vector<int> idx;
        for (int k : kets)
            for (int b : kets)
                idx.push_back(k * space.dim_small + b);
        const auto dim = static_cast<Eigen::Index>(idx.size());
        oracle::Matrix block(dim, dim);
        for (Eigen::Index r = 0; r < dim; ++r)
            for (Eigen::Index c = 0; c < dim; ++c)
                block(r, c) = l0(idx[static_cast<std::size_t>(r)], idx[static_cast<std::size_t>(c)]);
        Eigen::ComplexEigenSolver<oracle::Matrix> es(block, false);
        const std::vector<cplx> ref(es.eigenvalues().data(), es.eigenvalues().data() + dim);
        worst = std::max(worst, multiset_distance(all, ref));

        for (double nt : {0.0, 0.7, 4.0}) {
            const auto other = full_spectrum(spec.with_n_thermal(nt), 4);
            for (const auto& [sector, values] : spectrum)
                worst_nt = std::max(worst_nt, multiset_distance(values, other.at(sector)));
        }
    }
    const bool ok = worst < 1e-8 && zero_present && worst_re <= 1e-10 && worst_nt < 1e-8;
    return {ok, "multiset distance " + sci(worst) + " (tol 1e-8), zero eigenvalue " + (zero_present ? "present" : "missing") +
                    ", max Re (nonzero sectors) " + sci(worst_re) + ", n_T drift " + sci(worst_nt)};
}

Outcome ac4()
{
    const double gm = 0.2, nt = 0.5;
    const int n0 = 3;
    CoeffMatrix om(1, 1), g(1, 1);
    om(0, 0) = 1.0;
    g(0, 0) = gm;
    const auto spec = SystemSpec::make(om, g, nt);
    const FockCutoff cutoff(1, 16);
    const auto rho0 = DensityMatrix::fock(cutoff, {n0});
    Propagator prop(build_liouvillian(spec), cutoff);
    const Matrix num = number_operator(cutoff, 0);
    double worst = 0.0, worst_t = 0.0;
    for (int k = 0; k < 20; ++k) {
        const double t = (5.0 / gm) * k / 19.0;
        const double got = expectation(num, prop.propagate(rho0, t).state).real();
        const double err = std::abs(got - (nt + (n0 - nt) * std::exp(-gm * t)));
        if (err > worst) {
            worst = err;
            worst_t = t;
        }
    }
    // not part of the verdict: the same run at a larger cutoff
    const FockCutoff wide(1, 20);
    Propagator wide_prop(build_liouvillian(spec), wide);
    const double wide_err = std::abs(expectation(number_operator(wide, 0), wide_prop.propagate(rho0.embed(wide), worst_t).state).real() -
                                     (nt + (n0 - nt) * std::exp(-gm * worst_t)));
    return {worst < 1e-6, "max |<n> - closed form| " + sci(worst) + " at t=" + sci(worst_t) +
                              " (tol 1e-6, cutoff 16; cutoff 20 at that t: " + sci(wide_err) + ")"};
}

Outcome ac5()
{
    RandomSource rng(1005);
    const auto base = rng.system(2, 0.0, 0.0);
    const double t = 1.0 / spectral_norm(base.gamma());
    const FockCutoff cutoff(2, 8);
    const auto rho0 = DensityMatrix::fock(cutoff, {0, 1});
    auto error = [&](double nt) {
        const auto spec = base.with_n_thermal(nt);
        const auto exact = exact_propagate(build_liouvillian(spec), rho0, t);
        const auto lin = linear_propagate(spec, rho0, t);
        return trace_norm_hermitian(exact.state.matrix() - lin.state.matrix());
    };
    const double e1 = error(0.01), e2 = error(0.02);
    const double ratio = e2 / e1;
    return {ratio >= 3.5 && ratio <= 4.5,
            "error(0.01) " + sci(e1) + ", error(0.02) " + sci(e2) + ", ratio " + sci(ratio) + " (want [3.5, 4.5])"};
}

Outcome ac6()
{
    RandomSource rng(1006);
    double worst = 0.0;
    int spare_failures = 0;
    for (int s = 0; s < 10; ++s) {
        const std::size_t m = 1 + static_cast<std::size_t>(s % 2);
        const auto spec = rng.system(m, 0.05, 1.0);
        std::vector<int> occ(m);
        for (auto& o : occ)
            o = rng.integer(0, 2);
        const int support = *std::max_element(occ.begin(), occ.end());
        const int minimal = std::max(1, support);
        const auto rho = DensityMatrix::fock(FockCutoff(m, minimal), occ);
        for (double t : {0.1, 1.0, 10.0})
            worst = std::max(worst, zero_order_propagate(spec, rho, t).trace_drift);

        // one spare level is enough; none is rejected
        bool ok = true;
        try {
            linear_propagate(spec, DensityMatrix::fock(FockCutoff(m, support + 1), occ), 1.0);
        } catch (const invalid_input&) {
            ok = false;
        }
        if (support > 0) {
            try {
                linear_propagate(spec, DensityMatrix::fock(FockCutoff(m, support), occ), 1.0);
                ok = false;
            } catch (const invalid_input&) {
            }
        }
        if (!ok)
            ++spare_failures;
    }
    return {worst < 1e-12 && spare_failures == 0,
            "max zero-order trace drift " + sci(worst) + " (tol 1e-12), spare-level violations " +
                std::to_string(spare_failures)};
}

Outcome ac7()
{
    RandomSource rng(1007);
    const auto base = rng.system(2, 0.0, 0.0);
    const double t = 0.3 / spectral_norm(base.gamma());
    const FockCutoff cutoff(2, 5);
    std::string detail;
    bool ok = true;
    for (double nt : {0.1, 0.25, 0.5}) {
        const auto spec = base.with_n_thermal(nt);
        const double fact = factorization_error(spec, cutoff, t, 1);
        const auto d = conjugation_errors(spec, cutoff, t);
        const double conj = std::max({d.k_zero_invariant, d.k_plus_evolved, d.k_plus_lowered, d.k_zero_lowered});
        ok = ok && fact < 1e-6 && conj < 1e-6;
        detail += "n_T=" + sci(nt) + ": factorization " + sci(fact) + ", conjugation " + sci(conj) + "; ";
    }
    // not part of the verdict: the same block at a larger cutoff
    const double wider = factorization_error(base.with_n_thermal(0.5), FockCutoff(2, 8), t, 1);
    return {ok, detail + "tol 1e-6 (n_T=0.5 at cutoff 8: " + sci(wider) + ")"};
}

Outcome ac8()
{
    RandomSource rng(1008);
    const auto spec = rng.system(2, 0.0, 1.0);
    const FockCutoff cutoff(2, 4);
    const Eigen::Index d = cutoff.dim();
    const auto l = build_liouvillian(spec);
    const auto rho = rng.density_matrix(cutoff);
    const double tau = 1.0 / spectral_norm(spec.gamma());
    double worst = 0.0;
    Propagator prop(l, cutoff);
    for (int s = 0; s < 10; ++s) {
        const Matrix a = rng.complex_matrix(d, d);
        for (double t : {0.3 * tau, tau, 3.0 * tau}) {
            const cplx schrodinger = (a * prop.propagate(rho, t).state.matrix()).trace();
            const cplx heisenberg = (heisenberg_observable(l, cutoff, a, t) * rho.matrix()).trace();
            worst = std::max(worst, std::abs(schrodinger - heisenberg));
        }
    }
    return {worst < 1e-9, "max |Tr(A rho_t) - Tr(A_t rho)| " + sci(worst) + " (tol 1e-9)"};
}

Outcome ac9()
{
    using namespace testproc;
    const auto dir = std::filesystem::temp_directory_path() / "superop_acceptance";
    std::filesystem::create_directories(dir);
    auto read = [](const std::filesystem::path& p) {
        std::ifstream in(p, std::ios::binary);
        return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
    };
    const auto a = dir / "a.json";
    const auto b = dir / "b.json";
    const auto first = run_shell(cli_command("verify --config " + config("reference_verify.json") + " --output \"" + a.string() + "\""));
    const auto second = run_shell(cli_command("verify --config " + config("reference_verify.json") + " --output \"" + b.string() + "\""));
    const auto bad = run_shell(cli_command("verify --config " + config("corrupted_gamma.json")));
    const bool identical = !read(a).empty() && read(a) == read(b);
    const bool named = bad.output.find("gamma is not Hermitian") != std::string::npos;
    const bool ok = first.exit_code == 0 && second.exit_code == 0 && identical && bad.exit_code != 0 && named;
    std::string detail = "reference exit " + std::to_string(first.exit_code) + "/" + std::to_string(second.exit_code) +
                         ", byte-identical " + (identical ? "yes" : "no") + ", corrupted exit " +
                         std::to_string(bad.exit_code) + (named ? " naming the Hermiticity violation" : " without the expected message");
    if (first.exit_code != 0)
        detail += ": " + first.output;
    return {ok, detail};
}

} // namespace

int main()
{
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
        {"AC1", ac1}, {"AC2", ac2}, {"AC3", ac3}, {"AC4", ac4}, {"AC5", ac5},
        {"AC6", ac6}, {"AC7", ac7}, {"AC8", ac8}, {"AC9", ac9},
    };
    int failures = 0;
    for (const auto& [name, fn] : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Outcome out;
        try {
            out = fn();
        } catch (const std::exception& e) {
            out = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (!out.passed)
            ++failures;
        char timing[32];
        std::snprintf(timing, sizeof timing, "%.2f s", secs);
        std::cout << name << " " << (out.passed ? "PASS" : "FAIL") << "  " << out.detail << "  [" << timing << "]"
                  << std::endl;
    }
    std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << std::endl;
    return failures == 0 ? 0 : 1;
}
