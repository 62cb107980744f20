#pragma once

// Command implementations behind the superop tool. Each returns a report; the
// caller decides where it goes and which exit code it maps to.

#include <sstream>
#include <string>
#include <vector>

#include "superop/cli/config.hpp"
#include "superop/cli/report.hpp"
#include "superop/dynamics.hpp"
#include "superop/spectrum.hpp"
#include "superop/verify.hpp"

namespace superop::cli {

struct Report {
    ordered_json body;
    std::string csv;
    std::vector<std::string> failures; // names of checks above tolerance
};

struct RunOptions {
    bool verify = false;
    std::optional<double> tolerance;
};

inline std::string occupation_label(const std::vector<int>& occ)
{
    std::string s;
    for (std::size_t i = 0; i < occ.size(); ++i)
        s += (i ? "_" : "") + std::to_string(occ[i]);
    return s;
}

inline Report run_spectrum(const RunConfig& cfg, const RunOptions& opt)
{
    const auto spec = system_spec(cfg);
    if (spec.mode_count() != 2)
        throw invalid_input("spectrum needs exactly two modes (got " + std::to_string(spec.mode_count()) + ")");
    Report r;
    r.body["command"] = "spectrum";
    r.body["modes"] = spec.mode_count();
    r.body["max_total"] = cfg.max_total;
    std::ostringstream csv;
    csv << "# superop spectrum csv v1\n"
        << "u,v,k,re,im\n";
    ordered_json rows = ordered_json::array();
    for (const auto& [sector, values] : full_spectrum(spec, cfg.max_total)) {
        for (std::size_t k = 0; k < values.size(); ++k) {
            ordered_json row;
            row["u"] = sector.u;
            row["v"] = sector.v;
            row["k"] = k;
            row["eigenvalue"] = complex_pair(values[k]);
            rows.push_back(std::move(row));
            csv << sector.u << "," << sector.v << "," << k << "," << format_double(values[k].real()) << ","
                << format_double(values[k].imag()) << "\n";
        }
    }
    r.body["rows"] = std::move(rows);
    if (opt.verify) {
        const double tol = opt.tolerance.value_or(1e-8);
        const double mismatch = spectrum_oracle_mismatch(spec, cfg.max_total);
        ordered_json v;
        v["max_mismatch"] = mismatch;
        v["tolerance"] = tol;
        v["passed"] = mismatch <= tol;
        r.body["verify"] = std::move(v);
        if (mismatch > tol)
            r.failures.push_back("spectrum_oracle");
    }
    r.csv = csv.str();
    return r;
}

inline Report run_evolve(const RunConfig& cfg, const RunOptions& opt)
{
    const auto spec = system_spec(cfg);
    const auto rho0 = initial_state(cfg);
    if (cfg.times.empty())
        throw invalid_input("times must list at least one time point");
    const int needed = rho0.support() + (cfg.method == Method::linear ? 1 : 0);
    if (cfg.cutoff < needed)
        throw invalid_input("cutoff " + std::to_string(cfg.cutoff) + " is below the required " +
                            std::to_string(needed) + " for method " + to_string(cfg.method));
    const auto& cutoff = rho0.cutoff();
    const double leak_tol = opt.tolerance.value_or(1e-6);
    std::optional<Propagator> prop;
    if (cfg.method == Method::exact)
        prop.emplace(build_liouvillian(spec), cutoff, leak_tol);

    std::vector<Eigen::Index> element_index;
    for (const auto& e : cfg.elements)
        element_index.push_back(cutoff.index(e.ket) * cutoff.dim() + cutoff.index(e.bra));

    Report r;
    r.body["command"] = "evolve";
    r.body["method"] = to_string(cfg.method);
    r.body["modes"] = cfg.modes;
    r.body["cutoff"] = cfg.cutoff;
    ordered_json basis = ordered_json::array();
    for (Eigen::Index i = 0; i < cutoff.dim(); ++i)
        basis.push_back(cutoff.occupations(i));
    r.body["basis"] = std::move(basis);

    std::ostringstream csv;
    csv << "# superop evolve csv v1\n"
        << "t,trace,purity,trace_drift,hermiticity_deviation,leak_warning";
    for (Eigen::Index i = 0; i < cutoff.dim(); ++i)
        csv << ",pop_" << occupation_label(cutoff.occupations(i));
    for (const auto& e : cfg.elements)
        csv << ",re_" << occupation_label(e.ket) << "__" << occupation_label(e.bra) << ",im_"
            << occupation_label(e.ket) << "__" << occupation_label(e.bra);
    csv << "\n";

    ordered_json rows = ordered_json::array();
    for (double t : cfg.times) {
        PropagationResult res = cfg.method == Method::exact        ? prop->propagate(rho0, t)
                                : cfg.method == Method::zero_order ? zero_order_propagate(spec, rho0, t)
                                                                   : linear_propagate(spec, rho0, t);
        if (cfg.method != Method::exact)
            res.leak_warning = res.trace_drift > leak_tol;
        const Matrix& rho = res.state.matrix();
        ordered_json row;
        row["t"] = t;
        row["trace"] = res.state.trace();
        row["purity"] = res.state.purity();
        row["trace_drift"] = res.trace_drift;
        row["hermiticity_deviation"] = res.hermiticity_deviation;
        row["leak_warning"] = res.leak_warning;
        ordered_json pops = ordered_json::array();
        for (Eigen::Index i = 0; i < cutoff.dim(); ++i)
            pops.push_back(rho(i, i).real());
        row["populations"] = std::move(pops);
        ordered_json els = ordered_json::array();
        for (auto idx : element_index)
            els.push_back(complex_pair(rho(idx / cutoff.dim(), idx % cutoff.dim())));
        row["elements"] = std::move(els);

        csv << format_double(t) << "," << format_double(res.state.trace()) << ","
            << format_double(res.state.purity()) << "," << format_double(res.trace_drift) << ","
            << format_double(res.hermiticity_deviation) << "," << (res.leak_warning ? 1 : 0);
        for (Eigen::Index i = 0; i < cutoff.dim(); ++i)
            csv << "," << format_double(rho(i, i).real());
        for (auto idx : element_index) {
            const cplx z = rho(idx / cutoff.dim(), idx % cutoff.dim());
            csv << "," << format_double(z.real()) << "," << format_double(z.imag());
        }
        csv << "\n";
        rows.push_back(std::move(row));
    }
    r.body["rows"] = std::move(rows);
    r.csv = csv.str();
    return r;
}

/// Heisenberg-picture expectation of the observable under the full Liouvillian.
inline Report run_expect(const RunConfig& cfg, const RunOptions& opt)
{
    const auto spec = system_spec(cfg);
    const auto rho0 = initial_state(cfg);
    const Matrix a = observable_matrix(cfg);
    if (cfg.times.empty())
        throw invalid_input("times must list at least one time point");
    const auto& cutoff = rho0.cutoff();
    const auto l = build_liouvillian(spec);
    const SparseMatrix adjoint = represent(conjugate(l), cutoff).matrix;
    std::optional<Propagator> fwd;
    if (opt.verify)
        fwd.emplace(l, cutoff);
    const double tol = opt.tolerance.value_or(1e-9);

    Report r;
    r.body["command"] = "expect";
    r.body["observable"] = cfg.observable->kind;
    std::ostringstream csv;
    csv << "# superop expect csv v1\n" << "t,re,im" << (opt.verify ? ",schrodinger_re,schrodinger_im,gap" : "") << "\n";
    ordered_json rows = ordered_json::array();
    double worst = 0.0;
    for (double t : cfg.times) {
        const Matrix a_t = unvectorize(expm_action(adjoint, vectorize(a), t), cutoff.dim());
        const cplx value = expectation(a_t, rho0);
        ordered_json row;
        row["t"] = t;
        row["value"] = complex_pair(value);
        csv << format_double(t) << "," << format_double(value.real()) << "," << format_double(value.imag());
        if (opt.verify) {
            const cplx direct = expectation(a, fwd->propagate(rho0, t).state);
            const double gap = std::abs(direct - value);
            worst = std::max(worst, gap);
            row["schrodinger"] = complex_pair(direct);
            row["gap"] = gap;
            csv << "," << format_double(direct.real()) << "," << format_double(direct.imag()) << ","
                << format_double(gap);
        }
        csv << "\n";
        rows.push_back(std::move(row));
    }
    r.body["rows"] = std::move(rows);
    if (opt.verify) {
        ordered_json v;
        v["max_gap"] = worst;
        v["tolerance"] = tol;
        v["passed"] = worst <= tol;
        r.body["verify"] = std::move(v);
        if (worst > tol)
            r.failures.push_back("heisenberg_duality");
    }
    r.csv = csv.str();
    return r;
}

inline Report run_verify(const RunConfig& cfg, const RunOptions& opt)
{
    const auto spec = system_spec(cfg);
    VerifyOptions vo;
    if (cfg.initial_state)
        vo.support = initial_state(cfg).support();
    vo.cutoff = cfg.cutoff;
    if (vo.cutoff > 0 && vo.cutoff < vo.support + 4)
        throw invalid_input("verify needs cutoff >= support + 4 (cutoff " + std::to_string(vo.cutoff) +
                            ", support " + std::to_string(vo.support) + ")");
    if (opt.tolerance)
        vo.factorization_tolerance = *opt.tolerance;

    Report r;
    r.body["command"] = "verify";
    r.body["modes"] = spec.mode_count();
    r.body["n_thermal"] = spec.n_thermal();
    std::ostringstream csv;
    csv << "# superop verify csv v1\n" << "name,residual,tolerance,passed\n";
    ordered_json checks = ordered_json::array();
    for (const auto& c : run_identity_suite(spec, vo)) {
        ordered_json row;
        row["name"] = c.name;
        row["residual"] = c.residual;
        row["tolerance"] = c.tolerance;
        row["passed"] = c.passed;
        checks.push_back(std::move(row));
        csv << c.name << "," << format_double(c.residual) << "," << format_double(c.tolerance) << ","
            << (c.passed ? 1 : 0) << "\n";
        if (!c.passed)
            r.failures.push_back(c.name);
    }
    r.body["checks"] = std::move(checks);
    r.body["passed"] = r.failures.empty();
    r.csv = csv.str();
    return r;
}

inline Report run(Command command, const RunConfig& cfg, const RunOptions& opt)
{
    switch (command) {
    case Command::spectrum: return run_spectrum(cfg, opt);
    case Command::evolve: return run_evolve(cfg, opt);
    case Command::expect: return run_expect(cfg, opt);
    case Command::verify: return run_verify(cfg, opt);
    }
    throw invalid_input("unknown command");
}

} // namespace superop::cli
