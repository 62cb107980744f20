#pragma once

// Run configuration read from JSON.
//
// Complex numbers are [re, im] pairs; matrices are arrays of rows of pairs.
// Occupation vectors list photon numbers per mode, mode 1 first.

#include <algorithm>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "superop/dynamics.hpp"
#include "superop/error.hpp"
#include "superop/fock.hpp"
#include "superop/liouvillian.hpp"

namespace superop::cli {

using json = nlohmann::json;

enum class Command { spectrum, evolve, expect, verify };
enum class Method { exact, zero_order, linear };
enum class Format { json, csv };

inline Command parse_command(const std::string& s)
{
    if (s == "spectrum") return Command::spectrum;
    if (s == "evolve") return Command::evolve;
    if (s == "expect") return Command::expect;
    if (s == "verify") return Command::verify;
    throw invalid_input("unknown command '" + s + "'");
}

inline std::string to_string(Command c)
{
    switch (c) {
    case Command::spectrum: return "spectrum";
    case Command::evolve: return "evolve";
    case Command::expect: return "expect";
    case Command::verify: return "verify";
    }
    return "?";
}

inline Method parse_method(const std::string& s)
{
    if (s == "exact") return Method::exact;
    if (s == "zero_order") return Method::zero_order;
    if (s == "linear") return Method::linear;
    throw invalid_input("unknown method '" + s + "' (expected exact, zero_order or linear)");
}

inline std::string to_string(Method m)
{
    switch (m) {
    case Method::exact: return "exact";
    case Method::zero_order: return "zero_order";
    case Method::linear: return "linear";
    }
    return "?";
}

inline Format parse_format(const std::string& s)
{
    if (s == "json") return Format::json;
    if (s == "csv") return Format::csv;
    throw invalid_input("unknown format '" + s + "' (expected json or csv)");
}

struct StateSpec {
    std::string preset;                 // fock, bell_01_10, thermal, or "entries"
    std::vector<int> occupations;       // fock
    double mean = 0.0;                  // thermal
    struct Entry {
        std::vector<int> ket, bra;
        cplx value;
    };
    std::vector<Entry> entries;
};

/// a+_creation a_annihilation, or |ket><bra| for a matrix element.
struct ObservableSpec {
    std::string kind; // number, quadratic, projector
    std::size_t creation = 0;
    std::size_t annihilation = 0;
    std::vector<int> ket, bra;
};

struct ElementSpec {
    std::vector<int> ket, bra;
};

struct RunConfig {
    std::optional<Command> command;
    std::size_t modes = 0;
    CoeffMatrix omega, gamma;
    double n_thermal = 0.0;
    int cutoff = 0;
    std::optional<StateSpec> initial_state;
    std::vector<double> times;
    Method method = Method::exact;
    std::optional<ObservableSpec> observable;
    int max_total = 0;
    std::vector<ElementSpec> elements;
    std::optional<std::string> output_path;
    std::optional<Format> output_format;
};

namespace detail {

inline cplx parse_complex(const json& j, const std::string& what)
{
    if (j.is_number())
        return {j.get<double>(), 0.0};
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        throw invalid_input(what + " must be a number or an [re, im] pair");
    return {j[0].get<double>(), j[1].get<double>()};
}

inline CoeffMatrix parse_matrix(const json& j, std::size_t modes, const std::string& what)
{
    if (!j.is_array() || j.size() != modes)
        throw invalid_input(what + " must have " + std::to_string(modes) + " rows");
    const auto m = static_cast<Eigen::Index>(modes);
    CoeffMatrix out(m, m);
    for (std::size_t r = 0; r < modes; ++r) {
        if (!j[r].is_array() || j[r].size() != modes)
            throw invalid_input(what + " row " + std::to_string(r) + " must have " + std::to_string(modes) + " entries");
        for (std::size_t c = 0; c < modes; ++c)
            out(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
                parse_complex(j[r][c], what + "[" + std::to_string(r) + "][" + std::to_string(c) + "]");
    }
    return out;
}

inline std::vector<int> parse_occupations(const json& j, std::size_t modes, const std::string& what)
{
    if (!j.is_array() || j.size() != modes)
        throw invalid_input(what + " must list " + std::to_string(modes) + " occupations");
    std::vector<int> out;
    for (const auto& x : j) {
        if (!x.is_number_integer() || x.get<int>() < 0)
            throw invalid_input(what + " entries must be non-negative integers");
        out.push_back(x.get<int>());
    }
    return out;
}

template <class T>
T get_or(const json& j, const char* key, T fallback)
{
    if (!j.contains(key))
        return fallback;
    try {
        return j.at(key).get<T>();
    } catch (const json::exception&) {
        throw invalid_input(std::string("field '") + key + "' has the wrong type");
    }
}

} // namespace detail

inline RunConfig parse_config(const json& j)
{
    if (!j.is_object())
        throw invalid_input("config must be a JSON object");
    RunConfig cfg;
    if (j.contains("command"))
        cfg.command = parse_command(detail::get_or<std::string>(j, "command", ""));

    const int modes = detail::get_or<int>(j, "modes", 0);
    if (modes <= 0)
        throw invalid_input("modes must be a positive integer");
    cfg.modes = static_cast<std::size_t>(modes);
    if (!j.contains("omega") || !j.contains("gamma"))
        throw invalid_input("omega and gamma are required");
    cfg.omega = detail::parse_matrix(j["omega"], cfg.modes, "omega");
    cfg.gamma = detail::parse_matrix(j["gamma"], cfg.modes, "gamma");
    cfg.n_thermal = detail::get_or<double>(j, "n_thermal", 0.0);
    cfg.cutoff = detail::get_or<int>(j, "cutoff", 0);
    cfg.method = parse_method(detail::get_or<std::string>(j, "method", "exact"));
    cfg.max_total = detail::get_or<int>(j, "max_total", 0);
    if (cfg.max_total < 0)
        throw invalid_input("max_total must be non-negative");

    if (j.contains("times")) {
        const auto& t = j["times"];
        if (!t.is_array())
            throw invalid_input("times must be an array");
        for (const auto& x : t) {
            if (!x.is_number())
                throw invalid_input("times must be numbers");
            cfg.times.push_back(x.get<double>());
        }
        for (std::size_t i = 0; i < cfg.times.size(); ++i) {
            if (!(cfg.times[i] >= 0.0) || !std::isfinite(cfg.times[i]))
                throw invalid_input("times must be finite and non-negative");
            if (i > 0 && !(cfg.times[i] > cfg.times[i - 1]))
                throw invalid_input("times must be strictly ascending");
        }
    }

    if (j.contains("initial_state")) {
        const auto& s = j["initial_state"];
        if (!s.is_object())
            throw invalid_input("initial_state must be an object");
        StateSpec st;
        if (s.contains("entries")) {
            st.preset = "entries";
            for (const auto& e : s["entries"]) {
                st.entries.push_back({detail::parse_occupations(e.at("ket"), cfg.modes, "entry ket"),
                                      detail::parse_occupations(e.at("bra"), cfg.modes, "entry bra"),
                                      detail::parse_complex(e.at("value"), "entry value")});
            }
        } else {
            st.preset = detail::get_or<std::string>(s, "preset", "");
            if (st.preset == "fock")
                st.occupations = detail::parse_occupations(s.value("occupations", json::array()), cfg.modes,
                                                           "initial_state.occupations");
            else if (st.preset == "thermal")
                st.mean = detail::get_or<double>(s, "mean", cfg.n_thermal);
            else if (st.preset != "bell_01_10")
                throw invalid_input("unknown initial_state preset '" + st.preset + "'");
        }
        cfg.initial_state = std::move(st);
    }

    if (j.contains("observable")) {
        const auto& o = j["observable"];
        ObservableSpec ob;
        ob.kind = detail::get_or<std::string>(o, "type", "");
        auto mode_index = [&](const char* key) {
            const int k = detail::get_or<int>(o, key, -1);
            if (k < 0 || k >= modes)
                throw invalid_input(std::string("observable.") + key + " must be a mode index below " +
                                    std::to_string(modes));
            return static_cast<std::size_t>(k);
        };
        if (ob.kind == "number") {
            ob.creation = ob.annihilation = mode_index("mode");
        } else if (ob.kind == "quadratic") {
            ob.creation = mode_index("creation");
            ob.annihilation = mode_index("annihilation");
        } else if (ob.kind == "projector") {
            ob.ket = detail::parse_occupations(o.at("ket"), cfg.modes, "observable.ket");
            ob.bra = detail::parse_occupations(o.at("bra"), cfg.modes, "observable.bra");
        } else {
            throw invalid_input("unknown observable type '" + ob.kind + "' (expected number, quadratic or projector)");
        }
        cfg.observable = std::move(ob);
    }

    if (j.contains("elements")) {
        for (const auto& e : j["elements"])
            cfg.elements.push_back({detail::parse_occupations(e.at("ket"), cfg.modes, "element ket"),
                                    detail::parse_occupations(e.at("bra"), cfg.modes, "element bra")});
    }

    if (j.contains("output")) {
        const auto& o = j["output"];
        if (o.contains("path"))
            cfg.output_path = o["path"].get<std::string>();
        if (o.contains("format"))
            cfg.output_format = parse_format(o["format"].get<std::string>());
    }
    return cfg;
}

inline RunConfig load_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw invalid_input("cannot open config '" + path + "'");
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw invalid_input(std::string("config is not valid JSON: ") + e.what());
    }
    try {
        return parse_config(j);
    } catch (const json::exception& e) {
        throw invalid_input(std::string("malformed config: ") + e.what());
    }
}

inline SystemSpec system_spec(const RunConfig& cfg)
{
    return SystemSpec::make(cfg.omega, cfg.gamma, cfg.n_thermal);
}

inline FockCutoff fock_cutoff(const RunConfig& cfg)
{
    if (cfg.cutoff < 1)
        throw invalid_input("cutoff must be a positive integer");
    return {cfg.modes, cfg.cutoff};
}

inline DensityMatrix initial_state(const RunConfig& cfg)
{
    if (!cfg.initial_state)
        throw invalid_input("initial_state is required for this command");
    const auto cutoff = fock_cutoff(cfg);
    const auto& st = *cfg.initial_state;
    if (st.preset == "fock") {
        for (int n : st.occupations)
            if (n > cfg.cutoff)
                throw invalid_input("initial occupation exceeds cutoff");
        return DensityMatrix::fock(cutoff, st.occupations);
    }
    if (st.preset == "bell_01_10")
        return DensityMatrix::bell_01_10(cutoff);
    if (st.preset == "thermal")
        return DensityMatrix::thermal(cutoff, st.mean);
    Matrix rho = Matrix::Zero(cutoff.dim(), cutoff.dim());
    for (const auto& e : st.entries)
        rho(cutoff.index(e.ket), cutoff.index(e.bra)) = e.value;
    return DensityMatrix::physical(cutoff, std::move(rho));
}

inline Matrix observable_matrix(const RunConfig& cfg)
{
    if (!cfg.observable)
        throw invalid_input("observable is required for expect");
    const auto cutoff = fock_cutoff(cfg);
    const auto& ob = *cfg.observable;
    if (ob.kind == "projector") {
        Matrix out = Matrix::Zero(cutoff.dim(), cutoff.dim());
        out(cutoff.index(ob.ket), cutoff.index(ob.bra)) = 1.0;
        return out;
    }
    const auto ops = mode_operators(cutoff);
    return Matrix(ops.creation[ob.creation] * ops.annihilation[ob.annihilation]);
}

} // namespace superop::cli
